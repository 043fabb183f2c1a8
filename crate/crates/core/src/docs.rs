//! JSON documents for complexes, chains, maps, subdivisions, colorings and
//! certificates.
//!
//! Integers are exact: they serialize as JSON numbers when they fit in an
//! `i64` and as decimal strings otherwise. Every `to_doc` / `from_doc` pair
//! round-trips.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::chainmaps::{ChainMapTable, Counterexample, Property, VerificationReport};
use crate::chains::Chain;
use crate::complexes::{Complex, ComplexName, Label, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::solvability::{
    Certificate, ClassEquation, ExistenceCertificate, InfeasibleCombination, NonexistenceCertificate, ReducedSystem,
};
use crate::subdivision::{chromatic_subdivide, BinaryColoring, SubdividedComplex};
use crate::symmetry::GroupElement;
use crate::view::View;

/// An exact integer in a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Int, E> {
                v.parse().map(Int).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

fn big(v: Vec<Int>) -> Vec<BigInt> {
    v.into_iter().map(|i| i.0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelDoc {
    Bit(u8),
    View(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub color: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<LabelDoc>,
}

impl VertexDoc {
    pub fn from_vertex(v: &Vertex) -> Self {
        let label = match &v.label {
            Label::Unit => None,
            Label::Bit(b) => Some(LabelDoc::Bit(*b)),
            Label::View(view) => Some(LabelDoc::View(view.token())),
        };
        VertexDoc { color: v.color, label }
    }

    pub fn to_vertex(&self) -> Result<Vertex> {
        let label = match &self.label {
            None => Label::Unit,
            Some(LabelDoc::Bit(b)) if *b <= 1 => Label::Bit(*b),
            Some(LabelDoc::Bit(b)) => return Err(Error::Parse(format!("label {b} is not a bit"))),
            Some(LabelDoc::View(t)) => Label::View(Arc::new(t.parse::<View>()?)),
        };
        Ok(Vertex { color: self.color, label })
    }
}

fn simplex_doc(s: &Simplex) -> Vec<VertexDoc> {
    s.vertices().iter().map(VertexDoc::from_vertex).collect()
}

fn vertices(doc: &[VertexDoc]) -> Result<Vec<Vertex>> {
    doc.iter().map(VertexDoc::to_vertex).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub facets: Vec<Vec<VertexDoc>>,
}

impl ComplexDoc {
    pub fn from_complex(k: &Complex) -> Self {
        ComplexDoc { n: k.n(), name: Some(k.name().to_string()), facets: k.facets().iter().map(simplex_doc).collect() }
    }

    pub fn to_complex(&self) -> Result<Complex> {
        let name = match &self.name {
            Some(s) => s.parse()?,
            None => ComplexName::Custom("input".into()),
        };
        let facets = self.facets.iter().map(|f| Simplex::new(vertices(f)?)).collect::<Result<Vec<_>>>()?;
        Complex::from_facets(self.n, name, facets)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub simplex: Vec<VertexDoc>,
    pub coeff: Int,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub q: isize,
    pub terms: Vec<TermDoc>,
}

impl ChainDoc {
    pub fn from_chain(c: &Chain) -> Self {
        ChainDoc {
            q: c.dim(),
            terms: c.terms().iter().map(|(s, k)| TermDoc { simplex: simplex_doc(s), coeff: Int(k.clone()) }).collect(),
        }
    }

    /// Canonicalizes vertex order, applying the orientation sign.
    pub fn to_chain(&self) -> Result<Chain> {
        if self.q < -1 {
            return Err(Error::Parse(format!("chain dimension {} is below -1", self.q)));
        }
        let mut c = Chain::zero(self.q);
        for t in &self.terms {
            let vs = vertices(&t.simplex)?;
            if vs.len() as isize - 1 != self.q {
                return Err(Error::Parse(format!("term of dimension {} in a {}-chain", vs.len() as isize - 1, self.q)));
            }
            let (s, sign) = Simplex::oriented(vs)?;
            c.add_term(s, &t.coeff.0 * BigInt::from(sign));
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub q: isize,
    pub simplex: Vec<VertexDoc>,
    pub image: ChainDoc,
}

fn is_one(k: &Int) -> bool {
    k.0.is_one()
}

fn one() -> Int {
    Int(BigInt::one())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub n: usize,
    pub source: String,
    pub target: String,
    /// Multiplier in degree −1; omitted when it is 1.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub augmentation: Int,
    pub entries: Vec<EntryDoc>,
}

impl MapDoc {
    pub fn from_map(m: &ChainMapTable) -> Self {
        MapDoc {
            n: m.n(),
            source: m.source().to_string(),
            target: m.target().to_string(),
            augmentation: Int(m.augmentation().clone()),
            entries: m
                .entries()
                .map(|(s, c)| EntryDoc { q: s.dim(), simplex: simplex_doc(s), image: ChainDoc::from_chain(c) })
                .collect(),
        }
    }

    pub fn to_map(&self) -> Result<ChainMapTable> {
        let mut m = ChainMapTable::new(self.n, self.source.parse()?, self.target.parse()?);
        m.set_augmentation(self.augmentation.0.clone());
        for e in &self.entries {
            let (s, sign) = Simplex::oriented(vertices(&e.simplex)?)?;
            if s.dim() != e.q {
                return Err(Error::Parse(format!("entry {s} is listed with q = {}", e.q)));
            }
            let image = e.image.to_chain()?.scale(&BigInt::from(sign));
            m.insert(s, image)?;
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleDoc {
    pub simplex: Vec<VertexDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GroupElement>,
    pub expected: ChainDoc,
    pub found: ChainDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub property: Property,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleDoc>,
}

impl ReportDoc {
    pub fn from_report(r: &VerificationReport) -> Self {
        ReportDoc {
            property: r.property,
            passed: r.passed,
            counterexample: r.counterexample.as_ref().map(|c| CounterexampleDoc {
                simplex: simplex_doc(&c.simplex),
                generator: c.generator.clone(),
                expected: ChainDoc::from_chain(&c.expected),
                found: ChainDoc::from_chain(&c.found),
            }),
        }
    }

    pub fn to_report(&self) -> Result<VerificationReport> {
        let counterexample = match &self.counterexample {
            None => None,
            Some(c) => Some(Counterexample {
                simplex: Simplex::new(vertices(&c.simplex)?)?,
                generator: c.generator.clone(),
                expected: c.expected.to_chain()?,
                found: c.found.to_chain()?,
            }),
        };
        Ok(VerificationReport { property: self.property, passed: self.passed, counterexample })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubVertexDoc {
    pub id: usize,
    pub view: String,
    pub carrier: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubdivisionDoc {
    pub n: usize,
    pub rounds: usize,
    pub vertices: Vec<SubVertexDoc>,
    pub facets: Vec<Vec<usize>>,
}

impl SubdivisionDoc {
    pub fn from_subdivision(s: &SubdividedComplex) -> Self {
        SubdivisionDoc {
            n: s.n(),
            rounds: s.rounds(),
            vertices: s
                .vertices()
                .iter()
                .map(|v| SubVertexDoc { id: v.id, view: v.view.token(), carrier: v.carrier.clone() })
                .collect(),
            facets: s.facets().to_vec(),
        }
    }

    /// Rebuilds the subdivision and checks that the document describes it.
    pub fn to_subdivision(&self) -> Result<SubdividedComplex> {
        let s = chromatic_subdivide(self.n, self.rounds);
        if SubdivisionDoc::from_subdivision(&s) != *self {
            return Err(Error::Parse(format!("document is not the {}-round subdivision for n = {}", self.rounds, self.n)));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringDoc {
    pub n: usize,
    pub rounds: usize,
    /// Bit of each vertex, by vertex index of the subdivision document.
    pub bits: Vec<u8>,
}

impl ColoringDoc {
    pub fn new(s: &SubdividedComplex, b: &BinaryColoring) -> Self {
        ColoringDoc { n: s.n(), rounds: s.rounds(), bits: b.bits().to_vec() }
    }

    pub fn to_coloring(&self) -> Result<(SubdividedComplex, BinaryColoring)> {
        let s = chromatic_subdivide(self.n, self.rounds);
        if self.bits.len() != s.vertices().len() {
            return Err(Error::Parse(format!("expected {} bits, found {}", s.vertices().len(), self.bits.len())));
        }
        let b = BinaryColoring::new(self.bits.clone())?;
        Ok((s, b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientDoc {
    pub q: usize,
    pub k: usize,
    pub value: Int,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEquationDoc {
    pub coefficients: Vec<Int>,
    pub constant: Int,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinationDoc {
    pub multipliers: Vec<Int>,
    pub coefficients: Vec<Int>,
    pub constant: Int,
    pub modulus: Int,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CertificateDoc {
    Existence {
        n: usize,
        g: Int,
        diophantine: Vec<Int>,
        coefficients: Vec<CoefficientDoc>,
        map: MapDoc,
        reports: Vec<ReportDoc>,
    },
    Nonexistence {
        n: usize,
        g: Int,
        class_equation: ClassEquationDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        combination: Option<CombinationDoc>,
    },
}

impl CertificateDoc {
    pub fn from_certificate(c: &Certificate) -> Result<Self> {
        Ok(match c {
            Certificate::Existence(e) => {
                let system = ReducedSystem::build(e.n, false)?;
                CertificateDoc::Existence {
                    n: e.n,
                    g: Int(e.g.clone()),
                    diophantine: ints(&e.diophantine),
                    coefficients: system
                        .unknowns()
                        .iter()
                        .zip(&e.coefficients)
                        .map(|(u, v)| CoefficientDoc { q: u.q, k: u.k, value: Int(v.clone()) })
                        .collect(),
                    map: MapDoc::from_map(&e.map),
                    reports: e.reports.iter().map(ReportDoc::from_report).collect(),
                }
            }
            Certificate::Nonexistence(x) => CertificateDoc::Nonexistence {
                n: x.n,
                g: Int(x.g.clone()),
                class_equation: ClassEquationDoc {
                    coefficients: ints(&x.class_equation.coefficients),
                    constant: Int(x.class_equation.constant.clone()),
                },
                combination: x.combination.as_ref().map(|c| CombinationDoc {
                    multipliers: ints(&c.multipliers),
                    coefficients: ints(&c.coefficients),
                    constant: Int(c.constant.clone()),
                    modulus: Int(c.modulus.clone()),
                }),
            },
        })
    }

    pub fn to_certificate(&self) -> Result<Certificate> {
        Ok(match self.clone() {
            CertificateDoc::Existence { n, g, diophantine, coefficients, map, reports } => {
                let system = ReducedSystem::build(n, false)?;
                let order: Vec<(usize, usize)> = coefficients.iter().map(|c| (c.q, c.k)).collect();
                let expected: Vec<(usize, usize)> = system.unknowns().iter().map(|u| (u.q, u.k)).collect();
                if order != expected {
                    return Err(Error::Parse("certificate coefficients are not in unknown order".into()));
                }
                Certificate::Existence(ExistenceCertificate {
                    n,
                    g: g.0,
                    diophantine: big(diophantine),
                    coefficients: coefficients.into_iter().map(|c| c.value.0).collect(),
                    map: map.to_map()?,
                    reports: reports.iter().map(ReportDoc::to_report).collect::<Result<_>>()?,
                })
            }
            CertificateDoc::Nonexistence { n, g, class_equation, combination } => {
                Certificate::Nonexistence(NonexistenceCertificate {
                    n,
                    g: g.0,
                    class_equation: ClassEquation {
                        coefficients: big(class_equation.coefficients),
                        constant: class_equation.constant.0,
                    },
                    combination: combination.map(|c| InfeasibleCombination {
                        multipliers: big(c.multipliers),
                        coefficients: big(c.coefficients),
                        constant: c.constant.0,
                        modulus: c.modulus.0,
                    }),
                })
            }
        })
    }
}
