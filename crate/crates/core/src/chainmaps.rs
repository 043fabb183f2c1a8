//! Chain maps between the constructed complexes and their four defining
//! checks: commutation with the boundary, color preservation, equivariance and
//! augmentation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chains::{boundary, Chain};
use crate::complexes::{Complex, ComplexName, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::symmetry::{all_elements, generators, GroupElement};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    #[default]
    Unknown,
    Pass,
    Fail,
}

impl Status {
    fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Pass, Status::Pass) => Status::Pass,
            _ => Status::Unknown,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    ChainMap,
    ColorPreserving,
    Equivariant,
    Augmented,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::ChainMap => "chain-map",
            Property::ColorPreserving => "color-preserving",
            Property::Equivariant => "equivariant",
            Property::Augmented => "augmented",
        })
    }
}

/// Per-property verification state of a table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFlags {
    pub chain_map: Status,
    pub color_preserving: Status,
    pub equivariant: Status,
    pub augmented: Status,
}

impl VerificationFlags {
    fn set(&mut self, p: Property, s: Status) {
        match p {
            Property::ChainMap => self.chain_map = s,
            Property::ColorPreserving => self.color_preserving = s,
            Property::Equivariant => self.equivariant = s,
            Property::Augmented => self.augmented = s,
        }
    }

    fn and(self, o: VerificationFlags) -> VerificationFlags {
        VerificationFlags {
            chain_map: self.chain_map.and(o.chain_map),
            color_preserving: self.color_preserving.and(o.color_preserving),
            equivariant: self.equivariant.and(o.equivariant),
            augmented: self.augmented.and(o.augmented),
        }
    }

    pub fn all_pass(&self) -> bool {
        [self.chain_map, self.color_preserving, self.equivariant, self.augmented].iter().all(|s| *s == Status::Pass)
    }
}

/// A concrete witness that a property fails: at `simplex` (and `generator`,
/// for equivariance) the two sides `expected` and `found` differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub simplex: Simplex,
    pub generator: Option<GroupElement>,
    pub expected: Chain,
    pub found: Chain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub property: Property,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    fn from_search(property: Property, found: Option<Counterexample>) -> Self {
        VerificationReport { property, passed: found.is_none(), counterexample: found }
    }
}

/// A degree-preserving chain map given by the image of every canonical source
/// simplex. Degree −1 is multiplication by `augmentation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapTable {
    n: usize,
    source: ComplexName,
    target: ComplexName,
    augmentation: BigInt,
    images: Vec<BTreeMap<Simplex, Chain>>,
    flags: VerificationFlags,
}

impl ChainMapTable {
    pub fn new(n: usize, source: ComplexName, target: ComplexName) -> Self {
        ChainMapTable { n, source, target, augmentation: BigInt::one(), images: Vec::new(), flags: VerificationFlags::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> &ComplexName {
        &self.source
    }

    pub fn target(&self) -> &ComplexName {
        &self.target
    }

    pub fn augmentation(&self) -> &BigInt {
        &self.augmentation
    }

    pub fn set_augmentation(&mut self, k: BigInt) {
        self.augmentation = k;
        self.flags = VerificationFlags::default();
    }

    pub fn flags(&self) -> VerificationFlags {
        self.flags
    }

    /// Highest mapped dimension, −1 when empty.
    pub fn top_dim(&self) -> isize {
        self.images.len() as isize - 1
    }

    /// Sets the image of a canonical simplex; resets verification flags.
    pub fn insert(&mut self, s: Simplex, image: Chain) -> Result<()> {
        if s.is_empty() {
            return Err(Error::InvalidArgument("degree -1 is set through the augmentation".into()));
        }
        if image.dim() != s.dim() {
            return Err(Error::InvalidArgument(format!("image of {s} has dimension {}, expected {}", image.dim(), s.dim())));
        }
        let d = s.dim() as usize;
        if self.images.len() <= d {
            self.images.resize_with(d + 1, BTreeMap::new);
        }
        self.images[d].insert(s, image);
        self.flags = VerificationFlags::default();
        Ok(())
    }

    pub fn image(&self, s: &Simplex) -> Option<&Chain> {
        if s.dim() < 0 {
            return None;
        }
        self.images.get(s.dim() as usize)?.get(s)
    }

    /// `(simplex, image)` pairs by dimension, then canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&Simplex, &Chain)> {
        self.images.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.images.iter().map(|l| l.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Linear extension to chains.
    pub fn apply(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero(c.dim());
        for (s, k) in c.terms() {
            if s.is_empty() {
                out.add_term(Simplex::empty(), k * &self.augmentation);
                continue;
            }
            let image = self.image(s).ok_or_else(|| Error::UnmappedSimplex(s.to_string()))?;
            out.add_scaled(image, k);
        }
        Ok(out)
    }

    /// Rebuilds the named source and target complexes.
    pub fn complexes(&self) -> Result<(Complex, Complex)> {
        Ok((self.source.build(self.n)?, self.target.build(self.n)?))
    }

    /// Runs all four checks, on generators for equivariance, and records the
    /// outcome in the flags.
    pub fn verify_all(&mut self, exec: Execution) -> Result<Vec<VerificationReport>> {
        let (src, tgt) = self.complexes()?;
        let reports = vec![
            verify_chain_map(self, &src, &tgt, exec)?,
            verify_color_preserving(self, &src, exec)?,
            verify_equivariant(self, &src, &generators(self.n), exec)?,
            verify_augmented(self, &src)?,
        ];
        for r in &reports {
            self.flags.set(r.property, if r.passed { Status::Pass } else { Status::Fail });
        }
        Ok(reports)
    }

    /// Adds `delta` to the coefficient of `term` in the image of `s`.
    pub fn perturb(&mut self, s: &Simplex, term: Simplex, delta: BigInt) -> Result<()> {
        let mut image = self.image(s).cloned().ok_or_else(|| Error::UnmappedSimplex(s.to_string()))?;
        image.add_term(term, delta);
        self.insert(s.clone(), image)
    }
}

fn source_simplices(src: &Complex) -> Vec<Simplex> {
    src.all_simplices().cloned().collect()
}

fn lookup<'a>(m: &'a ChainMapTable, s: &Simplex) -> Result<&'a Chain> {
    m.image(s).ok_or_else(|| Error::UnmappedSimplex(s.to_string()))
}

fn ensure_defined(m: &ChainMapTable, src: &Complex) -> Result<Vec<Simplex>> {
    let all = source_simplices(src);
    for s in &all {
        lookup(m, s)?;
    }
    Ok(all)
}

/// `∂' ∘ m = m ∘ ∂` on every source simplex, plus support on the target.
pub fn verify_chain_map(m: &ChainMapTable, src: &Complex, tgt: &Complex, exec: Execution) -> Result<VerificationReport> {
    let all = ensure_defined(m, src)?;
    let found = exec::find_map_first(exec, &all, |s| {
        let image = m.image(s).unwrap();
        if !image.supported_on(tgt) {
            let mut inside = Chain::zero(image.dim());
            for (t, k) in image.terms() {
                if tgt.contains(t) {
                    inside.add_term(t.clone(), k.clone());
                }
            }
            return Some(Counterexample { simplex: s.clone(), generator: None, expected: inside, found: image.clone() });
        }
        let lhs = boundary(image);
        let rhs = m.apply(&boundary(&Chain::simplex(s.clone()))).expect("faces of a source simplex are mapped");
        (lhs != rhs).then(|| Counterexample { simplex: s.clone(), generator: None, expected: rhs, found: lhs })
    });
    Ok(VerificationReport::from_search(Property::ChainMap, found))
}

/// Every simplex in the image of `σ` carries exactly the colors of `σ`.
pub fn verify_color_preserving(m: &ChainMapTable, src: &Complex, exec: Execution) -> Result<VerificationReport> {
    let all = ensure_defined(m, src)?;
    let found = exec::find_map_first(exec, &all, |s| {
        let image = m.image(s).unwrap();
        let colors = s.colors();
        image.terms().keys().any(|t| t.colors() != colors).then(|| {
            let mut kept = Chain::zero(image.dim());
            for (t, k) in image.terms() {
                if t.colors() == colors {
                    kept.add_term(t.clone(), k.clone());
                }
            }
            Counterexample { simplex: s.clone(), generator: None, expected: kept, found: image.clone() }
        })
    });
    Ok(VerificationReport::from_search(Property::ColorPreserving, found))
}

/// `m(g·σ) = g·m(σ)` for every `g` in `group` and every source simplex.
pub fn verify_equivariant(m: &ChainMapTable, src: &Complex, group: &[GroupElement], exec: Execution) -> Result<VerificationReport> {
    let all = ensure_defined(m, src)?;
    let pairs: Vec<(&Simplex, &GroupElement)> = all.iter().flat_map(|s| group.iter().map(move |g| (s, g))).collect();
    let mut failure: Option<Error> = None;
    let found = exec::find_map_first(exec, &pairs, |&(s, g)| {
        let (moved, sign) = g.act_simplex(s);
        let lhs = match m.image(&moved) {
            Some(c) => c.scale(&BigInt::from(sign)),
            None => return Some(Err(Error::UnmappedSimplex(moved.to_string()))),
        };
        let rhs = g.act_chain(m.image(s).unwrap());
        (lhs != rhs).then(|| Ok(Counterexample { simplex: s.clone(), generator: Some(g.clone()), expected: rhs, found: lhs }))
    })
    .and_then(|r| r.map_err(|e| failure = Some(e)).ok());
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(VerificationReport::from_search(Property::Equivariant, found))
}

/// Equivariance under the whole symmetric group; for cross-checks at small n.
pub fn verify_equivariant_full(m: &ChainMapTable, src: &Complex, exec: Execution) -> Result<VerificationReport> {
    verify_equivariant(m, src, &all_elements(m.n), exec)
}

/// The induced map in degree −1 is the identity: every vertex image has
/// augmentation 1.
pub fn verify_augmented(m: &ChainMapTable, src: &Complex) -> Result<VerificationReport> {
    let one = Chain::integer(BigInt::one());
    if !m.augmentation.is_one() {
        let found = Counterexample { simplex: Simplex::empty(), generator: None, expected: one, found: Chain::integer(m.augmentation.clone()) };
        return Ok(VerificationReport::from_search(Property::Augmented, Some(found)));
    }
    for v in src.simplices(0) {
        let eps = boundary(lookup(m, v)?);
        if eps != one {
            let found = Counterexample { simplex: v.clone(), generator: None, expected: one, found: eps };
            return Ok(VerificationReport::from_search(Property::Augmented, Some(found)));
        }
    }
    Ok(VerificationReport::from_search(Property::Augmented, None))
}

/// The reference map `⟨c₀ … c_i⟩ ↦ ⟨(c₀,0) … (c_i,0)⟩` from the boundary of
/// the n-simplex into the annulus.
pub fn z_map(n: usize) -> Result<ChainMapTable> {
    let src = crate::complexes::build_disk_boundary(n)?;
    let mut m = ChainMapTable::new(n, ComplexName::DiskBoundary, ComplexName::Annulus);
    for s in src.all_simplices() {
        let image = Simplex::new(s.vertices().iter().map(|v| Vertex::bit(v.color, 0)).collect())?;
        m.insert(s.clone(), Chain::simplex(image))?;
    }
    Ok(m)
}

/// The identity chain map of `k`.
pub fn identity(k: &Complex) -> ChainMapTable {
    let mut m = ChainMapTable::new(k.n(), k.name().clone(), k.name().clone());
    for s in k.all_simplices() {
        m.insert(s.clone(), Chain::simplex(s.clone())).unwrap();
    }
    m
}

/// The chain map induced by a vertex map. Simplexes whose image repeats a
/// vertex are collapsed to zero.
pub fn induced_from_simplicial(src: &Complex, tgt: &Complex, f: impl Fn(&Vertex) -> Option<Vertex>) -> Result<ChainMapTable> {
    let mut m = ChainMapTable::new(src.n(), src.name().clone(), tgt.name().clone());
    for s in src.all_simplices() {
        let images: Vec<Vertex> = s
            .vertices()
            .iter()
            .map(|v| f(v).ok_or_else(|| Error::UnmappedSimplex(v.to_string())))
            .collect::<Result<_>>()?;
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        let image = if distinct.len() < images.len() {
            Chain::zero(s.dim())
        } else {
            let c = Chain::oriented(images).map_err(|_| Error::NotSimplicial(s.to_string()))?;
            if !c.supported_on(tgt) {
                return Err(Error::NotSimplicial(s.to_string()));
            }
            c
        };
        m.insert(s.clone(), image)?;
    }
    Ok(m)
}

/// `m2 ∘ m1`.
pub fn compose(m2: &ChainMapTable, m1: &ChainMapTable) -> Result<ChainMapTable> {
    if m1.target != m2.source || m1.n != m2.n {
        return Err(Error::ComplexMismatch {
            expected: format!("{} (n = {})", m2.source, m2.n),
            found: format!("{} (n = {})", m1.target, m1.n),
        });
    }
    let mut m = ChainMapTable::new(m1.n, m1.source.clone(), m2.target.clone());
    m.augmentation = &m1.augmentation * &m2.augmentation;
    for (s, image) in m1.entries() {
        m.insert(s.clone(), m2.apply(image)?)?;
    }
    m.flags = m1.flags.and(m2.flags);
    Ok(m)
}

/// Extends images given on orbit representatives to every source simplex:
/// `m(±g·ρ) = ±g·m(ρ)`, using the first group element (in canonical order)
/// that carries a representative onto the simplex.
pub fn symmetrize(
    n: usize,
    src: &Complex,
    target: ComplexName,
    representatives: &BTreeMap<Simplex, Chain>,
) -> Result<ChainMapTable> {
    let group = all_elements(n);
    let mut m = ChainMapTable::new(n, src.name().clone(), target);
    for s in src.all_simplices() {
        let (g, rep, sign) = representatives
            .keys()
            .filter(|r| r.dim() == s.dim())
            .find_map(|r| {
                group.iter().find_map(|g| {
                    let (image, sign) = g.act_simplex(r);
                    (&image == s).then_some((g, r, sign))
                })
            })
            .ok_or_else(|| Error::UnmappedSimplex(s.to_string()))?;
        let image = g.act_chain(&representatives[rep]).scale(&BigInt::from(sign));
        m.insert(s.clone(), image)?;
    }
    Ok(m)
}

/// The table sending everything to zero.
pub fn zero_map(k: &Complex, target: ComplexName) -> ChainMapTable {
    let mut m = ChainMapTable::new(k.n(), k.name().clone(), target);
    m.augmentation = BigInt::zero();
    for s in k.all_simplices() {
        m.insert(s.clone(), Chain::zero(s.dim())).unwrap();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{distinguished_cycle, is_cycle, AnnulusClasses};
    use crate::complexes::{build_annulus, build_disk, build_disk_boundary, build_output_complex};

    fn unit(cs: &[usize]) -> Simplex {
        Simplex::new(cs.iter().map(|&c| Vertex::unit(c)).collect()).unwrap()
    }

    fn disk_boundary_chain(n: usize) -> Chain {
        boundary(&Chain::simplex(unit(&(0..=n).collect::<Vec<_>>())))
    }

    #[test]
    fn z_map_examples() {
        let z = z_map(2).unwrap();
        let e = z.apply(&Chain::simplex(unit(&[0, 1]))).unwrap();
        assert_eq!(e, Chain::simplex(Simplex::new(vec![Vertex::bit(0, 0), Vertex::bit(1, 0)]).unwrap()));
        assert!(z.apply(&Chain::zero(1)).unwrap().is_zero());
        for n in 1..=4 {
            let mut z = z_map(n).unwrap();
            let reports = z.verify_all(Execution::default()).unwrap();
            assert!(reports.iter().all(|r| r.passed), "n={n}: {reports:?}");
            assert!(z.flags().all_pass());
            let image = z.apply(&disk_boundary_chain(n)).unwrap();
            assert_eq!(image, distinguished_cycle(n));
            assert_eq!(AnnulusClasses::new(n).unwrap().winding(&image).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn linearity_and_orientation() {
        let z = z_map(2).unwrap();
        let s = unit(&[0, 1]);
        let t = unit(&[1, 2]);
        let mut c = Chain::term(s.clone(), BigInt::from(2));
        c.add_term(t.clone(), -BigInt::one());
        let expected = &z.apply(&Chain::simplex(s.clone())).unwrap().scale(&BigInt::from(2)) - &z.apply(&Chain::simplex(t)).unwrap();
        assert_eq!(z.apply(&c).unwrap(), expected);
        let flipped = Chain::oriented(vec![Vertex::unit(1), Vertex::unit(0)]).unwrap();
        assert_eq!(z.apply(&flipped).unwrap(), -&z.apply(&Chain::simplex(s)).unwrap());
        assert!(matches!(z.apply(&Chain::simplex(unit(&[0, 1, 2]))), Err(Error::UnmappedSimplex(_))));
    }

    #[test]
    fn sign_flip_is_caught() {
        let mut z = z_map(2).unwrap();
        let s = unit(&[0, 2]);
        let flipped = -z.image(&s).unwrap();
        z.insert(s.clone(), flipped).unwrap();
        let (src, tgt) = z.complexes().unwrap();
        let r = verify_chain_map(&z, &src, &tgt, Execution::Sequential).unwrap();
        assert!(!r.passed);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.simplex, s);
        assert_ne!(cx.expected, cx.found);
    }

    #[test]
    fn color_and_augmentation_failures() {
        let src = build_disk_boundary(2).unwrap();
        let mut z = z_map(2).unwrap();
        z.insert(unit(&[0]), Chain::simplex(Simplex::new(vec![Vertex::bit(1, 0)]).unwrap())).unwrap();
        assert!(!verify_color_preserving(&z, &src, Execution::Sequential).unwrap().passed);

        let zero = zero_map(&src, ComplexName::Annulus);
        assert!(!verify_augmented(&zero, &src).unwrap().passed);
        let tgt = build_annulus(2).unwrap();
        assert!(verify_chain_map(&zero, &src, &tgt, Execution::Sequential).unwrap().passed);
    }

    #[test]
    fn equivariance_perturbation_names_generator() {
        let src = build_disk_boundary(3).unwrap();
        let mut z = z_map(3).unwrap();
        let s = unit(&[1, 3]);
        let extra = Simplex::new(vec![Vertex::bit(1, 1), Vertex::bit(3, 0)]).unwrap();
        z.perturb(&s, extra.clone(), BigInt::one()).unwrap();
        z.perturb(&s, Simplex::new(vec![Vertex::bit(1, 0), Vertex::bit(3, 0)]).unwrap(), -BigInt::one()).unwrap();
        let r = verify_equivariant(&z, &src, &generators(3), Execution::Sequential).unwrap();
        assert!(!r.passed);
        let cx = r.counterexample.unwrap();
        let g = cx.generator.unwrap();
        assert_ne!(cx.expected, cx.found);
        // the reported pair re-verifies as a genuine inequality
        let (moved, sign) = g.act_simplex(&cx.simplex);
        assert_eq!(z.image(&moved).unwrap().scale(&BigInt::from(sign)), cx.found);
        assert_eq!(g.act_chain(z.image(&cx.simplex).unwrap()), cx.expected);
        // the full-group mode agrees
        assert!(!verify_equivariant_full(&z, &src, Execution::Sequential).unwrap().passed);
        assert!(verify_equivariant_full(&z_map(3).unwrap(), &src, Execution::Sequential).unwrap().passed);
    }

    #[test]
    fn induced_maps() {
        let d2 = build_disk(2);
        let id = induced_from_simplicial(&d2, &d2, |v| Some(v.clone())).unwrap();
        assert_eq!(id, identity(&d2));

        // collapse: both endpoints of an edge to the same vertex
        let d1 = build_disk(1);
        let d0 = build_disk(0).with_name(ComplexName::Custom("point".into()));
        let collapse = induced_from_simplicial(&d1, &d0, |_| Some(Vertex::unit(0))).unwrap();
        assert!(collapse.image(&unit(&[0, 1])).unwrap().is_zero());

        // non-simplicial: a vertex sent outside the target
        let a1 = build_annulus(1).unwrap();
        let err = induced_from_simplicial(&d1, &a1, |v| Some(Vertex::bit(v.color, 0))).unwrap_err();
        assert!(matches!(err, Error::NotSimplicial(_)));
    }

    #[test]
    fn composition() {
        let mut z = z_map(2).unwrap();
        z.verify_all(Execution::Sequential).unwrap();
        let a2 = build_annulus(2).unwrap();
        let mut id = identity(&a2);
        id.verify_all(Execution::Sequential).unwrap();
        let composed = compose(&id, &z).unwrap();
        assert_eq!(composed.entries().collect::<Vec<_>>(), z.entries().collect::<Vec<_>>());
        assert!(composed.flags().all_pass());

        // annulus into the output complex by inclusion, then z
        let o2 = build_output_complex(2);
        let incl = induced_from_simplicial(&a2, &o2, |v| Some(v.clone())).unwrap();
        let mut both = compose(&incl, &z).unwrap();
        assert!(both.verify_all(Execution::Sequential).unwrap().iter().all(|r| r.passed));
        assert!(compose(&z, &incl).is_err());
    }

    #[test]
    fn symmetrized_representatives_are_equivariant() {
        let n = 3;
        let d = build_disk(n);
        let mut reps = BTreeMap::new();
        for q in 0..=n {
            let rep = unit(&(0..=q).collect::<Vec<_>>());
            let image = Chain::simplex(Simplex::new((0..=q).map(|c| Vertex::bit(c, 0)).collect()).unwrap());
            reps.insert(rep, image);
        }
        let m = symmetrize(n, &d, ComplexName::Output, &reps).unwrap();
        assert!(verify_equivariant(&m, &d, &generators(n), Execution::Sequential).unwrap().passed);
        assert!(verify_chain_map(&m, &d, &build_output_complex(n), Execution::Sequential).unwrap().passed);
    }

    #[test]
    fn chain_maps_preserve_cycles_and_boundaries() {
        let z = z_map(3).unwrap();
        let a3 = build_annulus(3).unwrap();
        let src = build_disk_boundary(3).unwrap();
        for q in 1..=2usize {
            for cyc in crate::chains::cycle_basis(&src, q) {
                assert!(is_cycle(&z.apply(&cyc).unwrap()));
            }
        }
        // a boundary in the source maps to a boundary with the transported witness
        let beta = Chain::simplex(unit(&[0, 1, 2]));
        let alpha = boundary(&beta);
        let image = z.apply(&alpha).unwrap();
        assert_eq!(boundary(&z.apply(&beta).unwrap()), image);
        assert!(crate::chains::is_boundary(&image, &a3).unwrap().is_some());
    }
}
