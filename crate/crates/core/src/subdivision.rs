//! Iterated chromatic (immediate-snapshot) subdivisions of the n-simplex,
//! their chain maps, and symmetric binary colorings of their vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chainmaps::{compose, induced_from_simplicial, ChainMapTable};
use crate::chains::{boundary, AnnulusClasses, Chain};
use crate::complexes::{build_output_complex, Complex, ComplexName, Label, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::solvability::binomial_gcd;
use crate::view::View;

/// All ordered partitions of `items` into non-empty blocks.
pub fn ordered_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let m = items.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << m) {
        let (block, rest): (Vec<_>, Vec<_>) = (0..m).partition(|&i| mask >> i & 1 == 1);
        let block: Vec<T> = block.into_iter().map(|i| items[i].clone()).collect();
        let rest: Vec<T> = rest.into_iter().map(|i| items[i].clone()).collect();
        for mut tail in ordered_partitions(&rest) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

/// A vertex of a subdivision: a process id with its view and carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubVertex {
    pub id: usize,
    pub view: Arc<View>,
    /// Ids of the smallest face of the base simplex containing the vertex.
    pub carrier: Vec<usize>,
}

impl SubVertex {
    pub fn vertex(&self) -> Vertex {
        Vertex { color: self.id, label: Label::View(self.view.clone()) }
    }

    fn carrier_mask(&self) -> u64 {
        self.carrier.iter().fold(0, |m, &c| m | 1 << c)
    }
}

/// The `rounds`-fold chromatic subdivision of the n-simplex.
#[derive(Clone, Debug)]
pub struct SubdividedComplex {
    n: usize,
    rounds: usize,
    vertices: Vec<SubVertex>,
    facets: Vec<Vec<usize>>,
    // coherent orientation of each facet relative to its color order
    orientation: Vec<i8>,
    complex: Complex,
    index: HashMap<Vertex, usize>,
}

/// Builds the subdivision. Zero rounds give the simplex itself, with every
/// vertex carrying the initial view.
pub fn chromatic_subdivide(n: usize, rounds: usize) -> SubdividedComplex {
    type Facet = Vec<(usize, Arc<View>)>;
    let mut facets: Vec<Facet> = vec![(0..=n).map(|i| (i, Arc::new(View::initial()))).collect()];
    for _ in 0..rounds {
        let mut next = Vec::with_capacity(facets.len() * fubini(n + 1) as usize);
        for facet in &facets {
            let positions: Vec<usize> = (0..facet.len()).collect();
            for partition in ordered_partitions(&positions) {
                let mut seen: Vec<(usize, View)> = Vec::new();
                let mut refined: Facet = Vec::with_capacity(facet.len());
                for block in partition {
                    seen.extend(block.iter().map(|&p| (facet[p].0, (*facet[p].1).clone())));
                    let view = Arc::new(View::snapshot(seen.clone()));
                    refined.extend(block.iter().map(|&p| (facet[p].0, view.clone())));
                }
                refined.sort_by_key(|(id, _)| *id);
                next.push(refined);
            }
        }
        facets = next;
    }

    let all: BTreeSet<Vertex> = facets
        .iter()
        .flatten()
        .map(|(id, view)| Vertex { color: *id, label: Label::View(view.clone()) })
        .collect();
    let vertices: Vec<SubVertex> = all
        .iter()
        .map(|v| match &v.label {
            Label::View(view) => SubVertex { id: v.color, view: view.clone(), carrier: view.carrier(v.color) },
            _ => unreachable!(),
        })
        .collect();
    let index: HashMap<Vertex, usize> = all.into_iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut facet_indices: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| f.iter().map(|(id, view)| index[&Vertex { color: *id, label: Label::View(view.clone()) }]).collect())
        .collect();
    facet_indices.sort();
    let simplices: Vec<Simplex> =
        facet_indices.iter().map(|f| Simplex::new(f.iter().map(|&i| vertices[i].vertex()).collect()).unwrap()).collect();
    let orientation = coherent_orientation(&simplices)
        .expect("chromatic subdivisions are orientable pseudomanifolds")
        .into_iter()
        .map(|e| e as i8)
        .collect();
    let complex = Complex::from_facets(n, ComplexName::Subdivision { rounds }, simplices).expect("subdivision vertices are properly colored");
    SubdividedComplex { n, rounds, vertices, facets: facet_indices, orientation, complex, index }
}

/// Number of ordered set partitions of an `m`-element set.
pub fn fubini(m: usize) -> u64 {
    // a(m) = Σ_k C(m, k) a(m − k)
    let mut a = vec![1u64];
    for j in 1..=m {
        let mut binom = 1u64;
        let mut total = 0u64;
        for k in 1..=j {
            binom = binom * (j - k + 1) as u64 / k as u64;
            total += binom * a[j - k];
        }
        a.push(total);
    }
    a[m]
}

impl SubdividedComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn vertices(&self) -> &[SubVertex] {
        &self.vertices
    }

    /// Top simplexes as sorted vertex indices, in canonical order.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// Sign of each facet in the fundamental chain, relative to color order.
    pub fn orientation(&self) -> &[i8] {
        &self.orientation
    }

    pub fn vertex_index(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Simplexes subdividing the face of the base simplex with color set
    /// `colors`, i.e. those of full dimension whose vertices all have carrier
    /// inside `colors`.
    pub fn subdividing(&self, colors: &[usize]) -> Vec<Simplex> {
        let mask = colors.iter().fold(0u64, |m, &c| m | 1 << c);
        let d = colors.len() as isize - 1;
        self.complex
            .simplices(d)
            .iter()
            .filter(|s| {
                s.vertices().iter().all(|v| {
                    let i = self.index[v];
                    self.vertices[i].carrier_mask() & !mask == 0
                })
            })
            .cloned()
            .collect()
    }
}

/// Signs making `Σ ε_τ τ` a coherently oriented chain: adjacent simplexes
/// induce opposite orientations on their shared codimension-one face. The
/// overall sign is chosen so that the signs sum to one, which is the degree of
/// the color projection onto the base face.
fn coherent_orientation(simplices: &[Simplex]) -> Result<Vec<i64>> {
    if simplices.is_empty() {
        return Err(Error::InvalidArgument("empty subdivision of a face".into()));
    }
    let mut eps = vec![0i64; simplices.len()];
    if simplices[0].dim() == 0 {
        eps.iter_mut().for_each(|e| *e = 1);
    } else {
        let mut faces: HashMap<Simplex, Vec<(usize, i64)>> = HashMap::new();
        for (t, s) in simplices.iter().enumerate() {
            for j in 0..s.vertices().len() {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                faces.entry(s.face(j)).or_default().push((t, sign));
            }
        }
        let mut neighbours: Vec<Vec<(usize, i64)>> = vec![Vec::new(); simplices.len()];
        for incident in faces.values() {
            if incident.len() > 2 {
                return Err(Error::VerificationFailed("a codimension-one face lies in more than two simplexes".into()));
            }
            if let [(a, sa), (b, sb)] = incident[..] {
                neighbours[a].push((b, -sa * sb));
                neighbours[b].push((a, -sa * sb));
            }
        }
        eps[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            for &(u, rel) in &neighbours[t] {
                let want = eps[t] * rel;
                if eps[u] == 0 {
                    eps[u] = want;
                    queue.push_back(u);
                } else if eps[u] != want {
                    return Err(Error::VerificationFailed("subdivision is not orientable".into()));
                }
            }
        }
        if eps.contains(&0) {
            return Err(Error::VerificationFailed("subdivision of a face is not connected".into()));
        }
    }
    let total: i64 = eps.iter().sum();
    match total {
        1 => Ok(eps),
        -1 => Ok(eps.into_iter().map(|e| -e).collect()),
        _ => Err(Error::VerificationFailed(format!("orientation signs sum to {total}"))),
    }
}

/// The chain map sending each face of the base simplex to the coherently
/// oriented sum of the simplexes subdividing it.
pub fn subdivision_chain_map(s: &SubdividedComplex) -> Result<ChainMapTable> {
    let n = s.n;
    let mut m = ChainMapTable::new(n, ComplexName::Disk, s.complex.name().clone());
    for mask in 1u64..(1u64 << (n + 1)) {
        let colors: Vec<usize> = (0..=n).filter(|&c| mask >> c & 1 == 1).collect();
        let parts = s.subdividing(&colors);
        let eps = coherent_orientation(&parts)?;
        let mut image = Chain::zero(colors.len() as isize - 1);
        for (t, e) in parts.into_iter().zip(eps) {
            image.add_term(t, BigInt::from(e));
        }
        let face = Simplex::new(colors.iter().map(|&c| Vertex::unit(c)).collect())?;
        m.insert(face, image)?;
    }
    Ok(m)
}

/// A bit for every vertex of a subdivision, indexed like
/// [`SubdividedComplex::vertices`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryColoring(Vec<u8>);

impl BinaryColoring {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidArgument(format!("coloring bit {b} is not 0 or 1")));
        }
        Ok(BinaryColoring(bits))
    }

    pub fn constant(len: usize, bit: u8) -> Self {
        BinaryColoring(vec![bit & 1; len])
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check(&self, s: &SubdividedComplex) -> Result<()> {
        if self.0.len() != s.vertices.len() {
            return Err(Error::InvalidArgument(format!(
                "coloring has {} bits but the subdivision has {} vertices",
                self.0.len(),
                s.vertices.len()
            )));
        }
        Ok(())
    }

    /// `b'(g·v) = b(v)` for a permutation `g` of the process ids.
    pub fn permuted(&self, s: &SubdividedComplex, g: &crate::symmetry::GroupElement) -> Result<BinaryColoring> {
        self.check(s)?;
        let mut out = vec![0u8; self.0.len()];
        for (i, v) in s.vertices.iter().enumerate() {
            let moved = g.act_vertex(&v.vertex());
            let j = s.vertex_index(&moved).ok_or_else(|| Error::NotInComplex(moved.to_string(), s.complex.name().to_string()))?;
            out[j] = self.0[i];
        }
        Ok(BinaryColoring(out))
    }
}

/// Vertices grouped by the anonymity condition. Vertices on proper faces of
/// the base simplex fall into classes (same id rank and same view after
/// relabeling ids by rank within the carrier); a symmetric coloring is
/// constant on each class. Vertices with full carrier are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryClasses {
    pub classes: Vec<Vec<usize>>,
    pub free: Vec<usize>,
}

impl SymmetryClasses {
    pub fn new(s: &SubdividedComplex) -> Self {
        let mut classes: BTreeMap<(usize, usize, View), Vec<usize>> = BTreeMap::new();
        let mut free = Vec::new();
        for (i, v) in s.vertices.iter().enumerate() {
            if v.carrier.len() == s.n + 1 {
                free.push(i);
                continue;
            }
            let rank = |c: usize| v.carrier.binary_search(&c).unwrap();
            classes.entry((v.carrier.len(), rank(v.id), v.view.relabel(&rank))).or_default().push(i);
        }
        SymmetryClasses { classes: classes.into_values().collect(), free }
    }

    /// Number of independent bits of a symmetric coloring.
    pub fn degrees_of_freedom(&self) -> usize {
        self.classes.len() + self.free.len()
    }

    /// Number of symmetric colorings, saturating at `u128::MAX`.
    pub fn count(&self) -> u128 {
        1u128.checked_shl(self.degrees_of_freedom() as u32).unwrap_or(u128::MAX)
    }

    /// The symmetric coloring whose class bits (then free-vertex bits) are
    /// the binary digits of `index`, least significant first.
    pub fn coloring(&self, index: u64) -> BinaryColoring {
        let mut bits = vec![0u8; self.classes.iter().map(|c| c.len()).sum::<usize>() + self.free.len()];
        self.fill(&mut bits, |j| (index >> j & 1) as u8);
        BinaryColoring(bits)
    }

    fn fill(&self, bits: &mut [u8], mut bit: impl FnMut(usize) -> u8) {
        for (j, class) in self.classes.iter().enumerate() {
            let b = bit(j);
            for &i in class {
                bits[i] = b;
            }
        }
        let k = self.classes.len();
        for (j, &i) in self.free.iter().enumerate() {
            bits[i] = bit(k + j);
        }
    }

    /// A uniformly random symmetric coloring.
    pub fn random(&self, rng: &mut impl Rng) -> BinaryColoring {
        let mut bits = vec![0u8; self.classes.iter().map(|c| c.len()).sum::<usize>() + self.free.len()];
        self.fill(&mut bits, |_| rng.gen_range(0..=1));
        BinaryColoring(bits)
    }
}

/// Outcome of the anonymity check; on failure, two vertices related by a
/// rank-preserving face bijection that carry different bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub passed: bool,
    pub witness: Option<(usize, usize)>,
}

pub fn verify_symmetric_coloring(s: &SubdividedComplex, b: &BinaryColoring) -> Result<SymmetryReport> {
    b.check(s)?;
    let classes = SymmetryClasses::new(s);
    let witness = classes.classes.iter().find_map(|class| {
        let first = class[0];
        class.iter().find(|&&i| b.get(i) != b.get(first)).map(|&i| (first, i))
    });
    Ok(SymmetryReport { passed: witness.is_none(), witness })
}

/// Number of facets whose vertices all carry the same bit.
pub fn monochromatic_count(s: &SubdividedComplex, b: &BinaryColoring) -> Result<usize> {
    b.check(s)?;
    Ok(count_monochromatic(s, b.bits()).0)
}

/// `c₀ + (−1)ⁿ c₁`, where `c_β` sums the orientation signs of the facets
/// colored all `β`. This is the winding of the boundary image, so it is the
/// count that obeys the binomial congruence.
pub fn signed_monochromatic_count(s: &SubdividedComplex, b: &BinaryColoring) -> Result<i64> {
    b.check(s)?;
    Ok(count_monochromatic(s, b.bits()).1)
}

fn count_monochromatic(s: &SubdividedComplex, bits: &[u8]) -> (usize, i64) {
    let flip = if s.n.is_multiple_of(2) { 1 } else { -1 };
    let mut plain = 0;
    let mut signed = 0i64;
    for (f, &e) in s.facets.iter().zip(&s.orientation) {
        let bit = bits[f[0]];
        if f.iter().all(|&i| bits[i] == bit) {
            plain += 1;
            signed += if bit == 0 { e as i64 } else { flip * e as i64 };
        }
    }
    (plain, signed)
}

/// Whether `b` is an anonymous decision rule solving weak symmetry breaking
/// on the protocol complex `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WsbDecision {
    pub symmetric: bool,
    pub monochromatic: usize,
    pub solves: bool,
}

pub fn wsb_decision_check(s: &SubdividedComplex, b: &BinaryColoring) -> Result<WsbDecision> {
    let symmetric = verify_symmetric_coloring(s, b)?.passed;
    let monochromatic = monochromatic_count(s, b)?;
    Ok(WsbDecision { symmetric, monochromatic, solves: symmetric && monochromatic == 0 })
}

/// The composite chain map from the disk to the output complex induced by a
/// coloring, with the winding of the image of the disk boundary.
#[derive(Clone, Debug)]
pub struct ColoringMap {
    pub map: ChainMapTable,
    /// `None` for n = 0, where the annulus does not exist.
    pub boundary_winding: Option<BigInt>,
}

pub fn coloring_chain_map(s: &SubdividedComplex, b: &BinaryColoring) -> Result<ColoringMap> {
    b.check(s)?;
    let output = build_output_complex(s.n);
    let colored = induced_from_simplicial(&s.complex, &output, |v| {
        s.vertex_index(v).map(|i| Vertex::bit(v.color, b.get(i)))
    })?;
    let map = compose(&colored, &subdivision_chain_map(s)?)?;
    let boundary_winding = if s.n == 0 {
        None
    } else {
        Some(boundary_winding(&map, &AnnulusClasses::new(s.n)?)?)
    };
    Ok(ColoringMap { map, boundary_winding })
}

/// Winding of `m(∂σⁿ)` in the annulus for a map defined on the disk boundary.
pub fn boundary_winding(m: &ChainMapTable, classes: &AnnulusClasses) -> Result<BigInt> {
    let n = classes.n();
    let top = Simplex::new((0..=n).map(Vertex::unit).collect())?;
    let image = m.apply(&boundary(&Chain::simplex(top)))?;
    if !image.supported_on(classes.annulus()) {
        return Err(Error::VerificationFailed("boundary image touches a monochromatic facet".into()));
    }
    classes.winding(&image)
}

/// Monochromatic counts over a family of symmetric colorings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringCensus {
    pub n: usize,
    pub rounds: usize,
    pub colorings: u64,
    /// Monochromatic count ↦ number of colorings attaining it.
    pub counts: BTreeMap<usize, u64>,
    /// Signed monochromatic count ↦ number of colorings attaining it.
    pub signed_counts: BTreeMap<i64, u64>,
    /// The binomial gcd of n; every signed count should be ≡ 1 modulo it.
    pub modulus: BigInt,
    pub all_congruent: bool,
    pub any_solves: bool,
}

impl ColoringCensus {
    fn from_counts(s: &SubdividedComplex, counts: Vec<(usize, i64)>) -> Self {
        let modulus = binomial_gcd(s.n);
        let mut hist = BTreeMap::new();
        let mut signed = BTreeMap::new();
        for &(c, w) in &counts {
            *hist.entry(c).or_insert(0u64) += 1;
            *signed.entry(w).or_insert(0u64) += 1;
        }
        let all_congruent = signed.keys().all(|&w| congruent_to_one(w, &modulus));
        ColoringCensus {
            n: s.n,
            rounds: s.rounds,
            colorings: counts.len() as u64,
            any_solves: hist.contains_key(&0),
            counts: hist,
            signed_counts: signed,
            modulus,
            all_congruent,
        }
    }

    pub fn min(&self) -> Option<usize> {
        self.counts.keys().next().copied()
    }
}

fn congruent_to_one(c: i64, g: &BigInt) -> bool {
    let d = BigInt::from(c) - BigInt::one();
    if g.is_zero() {
        d.is_zero()
    } else {
        (d % g).is_zero()
    }
}

/// Work estimate for enumerating every symmetric coloring, in facet visits.
pub fn exhaustive_cost(s: &SubdividedComplex) -> u128 {
    SymmetryClasses::new(s).count().saturating_mul(s.facets.len() as u128)
}

/// Evaluates every symmetric coloring, refusing when the work exceeds
/// `budget` facet visits.
pub fn enumerate_symmetric_colorings(s: &SubdividedComplex, exec: Execution, budget: u128) -> Result<ColoringCensus> {
    let classes = SymmetryClasses::new(s);
    let needed = exhaustive_cost(s);
    if needed > budget || classes.degrees_of_freedom() >= 64 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let total = 1u64 << classes.degrees_of_freedom();
    let counts = exec::map_range(exec, total, |index| count_monochromatic(s, classes.coloring(index).bits()));
    Ok(ColoringCensus::from_counts(s, counts))
}

/// Evaluates `samples` random symmetric colorings drawn from a seeded stream.
pub fn sample_symmetric_colorings(s: &SubdividedComplex, samples: usize, seed: u64, exec: Execution) -> ColoringCensus {
    let classes = SymmetryClasses::new(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colorings: Vec<BinaryColoring> = (0..samples).map(|_| classes.random(&mut rng)).collect();
    let counts = exec::map(exec, &colorings, |b| count_monochromatic(s, b.bits()));
    ColoringCensus::from_counts(s, counts)
}
