//! Integer chains with augmentation, the boundary operator, and exact
//! cycle/boundary/homology decisions through the Smith normal form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::complexes::{build_annulus, Color, Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::smith::{smith, IntMatrix, SmithData, Solution};

/// A formal integer combination of canonically oriented simplexes of one
/// dimension. Degree −1 chains are multiples of the empty simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    dim: isize,
    terms: BTreeMap<Simplex, BigInt>,
}

impl Chain {
    pub fn zero(dim: isize) -> Self {
        Chain { dim, terms: BTreeMap::new() }
    }

    pub fn simplex(s: Simplex) -> Self {
        Self::term(s, BigInt::one())
    }

    pub fn term(s: Simplex, coeff: BigInt) -> Self {
        let mut c = Chain::zero(s.dim());
        c.add_term(s, coeff);
        c
    }

    /// The degree −1 chain `k · ∅`.
    pub fn integer(k: BigInt) -> Self {
        Self::term(Simplex::empty(), k)
    }

    /// `±σ` for a vertex sequence in any order; odd reorderings flip the sign.
    pub fn oriented(vertices: Vec<Vertex>) -> Result<Self> {
        let (s, sign) = Simplex::oriented(vertices)?;
        Ok(Self::term(s, BigInt::from(sign)))
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Simplex, BigInt> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Simplex, BigInt> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: &Simplex) -> BigInt {
        self.terms.get(s).cloned().unwrap_or_default()
    }

    /// The integer value of a degree −1 chain.
    pub fn integer_value(&self) -> BigInt {
        self.coeff(&Simplex::empty())
    }

    pub fn add_term(&mut self, s: Simplex, coeff: BigInt) {
        assert_eq!(s.dim(), self.dim, "term of dimension {} added to a {}-chain", s.dim(), self.dim);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Chain, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for (s, c) in &other.terms {
            self.add_term(s.clone(), c * k);
        }
    }

    pub fn scale(&self, k: &BigInt) -> Chain {
        let mut out = Chain::zero(self.dim);
        out.add_scaled(self, k);
        out
    }

    /// True if every term is a simplex of `k`.
    pub fn supported_on(&self, k: &Complex) -> bool {
        self.terms.keys().all(|s| k.contains(s))
    }

    /// Coefficient vector over the simplexes of `k` of this dimension.
    pub fn to_vector(&self, k: &Complex) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); k.count(self.dim)];
        for (s, c) in &self.terms {
            let i = k.index_of(s).ok_or_else(|| Error::NotInComplex(s.to_string(), k.name().to_string()))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vector(k: &Complex, dim: isize, v: &[BigInt]) -> Chain {
        let mut c = Chain::zero(dim);
        for (s, x) in k.simplices(dim).iter().zip(v) {
            c.add_term(s.clone(), x.clone());
        }
        c
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}{s}")?;
            } else {
                write!(f, "{sign}{mag}{s}")?;
            }
        }
        Ok(())
    }
}

impl Add<&Chain> for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl Sub<&Chain> for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

impl Neg for &Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self.scale(&-BigInt::one())
    }
}

/// `∂σ = Σ (−1)^j face_j(σ)`, extended linearly; vertices map to the
/// augmentation generator.
pub fn boundary(c: &Chain) -> Chain {
    let mut out = Chain::zero(c.dim - 1);
    if c.dim < 0 {
        return out;
    }
    for (s, coeff) in &c.terms {
        for j in 0..s.vertices().len() {
            let k = if j % 2 == 0 { coeff.clone() } else { -coeff };
            out.add_term(s.face(j), k);
        }
    }
    out
}

pub fn is_cycle(c: &Chain) -> bool {
    boundary(c).is_zero()
}

/// Matrix of `∂_q` on `k`: rows are the (q−1)-simplexes (the single empty
/// simplex when q = 0), columns the q-simplexes.
pub fn boundary_matrix(k: &Complex, q: isize) -> IntMatrix {
    let rows = k.simplices(q - 1);
    let cols = k.simplices(q);
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for (face, coeff) in boundary(&Chain::simplex(s.clone())).terms {
            let i = k.index_of(&face).expect("complex is closed under faces");
            m.set(i, j, coeff);
        }
    }
    m
}

/// Decides whether `c` bounds in `k`; on success returns a witness `β` with
/// `∂β = c`, re-verified before it is returned.
pub fn is_boundary(c: &Chain, k: &Complex) -> Result<Option<Chain>> {
    if !c.supported_on(k) {
        let s = c.terms.keys().find(|s| !k.contains(s)).unwrap();
        return Err(Error::NotInComplex(s.to_string(), k.name().to_string()));
    }
    let up = c.dim + 1;
    if k.count(up) == 0 {
        return Ok(c.is_zero().then(|| Chain::zero(up)));
    }
    let snf = smith(&boundary_matrix(k, up), true);
    match snf.solve(&c.to_vector(k)?) {
        Solution::Feasible(x) => {
            let witness = Chain::from_vector(k, up, &x);
            assert_eq!(&boundary(&witness), c, "normal-form witness failed re-verification");
            Ok(Some(witness))
        }
        Solution::Infeasible { .. } => Ok(None),
    }
}

/// Fills a cycle of `k`: `Some(β)` with `∂β = c`, or `None` when the class of
/// `c` is non-trivial.
pub fn fill_cycle(k: &Complex, c: &Chain) -> Result<Option<Chain>> {
    if !is_cycle(c) {
        return Err(Error::NotACycle);
    }
    is_boundary(c, k)
}

/// Rank and torsion of a reduced homology group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Reduced integer homology of `k` in degree `q` (augmented at q = 0).
pub fn reduced_betti(k: &Complex, q: usize) -> HomologyGroup {
    let q = q as isize;
    let cycles = k.count(q) - smith(&boundary_matrix(k, q), false).rank();
    let up = smith(&boundary_matrix(k, q + 1), false);
    HomologyGroup { rank: cycles - up.rank(), torsion: up.torsion() }
}

/// A basis of the q-cycles of `k` (augmented at q = 0).
pub fn cycle_basis(k: &Complex, q: usize) -> Vec<Chain> {
    let q = q as isize;
    smith(&boundary_matrix(k, q), true).kernel_basis().iter().map(|v| Chain::from_vector(k, q, v)).collect()
}

/// `∂0ⁿ = Σ (−1)^i ⟨(0,0) … (i,0)^ … (n,0)⟩`, the boundary of the missing
/// all-zero facet of the annulus.
pub fn distinguished_cycle(n: usize) -> Chain {
    let facet = Simplex::new((0..=n).map(|c| Vertex::bit(c, 0)).collect()).expect("distinct colors");
    boundary(&Chain::simplex(facet))
}

/// The fundamental cycle of the color sphere on `[n] ∖ {i}`, oriented so that
/// its all-zero simplex has coefficient +1.
///
/// The labeling with `k` ones gets sign `(−1)^k`: the two simplexes sharing a
/// face differ in exactly one label, so their face contributions cancel.
pub fn oriented_sphere_cycle(i: usize, n: usize) -> Result<Chain> {
    if i > n || n == 0 {
        return Err(Error::InvalidArgument(format!("sphere cycle S_{i} needs 0 <= i <= n, n >= 1 (n = {n})")));
    }
    let colors: Vec<Color> = (0..=n).filter(|&c| c != i).collect();
    let mut c = Chain::zero(n as isize - 1);
    for mask in 0u64..(1u64 << colors.len()) {
        let s = Simplex::new(colors.iter().enumerate().map(|(j, &col)| Vertex::bit(col, (mask >> j & 1) as u8)).collect())?;
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        c.add_term(s, BigInt::from(sign));
    }
    Ok(c)
}

/// The top reduced homology of the annulus, verified to be free of rank one
/// and generated by `∂0ⁿ`. Keeps the normal form needed to compute windings.
#[derive(Clone, Debug)]
pub struct AnnulusClasses {
    n: usize,
    annulus: Complex,
    generator: Chain,
    // normal form of [∂0ⁿ | ∂_n]
    solver: SmithData,
}

impl AnnulusClasses {
    pub fn new(n: usize) -> Result<Self> {
        let annulus = build_annulus(n)?;
        let generator = distinguished_cycle(n);
        if !is_cycle(&generator) {
            return Err(Error::GeneratorCheckFailed("distinguished chain is not a cycle".into()));
        }
        let top = n as isize;
        let h = reduced_betti(&annulus, n - 1);
        if h.rank != 1 || !h.torsion.is_empty() {
            return Err(Error::GeneratorCheckFailed(format!("reduced H_{} has rank {} and torsion {:?}", n - 1, h.rank, h.torsion)));
        }
        let gen_col = IntMatrix::from_rows(generator.to_vector(&annulus)?.into_iter().map(|x| vec![x]).collect());
        let boundaries = boundary_matrix(&annulus, top);
        let solver = smith(&gen_col.hstack(&boundaries), true);
        let boundary_rank = smith(&boundaries, false).rank();
        // boundaries + Z·generator must be a saturated lattice of the cycle rank
        if solver.rank() != boundary_rank + 1 || !solver.torsion().is_empty() {
            return Err(Error::GeneratorCheckFailed("the distinguished cycle does not generate".into()));
        }
        Ok(AnnulusClasses { n, annulus, generator, solver })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn annulus(&self) -> &Complex {
        &self.annulus
    }

    pub fn generator(&self) -> &Chain {
        &self.generator
    }

    /// The unique `m` with `c − m·∂0ⁿ` a boundary in the annulus.
    pub fn winding(&self, c: &Chain) -> Result<BigInt> {
        if c.dim() != self.n as isize - 1 {
            return Err(Error::InvalidArgument(format!("winding needs an {}-chain, got dimension {}", self.n - 1, c.dim())));
        }
        if !is_cycle(c) {
            return Err(Error::NotACycle);
        }
        match self.solver.solve(&c.to_vector(&self.annulus)?) {
            Solution::Feasible(x) => Ok(x[0].clone()),
            Solution::Infeasible { .. } => Err(Error::GeneratorCheckFailed("cycle is not a multiple of the generator".into())),
        }
    }

    /// `c ∼ d` in the annulus.
    pub fn homologous(&self, c: &Chain, d: &Chain) -> Result<bool> {
        Ok(is_boundary(&(c - d), &self.annulus)?.is_some())
    }
}

/// Winding number of an (n−1)-cycle of the annulus around `∂0ⁿ`.
pub fn winding(c: &Chain, n: usize) -> Result<BigInt> {
    AnnulusClasses::new(n)?.winding(c)
}
