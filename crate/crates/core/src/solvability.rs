//! Deciding whether a non-trivial color-preserving equivariant chain map from
//! the disk to the annulus exists, with certificates either way.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chainmaps::{ChainMapTable, VerificationReport};
use crate::chains::{boundary, AnnulusClasses, Chain};
use crate::complexes::{ComplexName, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::smith::{smith, IntMatrix, Solution};
use crate::subdivision::boundary_winding;
use crate::symmetry::transport;

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// gcd of `C(n+1, 1), …, C(n+1, n)` from a row of Pascal's triangle.
pub fn binomial_gcd_pascal(n: usize) -> BigInt {
    let mut row = vec![BigInt::one()];
    for _ in 0..=n {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for j in 1..row.len() {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
    }
    row[1..=n].iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// The same gcd with each coefficient from the multiplicative formula.
pub fn binomial_gcd_multiplicative(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::zero(), |g, k| g.gcd(&binomial(n as u64 + 1, k)))
}

/// gcd of `C(n+1, 1), …, C(n+1, n)`, computed two ways and cross-checked.
/// It is 0 for n = 0, where the list is empty.
pub fn binomial_gcd(n: usize) -> BigInt {
    let a = binomial_gcd_pascal(n);
    let b = binomial_gcd_multiplicative(n);
    assert_eq!(a, b, "binomial gcd implementations disagree at n = {n}");
    a
}

/// Integers `k₀ … k_{n−1}` with `1 + Σ kᵢ C(n+1, i+1) = 0`, or `None`.
///
/// The solution comes from iterated extended gcd, then greedy size reduction
/// along the pairwise relations `(aⱼ/g) eᵢ − (aᵢ/g) eⱼ`.
pub fn solve_diophantine(n: usize) -> Option<Vec<BigInt>> {
    let a: Vec<BigInt> = (0..n as u64).map(|i| binomial(n as u64 + 1, i + 1)).collect();
    if a.is_empty() {
        return None;
    }
    let mut g = a[0].clone();
    let mut x = vec![BigInt::one()];
    for ai in &a[1..] {
        let e = g.extended_gcd(ai);
        for xi in &mut x {
            *xi *= &e.x;
        }
        x.push(e.y);
        g = e.gcd;
    }
    if !g.is_one() {
        return None;
    }
    let mut k: Vec<BigInt> = x.into_iter().map(|v| -v).collect();
    reduce(&mut k, &a);
    let value = BigInt::one() + k.iter().zip(&a).map(|(k, a)| k * a).sum::<BigInt>();
    assert!(value.is_zero(), "diophantine witness fails substitution");
    Some(k)
}

fn reduce(k: &mut [BigInt], a: &[BigInt]) {
    let norm = |k: &[BigInt]| k.iter().map(|x| x * x).sum::<BigInt>();
    loop {
        let mut improved = false;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let g = a[i].gcd(&a[j]);
                let (vi, vj) = (&a[j] / &g, -(&a[i] / &g));
                let dot = &k[i] * &vi + &k[j] * &vj;
                let vv = &vi * &vi + &vj * &vj;
                // nearest integer to −dot / vv
                let t = -round_div(&dot, &vv);
                if t.is_zero() {
                    continue;
                }
                let before = norm(k);
                let (ki, kj) = (&k[i] + &t * &vi, &k[j] + &t * &vj);
                let (oi, oj) = (std::mem::replace(&mut k[i], ki), std::mem::replace(&mut k[j], kj));
                if norm(k) < before {
                    improved = true;
                } else {
                    k[i] = oi;
                    k[j] = oj;
                }
            }
        }
        if !improved {
            return;
        }
    }
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (BigInt::from(2) * a + b).div_floor(&(BigInt::from(2) * b))
}

/// `c_{q,k}`: the common coefficient of the labeled q-simplexes with k ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unknown {
    pub q: usize,
    pub k: usize,
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c[{},{}]", self.q, self.k)
    }
}

/// Where a row of the reduced system comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOrigin {
    /// `ε(a(⟨0⟩)) = 1`.
    Augmentation,
    /// Coefficient of `face` in `∂a(⟨0…q⟩) − a(∂⟨0…q⟩)`.
    Commutation { q: usize, face: Simplex },
    /// A monochromatic facet is missing from the annulus.
    Pinned(Unknown),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<BigInt>,
    pub rhs: BigInt,
    pub origin: RowOrigin,
}

/// The labeled simplexes on colors `0..=q` with exactly `k` ones.
pub fn orbit_class(q: usize, k: usize) -> Vec<Simplex> {
    (0u64..1 << (q + 1))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| Simplex::new((0..=q).map(|c| Vertex::bit(c, (m >> c & 1) as u8)).collect()).unwrap())
        .collect()
}

type Form = BTreeMap<usize, BigInt>;

fn add_form(into: &mut Form, from: &Form, k: &BigInt) {
    for (u, c) in from {
        let e = into.entry(*u).or_insert_with(BigInt::zero);
        *e += c * k;
        if e.is_zero() {
            into.remove(u);
        }
    }
}

/// The integer linear system on the coefficients `c_{q,k}` of a map that is
/// constant on each orbit class of the representative face `⟨0…q⟩` and
/// transported to other faces by order-preserving permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSystem {
    n: usize,
    boundary_only: bool,
    unknowns: Vec<Unknown>,
    rows: Vec<Row>,
}

impl ReducedSystem {
    /// With `boundary_only`, dimension n is left out; otherwise the two
    /// monochromatic top coefficients are pinned to zero.
    pub fn build(n: usize, boundary_only: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("the reduced system needs n >= 1".into()));
        }
        let top = if boundary_only { n - 1 } else { n };
        let unknowns: Vec<Unknown> = (0..=top).flat_map(|q| (0..=q + 1).map(move |k| Unknown { q, k })).collect();
        let index: BTreeMap<Unknown, usize> = unknowns.iter().enumerate().map(|(i, u)| (*u, i)).collect();
        let width = unknowns.len();

        // symbolic image of the representative face in each dimension
        let representative = |q: usize| -> BTreeMap<Simplex, Form> {
            (0..=q + 1)
                .flat_map(|k| orbit_class(q, k).into_iter().map(move |s| (s, k)))
                .map(|(s, k)| (s, Form::from([(index[&Unknown { q, k }], BigInt::one())])))
                .collect()
        };

        let mut rows = vec![Row {
            coeffs: dense(&Form::from([(index[&Unknown { q: 0, k: 0 }], BigInt::one()), (index[&Unknown { q: 0, k: 1 }], BigInt::one())]), width),
            rhs: BigInt::one(),
            origin: RowOrigin::Augmentation,
        }];
        for q in 1..=top {
            let mut diff: BTreeMap<Simplex, Form> = BTreeMap::new();
            for (s, form) in representative(q) {
                for (face, sign) in boundary(&Chain::simplex(s)).terms() {
                    add_form(diff.entry(face.clone()).or_default(), &form, sign);
                }
            }
            let lower = representative(q - 1);
            for j in 0..=q {
                let colors: Vec<usize> = (0..=q).filter(|&c| c != j).collect();
                let rho = transport(n, &colors)?;
                let face_sign = if j % 2 == 0 { -BigInt::one() } else { BigInt::one() };
                for (s, form) in &lower {
                    let (moved, sign) = rho.act_simplex(s);
                    add_form(diff.entry(moved).or_default(), form, &(&face_sign * BigInt::from(sign)));
                }
            }
            for (face, form) in diff {
                if !form.is_empty() {
                    rows.push(Row { coeffs: dense(&form, width), rhs: BigInt::zero(), origin: RowOrigin::Commutation { q, face } });
                }
            }
        }
        if !boundary_only {
            for k in [0, n + 1] {
                let u = Unknown { q: n, k };
                rows.push(Row { coeffs: dense(&Form::from([(index[&u], BigInt::one())]), width), rhs: BigInt::zero(), origin: RowOrigin::Pinned(u) });
            }
        }

        // drop repeated rows, up to sign
        let mut seen = BTreeSet::new();
        rows.retain(|r| {
            let lead = r.coeffs.iter().find(|c| !c.is_zero()).map_or(BigInt::one(), |c| c.signum());
            let key: (Vec<BigInt>, BigInt) = (r.coeffs.iter().map(|c| c * &lead).collect(), &r.rhs * &lead);
            seen.insert(key)
        });
        Ok(ReducedSystem { n, boundary_only, unknowns, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn boundary_only(&self) -> bool {
        self.boundary_only
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.rows.iter().map(|r| r.coeffs.clone()).collect())
    }

    pub fn rhs(&self) -> Vec<BigInt> {
        self.rows.iter().map(|r| r.rhs.clone()).collect()
    }

    pub fn is_solution(&self, x: &[BigInt]) -> bool {
        x.len() == self.unknowns.len() && self.rows.iter().all(|r| r.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<BigInt>() == r.rhs)
    }

    /// Deterministic particular solution, or the certificate row combination.
    pub fn solve(&self) -> Solution {
        smith(&self.matrix(), true).solve(&self.rhs())
    }

    /// Particular solution plus a basis of the homogeneous solutions.
    pub fn solution_lattice(&self) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
        let normal = smith(&self.matrix(), true);
        match normal.solve(&self.rhs()) {
            Solution::Feasible(x) => Some((x, normal.kernel_basis())),
            Solution::Infeasible { .. } => None,
        }
    }

    /// Expands a solution into a chain map table defined on every face of the
    /// disk of dimension ≤ the top unknown dimension.
    pub fn expand(&self, x: &[BigInt]) -> Result<ChainMapTable> {
        if x.len() != self.unknowns.len() {
            return Err(Error::InvalidArgument(format!("expected {} coefficients, got {}", self.unknowns.len(), x.len())));
        }
        let n = self.n;
        let top = self.unknowns.last().unwrap().q;
        let source = if self.boundary_only { ComplexName::DiskBoundary } else { ComplexName::Disk };
        let mut m = ChainMapTable::new(n, source, ComplexName::Annulus);
        let coeff: BTreeMap<Unknown, &BigInt> = self.unknowns.iter().copied().zip(x).collect();
        for mask in 1u64..(1u64 << (n + 1)) {
            let colors: Vec<usize> = (0..=n).filter(|&c| mask >> c & 1 == 1).collect();
            let q = colors.len() - 1;
            if q > top {
                continue;
            }
            let rho = transport(n, &colors)?;
            let mut image = Chain::zero(q as isize);
            for k in 0..=q + 1 {
                let c = coeff[&Unknown { q, k }];
                if c.is_zero() {
                    continue;
                }
                for s in orbit_class(q, k) {
                    let (moved, sign) = rho.act_simplex(&s);
                    image.add_term(moved, c * BigInt::from(sign));
                }
            }
            m.insert(Simplex::new(colors.iter().map(|&c| Vertex::unit(c)).collect())?, image)?;
        }
        Ok(m)
    }
}

fn dense(form: &Form, width: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); width];
    for (i, c) in form {
        v[*i] = c.clone();
    }
    v
}

/// `1 + Σ kᵢ·coefficients[i] = 0`, which has no integer solution when `g`
/// divides every coefficient but not 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEquation {
    pub coefficients: Vec<BigInt>,
    pub constant: BigInt,
}

impl ClassEquation {
    pub fn for_dimension(n: usize) -> Self {
        ClassEquation { coefficients: (0..n as u64).map(|i| binomial(n as u64 + 1, i + 1)).collect(), constant: BigInt::one() }
    }
}

/// An integer combination of the system rows whose coefficients are all
/// divisible by `modulus` while its right-hand side is not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibleCombination {
    pub multipliers: Vec<BigInt>,
    pub coefficients: Vec<BigInt>,
    pub constant: BigInt,
    pub modulus: BigInt,
}

#[derive(Clone, Debug)]
pub struct ExistenceCertificate {
    pub n: usize,
    pub g: BigInt,
    pub diophantine: Vec<BigInt>,
    /// Solution of the reduced system, in unknown order.
    pub coefficients: Vec<BigInt>,
    pub map: ChainMapTable,
    pub reports: Vec<VerificationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonexistenceCertificate {
    pub n: usize,
    pub g: BigInt,
    pub class_equation: ClassEquation,
    /// Absent for n = 0, which is decided without a system.
    pub combination: Option<InfeasibleCombination>,
}

#[derive(Clone, Debug)]
pub enum Certificate {
    Existence(ExistenceCertificate),
    Nonexistence(NonexistenceCertificate),
}

impl Certificate {
    pub fn n(&self) -> usize {
        match self {
            Certificate::Existence(c) => c.n,
            Certificate::Nonexistence(c) => c.n,
        }
    }

    pub fn exists(&self) -> bool {
        matches!(self, Certificate::Existence(_))
    }

    /// Re-checks the certificate from scratch.
    pub fn verify(&self, exec: Execution) -> Result<Vec<VerificationReport>> {
        match self {
            Certificate::Existence(c) => {
                let mut map = c.map.clone();
                let reports = map.verify_all(exec)?;
                if let Some(r) = reports.iter().find(|r| !r.passed) {
                    return Err(Error::VerificationFailed(format!("witness fails the {} check", r.property)));
                }
                let eq = ClassEquation::for_dimension(c.n);
                let value = &eq.constant + c.diophantine.iter().zip(&eq.coefficients).map(|(k, a)| k * a).sum::<BigInt>();
                if c.diophantine.len() != c.n || !value.is_zero() {
                    return Err(Error::VerificationFailed("diophantine witness does not satisfy the class equation".into()));
                }
                if c.g != binomial_gcd(c.n) || !c.g.is_one() {
                    return Err(Error::VerificationFailed(format!("recorded gcd {} is wrong", c.g)));
                }
                let system = ReducedSystem::build(c.n, false)?;
                if !system.is_solution(&c.coefficients) || system.expand(&c.coefficients)?.entries().ne(c.map.entries()) {
                    return Err(Error::VerificationFailed("witness map is not the expansion of a system solution".into()));
                }
                Ok(reports)
            }
            Certificate::Nonexistence(c) => {
                if c.g != binomial_gcd(c.n) || c.class_equation != ClassEquation::for_dimension(c.n) {
                    return Err(Error::VerificationFailed("class equation or gcd does not match n".into()));
                }
                let divides = |x: &BigInt| if c.g.is_zero() { x.is_zero() } else { (x % &c.g).is_zero() };
                if !c.class_equation.coefficients.iter().all(divides) || divides(&c.class_equation.constant) {
                    return Err(Error::VerificationFailed(format!("{} does not obstruct the class equation", c.g)));
                }
                match (&c.combination, c.n) {
                    (None, 0) => {}
                    (None, _) => return Err(Error::VerificationFailed("missing system combination".into())),
                    (Some(comb), _) => verify_combination(c.n, comb)?,
                }
                Ok(Vec::new())
            }
        }
    }
}

fn verify_combination(n: usize, comb: &InfeasibleCombination) -> Result<()> {
    let system = ReducedSystem::build(n, false)?;
    if comb.multipliers.len() != system.rows.len() {
        return Err(Error::VerificationFailed("multiplier count does not match the system".into()));
    }
    let mut coeffs = vec![BigInt::zero(); system.unknowns.len()];
    let mut constant = BigInt::zero();
    for (y, row) in comb.multipliers.iter().zip(&system.rows) {
        for (acc, a) in coeffs.iter_mut().zip(&row.coeffs) {
            *acc += y * a;
        }
        constant += y * &row.rhs;
    }
    if coeffs != comb.coefficients || constant != comb.constant {
        return Err(Error::VerificationFailed("recorded combination does not match the system rows".into()));
    }
    let divides = |x: &BigInt| if comb.modulus.is_zero() { x.is_zero() } else { (x % &comb.modulus).is_zero() };
    if !coeffs.iter().all(divides) || divides(&constant) {
        return Err(Error::VerificationFailed("combination is not an obstruction".into()));
    }
    Ok(())
}

/// Solves the reduced system for n. A solution is expanded and re-verified;
/// an infeasible system yields the row combination witnessing it.
pub fn search_equivariant_map(n: usize, exec: Execution) -> Result<Certificate> {
    let g = binomial_gcd(n);
    if n == 0 {
        return Ok(Certificate::Nonexistence(NonexistenceCertificate { n, g, class_equation: ClassEquation::for_dimension(0), combination: None }));
    }
    let system = ReducedSystem::build(n, false)?;
    match system.solve() {
        Solution::Feasible(x) => {
            let mut map = system.expand(&x)?;
            let reports = map.verify_all(exec)?;
            if let Some(r) = reports.iter().find(|r| !r.passed) {
                return Err(Error::VerificationFailed(format!(
                    "expanded solution fails the {} check at {:?}; the orbit ansatz is sign-inconsistent",
                    r.property,
                    r.counterexample.as_ref().map(|c| c.simplex.to_string())
                )));
            }
            let diophantine = solve_diophantine(n).ok_or_else(|| {
                Error::VerificationFailed(format!("system is feasible but the class equation is not (g = {g})"))
            })?;
            Ok(Certificate::Existence(ExistenceCertificate { n, g, diophantine, coefficients: x, map, reports }))
        }
        Solution::Infeasible { multipliers, modulus } => {
            let mut coefficients = vec![BigInt::zero(); system.unknowns.len()];
            let mut constant = BigInt::zero();
            for (y, row) in multipliers.iter().zip(&system.rows) {
                for (acc, a) in coefficients.iter_mut().zip(&row.coeffs) {
                    *acc += y * a;
                }
                constant += y * &row.rhs;
            }
            let cert = NonexistenceCertificate {
                n,
                g,
                class_equation: ClassEquation::for_dimension(n),
                combination: Some(InfeasibleCombination { multipliers, coefficients, constant, modulus }),
            };
            let cert = Certificate::Nonexistence(cert);
            cert.verify(exec)?;
            Ok(cert)
        }
    }
}

/// Outcome of the winding congruence check for a boundary-skeleton map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindingCongruence {
    pub winding: BigInt,
    pub modulus: BigInt,
    pub congruent: bool,
}

/// Winding of `m(∂σⁿ)` and whether it is ≡ 1 modulo the binomial gcd. The map
/// must pass all four checks on the boundary of the disk.
pub fn winding_congruence(m: &ChainMapTable, classes: &AnnulusClasses, exec: Execution) -> Result<WindingCongruence> {
    let n = classes.n();
    if m.n() != n || *m.source() != ComplexName::DiskBoundary || *m.target() != ComplexName::Annulus {
        return Err(Error::PreconditionUnmet(format!("expected a map disk-boundary -> annulus at n = {n}")));
    }
    let mut checked = m.clone();
    if let Some(r) = checked.verify_all(exec)?.into_iter().find(|r| !r.passed) {
        return Err(Error::PreconditionUnmet(format!("the map fails the {} check", r.property)));
    }
    let winding = boundary_winding(m, classes)?;
    let modulus = binomial_gcd(n);
    let congruent = if modulus.is_zero() { winding.is_one() } else { ((&winding - BigInt::one()) % &modulus).is_zero() };
    Ok(WindingCongruence { winding, modulus, congruent })
}

/// Every solution of the boundary-only system with all coefficients in
/// `[-bound, bound]`, in lexicographic order.
pub fn enumerate_boundary_solutions(n: usize, bound: i64, exec: Execution) -> Result<Vec<Vec<BigInt>>> {
    let system = ReducedSystem::build(n, true)?;
    let width = system.unknowns.len();
    let side = (2 * bound + 1) as u64;
    let total = side.checked_pow(width as u32).ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: u64::MAX as u128 })?;
    let found = exec::map_range(exec, total, |mut code| {
        let mut x = vec![BigInt::zero(); width];
        for xi in x.iter_mut().rev() {
            *xi = BigInt::from((code % side) as i64 - bound);
            code /= side;
        }
        system.is_solution(&x).then_some(x)
    });
    Ok(found.into_iter().flatten().collect())
}

/// `count` solutions of the boundary-only system drawn as the particular
/// solution plus a random combination of kernel vectors with multipliers in
/// `[-spread, spread]`.
pub fn sample_boundary_solutions(n: usize, count: usize, spread: i64, seed: u64) -> Result<Vec<Vec<BigInt>>> {
    let system = ReducedSystem::build(n, true)?;
    let (x0, kernel) = system.solution_lattice().ok_or_else(|| Error::VerificationFailed("boundary-only system is infeasible".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut x = x0.clone();
        for v in &kernel {
            let t = BigInt::from(rng.gen_range(-spread..=spread));
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += &t * vi;
            }
        }
        debug_assert!(system.is_solution(&x));
        out.push(x);
    }
    Ok(out)
}

/// Windings of the maps expanded from boundary-only solutions, in input order.
pub fn boundary_windings(n: usize, solutions: &[Vec<BigInt>], exec: Execution) -> Result<Vec<WindingCongruence>> {
    let system = ReducedSystem::build(n, true)?;
    let classes = AnnulusClasses::new(n)?;
    exec::map(exec, solutions, |x| {
        let m = system.expand(x)?;
        winding_congruence(&m, &classes, Execution::Sequential)
    })
    .into_iter()
    .collect()
}

/// Impossibility verdicts for renaming derived from the binomial gcd test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenamingVerdict {
    pub n: usize,
    pub g: BigInt,
    pub wait_free: String,
    pub t: Option<usize>,
    pub t_gcd: Option<BigInt>,
    pub t_resilient: Option<String>,
}

impl RenamingVerdict {
    pub fn impossible(&self) -> bool {
        !self.g.is_one()
    }
}

pub fn renaming_verdict(n: usize, t: Option<usize>) -> Result<RenamingVerdict> {
    if let Some(t) = t {
        if t == 0 || t > n {
            return Err(Error::InvalidArgument(format!("t must satisfy 1 <= t <= n, got t = {t}, n = {n}")));
        }
    }
    let g = binomial_gcd(n);
    let wait_free = if n == 0 {
        "weak symmetry breaking is unsolvable for a single process".to_string()
    } else if g.is_one() {
        format!(
            "chain map exists; impossibility not derivable; a wait-free {}-renaming protocol exists by a known symmetric subdivision construction",
            2 * n
        )
    } else {
        format!("no wait-free {}-renaming", 2 * n)
    };
    let (t_gcd, t_resilient) = match t {
        None => (None, None),
        Some(t) => {
            let gt = binomial_gcd(t);
            let verdict = if gt.is_one() {
                format!("{t}-resilient {}-renaming: unknown/possible", n + t)
            } else {
                format!("no {t}-resilient {}-renaming", n + t)
            };
            (Some(gt), Some(verdict))
        }
    };
    Ok(RenamingVerdict { n, g, wait_free, t, t_gcd, t_resilient })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        assert_eq!(binomial_gcd(2), BigInt::from(3));
        assert_eq!(binomial_gcd(3), BigInt::from(2));
        assert_eq!(binomial_gcd(5), BigInt::one());
        assert_eq!(binomial_gcd(1), BigInt::from(2));
        assert!(binomial_gcd(0).is_zero());
    }

    #[test]
    fn diophantine_examples() {
        let k = solve_diophantine(5).unwrap();
        assert_eq!(k, [-1, -1, 1, 0, 0].map(BigInt::from).to_vec());
        assert!(solve_diophantine(2).is_none());
        assert!(solve_diophantine(0).is_none());
        assert!(solve_diophantine(1).is_none());
        for n in [5, 9, 11, 13, 14] {
            assert!(solve_diophantine(n).is_some(), "n={n}");
        }
    }

    #[test]
    fn system_shape() {
        let s = ReducedSystem::build(1, false).unwrap();
        assert_eq!(s.unknowns().len(), 5);
        for n in 1..=5 {
            let s = ReducedSystem::build(n, false).unwrap();
            assert_eq!(s.unknowns().len(), (0..=n).map(|q| q + 2).sum::<usize>());
        }
        // rows of a dimension q: c_{q,k} + c_{q,k+1} − c_{q−1,k}, up to sign
        let s = ReducedSystem::build(2, false).unwrap();
        let idx = |q: usize, k: usize| s.unknowns().iter().position(|u| *u == Unknown { q, k }).unwrap();
        for q in 1..=2 {
            for k in 0..=q {
                let mut want = vec![BigInt::zero(); s.unknowns().len()];
                want[idx(q, k)] += 1;
                want[idx(q, k + 1)] += 1;
                want[idx(q - 1, k)] -= 1;
                let neg: Vec<BigInt> = want.iter().map(|x| -x).collect();
                assert!(s.rows().iter().any(|r| r.coeffs == want || r.coeffs == neg), "q={q} k={k}");
            }
        }
        assert_eq!(s.rows().len(), 1 + 2 + 3 + 2);
    }

    #[test]
    fn dichotomy_small() {
        for n in 1..=4 {
            let cert = search_equivariant_map(n, Execution::default()).unwrap();
            assert!(!cert.exists(), "n={n}");
            cert.verify(Execution::default()).unwrap();
        }
        let cert = search_equivariant_map(0, Execution::default()).unwrap();
        assert!(!cert.exists());
        cert.verify(Execution::Sequential).unwrap();
    }

    #[test]
    fn z_satisfies_the_congruence() {
        let classes = AnnulusClasses::new(2).unwrap();
        let z = crate::chainmaps::z_map(2).unwrap();
        let w = winding_congruence(&z, &classes, Execution::Sequential).unwrap();
        assert_eq!(w.winding, BigInt::one());
        assert!(w.congruent);
        let bad = crate::chainmaps::zero_map(&crate::complexes::build_disk_boundary(2).unwrap(), ComplexName::Annulus);
        assert!(matches!(winding_congruence(&bad, &classes, Execution::Sequential), Err(Error::PreconditionUnmet(_))));
    }

    #[test]
    fn renaming_examples() {
        assert_eq!(renaming_verdict(2, None).unwrap().wait_free, "no wait-free 4-renaming");
        let v = renaming_verdict(5, None).unwrap();
        assert!(!v.impossible());
        assert!(v.wait_free.contains("impossibility not derivable"));
        let v = renaming_verdict(7, Some(2)).unwrap();
        assert_eq!(v.t_gcd, Some(BigInt::from(3)));
        assert_eq!(v.t_resilient.as_deref(), Some("no 2-resilient 9-renaming"));
        assert!(renaming_verdict(3, Some(4)).is_err());
    }

    #[test]
    fn pi_relations_on_sphere_cycles() {
        use crate::chains::oriented_sphere_cycle;
        use crate::symmetry::pi_m_i;
        for n in 2..=3 {
            for i in 0..=n {
                for j in 0..n {
                    if i == j || i == j + 1 {
                        continue;
                    }
                    let s = oriented_sphere_cycle(i, n).unwrap();
                    let g = pi_m_i(n, j + 1, j).unwrap();
                    assert_eq!(g.act_chain(&s), -&s, "n={n} i={i} j={j}");
                }
            }
        }
    }
}
