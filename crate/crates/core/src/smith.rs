//! Dense integer matrices and the Smith normal form over ℤ.
//!
//! The reduction is deterministic: at every stage the pivot is the entry of
//! smallest non-zero magnitude, ties broken by (row, column) index. The
//! transforms satisfy `U · A · V = D` exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        self.data.iter().map(|r| r[c].clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, a) in self.data[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|row| row.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Appends the columns of `other` on the right.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        IntMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        let src = self.data[source].clone();
        for (t, s) in self.data[target].iter_mut().zip(&src) {
            if !s.is_zero() {
                *t += factor * s;
            }
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for row in &mut self.data {
            if !row[source].is_zero() {
                let delta = factor * &row[source];
                row[target] += delta;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for x in &mut self.data[r] {
            *x = -std::mem::take(x);
        }
    }
}

/// Smith normal form of a matrix, optionally with its unimodular transforms.
#[derive(Clone, Debug)]
pub struct SmithData {
    /// Non-zero invariant factors d₁ | d₂ | … , all positive.
    pub invariant_factors: Vec<BigInt>,
    /// `U` with `U · A · V = D` (rows × rows).
    pub left: Option<IntMatrix>,
    /// `V` with `U · A · V = D` (cols × cols).
    pub right: Option<IntMatrix>,
    pub rows: usize,
    pub cols: usize,
}

/// Outcome of solving `A x = b` over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Feasible(Vec<BigInt>),
    /// `multipliers · A` has every entry divisible by `modulus`, while
    /// `multipliers · b` is not (modulus 0: the combination of rows vanishes
    /// but the right-hand side does not).
    Infeasible { multipliers: Vec<BigInt>, modulus: BigInt },
}

impl SmithData {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Exact particular solution of `A x = b` by back-substitution through the
    /// normal form; free coordinates are set to zero.
    pub fn solve(&self, b: &[BigInt]) -> Solution {
        let (u, v) = match (&self.left, &self.right) {
            (Some(u), Some(v)) => (u, v),
            _ => panic!("solve requires a normal form computed with transforms"),
        };
        assert_eq!(b.len(), self.rows);
        let ub = u.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, c) in ub.iter().enumerate() {
            if i < self.rank() {
                let d = &self.invariant_factors[i];
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return Solution::Infeasible { multipliers: u.row(i).to_vec(), modulus: d.clone() };
                }
                y[i] = q;
            } else if !c.is_zero() {
                return Solution::Infeasible { multipliers: u.row(i).to_vec(), modulus: BigInt::zero() };
            }
        }
        Solution::Feasible(v.mul_vec(&y))
    }

    /// A basis of the integer kernel of `A`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let v = self.right.as_ref().expect("kernel requires transforms");
        (self.rank()..self.cols).map(|j| v.column(j)).collect()
    }
}

fn pick_pivot(a: &IntMatrix, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    cells
        .filter(|&(i, j)| !a.data[i][j].is_zero())
        .min_by(|&(i1, j1), &(i2, j2)| a.data[i1][j1].magnitude().cmp(a.data[i2][j2].magnitude()).then((i1, j1).cmp(&(i2, j2))))
}

/// Computes the Smith normal form; `with_transforms` also accumulates `U`, `V`.
pub fn smith(matrix: &IntMatrix, with_transforms: bool) -> SmithData {
    let (rows, cols) = (matrix.rows, matrix.cols);
    let mut a = matrix.clone();
    let mut u = with_transforms.then(|| IntMatrix::identity(rows));
    let mut v = with_transforms.then(|| IntMatrix::identity(cols));
    let mut factors = Vec::new();

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = pick_pivot(&a, (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        move_pivot(&mut a, &mut u, &mut v, t, pi, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a.data[i][t].is_zero() {
                    continue;
                }
                let q = -a.data[i][t].div_floor(&a.data[t][t]);
                a.add_row_multiple(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &q);
                }
                clean &= a.data[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a.data[t][j].is_zero() {
                    continue;
                }
                let q = -a.data[t][j].div_floor(&a.data[t][t]);
                a.add_col_multiple(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, t, &q);
                }
                clean &= a.data[t][j].is_zero();
            }
            if !clean {
                let cells = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
                let (pi, pj) = pick_pivot(&a, cells).expect("pivot row or column is non-zero");
                move_pivot(&mut a, &mut u, &mut v, t, pi, pj);
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a.data[i][j].is_multiple_of(&a.data[t][t]));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a.data[t][t].is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        factors.push(a.data[t][t].clone());
        t += 1;
    }
    SmithData { invariant_factors: factors, left: u, right: v, rows, cols }
}

fn move_pivot(a: &mut IntMatrix, u: &mut Option<IntMatrix>, v: &mut Option<IntMatrix>, t: usize, pi: usize, pj: usize) {
    if pi != t {
        a.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
    }
    if pj != t {
        a.swap_cols(t, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn diagonal(s: &SmithData) -> IntMatrix {
        let mut d = IntMatrix::zeros(s.rows, s.cols);
        for (i, f) in s.invariant_factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }

    #[test]
    fn known_invariant_factors() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a, true);
        assert_eq!(s.invariant_factors, big(&[2, 6, 12]));
        let u = s.left.as_ref().unwrap();
        let v = s.right.as_ref().unwrap();
        assert_eq!(u.mul(&a).mul(v), diagonal(&s));
    }

    #[test]
    fn solve_and_infeasibility() {
        // 3x + 3y = 1 has no integer solution
        let a = m(&[&[3, 3]]);
        let s = smith(&a, true);
        match s.solve(&big(&[1])) {
            Solution::Infeasible { multipliers, modulus } => {
                assert_eq!(modulus, BigInt::from(3));
                let combo = IntMatrix::from_rows(vec![multipliers.clone()]).mul(&a);
                assert!(combo.row(0).iter().all(|x| x.is_multiple_of(&modulus)));
                assert!(!multipliers[0].is_multiple_of(&modulus));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
        let a = m(&[&[6, 15, 20]]);
        let s = smith(&a, true);
        let Solution::Feasible(x) = s.solve(&big(&[-1])) else { panic!() };
        assert_eq!(a.mul_vec(&x), big(&[-1]));
        assert_eq!(s.kernel_basis().len(), 2);
    }

    #[test]
    fn zero_rows_detected() {
        let a = m(&[&[1, 1], &[1, 1]]);
        let s = smith(&a, true);
        assert_eq!(s.rank(), 1);
        assert!(matches!(s.solve(&big(&[1, 2])), Solution::Infeasible { ref modulus, .. } if modulus.is_zero()));
    }

    proptest! {
        #[test]
        fn reconstruction_and_divisibility(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-6i64..7, 25)) {
            let a = IntMatrix::from_rows((0..rows).map(|i| (0..cols).map(|j| BigInt::from(seed[i * 5 + j])).collect()).collect());
            let s = smith(&a, true);
            let u = s.left.as_ref().unwrap();
            let v = s.right.as_ref().unwrap();
            prop_assert_eq!(u.mul(&a).mul(v), diagonal(&s));
            for w in s.invariant_factors.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            prop_assert!(s.invariant_factors.iter().all(|d| d.is_positive()));
            let plain = smith(&a, false);
            prop_assert_eq!(plain.invariant_factors, s.invariant_factors.clone());
            for k in s.kernel_basis() {
                prop_assert!(a.mul_vec(&k).iter().all(|x| x.is_zero()));
            }
            // any b in the image is solved exactly
            let x0: Vec<BigInt> = (0..cols).map(|j| BigInt::from(seed[20 + j % 5])).collect();
            let b = a.mul_vec(&x0);
            match s.solve(&b) {
                Solution::Feasible(x) => prop_assert_eq!(a.mul_vec(&x), b),
                Solution::Infeasible { .. } => prop_assert!(false, "image vector reported infeasible"),
            }
        }
    }
}
