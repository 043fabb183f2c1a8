//! The symmetric group on process ids and its action on oriented simplexes
//! and chains.
//!
//! A permutation acts on colors and leaves bits alone; views are relabeled
//! throughout. After relabeling, a simplex is re-sorted by color and the
//! parity of that sort becomes the sign of the image.
//!
//! Equivariance only needs checking on the adjacent transpositions from
//! [`generators`]: they generate the group, and if `m ∘ g = g ∘ m` holds for
//! `g` and `h` then it holds for `g ∘ h`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::chains::Chain;
use crate::complexes::{Color, Label, Simplex, Vertex};
use crate::error::{Error, Result};

/// A permutation of `[n] = {0, …, n}`, stored as images by position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GroupElement {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for GroupElement {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Self::from_images(images)
    }
}

impl From<GroupElement> for Vec<usize> {
    fn from(g: GroupElement) -> Self {
        g.images
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement { images: (0..=n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidArgument("a permutation needs at least one point".into()));
        }
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
            }
        }
        Ok(GroupElement { images })
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i > n || j > n {
            return Err(Error::InvalidArgument(format!("transposition ({i} {j}) outside [0, {n}]")));
        }
        let mut g = Self::identity(n);
        g.images.swap(i, j);
        Ok(g)
    }

    /// Largest point acted on.
    pub fn n(&self) -> usize {
        self.images.len() - 1
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images.get(i).copied().unwrap_or(i)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let len = self.images.len().max(other.images.len());
        GroupElement { images: (0..len).map(|i| self.apply(other.apply(i))).collect() }
    }

    pub fn inverse(&self) -> GroupElement {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        GroupElement { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn sign(&self) -> i8 {
        let mut visited = vec![false; self.images.len()];
        let mut parity = 0;
        for start in 0..self.images.len() {
            let mut len = 0;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len > 0 {
                parity += len - 1;
            }
        }
        if parity % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Indices `k₁, …, k_m` of adjacent transpositions `s_k = (k k+1)` with
    /// `self = s_{k₁} ∘ … ∘ s_{k_m}`.
    pub fn factor(&self) -> Vec<usize> {
        let mut p = self.images.clone();
        let mut swaps = Vec::new();
        // p ∘ s_k swaps entries k and k+1; bubble sort down to the identity
        for end in (1..p.len()).rev() {
            for k in 0..end {
                if p[k] > p[k + 1] {
                    p.swap(k, k + 1);
                    swaps.push(k);
                }
            }
        }
        swaps.reverse();
        swaps
    }

    pub fn act_vertex(&self, v: &Vertex) -> Vertex {
        let label = match &v.label {
            Label::View(view) => Label::View(Arc::new(view.relabel(&|i| self.apply(i)))),
            other => other.clone(),
        };
        Vertex { color: self.apply(v.color), label }
    }

    /// The image of a canonical simplex, re-canonicalized, with its sign.
    pub fn act_simplex(&self, s: &Simplex) -> (Simplex, i8) {
        Simplex::oriented(s.vertices().iter().map(|v| self.act_vertex(v)).collect()).expect("a permutation keeps colors distinct")
    }

    pub fn act_chain(&self, c: &Chain) -> Chain {
        let mut out = Chain::zero(c.dim());
        for (s, k) in c.terms() {
            let (image, sign) = self.act_simplex(s);
            out.add_term(image, k * BigInt::from(sign));
        }
        out
    }
}

/// `π^m_i`: the cycle `i ↦ i+1 ↦ … ↦ m ↦ i`, fixing every other point of `[n]`.
pub fn pi_m_i(n: usize, m: usize, i: usize) -> Result<GroupElement> {
    if !(i <= m && m <= n) {
        return Err(Error::InvalidArgument(format!("pi^{m}_{i} needs 0 <= i <= m <= n = {n}")));
    }
    let mut g = GroupElement::identity(n);
    for k in i..m {
        g.images[k] = k + 1;
    }
    g.images[m] = i;
    Ok(g)
}

/// The adjacent transpositions `(i i+1)` of `[n]`.
pub fn generators(n: usize) -> Vec<GroupElement> {
    (0..n).map(|i| GroupElement::transposition(n, i, i + 1).unwrap()).collect()
}

/// Every element of the symmetric group on `[n]`, by closure of [`generators`].
pub fn all_elements(n: usize) -> Vec<GroupElement> {
    let gens = generators(n);
    let mut seen = BTreeSet::from([GroupElement::identity(n)]);
    let mut queue = VecDeque::from([GroupElement::identity(n)]);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = s.compose(&g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen.into_iter().collect()
}

/// A permutation of `[n]` mapping `0, …, q` increasingly onto the sorted
/// `colors`, written as a product of the `π^m_i`.
pub fn transport(n: usize, colors: &[Color]) -> Result<GroupElement> {
    let mut target: Vec<Color> = colors.to_vec();
    target.sort_unstable();
    target.dedup();
    if target.len() != colors.len() || target.last().is_some_and(|&c| c > n) || target.is_empty() {
        return Err(Error::InvalidArgument(format!("{colors:?} is not a set of distinct colors in [0, {n}]")));
    }
    let mut g = GroupElement::identity(n);
    let mut top = n;
    // invariant: g maps `target` (a subset of 0..=top) onto the requested colors
    loop {
        if target.iter().enumerate().all(|(i, &c)| i == c) {
            return Ok(g);
        }
        if *target.last().unwrap() < top {
            top -= 1;
            continue;
        }
        let hole = (0..=top).rev().find(|h| target.binary_search(h).is_err()).unwrap();
        let step = pi_m_i(n, top, hole)?;
        let back = step.inverse();
        g = g.compose(&step);
        target = target.iter().map(|&c| back.apply(c)).collect();
        target.sort_unstable();
        top -= 1;
    }
}

/// Orbit of a simplex under all permutations of `[n]`, orientation ignored.
pub fn orbit_simplex(s: &Simplex, n: usize) -> BTreeSet<Simplex> {
    all_elements(n).iter().map(|g| g.act_simplex(s).0).collect()
}

/// Orbit of a chain under all permutations of `[n]`.
pub fn orbit_chain(c: &Chain, n: usize) -> BTreeSet<Chain> {
    all_elements(n).iter().map(|g| g.act_chain(c)).collect()
}
