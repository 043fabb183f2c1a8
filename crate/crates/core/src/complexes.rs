//! Chromatic simplicial complexes: the disk, the annulus, the output complex,
//! color spheres, skeletons and boundary complexes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::view::View;

/// Process id; also the color of a vertex.
pub type Color = usize;

/// Output token carried by a vertex next to its color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// Placeholder used by the vertices of the disk.
    Unit,
    /// Binary output value of the annulus and output complexes.
    Bit(u8),
    /// View of a process in a subdivided complex.
    View(Arc<View>),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Unit => f.write_str("*"),
            Label::Bit(b) => write!(f, "{b}"),
            Label::View(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub color: Color,
    pub label: Label,
}

impl Vertex {
    pub fn unit(color: Color) -> Self {
        Vertex { color, label: Label::Unit }
    }

    pub fn bit(color: Color, bit: u8) -> Self {
        Vertex { color, label: Label::Bit(bit) }
    }

    pub fn bit_value(&self) -> Option<u8> {
        match self.label {
            Label::Bit(b) => Some(b),
            _ => None,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Label::Unit => write!(f, "{}", self.color),
            l => write!(f, "({},{})", self.color, l),
        }
    }
}

/// A properly colored simplex, stored with its vertices sorted by color.
///
/// The sorted order is the canonical orientation. The empty simplex stands for
/// the generator of the augmented degree −1 chain group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Canonicalizes `vertices`; rejects repeated colors.
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        Self::oriented(vertices).map(|(s, _)| s)
    }

    /// Canonicalizes an oriented vertex sequence, returning the parity (+1 or
    /// −1) of the permutation that sorts it.
    pub fn oriented(mut vertices: Vec<Vertex>) -> Result<(Self, i8)> {
        let mut inversions = 0usize;
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                match vertices[i].color.cmp(&vertices[j].color) {
                    std::cmp::Ordering::Greater => inversions += 1,
                    std::cmp::Ordering::Equal => return Err(Error::DuplicateColor(vertices[i].color)),
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        vertices.sort_by_key(|v| v.color);
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Ok((Simplex(vertices), sign))
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn colors(&self) -> Vec<Color> {
        self.0.iter().map(|v| v.color).collect()
    }

    /// The face omitting the `j`-th vertex of the canonical order.
    pub fn face(&self, j: usize) -> Simplex {
        let mut vs = self.0.clone();
        vs.remove(j);
        Simplex(vs)
    }

    /// All non-empty faces, the simplex itself included.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u64..(1u64 << k))
            .map(|mask| Simplex((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i].clone()).collect()))
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.contains(v))
    }

    /// Number of vertices labeled with bit 1.
    pub fn ones(&self) -> usize {
        self.0.iter().filter(|v| v.label == Label::Bit(1)).count()
    }

    /// True for binary-labeled simplexes whose labels all agree.
    pub fn is_monochromatic(&self) -> bool {
        let bits: BTreeSet<_> = self.0.iter().map(|v| v.bit_value()).collect();
        bits.len() == 1 && !bits.contains(&None)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(">")
    }
}

/// Identifies a complex family so that documents can name their ambient complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ComplexName {
    Disk,
    DiskBoundary,
    Annulus,
    Output,
    Sphere(Vec<Color>),
    Subdivision { rounds: usize },
    Custom(String),
}

impl fmt::Display for ComplexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexName::Disk => f.write_str("disk"),
            ComplexName::DiskBoundary => f.write_str("disk-boundary"),
            ComplexName::Annulus => f.write_str("annulus"),
            ComplexName::Output => f.write_str("output"),
            ComplexName::Sphere(cs) => {
                let cs: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "sphere:{}", cs.join(","))
            }
            ComplexName::Subdivision { rounds } => write!(f, "chr:{rounds}"),
            ComplexName::Custom(s) => write!(f, "custom:{s}"),
        }
    }
}

impl FromStr for ComplexName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown complex name {s:?}"));
        Ok(match s {
            "disk" => ComplexName::Disk,
            "disk-boundary" => ComplexName::DiskBoundary,
            "annulus" => ComplexName::Annulus,
            "output" => ComplexName::Output,
            _ => {
                if let Some(rest) = s.strip_prefix("sphere:") {
                    let cs = rest
                        .split(',')
                        .map(|c| c.trim().parse::<Color>().map_err(|_| bad()))
                        .collect::<Result<Vec<_>>>()?;
                    ComplexName::Sphere(cs)
                } else if let Some(rest) = s.strip_prefix("chr:") {
                    ComplexName::Subdivision { rounds: rest.parse().map_err(|_| bad())? }
                } else if let Some(rest) = s.strip_prefix("custom:") {
                    ComplexName::Custom(rest.to_string())
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl ComplexName {
    /// Rebuilds the named complex for ambient dimension `n`.
    pub fn build(&self, n: usize) -> Result<Complex> {
        match self {
            ComplexName::Disk => Ok(build_disk(n)),
            ComplexName::DiskBoundary => build_disk_boundary(n),
            ComplexName::Annulus => build_annulus(n),
            ComplexName::Output => Ok(build_output_complex(n)),
            ComplexName::Sphere(cs) => build_sphere(n, cs),
            ComplexName::Subdivision { rounds } => {
                Ok(crate::subdivision::chromatic_subdivide(n, *rounds).complex().clone())
            }
            ComplexName::Custom(s) => Err(Error::InvalidArgument(format!("cannot rebuild custom complex {s:?}"))),
        }
    }
}

/// A finite chromatic simplicial complex, closed under faces.
#[derive(Clone, Debug)]
pub struct Complex {
    n: usize,
    name: ComplexName,
    facets: Vec<Simplex>,
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
    augmentation: Vec<Simplex>,
}

impl Complex {
    /// Builds the downward closure of `facets`. Colors must lie in `[0, n]`.
    pub fn from_facets(n: usize, name: ComplexName, facets: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut layers: Vec<BTreeSet<Simplex>> = Vec::new();
        for facet in facets {
            if facet.is_empty() {
                continue;
            }
            if let Some(v) = facet.vertices().iter().find(|v| v.color > n) {
                return Err(Error::ColorOutOfRange { color: v.color, n });
            }
            for face in facet.faces() {
                let d = face.dim() as usize;
                if layers.len() <= d {
                    layers.resize_with(d + 1, BTreeSet::new);
                }
                layers[d].insert(face);
            }
        }
        let by_dim: Vec<Vec<Simplex>> = layers.into_iter().map(|l| l.into_iter().collect()).collect();
        let mut index = HashMap::new();
        for layer in &by_dim {
            for (i, s) in layer.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        let mut covered: BTreeSet<&Simplex> = BTreeSet::new();
        for layer in by_dim.iter().skip(1) {
            for s in layer {
                covered.extend((0..s.vertices().len()).map(|j| index.get_key_value(&s.face(j)).unwrap().0));
            }
        }
        let facets = by_dim.iter().flatten().filter(|s| !covered.contains(s)).cloned().collect();
        Ok(Complex { n, name, facets, by_dim, index, augmentation: vec![Simplex::empty()] })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &ComplexName {
        &self.name
    }

    pub fn with_name(mut self, name: ComplexName) -> Self {
        self.name = name;
        self
    }

    /// Maximal simplexes, in canonical order.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Dimension of the largest simplex, −1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    /// Simplexes of dimension `d`; `d = −1` yields the empty simplex only.
    pub fn simplices(&self, d: isize) -> &[Simplex] {
        if d == -1 {
            return &self.augmentation;
        }
        if d < -1 {
            return &[];
        }
        self.by_dim.get(d as usize).map_or(&[], |l| l.as_slice())
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn count(&self, d: isize) -> usize {
        self.simplices(d).len()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(|l| l.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        s.is_empty() || self.index.contains_key(s)
    }

    /// Position of `s` within [`Complex::simplices`] of its dimension.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        if s.is_empty() {
            return Some(0);
        }
        self.index.get(s).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.simplices(0).iter().map(|s| &s.vertices()[0])
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }
}

fn labelings(colors: &[Color]) -> impl Iterator<Item = Simplex> + '_ {
    (0u64..(1u64 << colors.len())).map(move |mask| {
        Simplex(colors.iter().enumerate().map(|(i, &c)| Vertex::bit(c, (mask >> i & 1) as u8)).collect())
    })
}

/// The n-simplex on colors `0..=n` and all its faces.
pub fn build_disk(n: usize) -> Complex {
    let facet = Simplex((0..=n).map(Vertex::unit).collect());
    Complex::from_facets(n, ComplexName::Disk, [facet]).expect("disk is properly colored")
}

/// The (n−1)-skeleton of the disk.
pub fn build_disk_boundary(n: usize) -> Result<Complex> {
    if n == 0 {
        return Err(Error::InvalidArgument("the boundary of a 0-simplex is empty".into()));
    }
    Ok(skeleton(&build_disk(n), n - 1).with_name(ComplexName::DiskBoundary))
}

/// Binary-labeled simplexes on colors `0..=n`, except the two monochromatic
/// n-simplexes.
pub fn build_annulus(n: usize) -> Result<Complex> {
    if n == 0 {
        return Err(Error::InvalidArgument("the annulus needs n >= 1".into()));
    }
    let colors: Vec<Color> = (0..=n).collect();
    let facets: Vec<Simplex> = labelings(&colors).filter(|s| !s.is_monochromatic()).collect();
    Complex::from_facets(n, ComplexName::Annulus, facets)
}

/// Every binary-labeled properly colored simplex on colors `0..=n`.
pub fn build_output_complex(n: usize) -> Complex {
    let colors: Vec<Color> = (0..=n).collect();
    let facets: Vec<Simplex> = labelings(&colors).collect();
    Complex::from_facets(n, ComplexName::Output, facets).expect("output complex is properly colored")
}

/// The subcomplex of the annulus spanned by binary simplexes colored with
/// `colors`. It is a sphere of dimension `colors.len() − 1` unless it uses all
/// `n + 1` colors, in which case it is the annulus itself.
pub fn build_sphere(n: usize, colors: &[Color]) -> Result<Complex> {
    if colors.is_empty() {
        return Err(Error::InvalidArgument("a sphere needs at least one color".into()));
    }
    let mut sorted = colors.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateColor(w[0]));
    }
    if let Some(&c) = sorted.iter().find(|&&c| c > n) {
        return Err(Error::ColorOutOfRange { color: c, n });
    }
    let full = sorted.len() == n + 1;
    let facets: Vec<Simplex> = labelings(&sorted).filter(|s| !(full && s.is_monochromatic())).collect();
    if facets.is_empty() {
        return Err(Error::InvalidArgument("the annulus needs n >= 1".into()));
    }
    Complex::from_facets(n, ComplexName::Sphere(sorted), facets)
}

/// All simplexes of `k` of dimension at most `i`.
pub fn skeleton(k: &Complex, i: usize) -> Complex {
    let kept: Vec<Simplex> = k.by_dim.iter().take(i + 1).flatten().cloned().collect();
    let name = ComplexName::Custom(format!("skeleton({},{i})", k.name));
    Complex::from_facets(k.n, name, kept).expect("subcomplex of a valid complex")
}

/// The proper faces of `s`.
pub fn boundary_complex(s: &Simplex) -> Result<Complex> {
    if s.dim() < 1 {
        return Err(Error::InvalidArgument(format!("boundary of {s} is only the augmented empty complex")));
    }
    let n = s.vertices().iter().map(|v| v.color).max().unwrap_or(0);
    let faces: Vec<Simplex> = (0..s.vertices().len()).map(|j| s.face(j)).collect();
    Complex::from_facets(n, ComplexName::Custom(format!("boundary{s}")), faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn disk_face_census() {
        let d2 = build_disk(2);
        assert_eq!((d2.count(0), d2.count(1), d2.count(2)), (3, 3, 1));
        assert_eq!(d2.len(), 7);
        assert_eq!(build_disk(0).len(), 1);
        assert_eq!(build_disk(5).len(), 63);
        for n in 0..6 {
            let d = build_disk(n);
            for i in 0..=n {
                assert_eq!(d.count(i as isize), binom(n + 1, i + 1));
            }
        }
    }

    #[test]
    fn annulus_census() {
        let a2 = build_annulus(2).unwrap();
        assert_eq!((a2.count(0), a2.count(1), a2.count(2)), (6, 12, 6));
        assert_eq!(a2.euler_characteristic(), 0);
        let a1 = build_annulus(1).unwrap();
        assert_eq!((a1.count(0), a1.count(1)), (4, 2));
        assert_eq!(a1.facets().len(), 2);
        for n in 1..=6 {
            assert_eq!(build_annulus(n).unwrap().facets().len(), (1 << (n + 1)) - 2);
        }
        assert!(build_annulus(0).is_err());
        assert!(!a2.contains(&Simplex::new(vec![Vertex::bit(0, 1), Vertex::bit(1, 1), Vertex::bit(2, 1)]).unwrap()));
    }

    #[test]
    fn output_complex_adds_two_facets() {
        assert_eq!(build_output_complex(2).facets().len(), 8);
        assert_eq!(build_output_complex(1).count(1), 4);
        for n in 1..=5 {
            assert_eq!(build_output_complex(n).facets().len() - build_annulus(n).unwrap().facets().len(), 2);
        }
    }

    #[test]
    fn sphere_census_matches_cross_polytope() {
        let circle = build_sphere(2, &[0, 1]).unwrap();
        assert_eq!((circle.count(0), circle.count(1)), (4, 4));
        let s0 = build_sphere(1, &[0]).unwrap();
        assert_eq!((s0.count(0), s0.dim()), (2, 0));
        let s2 = build_sphere(3, &[0, 1, 2]).unwrap();
        assert_eq!(s2.euler_characteristic(), 2);
        for q in 0..=3usize {
            let colors: Vec<Color> = (0..=q).collect();
            let s = build_sphere(q + 1, &colors).unwrap();
            for k in 0..=q {
                assert_eq!(s.count(k as isize), (1 << (k + 1)) * binom(q + 1, k + 1));
            }
        }
        assert!(matches!(build_sphere(3, &[0, 0]), Err(Error::DuplicateColor(0))));
        // all colors: the annulus again
        assert_eq!(build_sphere(2, &[0, 1, 2]).unwrap().facets().len(), 6);
    }

    #[test]
    fn skeleton_and_boundary() {
        let d2 = build_disk(2);
        let sk = skeleton(&d2, 1);
        assert_eq!((sk.count(0), sk.count(1), sk.count(2)), (3, 3, 0));
        assert_eq!(skeleton(&d2, 2).len(), d2.len());
        assert_eq!(skeleton(&build_annulus(2).unwrap(), 0).len(), 6);

        let tri = Simplex::new((0..3).map(Vertex::unit).collect()).unwrap();
        let b = boundary_complex(&tri).unwrap();
        assert_eq!((b.count(0), b.count(1)), (3, 3));
        let edge = Simplex::new(vec![Vertex::unit(0), Vertex::unit(1)]).unwrap();
        assert_eq!(boundary_complex(&edge).unwrap().len(), 2);
        for q in 1..5usize {
            let s = Simplex::new((0..=q).map(Vertex::unit).collect()).unwrap();
            assert_eq!(boundary_complex(&s).unwrap().len(), (1 << (q + 1)) - 2);
        }
        assert!(boundary_complex(&Simplex::new(vec![Vertex::unit(0)]).unwrap()).is_err());
    }

    #[test]
    fn downward_closed_and_properly_colored() {
        for k in [build_annulus(3).unwrap(), build_output_complex(2), build_sphere(3, &[0, 2, 3]).unwrap()] {
            for s in k.all_simplices() {
                let colors = s.colors();
                assert!(colors.windows(2).all(|w| w[0] < w[1]));
                for f in s.faces() {
                    assert!(k.contains(&f));
                }
            }
        }
    }

    #[test]
    fn orientation_parity() {
        let (s, sign) = Simplex::oriented(vec![Vertex::unit(1), Vertex::unit(0)]).unwrap();
        assert_eq!(sign, -1);
        assert_eq!(s.colors(), vec![0, 1]);
        let (_, sign) = Simplex::oriented(vec![Vertex::unit(2), Vertex::unit(0), Vertex::unit(1)]).unwrap();
        assert_eq!(sign, 1);
        assert!(Simplex::new(vec![Vertex::bit(0, 0), Vertex::bit(0, 1)]).is_err());
    }

    #[test]
    fn names_round_trip() {
        for name in [
            ComplexName::Disk,
            ComplexName::DiskBoundary,
            ComplexName::Annulus,
            ComplexName::Output,
            ComplexName::Sphere(vec![0, 2]),
            ComplexName::Subdivision { rounds: 2 },
        ] {
            assert_eq!(name.to_string().parse::<ComplexName>().unwrap(), name);
        }
        assert!("torus".parse::<ComplexName>().is_err());
    }
}
