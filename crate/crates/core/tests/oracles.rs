//! Engine results checked against independent recomputations.

use std::collections::BTreeMap;

use equichain_core::chainmaps::{verify_chain_map, verify_equivariant_full};
use equichain_core::chains::{boundary, Chain};
use equichain_core::complexes::{build_annulus, build_disk, build_output_complex, build_sphere, Vertex};
use equichain_core::solvability::{binomial_gcd, solve_diophantine, ReducedSystem};
use equichain_core::subdivision::{
    chromatic_subdivide, coloring_chain_map, subdivision_chain_map, verify_symmetric_coloring, SubdividedComplex,
    SymmetryClasses,
};
use equichain_core::{BinaryColoring, Execution, Simplex, View};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn binom(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

#[test]
fn face_censuses() {
    for n in 0..=5usize {
        let d = build_disk(n);
        for i in 0..=n {
            assert_eq!(d.count(i as isize) as u64, binom(n as u64 + 1, i as u64 + 1));
        }
        assert_eq!(d.len() as u64, (1 << (n + 1)) - 1);
        // the output complex is a cross-polytope: C(n+1, i+1) 2^{i+1} faces
        let o = build_output_complex(n);
        for i in 0..=n {
            assert_eq!(o.count(i as isize) as u64, binom(n as u64 + 1, i as u64 + 1) << (i + 1));
        }
        assert_eq!(o.euler_characteristic(), if n % 2 == 0 { 2 } else { 0 });
    }
    for n in 1..=4usize {
        let a = build_annulus(n).unwrap();
        assert_eq!(a.count(n as isize) as u64, (1 << (n + 1)) - 2);
        assert_eq!(a.euler_characteristic(), if n % 2 == 0 { 0 } else { 2 });
    }
    // a sphere on q+1 colors is the boundary of the (q+1)-cross-polytope
    for q in 0..=3usize {
        let s = build_sphere(4, &(0..=q).collect::<Vec<_>>()).unwrap();
        assert_eq!(s.euler_characteristic(), if q % 2 == 0 { 2 } else { 0 });
    }
}

/// Number of ordered set partitions via Stirling numbers of the second kind.
fn ordered_bell(m: u64) -> u64 {
    let mut s = vec![vec![0u64; m as usize + 1]; m as usize + 1];
    s[0][0] = 1;
    for i in 1..=m as usize {
        for k in 1..=i {
            s[i][k] = k as u64 * s[i - 1][k] + s[i - 1][k - 1];
        }
    }
    (1..=m as usize).map(|k| (1..=k as u64).product::<u64>() * s[m as usize][k]).sum()
}

#[test]
fn subdivision_facets_match_ordered_bell_numbers() {
    for n in 0..=3usize {
        assert_eq!(chromatic_subdivide(n, 1).facets().len() as u64, ordered_bell(n as u64 + 1));
    }
    assert_eq!(chromatic_subdivide(1, 3).facets().len(), 27);
}

/// A literal reading of the anonymity condition: for every pair of faces of
/// the same dimension, relabel the subdivision of one onto the other by rank
/// and compare bits.
fn symmetric_by_face_pairs(s: &SubdividedComplex, b: &BinaryColoring) -> bool {
    let n = s.n();
    let index: BTreeMap<(usize, View), usize> =
        s.vertices().iter().enumerate().map(|(i, v)| ((v.id, (*v.view).clone()), i)).collect();
    let faces: Vec<Vec<usize>> =
        (1u32..(1 << (n + 1)) - 1).map(|m| (0..=n).filter(|&c| m >> c & 1 == 1).collect()).collect();
    for f in &faces {
        for g in faces.iter().filter(|g| g.len() == f.len()) {
            for (i, v) in s.vertices().iter().enumerate() {
                if !v.carrier.iter().all(|c| f.contains(c)) {
                    continue;
                }
                let mu = |c: usize| g[f.iter().position(|&x| x == c).unwrap()];
                let image = index[&(mu(v.id), v.view.relabel(&mu))];
                if b.get(i) != b.get(image) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn symmetry_check_matches_face_pair_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, r) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let s = chromatic_subdivide(n, r);
        let classes = SymmetryClasses::new(&s);
        for trial in 0..60 {
            let b = if trial % 2 == 0 {
                classes.random(&mut rng)
            } else {
                // perturb a symmetric coloring at one vertex
                let mut bits = classes.random(&mut rng).bits().to_vec();
                let i = rng.gen_range(0..bits.len());
                bits[i] ^= 1;
                BinaryColoring::new(bits).unwrap()
            };
            let fast = verify_symmetric_coloring(&s, &b).unwrap().passed;
            assert_eq!(fast, symmetric_by_face_pairs(&s, &b), "n={n} r={r} trial={trial}");
        }
    }
}

/// Anonymity is about rank-preserving bijections, so relabeling ids by an
/// arbitrary permutation need not keep a coloring symmetric. It is still a
/// group action on colorings.
#[test]
fn id_permutations_act_on_colorings() {
    let s = chromatic_subdivide(2, 1);
    let classes = SymmetryClasses::new(&s);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let all = equichain_core::symmetry::all_elements(2);
    for _ in 0..10 {
        let b = classes.random(&mut rng);
        for g in &all {
            assert_eq!(b.permuted(&s, &g.inverse()).unwrap().permuted(&s, g).unwrap(), b);
            for h in &all {
                let step = b.permuted(&s, h).unwrap().permuted(&s, g).unwrap();
                assert_eq!(step, b.permuted(&s, &g.compose(h)).unwrap());
            }
        }
    }
}

#[test]
fn subdivision_boundary_lives_on_the_carrier_boundary() {
    for (n, r) in [(2, 1), (2, 2), (3, 1)] {
        let s = chromatic_subdivide(n, r);
        let m = subdivision_chain_map(&s).unwrap();
        let top = Simplex::new((0..=n).map(Vertex::unit).collect()).unwrap();
        let image = m.image(&top).unwrap();
        assert!(image.terms().values().all(|k| k == &BigInt::from(1) || k == &BigInt::from(-1)));
        assert_eq!(image.len(), s.facets().len());
        for t in boundary(image).terms().keys() {
            let carrier: std::collections::BTreeSet<usize> = t
                .vertices()
                .iter()
                .flat_map(|v| s.vertices()[s.vertex_index(v).unwrap()].carrier.clone())
                .collect();
            assert!(carrier.len() <= n, "boundary simplex {t} has full carrier");
        }
        assert!(verify_chain_map(&m, &build_disk(n), s.complex(), Execution::default()).unwrap().passed);
    }
}

/// Coloring-induced maps of symmetric colorings are equivariant chain maps
/// into the output complex, whatever the interior bits are.
#[test]
fn symmetric_coloring_maps_are_equivariant() {
    let s = chromatic_subdivide(2, 1);
    let classes = SymmetryClasses::new(&s);
    let disk = build_disk(2);
    for index in 0..classes.count() as u64 {
        let mut cm = coloring_chain_map(&s, &classes.coloring(index)).unwrap();
        let reports = cm.map.verify_all(Execution::default()).unwrap();
        assert!(reports.iter().all(|r| r.passed), "coloring {index}: {reports:?}");
        assert!(verify_equivariant_full(&cm.map, &disk, Execution::default()).unwrap().passed);
    }
    // corners with different bits break equivariance (an interior edge
    // vertex alone need not: its two incident edges cancel at chain level)
    let mut bits = classes.coloring(0).bits().to_vec();
    let v = s.vertices().iter().position(|v| v.carrier == [0]).unwrap();
    bits[v] = 1;
    let b = BinaryColoring::new(bits).unwrap();
    let mut cm = coloring_chain_map(&s, &b).unwrap();
    let reports = cm.map.verify_all(Execution::default()).unwrap();
    assert!(reports.iter().any(|r| !r.passed));
}

#[test]
fn all_zero_coloring_map_collapses_to_z() {
    for n in 1..=3 {
        let s = chromatic_subdivide(n, 1);
        let cm = coloring_chain_map(&s, &BinaryColoring::constant(s.vertices().len(), 0)).unwrap();
        assert_eq!(cm.boundary_winding, Some(BigInt::from(1)));
        // away from collapsed simplexes the image of a face is the all-zero simplex
        let edge = Simplex::new(vec![Vertex::unit(0), Vertex::unit(1)]).unwrap();
        let expected = Chain::simplex(Simplex::new(vec![Vertex::bit(0, 0), Vertex::bit(1, 0)]).unwrap());
        assert_eq!(cm.map.image(&edge).unwrap(), &expected);
    }
}

#[test]
fn diophantine_feasibility_tracks_gcd() {
    for n in 1..=20usize {
        let g = binomial_gcd(n);
        match solve_diophantine(n) {
            Some(k) => {
                assert_eq!(g, BigInt::from(1));
                let total: BigInt =
                    BigInt::from(1) + k.iter().enumerate().map(|(i, k)| k * binom(n as u64 + 1, i as u64 + 1)).sum::<BigInt>();
                assert_eq!(total, BigInt::from(0));
            }
            None => assert!(g > BigInt::from(1)),
        }
    }
}

#[test]
fn reduced_system_rows_come_from_the_boundary() {
    // each commutation row has coefficients ±1 on c_{q,k}, c_{q,k+1} and c_{q−1,k}
    for n in 1..=4 {
        let sys = ReducedSystem::build(n, false).unwrap();
        for row in sys.rows() {
            let support: Vec<usize> = (0..row.coeffs.len()).filter(|&i| row.coeffs[i] != BigInt::from(0)).collect();
            assert!(support.len() <= 3, "{row:?}");
            assert!(row.coeffs.iter().all(|c| c.magnitude() <= &1u32.into()));
        }
        let commutation = sys.rows().iter().filter(|r| matches!(r.origin, equichain_core::solvability::RowOrigin::Commutation { .. })).count();
        assert_eq!(commutation, (1..=n).map(|q| q + 1).sum::<usize>());
    }
}
