//! Randomized invariants of chains, the group action, winding numbers and
//! chain-map verification.

use equichain_core::chainmaps::{verify_chain_map, z_map};
use equichain_core::chains::{boundary, distinguished_cycle, is_cycle, oriented_sphere_cycle, AnnulusClasses, Chain};
use equichain_core::complexes::{build_annulus, build_output_complex, Complex};
use equichain_core::symmetry::{all_elements, GroupElement};
use equichain_core::{Execution, Simplex};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::OnceLock;

fn classes(n: usize) -> &'static AnnulusClasses {
    static CACHE: OnceLock<Vec<AnnulusClasses>> = OnceLock::new();
    &CACHE.get_or_init(|| (1..=3).map(|n| AnnulusClasses::new(n).unwrap()).collect())[n - 1]
}

fn random_chain(k: &Complex, d: isize, coeffs: &[i64]) -> Chain {
    let mut c = Chain::zero(d);
    for (s, &a) in k.simplices(d).iter().zip(coeffs) {
        c.add_term(s.clone(), BigInt::from(a));
    }
    c
}

fn element(n: usize, index: usize) -> GroupElement {
    let all = all_elements(n);
    all[index % all.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero(n in 1usize..=3, d in 1isize..=3, coeffs in prop::collection::vec(-4i64..=4, 0..60)) {
        let k = build_output_complex(n);
        prop_assume!(d <= n as isize);
        let c = random_chain(&k, d, &coeffs);
        prop_assert!(boundary(&boundary(&c)).is_zero());
    }

    #[test]
    fn action_is_a_homomorphism_commuting_with_boundary(
        n in 1usize..=3, gi in 0usize..24, hi in 0usize..24, coeffs in prop::collection::vec(-3i64..=3, 0..40)
    ) {
        let k = build_output_complex(n);
        let c = random_chain(&k, n as isize - 1, &coeffs);
        let (g, h) = (element(n, gi), element(n, hi));
        prop_assert_eq!(g.act_chain(&h.act_chain(&c)), g.compose(&h).act_chain(&c));
        prop_assert_eq!(g.act_chain(&boundary(&c)), boundary(&g.act_chain(&c)));
        prop_assert_eq!(g.inverse().act_chain(&g.act_chain(&c)), c);
    }

    /// Windings are additive and ignore boundaries.
    #[test]
    fn winding_is_a_homomorphism(
        n in 1usize..=3,
        a in -5i64..=5,
        s in prop::collection::vec(-3i64..=3, 4),
        fill in prop::collection::vec(-3i64..=3, 0..30),
    ) {
        let cl = classes(n);
        let mut c = distinguished_cycle(n).scale(&BigInt::from(a));
        let mut expected = a;
        for (i, &k) in s.iter().enumerate().take(n + 1) {
            c = &c + &oriented_sphere_cycle(i, n).unwrap().scale(&BigInt::from(k));
            expected += if i % 2 == 0 { k } else { -k };
        }
        let filler = random_chain(cl.annulus(), n as isize, &fill);
        let noisy = &c + &boundary(&filler);
        prop_assert!(is_cycle(&noisy));
        prop_assert_eq!(cl.winding(&noisy).unwrap(), BigInt::from(expected));
        let doubled = &noisy + &c;
        prop_assert_eq!(cl.winding(&doubled).unwrap(), BigInt::from(2 * expected));
    }

    /// Any single-coefficient change of the reference map breaks a check.
    #[test]
    fn z_map_mutations_are_detected(n in 1usize..=3, pick in 0usize..1000, target in 0usize..1000, delta in prop::sample::select(vec![-2i64, -1, 1, 2])) {
        let mut z = z_map(n).unwrap();
        let entries: Vec<Simplex> = z.entries().map(|(s, _)| s.clone()).collect();
        let s = entries[pick % entries.len()].clone();
        let annulus = build_annulus(n).unwrap();
        let same_dim = annulus.simplices(s.dim());
        let t = same_dim[target % same_dim.len()].clone();
        z.perturb(&s, t, BigInt::from(delta)).unwrap();
        let reports = z.verify_all(Execution::Sequential).unwrap();
        prop_assert!(reports.iter().any(|r| !r.passed));
    }

    #[test]
    fn sequential_and_parallel_reports_agree(n in 2usize..=3, pick in 0usize..100) {
        let mut z = z_map(n).unwrap();
        let entries: Vec<Simplex> = z.entries().map(|(s, _)| s.clone()).collect();
        let s = entries[pick % entries.len()].clone();
        let flipped = -z.image(&s).unwrap();
        z.insert(s, flipped).unwrap();
        let (src, tgt) = z.complexes().unwrap();
        let a = verify_chain_map(&z, &src, &tgt, Execution::Sequential).unwrap();
        let b = verify_chain_map(&z, &src, &tgt, Execution::Parallel).unwrap();
        prop_assert_eq!(a, b);
    }
}
