use dilution_core::geometry::CheckType;
use dilution_core::oracle::{
    cavity_discrepancy_closed, cavity_discrepancy_exact, diagonal_local_expansion,
    error_correcting_radius_capped, min_weight_correction, theorem_lower_bound, verify_prop1,
};
use dilution_core::{
    sparsify, xz_coupling, PatternFamily, Prior, SparsificationPattern, SurfaceCode, TieRule,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn cavity_closed_form_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let w: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>() + 1e-3);
        let t: f64 = w.iter().sum();
        let prior = Prior::new(w[0] / t, w[1] / t, w[2] / t, w[3] / t).unwrap();
        for sigma in [false, true] {
            let a = cavity_discrepancy_exact(&prior, sigma).unwrap();
            let b = cavity_discrepancy_closed(&prior, sigma).unwrap();
            assert!(
                (a - b).abs() <= 1e-12,
                "{prior:?} sigma={sigma}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn product_priors_have_no_discrepancy() {
    for px in [0.0, 0.01, 0.1, 0.3, 0.5] {
        for pz in [0.01, 0.2, 0.5] {
            let prior = Prior::product(px, pz).unwrap();
            for sigma in [false, true] {
                assert!(xz_coupling(&prior).abs() < 1e-15);
                assert!(cavity_discrepancy_closed(&prior, sigma).unwrap() < 1e-28);
                assert!(cavity_discrepancy_exact(&prior, sigma).unwrap() < 1e-15);
            }
        }
    }
    let exact_zero = Prior::new(0.25, 0.25, 0.25, 0.25).unwrap();
    assert_eq!(xz_coupling(&exact_zero), 0.0);
    assert_eq!(cavity_discrepancy_closed(&exact_zero, true).unwrap(), 0.0);
}

#[test]
fn reflection_isomorphism_up_to_d17() {
    for d in 2..=17 {
        let code = SurfaceCode::new(d).unwrap();
        for family in [PatternFamily::DV, PatternFamily::DH] {
            for s in [1, 3, 7].into_iter().filter(|&s| s < d) {
                let report = verify_prop1(&code, SparsificationPattern::new(family, s)).unwrap();
                assert!(report.valid, "d={d} {family} s={s}");
            }
        }
    }
    let code = SurfaceCode::new(5).unwrap();
    assert!(verify_prop1(&code, SparsificationPattern::new(PatternFamily::CH, 1)).is_err());
}

#[test]
fn diagonal_expansion_ratio() {
    let code = SurfaceCode::new(21).unwrap();
    for s in 1..=3 {
        let (_, vertical) =
            diagonal_local_expansion(&code, SparsificationPattern::new(PatternFamily::DH, s))
                .unwrap();
        assert_eq!(vertical, 2 * s.div_ceil(2), "s={s}");
    }
}

#[test]
fn radius_bounds_hold_for_small_codes_with_favorable_ties() {
    for d in [3usize, 5] {
        let code = SurfaceCode::new(d).unwrap();
        for family in [PatternFamily::DH, PatternFamily::CH] {
            for s in (1..=3).filter(|&s| s < d) {
                let pattern = SparsificationPattern::new(family, s);
                let Some(bound) = theorem_lower_bound(d, pattern) else {
                    continue;
                };
                let report = error_correcting_radius_capped(
                    &code,
                    pattern,
                    TieRule::Favorable,
                    bound + 1,
                    4,
                )
                .unwrap();
                assert!(
                    report.computed_radius >= bound,
                    "d={d} {family} s={s}: {} < {bound}",
                    report.computed_radius
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correction_weight_ignores_defect_order(d in 3usize..10, s in 0usize..4, fam in 0usize..4, seed in any::<u64>()) {
        prop_assume!(s < d);
        let code = SurfaceCode::new(d).unwrap();
        let graph = sparsify(&code, SparsificationPattern::new(PatternFamily::ALL[fam], s)).unwrap();
        let lattice = graph.component_lattice(CheckType::Z);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // defects from a random error on retained qubits, so the instance is solvable
        let mut bits = vec![false; code.n];
        for q in 0..code.n {
            if graph.active[q] && rng.random::<f64>() < 0.08 {
                bits[q] = true;
            }
        }
        let mut defects: Vec<usize> = code.z_checks.iter().enumerate()
            .filter(|(_, sup)| sup.iter().fold(false, |a, &q| a ^ bits[q]))
            .map(|(a, _)| a).collect();
        prop_assume!(defects.len() <= 10);
        let w0 = min_weight_correction(&lattice, &defects).unwrap().len();
        prop_assert!(w0 <= bits.iter().filter(|&&b| b).count());
        defects.shuffle(&mut rng);
        prop_assert_eq!(min_weight_correction(&lattice, &defects).unwrap().len(), w0);
    }
}
