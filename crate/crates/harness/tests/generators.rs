use contraharmonic::inequalities::SINGULAR_Z_TOL;
use contraharmonic::spectral::min_singular_value;
use contraharmonic::{op_norm, HermitianPD};
use contraharmonic_harness::generate::{gen_invertible, gen_pd, trial_rng};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pd_respects_condition_cap(dim in 1usize..=8, log_cap in 0.0..14.0f64, seed in any::<u64>()) {
        let cap = 10f64.powf(log_cap);
        let a = gen_pd(dim, cap, &mut trial_rng(seed, dim, 0, 0));
        // Revalidates from scratch.
        let again = HermitianPD::new(a.matrix().clone()).unwrap();
        prop_assert!(again.condition_number() <= cap * (1.0 + 1e-12), "cond {} cap {cap}", again.condition_number());
        let spectrum = again.spectral();
        prop_assert!(spectrum.min_eigenvalue() >= cap.powf(-0.5) * (1.0 - 1e-12));
        prop_assert!(spectrum.max_eigenvalue() <= cap.sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn congruence_factors_are_invertible(dim in 1usize..=8, seed in any::<u64>()) {
        let z = gen_invertible(dim, &mut trial_rng(seed, dim, 5, 0));
        prop_assert!(min_singular_value(&z) > SINGULAR_Z_TOL * op_norm(&z));
    }
}
