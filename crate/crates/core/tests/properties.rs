//! Property tests for the invariants of the thresholding operators.

use hth_core::domains::interval::gauss_legendre_rule;
use hth_core::metrics::{theorem_checks, SchemeCoefficients};
use hth_core::noise::{sample_noise, NoiseKind, NoiseSpec};
use hth_core::{
    apply_threshold, brute_force_l0, filter_weight, hard_threshold, hyper_coefficients,
    l0_objective, soft_threshold, Basis, BasisMatrix, CoefficientVector, Discretization, Family,
    Scheme,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// A random `A` with `AᵀWA = I`: orthonormalize `W^{1/2} M` and undo the
/// weighting.
fn orthonormal_instance(n: usize, d: usize, raw: &[f64], weights: &[f64]) -> BasisMatrix {
    let m = DMatrix::from_fn(n, d, |j, l| raw[j * d + l] * weights[j].sqrt());
    let q = m.qr().q();
    let rows: Vec<f64> = (0..n)
        .flat_map(|j| {
            let s = weights[j].sqrt();
            (0..d).map(move |l| (j, l, s)).collect::<Vec<_>>()
        })
        .map(|(j, l, s)| q[(j, l)] / s)
        .collect();
    BasisMatrix::from_rows(n, &rows, vec![0; d], 0).unwrap()
}

fn near_tie(alpha: &[f64], lambda: f64) -> bool {
    alpha.iter().any(|a| (a.abs() - lambda).abs() < 1e-9)
}

proptest! {
    #[test]
    fn hard_threshold_is_idempotent(a in -10.0..10.0f64, k in 0.0..5.0f64) {
        let once = hard_threshold(a, k);
        prop_assert_eq!(hard_threshold(once, k), once);
        prop_assert!(once == 0.0 || once == a);
        prop_assert_eq!(hard_threshold(k, k), 0.0);
        prop_assert_eq!(hard_threshold(-k, k), 0.0);
    }

    #[test]
    fn soft_threshold_shrinks(a in -10.0..10.0f64, k in 0.0..5.0f64) {
        let s = soft_threshold(a, k);
        prop_assert!((s.abs() - (a.abs() - k).max(0.0)).abs() < 1e-15);
        prop_assert!(s == 0.0 || s.signum() == a.signum());
        prop_assert!(s.abs() <= hard_threshold(a, k).abs());
    }

    #[test]
    fn filter_is_a_continuous_weight(x in 0.0..3.0f64) {
        let h = filter_weight(x);
        prop_assert!((0.0..=1.0).contains(&h));
        let eps = 1e-9;
        prop_assert!((filter_weight(x + eps) - h).abs() < 1e-7);
    }

    #[test]
    fn brute_force_matches_hard_threshold(
        n in 12usize..24,
        d in 1usize..=12,
        seed in any::<u64>(),
        lambda_frac in 0.0..1.2f64,
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        let f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = orthonormal_instance(n, d, &raw, &weights);
        let alpha = hyper_coefficients(&a, &weights, &f).unwrap();
        let lambda = lambda_frac * alpha.max_abs();
        prop_assume!(!near_tie(alpha.entries(), lambda));

        let oracle = brute_force_l0(&a, &weights, &f, lambda).unwrap();
        let hard = apply_threshold(&alpha, &Scheme::Hard { lambda }, &vec![0; d]).unwrap();
        prop_assert_eq!(&oracle[..], hard.entries());

        let best = l0_objective(&oracle, &a, &weights, &f, lambda).unwrap();
        prop_assert!(best <= l0_objective(alpha.entries(), &a, &weights, &f, lambda).unwrap() + 1e-12);
        prop_assert!(best <= l0_objective(&vec![0.0; d], &a, &weights, &f, lambda).unwrap() + 1e-12);
    }

    #[test]
    fn structural_checks_hold_on_random_data(
        values in prop::collection::vec(-2.0..2.0f64, 30),
        lambda_frac in 0.0..1.5f64,
    ) {
        let system = Discretization::from_family(
            gauss_legendre_rule(30).unwrap(),
            &Basis::new(Family::Legendre, 20).unwrap(),
        ).unwrap();
        let alpha = system.coefficients(&values).unwrap();
        let lambda = lambda_frac * alpha.max_abs();
        let report = theorem_checks(&system, &values, lambda).unwrap();
        prop_assert!(report.all_passed(), "{:?}", report.checks);
    }

    #[test]
    fn norm_ordering(entries in prop::collection::vec(-1.0..1.0f64, 1..40), frac in 0.0..1.0f64) {
        let alpha = CoefficientVector::plain(entries.clone());
        let lambda = frac * alpha.max_abs();
        let degrees = vec![0; entries.len()];
        let [p, _, l, h] = SchemeCoefficients::compute(&alpha, &degrees, 1, lambda).unwrap().norms();
        prop_assert!(l <= h && h <= p);
        let [p0, _, l0, h0] = SchemeCoefficients::compute(&alpha, &degrees, 1, 0.0).unwrap().norms();
        prop_assert_eq!(p0, h0);
        prop_assert_eq!(p0, l0);
    }

    #[test]
    fn noise_is_deterministic(seed in any::<u64>(), n in 1usize..200, sigma in 0.01..1.0f64) {
        let spec = NoiseSpec::new(NoiseKind::Mixed { sigma, amplitude: sigma }, seed).unwrap();
        prop_assert_eq!(sample_noise(&spec, n).unwrap(), sample_noise(&spec, n).unwrap());
    }
}
