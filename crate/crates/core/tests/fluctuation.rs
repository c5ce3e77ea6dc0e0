use genriemann::fluctuation::{
    fourier_b, interval_mean, l2_fluctuation, parseval_check, sup_deviation_bound,
};
use genriemann::numerics::{integrate, zeta_minus_one, QuadSpec};
use genriemann::series::{riemann_eval, riemann_partial, sin_baseline, SeriesParams};
use genriemann::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(alpha: f64, beta: f64) -> SeriesParams {
    SeriesParams::new(alpha, beta).unwrap()
}

#[test]
fn mean_examples() {
    let r = interval_mean(&p(2.0, 10.0), 0.0, 2.0, 1e-12).unwrap();
    assert!(r.mean_s.abs() < 1e-16);
    assert!((r.bound - 7.833e-5).abs() < 1e-7, "{}", r.bound);
    assert!(r.mean_r.abs() <= r.bound);
    assert_eq!(r.interval, (0.0, 2.0));

    for &(a, b, tol) in &[(2.0, 2.0, 1e-12), (1.5, 0.7, 1e-9), (3.0, 5.0, 1e-12)] {
        let r = interval_mean(&p(a, b), -1.0, 1.0, tol).unwrap();
        assert!(r.mean_r.abs() < tol);
    }

    let drift: Vec<f64> = [2.0, 4.0, 10.0]
        .iter()
        .map(|&b| {
            let r = interval_mean(&p(2.0, b), 0.3, 1.1, 1e-12).unwrap();
            (r.mean_r - r.mean_s).abs()
        })
        .collect();
    assert!(drift[0] > drift[1] && drift[1] > drift[2], "{drift:?}");
    assert!(matches!(interval_mean(&p(2.0, 2.0), 1.0, 1.0, 1e-8), Err(Error::Argument(_))));
}

#[test]
fn mean_matches_quadrature_of_the_series() {
    let params = p(2.5, 1.5);
    let (lo, hi) = (0.2, 0.9);
    let r = interval_mean(&params, lo, hi, 1e-12).unwrap();
    let q = integrate(
        |x| riemann_partial(&params, x, 300),
        lo,
        hi,
        &QuadSpec::new(1e-9, 40).unwrap(),
    )
    .unwrap();
    // terms beyond 300 move the mean by less than 1e-8
    assert!((r.mean_r - q / (hi - lo)).abs() < 5e-8);
}

#[test]
fn drift_bound_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let alpha = rng.gen_range(1.5..=3.0);
        let beta = rng.gen_range(1.0..=12.0);
        let lo = rng.gen_range(-3.0..3.0);
        let hi = lo + rng.gen_range(0.05..4.0);
        let r = interval_mean(&p(alpha, beta), lo, hi, 1e-13).unwrap();
        assert!((r.mean_r - r.mean_s).abs() <= r.bound + 1e-10);
    }
}

#[test]
fn fluctuation_amplitude() {
    let quad = QuadSpec::new(1e-6, 40).unwrap();
    let z4 = zeta_minus_one(4.0).unwrap();
    for &beta in &[1.0, 2.0, 3.0, 5.0, 10.0] {
        let v = l2_fluctuation(&p(2.0, beta), &quad).unwrap();
        assert!((v - z4).abs() < 1e-4, "beta={beta}: {v}");
    }
    let v = l2_fluctuation(&p(3.0, 2.0), &quad).unwrap();
    assert!((v - 0.017_343_061_984_449_1).abs() < 1e-4);
    assert!(matches!(l2_fluctuation(&p(2.0, 1.5), &quad), Err(Error::Scope(_))));
}

#[test]
fn fluctuation_against_adaptive_quadrature() {
    let params = p(2.0, 2.0);
    let q = integrate(
        |x| {
            let d = riemann_partial(&params, x, 100) - sin_baseline(x);
            d * d
        },
        -1.0,
        1.0,
        &QuadSpec::new(1e-9, 40).unwrap(),
    )
    .unwrap();
    // the partial sum misses Σ_{n>100} n^{-4} ≈ 3.3e-7
    let v = l2_fluctuation(&params, &QuadSpec::new(1e-7, 40).unwrap()).unwrap();
    assert!((q - v).abs() < 2e-6, "{q} vs {v}");
}

#[test]
fn fourier_coefficients() {
    assert_eq!(fourier_b(4, &p(2.0, 2.0)).unwrap(), 0.25);
    assert_eq!(fourier_b(3, &p(2.0, 2.0)).unwrap(), 0.0);
    assert_eq!(fourier_b(1, &p(2.0, 2.0)).unwrap(), 0.0);
    assert!((fourier_b(8, &p(2.0, 3.0)).unwrap() - 0.25).abs() < 1e-16);
    let big = 999_983u64.pow(3);
    assert!(fourier_b(big, &p(2.0, 3.0)).unwrap() > 0.0);
    assert_eq!(fourier_b(big + 1, &p(2.0, 3.0)).unwrap(), 0.0);
    assert_eq!(fourier_b(big - 1, &p(2.0, 3.0)).unwrap(), 0.0);
    assert!(matches!(fourier_b(0, &p(2.0, 2.0)), Err(Error::Argument(_))));
    assert!(matches!(fourier_b(4, &p(2.0, 0.5)), Err(Error::Scope(_))));
}

#[test]
fn parseval_partial_sums() {
    let (s, z) = parseval_check(&p(2.0, 2.0), 1_000_000).unwrap();
    assert!((s - z).abs() < 1e-6);
    assert!(s <= z);
    let (s1, z1) = parseval_check(&p(2.0, 2.0), 1).unwrap();
    assert_eq!(s1, 0.0);
    assert_eq!(z1, z);
    let mut prev = 0.0;
    for m in [2, 4, 10, 100, 1000, 10_000] {
        let (s, _) = parseval_check(&p(2.0, 3.0), m).unwrap();
        assert!(s >= prev);
        prev = s;
    }
}

#[test]
fn sup_bound_values() {
    assert!((sup_deviation_bound(2.0).unwrap() - 0.644_934_066_848_226_4).abs() < 1e-12);
    assert!((sup_deviation_bound(10.0).unwrap() - 9.945_751_278_180_853e-4).abs() < 1e-15);
    assert!(sup_deviation_bound(40.0).unwrap() <= 1e-12);
    assert!(matches!(sup_deviation_bound(1.0), Err(Error::Domain(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pointwise_deviation_within_bound(alpha in 1.8f64..4.0, beta in 0.5f64..8.0, x in -3.0f64..3.0) {
        let tol = 1e-6;
        let params = p(alpha, beta);
        let d = (riemann_eval(&params, x, tol).unwrap() - sin_baseline(x)).abs();
        prop_assert!(d <= sup_deviation_bound(alpha).unwrap() + tol);
    }
}
