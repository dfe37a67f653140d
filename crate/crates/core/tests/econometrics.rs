use goodwin_core::econometrics::{arch_lm, bounds_test, fit_uecm, jarque_bera, ljung_box};
use goodwin_core::series::AnnualSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn noise(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

#[test]
fn residual_diagnostics_ignore_scale() {
    for seed in 0..10 {
        let e = noise(seed, 80);
        let big: Vec<f64> = e.iter().map(|x| 37.5 * x).collect();
        for m in 1..=5 {
            let (a, b) = (ljung_box(&e, m).unwrap(), ljung_box(&big, m).unwrap());
            assert!((a.statistic - b.statistic).abs() < 1e-9 * a.statistic.max(1.0));
        }
        let (a, b) = (jarque_bera(&e).unwrap(), jarque_bera(&big).unwrap());
        assert!((a.statistic - b.statistic).abs() < 1e-9 * a.statistic.max(1.0));
        let (a, b) = (arch_lm(&e, 1).unwrap(), arch_lm(&big, 1).unwrap());
        assert!((a.statistic - b.statistic).abs() < 1e-9 * a.statistic.max(1.0));
    }
}

#[test]
fn bounds_f_equals_the_wald_form() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lambda = vec![0.94];
        for _ in 1..51 {
            let prev = *lambda.last().unwrap();
            lambda.push(0.94 + 0.5 * (prev - 0.94) + 0.02 * rng.sample::<f64, _>(StandardNormal));
        }
        let z: Vec<f64> = lambda
            .iter()
            .map(|l| -0.3 + 0.35 * l + 0.01 * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let z = AnnualSeries::new("z", 1960, z).unwrap();
        let lambda = AnnualSeries::new("lambda", 1960, lambda).unwrap();
        for p in 0..=4 {
            let b = bounds_test(&fit_uecm(&z, &lambda, p).unwrap()).unwrap();
            assert!((b.f_statistic - b.wald_f).abs() < 1e-8 * b.f_statistic);
        }
    }
}
