//! Parameter-constancy tests based on recursive residuals (CUSUM and
//! CUSUM of squares) with 99% boundaries.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::econometrics::ols::Regressor;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Qr};
use crate::special::ln_gamma;

/// Brown-Durbin-Evans line parameter for a 99% CUSUM band.
pub const CUSUM_A_99: f64 = 1.143;
/// Two-sided level of the CUSUMSQ band.
pub const CUSUMSQ_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityTestResult {
    /// Year (or row offset) of the first recursive residual.
    pub start_year: i32,
    pub recursive_residuals: Vec<f64>,
    pub cusum_path: Vec<f64>,
    pub cusum_bounds: (Vec<f64>, Vec<f64>),
    pub cusumsq_path: Vec<f64>,
    pub cusumsq_bounds: (Vec<f64>, Vec<f64>),
    /// Half-width of the CUSUMSQ band.
    pub c0: f64,
    pub cusum_ok: bool,
    pub cusumsq_ok: bool,
}

impl StabilityTestResult {
    pub fn is_stable(&self) -> bool {
        self.cusum_ok && self.cusumsq_ok
    }
}

/// Standardized one-step-ahead prediction errors for rows `k..n`.
pub fn recursive_residuals(y: &[f64], x: &Matrix) -> Result<Vec<f64>> {
    let (n, k) = (x.rows(), x.cols());
    if n != y.len() {
        return Err(Error::LengthMismatch {
            left: n,
            right: y.len(),
        });
    }
    if n < k + 3 {
        return Err(Error::TooFewObservations { nobs: n, nparams: k });
    }
    let mut w = Vec::with_capacity(n - k);
    for r in k..n {
        let qr = Qr::new(&x.head(r))?;
        let beta = qr.solve(&y[..r]);
        let xr = x.row(r);
        let pred: f64 = xr.iter().zip(&beta).map(|(a, b)| a * b).sum();
        let scale = (1.0 + qr.quadratic_form_inv(&xr)).sqrt();
        w.push((y[r] - pred) / scale);
    }
    Ok(w)
}

/// CUSUM and CUSUMSQ tests for `y` on the given regressors.
pub fn cusum(y: &[f64], regressors: &[Regressor<'_>], intercept: bool, start_year: i32) -> Result<StabilityTestResult> {
    let n = y.len();
    let ones = vec![1.0; n];
    let mut cols: Vec<&[f64]> = Vec::new();
    if intercept {
        cols.push(&ones);
    }
    for r in regressors {
        if r.values.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: r.values.len(),
            });
        }
        cols.push(r.values);
    }
    let x = Matrix::from_columns(&cols)?;
    let k = x.cols();
    let w = recursive_residuals(y, &x)?;
    let m = w.len();
    let mf = m as f64;

    let c0 = cusumsq_critical_value(m, CUSUMSQ_ALPHA);
    let cusum_hi: Vec<f64> = (1..=m)
        .map(|j| CUSUM_A_99 * (mf.sqrt() + 2.0 * j as f64 / mf.sqrt()))
        .collect();
    let cusum_lo: Vec<f64> = cusum_hi.iter().map(|b| -b).collect();
    let sq_hi: Vec<f64> = (1..=m).map(|j| j as f64 / mf + c0).collect();
    let sq_lo: Vec<f64> = (1..=m).map(|j| j as f64 / mf - c0).collect();

    let ss_w: f64 = w.iter().map(|v| v * v).sum();
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let ss_y: f64 = y.iter().map(|v| (v - mean_y).powi(2) + v * v).sum();
    let degenerate = ss_w <= 1e-20 * ss_y.max(f64::MIN_POSITIVE);

    let (cusum_path, cusumsq_path) = if degenerate {
        (vec![0.0; m], vec![0.0; m])
    } else {
        let mean_w = w.iter().sum::<f64>() / mf;
        let sd = (w.iter().map(|v| (v - mean_w).powi(2)).sum::<f64>() / (mf - 1.0)).sqrt();
        let cs: Vec<f64> = w
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(if sd > 0.0 { *acc / sd } else { 0.0 })
            })
            .collect();
        let sq: Vec<f64> = w
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v * v;
                Some(*acc / ss_w)
            })
            .collect();
        (cs, sq)
    };

    let cusum_ok = degenerate || cusum_path.iter().zip(&cusum_hi).all(|(p, b)| p.abs() <= *b);
    let cusumsq_ok = degenerate
        || cusumsq_path
            .iter()
            .zip(sq_lo.iter().zip(&sq_hi))
            .all(|(p, (lo, hi))| p >= lo && p <= hi);

    Ok(StabilityTestResult {
        start_year: start_year + k as i32,
        recursive_residuals: w,
        cusum_path,
        cusum_bounds: (cusum_lo, cusum_hi),
        cusumsq_path,
        cusumsq_bounds: (sq_lo, sq_hi),
        c0,
        cusum_ok,
        cusumsq_ok,
    })
}

/// Upper-tail probability of the one-sided Kolmogorov statistic
/// `D+_n` (Birnbaum-Tingey).
pub fn one_sided_ks_sf(n: usize, c: f64) -> f64 {
    if c <= 0.0 {
        return 1.0;
    }
    if c >= 1.0 {
        return 0.0;
    }
    let nf = n as f64;
    let jmax = (nf * (1.0 - c)).floor() as usize;
    let ln_n_fact = ln_gamma(nf + 1.0);
    let mut sum = 0.0;
    for j in 0..=jmax.min(n) {
        let jf = j as f64;
        let a = 1.0 - c - jf / nf;
        let b = c + jf / nf;
        let ln_binom = ln_n_fact - ln_gamma(jf + 1.0) - ln_gamma(nf - jf + 1.0);
        let term_a = if n == j {
            0.0
        } else if a <= 0.0 {
            continue;
        } else {
            (nf - jf) * a.ln()
        };
        sum += (ln_binom + term_a + (jf - 1.0) * b.ln()).exp();
    }
    (c * sum).clamp(0.0, 1.0)
}

fn ks_critical(n: usize, one_sided_alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if one_sided_ks_sf(n, mid) > one_sided_alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Half-width `c0` of the CUSUMSQ band for `m` recursive residuals at
/// two-sided level `alpha`.
///
/// The table argument is `m/2 - 1`; half-integer arguments are linearly
/// interpolated between neighbouring integers.
pub fn cusumsq_critical_value(m: usize, alpha: f64) -> f64 {
    let arg = (m as f64 / 2.0 - 1.0).max(1.0);
    let lo = arg.floor() as usize;
    let hi = arg.ceil() as usize;
    let c_lo = ks_critical(lo, alpha / 2.0);
    if hi == lo {
        return c_lo;
    }
    let c_hi = ks_critical(hi, alpha / 2.0);
    c_lo + (arg - lo as f64) * (c_hi - c_lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn ks_tail_small_cases() {
        // n = 1: D+ = 1 - U, so P(D+ > c) = 1 - c
        for c in [0.1, 0.5, 0.9] {
            assert_abs_diff_eq!(one_sided_ks_sf(1, c), 1.0 - c, epsilon = 1e-14);
        }
        // large n approaches exp(-2 n c^2)
        let n = 2000;
        let c = (0.5f64.ln() / (-2.0 * n as f64)).sqrt();
        assert_abs_diff_eq!(one_sided_ks_sf(n, c), 0.5, epsilon = 0.02);
    }

    #[test]
    fn critical_value_shrinks_with_sample() {
        let a = cusumsq_critical_value(20, 0.01);
        let b = cusumsq_critical_value(48, 0.01);
        let c = cusumsq_critical_value(49, 0.01);
        assert!(a > b && b > c && c > 0.0, "{a} {b} {c}");
        assert!(b < 0.4 && b > 0.2);
    }

    #[test]
    fn recursive_residuals_of_mean_model() {
        // intercept-only: w_r = (y_r - mean(y_0..r)) / sqrt(1 + 1/r)
        let y = [1.0, 3.0, 2.0, 6.0, 4.0];
        let x = Matrix::from_columns(&[&[1.0; 5]]).unwrap();
        let w = recursive_residuals(&y, &x).unwrap();
        let want = [
            (3.0 - 1.0) / (2.0f64).sqrt(),
            (2.0 - 2.0) / (1.0 + 0.5f64).sqrt(),
            (6.0 - 2.0) / (1.0 + 1.0 / 3.0f64).sqrt(),
            (4.0 - 3.0) / (1.0 + 0.25f64).sqrt(),
        ];
        for (g, e) in w.iter().zip(want) {
            assert_abs_diff_eq!(*g, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_fit_has_flat_paths() {
        let x: Vec<f64> = (0..30).map(|t| (t as f64 * 0.3).sin()).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 0.5 * v).collect();
        let r = cusum(&y, &[Regressor::new("x", &x)], true, 1960).unwrap();
        assert!(r.cusum_path.iter().all(|&v| v == 0.0));
        assert!(r.cusumsq_path.iter().all(|&v| v == 0.0));
        assert!(r.cusum_ok && r.cusumsq_ok);
        assert_eq!(r.cusum_path.len(), 28);
        assert_eq!(r.start_year, 1962);
    }

    #[test]
    fn slope_break_is_flagged() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let noise = Normal::new(0.0, 0.2).unwrap();
        let x: Vec<f64> = (0..50).map(|t| t as f64 / 10.0).collect();
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(t, v)| {
                let slope = if t < 25 { 0.5 } else { 5.0 };
                1.0 + slope * v + noise.sample(&mut rng)
            })
            .collect();
        let r = cusum(&y, &[Regressor::new("x", &x)], true, 0).unwrap();
        assert!(!r.is_stable());
    }

    #[test]
    fn too_few_rows() {
        let y = [1.0, 2.0, 3.0, 4.0];
        let x = [0.0, 1.0, 0.5, 2.0];
        assert!(matches!(
            cusum(&y, &[Regressor::new("x", &x)], true, 0),
            Err(Error::TooFewObservations { .. })
        ));
    }
}
