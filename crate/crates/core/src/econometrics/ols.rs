use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Qr};
use crate::series::{ensure_aligned, AnnualSeries};
use crate::special::{f_sf, t_two_sided};

/// Ordinary least-squares fit with classical (homoskedastic) inference.
#[derive(Debug, Clone)]
pub struct RegressionFit {
    /// Regressor names, `"const"` first when an intercept is included.
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    /// Overall F against the intercept-only model; `None` without a slope.
    pub f_stat: Option<f64>,
    pub f_p_value: Option<f64>,
    pub ssr: f64,
    pub residuals: AnnualSeries,
    pub fitted: Vec<f64>,
    /// Unscaled covariance `(X'X)^{-1}`.
    pub xtx_inv: Matrix,
    pub nobs: usize,
    pub nparams: usize,
    pub intercept: bool,
}

impl RegressionFit {
    /// Residual variance `SSR / (n - k)`.
    pub fn sigma2(&self) -> f64 {
        self.ssr / (self.nobs - self.nparams) as f64
    }

    pub fn df_resid(&self) -> usize {
        self.nobs - self.nparams
    }

    /// `n ln(SSR/n) + k ln(n)`.
    pub fn bic(&self) -> f64 {
        let n = self.nobs as f64;
        n * (self.ssr.max(f64::MIN_POSITIVE) / n).ln() + self.nparams as f64 * n.ln()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Wald F statistic for `beta_i = 0` jointly over `indices`.
    pub fn wald_f(&self, indices: &[usize]) -> Result<f64> {
        let q = indices.len();
        if q == 0 || indices.iter().any(|&i| i >= self.nparams) {
            return Err(Error::InvalidArgument(format!(
                "restriction indices {indices:?} out of range for {} parameters",
                self.nparams
            )));
        }
        let mut sub = Matrix::zeros(q, q);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                sub.set(a, b, self.xtx_inv.get(i, j) * self.sigma2());
            }
        }
        let inv = crate::linalg::invert(&sub)?;
        let beta: Vec<f64> = indices.iter().map(|&i| self.coefficients[i]).collect();
        let mut quad = 0.0;
        for a in 0..q {
            for b in 0..q {
                quad += beta[a] * inv.get(a, b) * beta[b];
            }
        }
        Ok(quad / q as f64)
    }
}

/// A named regressor column.
#[derive(Debug, Clone, Copy)]
pub struct Regressor<'a> {
    pub name: &'a str,
    pub values: &'a [f64],
}

impl<'a> Regressor<'a> {
    pub fn new(name: &'a str, values: &'a [f64]) -> Self {
        Self { name, values }
    }
}

/// OLS of `y` on aligned regressor series, optionally with an intercept.
pub fn ols(y: &AnnualSeries, regressors: &[&AnnualSeries], intercept: bool) -> Result<RegressionFit> {
    for x in regressors {
        ensure_aligned(y, x)?;
    }
    let cols: Vec<Regressor<'_>> = regressors
        .iter()
        .map(|x| Regressor::new(x.label(), x.values()))
        .collect();
    fit(y.label(), y.start_year(), y.values(), &cols, intercept)
}

/// OLS on raw columns; residuals are dated from `start_year`.
pub fn fit(
    label: &str,
    start_year: i32,
    y: &[f64],
    regressors: &[Regressor<'_>],
    intercept: bool,
) -> Result<RegressionFit> {
    let n = y.len();
    let k = regressors.len() + usize::from(intercept);
    if k == 0 {
        return Err(Error::InvalidArgument("regression has no parameters".into()));
    }
    if n <= k {
        return Err(Error::TooFewObservations { nobs: n, nparams: k });
    }
    if let Some(r) = regressors.iter().find(|r| r.values.len() != n) {
        return Err(Error::LengthMismatch {
            left: n,
            right: r.values.len(),
        });
    }
    let ones = vec![1.0; n];
    let mut names = Vec::with_capacity(k);
    let mut cols: Vec<&[f64]> = Vec::with_capacity(k);
    if intercept {
        names.push(String::from("const"));
        cols.push(&ones);
    }
    for r in regressors {
        names.push(String::from(r.name));
        cols.push(r.values);
    }
    let x = Matrix::from_columns(&cols)?;
    let qr = Qr::new(&x)?;
    let coefficients = qr.solve(y);
    let fitted = x.mul_vec(&coefficients);
    let resid: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let ssr: f64 = resid.iter().map(|e| e * e).sum();

    let df = (n - k) as f64;
    let sigma2 = ssr / df;
    let xtx_inv = qr.gram_inverse();
    let std_errors: Vec<f64> = (0..k).map(|i| (sigma2 * xtx_inv.get(i, i)).max(0.0).sqrt()).collect();
    let t_stats: Vec<f64> = coefficients.iter().zip(&std_errors).map(|(b, se)| b / se).collect();
    let p_values: Vec<f64> = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(&b, &se)| {
            if se > 0.0 {
                t_two_sided(b / se, df)
            } else if b == 0.0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();

    let tss = if intercept {
        let m = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - m) * (v - m)).sum::<f64>()
    } else {
        y.iter().map(|v| v * v).sum::<f64>()
    };
    let slopes = k - usize::from(intercept);
    let r_squared = if tss > 0.0 && slopes > 0 {
        (1.0 - ssr / tss).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let dof_total = if intercept { n - 1 } else { n } as f64;
    let adj_r_squared = (1.0 - (1.0 - r_squared) * dof_total / df).min(r_squared);
    let (f_stat, f_p_value) = if slopes > 0 {
        let explained = (tss - ssr).max(0.0);
        let f = if ssr > 0.0 {
            (explained / slopes as f64) / sigma2
        } else {
            f64::INFINITY
        };
        (Some(f), Some(f_sf(f, slopes as f64, df)))
    } else {
        (None, None)
    };

    Ok(RegressionFit {
        names,
        coefficients,
        std_errors,
        t_stats,
        p_values,
        r_squared,
        adj_r_squared,
        f_stat,
        f_p_value,
        ssr,
        residuals: AnnualSeries::new(format!("{label} residuals"), start_year, resid)?,
        fitted,
        xtx_inv,
        nobs: n,
        nparams: k,
        intercept,
    })
}

/// Intercept and growth rate from `ln(s_t) = ln(s_0) + g t + e`, `t = 0, 1, ...`.
#[derive(Debug, Clone)]
pub struct LogTrend {
    pub level0: f64,
    pub growth: f64,
    pub fit: RegressionFit,
}

pub fn log_trend(s: &AnnualSeries) -> Result<LogTrend> {
    if s.len() < 3 {
        return Err(Error::SeriesTooShort {
            required: 3,
            available: s.len(),
        });
    }
    let logs = crate::series::log_transform(s)?;
    let t: Vec<f64> = (0..s.len()).map(|i| i as f64).collect();
    let fit = fit(
        s.label(),
        s.start_year(),
        logs.values(),
        &[Regressor::new("trend", &t)],
        true,
    )?;
    Ok(LogTrend {
        level0: fit.coefficients[0],
        growth: fit.coefficients[1],
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn series(values: Vec<f64>) -> AnnualSeries {
        AnnualSeries::new("y", 1960, values).unwrap()
    }

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (1..=10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 + 2.0 * v).collect();
        let fit = ols(&series(y), &[&series(x)], true).unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.coefficients[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
        assert!(fit.p_values.iter().all(|p| (0.0..=1.0).contains(p)));
    }

    #[test]
    fn intercept_only() {
        let fit = ols(&series(vec![4.5; 7]), &[], true).unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 4.5, epsilon = 1e-14);
        assert!(fit.residuals.values().iter().all(|e| e.abs() < 1e-14));
        assert_eq!(fit.f_stat, None);
        assert_eq!(fit.r_squared, 0.0);
    }

    #[test]
    fn five_point_hand_solution() {
        // normal equations: [5 15; 15 55] b = [18 64] -> b = (0.6, 1.0)
        let fit = ols(
            &series(vec![2.0, 2.0, 4.0, 4.0, 6.0]),
            &[&series(vec![1.0, 2.0, 3.0, 4.0, 5.0])],
            true,
        )
        .unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.coefficients[1], 1.0, epsilon = 1e-12);
        // residuals (0.4, -0.6, 0.4, -0.6, 0.4): SSR = 1.2, TSS = 11.2, Sxx = 10
        assert_abs_diff_eq!(fit.ssr, 1.2, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.std_errors[1], (1.2 / 3.0 / 10.0).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(fit.r_squared, 1.0 - 1.2 / 11.2, epsilon = 1e-12);
        assert!(fit.residuals.values().iter().sum::<f64>().abs() < 1e-12);
        assert!(fit.adj_r_squared <= fit.r_squared);
    }

    #[test]
    fn errors() {
        let y = series(vec![1.0, 2.0]);
        let x = series(vec![1.0, 3.0]);
        assert!(matches!(ols(&y, &[&x], true), Err(Error::TooFewObservations { .. })));
        let y = series(vec![1.0, 2.0, 3.0, 5.0]);
        let x = series(vec![1.0, 1.0, 1.0, 1.0]);
        assert_eq!(ols(&y, &[&x], true).unwrap_err(), Error::RankDeficient);
        let short = AnnualSeries::new("x", 1961, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(matches!(ols(&y, &[&short], true), Err(Error::Misaligned(_))));
    }

    #[test]
    fn exponential_trend() {
        let s = series((0..40).map(|t| 5.0 * (0.02 * t as f64).exp()).collect());
        let lt = log_trend(&s).unwrap();
        assert_abs_diff_eq!(lt.growth, 0.02, epsilon = 1e-12);
        assert_abs_diff_eq!(lt.level0, 5f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn wald_matches_t_squared_for_one_restriction() {
        let x: Vec<f64> = (0..20).map(|i| (i as f64 * 0.7).sin()).collect();
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, v)| 1.0 + 0.3 * v + 0.1 * ((i * 7 % 5) as f64 - 2.0))
            .collect();
        let fit = ols(&series(y), &[&series(x)], true).unwrap();
        assert_abs_diff_eq!(fit.wald_f(&[1]).unwrap(), fit.t_stats[1].powi(2), epsilon = 1e-9);
        assert_abs_diff_eq!(fit.f_stat.unwrap(), fit.t_stats[1].powi(2), epsilon = 1e-9);
    }
}
