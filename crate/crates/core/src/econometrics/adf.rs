//! Augmented Dickey-Fuller unit-root test.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::econometrics::ols::{fit, RegressionFit, Regressor};
use crate::error::{Error, Result};
use crate::special::normal_cdf;

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdfSpec {
    #[default]
    Constant,
    ConstantTrend,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdfResult {
    pub statistic: f64,
    pub p_value: f64,
    pub lags_used: usize,
    pub nobs: usize,
    pub spec: AdfSpec,
}

pub const MIN_ADF_LENGTH: usize = 15;

/// Response-surface coefficients for the single-series case.
struct Surface {
    tau_max: f64,
    tau_min: f64,
    tau_star: f64,
    small_p: [f64; 3],
    large_p: [f64; 4],
}

const SURFACE_C: Surface = Surface {
    tau_max: 2.74,
    tau_min: -18.83,
    tau_star: -1.61,
    small_p: [2.1659, 1.4412, 3.8269e-2],
    large_p: [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2],
};

const SURFACE_CT: Surface = Surface {
    tau_max: 0.7,
    tau_min: -16.18,
    tau_star: -2.89,
    small_p: [3.2512, 1.6047, 4.9588e-2],
    large_p: [2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2],
};

fn poly(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Approximate p-value of an ADF t-ratio from the response surface.
pub fn adf_p_value(statistic: f64, spec: AdfSpec) -> f64 {
    let s = match spec {
        AdfSpec::Constant => &SURFACE_C,
        AdfSpec::ConstantTrend => &SURFACE_CT,
    };
    if statistic.is_nan() {
        return 1.0;
    }
    if statistic > s.tau_max {
        return 1.0;
    }
    if statistic < s.tau_min {
        return 0.0;
    }
    let z = if statistic <= s.tau_star {
        poly(&s.small_p, statistic)
    } else {
        poly(&s.large_p, statistic)
    };
    normal_cdf(z).clamp(0.0, 1.0)
}

/// Builds `ds_t = c (+ d t) + phi s_{t-1} + sum_i theta_i ds_{t-i}` for
/// `t in first..n` (index into `s`) and fits it.
fn adf_regression(s: &[f64], lags: usize, first: usize, spec: AdfSpec) -> Result<RegressionFit> {
    let n = s.len();
    let rows = first..n;
    let y: Vec<f64> = rows.clone().map(|t| s[t] - s[t - 1]).collect();
    let level: Vec<f64> = rows.clone().map(|t| s[t - 1]).collect();
    let trend: Vec<f64> = rows.clone().map(|t| t as f64).collect();
    let lagged: Vec<Vec<f64>> = (1..=lags)
        .map(|i| rows.clone().map(|t| s[t - i] - s[t - i - 1]).collect())
        .collect();
    let names: Vec<String> = (1..=lags).map(|i| format!("ds_lag{i}")).collect();
    let mut regs = Vec::with_capacity(lags + 2);
    regs.push(Regressor::new("level_lag1", &level));
    if spec == AdfSpec::ConstantTrend {
        regs.push(Regressor::new("trend", &trend));
    }
    for (v, name) in lagged.iter().zip(&names) {
        regs.push(Regressor::new(name, v));
    }
    fit("adf", 0, &y, &regs, true)
}

/// ADF test with the lag order chosen by BIC over `0..=max_lags`.
///
/// Candidates are compared on the common sample that the longest lag
/// allows; ties go to the smaller lag. The chosen order is then refit on
/// its own full sample.
pub fn adf_test(s: &[f64], spec: AdfSpec, max_lags: usize) -> Result<AdfResult> {
    let n = s.len();
    if n < MIN_ADF_LENGTH {
        return Err(Error::SeriesTooShort {
            required: MIN_ADF_LENGTH,
            available: n,
        });
    }
    let base_params = 2 + usize::from(spec == AdfSpec::ConstantTrend);
    // keep at least 5 residual degrees of freedom for the largest model
    let cap = n.saturating_sub(base_params + 7) / 2;
    let max_lags = max_lags.min(cap);

    let mut best: Option<(usize, f64)> = None;
    for p in 0..=max_lags {
        let bic = adf_regression(s, p, max_lags + 1, spec)?.bic();
        if best.is_none_or(|(_, b)| bic < b) {
            best = Some((p, bic));
        }
    }
    let lags = best.map_or(0, |(p, _)| p);
    let fit = adf_regression(s, lags, lags + 1, spec)?;
    let statistic = fit.t_stats[1];
    Ok(AdfResult {
        statistic,
        p_value: adf_p_value(statistic, spec),
        lags_used: lags,
        nobs: fit.nobs,
        spec,
    })
}
