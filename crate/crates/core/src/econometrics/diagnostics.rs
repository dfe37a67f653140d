//! Residual diagnostics: serial correlation, normality and ARCH effects.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::econometrics::ols::{fit, Regressor};
use crate::error::{Error, Result};
use crate::special::chi2_sf;

/// A test statistic with its asymptotic p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestStat {
    pub statistic: f64,
    pub p_value: f64,
}

/// Ljung-Box Q over lags `1..=m`, referred to chi-square(m).
pub fn ljung_box(residuals: &[f64], m: usize) -> Result<TestStat> {
    let n = residuals.len();
    if m == 0 {
        return Err(Error::InvalidArgument("Ljung-Box needs at least one lag".into()));
    }
    if n <= m + 1 {
        return Err(Error::SeriesTooShort {
            required: m + 2,
            available: n,
        });
    }
    let mean = residuals.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = residuals.iter().map(|e| e - mean).collect();
    let c0: f64 = dev.iter().map(|d| d * d).sum();
    if c0 == 0.0 {
        return Ok(TestStat {
            statistic: 0.0,
            p_value: 1.0,
        });
    }
    let nf = n as f64;
    let q: f64 = (1..=m)
        .map(|k| {
            let ck: f64 = dev[k..].iter().zip(&dev[..n - k]).map(|(a, b)| a * b).sum();
            let rho = ck / c0;
            rho * rho / (nf - k as f64)
        })
        .sum::<f64>()
        * nf
        * (nf + 2.0);
    Ok(TestStat {
        statistic: q,
        p_value: chi2_sf(q, m as f64),
    })
}

/// Ljung-Box p-values for each lag order `1..=max_lag`.
pub fn ljung_box_battery(residuals: &[f64], max_lag: usize) -> Result<Vec<TestStat>> {
    (1..=max_lag).map(|m| ljung_box(residuals, m)).collect()
}

/// Jarque-Bera normality test from population skewness and kurtosis.
pub fn jarque_bera(residuals: &[f64]) -> Result<TestStat> {
    let n = residuals.len();
    if n < 8 {
        return Err(Error::SeriesTooShort {
            required: 8,
            available: n,
        });
    }
    let nf = n as f64;
    let mean = residuals.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for e in residuals {
        let d = e - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if m2 == 0.0 {
        return Ok(TestStat {
            statistic: 0.0,
            p_value: 1.0,
        });
    }
    let skew = m3 / (m2 * m2.sqrt());
    let kurt = m4 / (m2 * m2);
    let jb = nf / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
    Ok(TestStat {
        statistic: jb,
        p_value: chi2_sf(jb, 2.0),
    })
}

/// Engle's ARCH-LM test: `e_t^2` on `lags` of itself plus a constant;
/// statistic is (effective sample) x R^2, referred to chi-square(lags).
pub fn arch_lm(residuals: &[f64], lags: usize) -> Result<TestStat> {
    let n = residuals.len();
    if lags == 0 {
        return Err(Error::InvalidArgument("ARCH-LM needs at least one lag".into()));
    }
    if n <= lags + 2 {
        return Err(Error::SeriesTooShort {
            required: lags + 3,
            available: n,
        });
    }
    let sq: Vec<f64> = residuals.iter().map(|e| e * e).collect();
    let y = &sq[lags..];
    let first = y[0];
    if y.iter().all(|&v| v == first) {
        return Ok(TestStat {
            statistic: 0.0,
            p_value: 1.0,
        });
    }
    let lagged: Vec<Vec<f64>> = (1..=lags).map(|l| sq[lags - l..n - l].to_vec()).collect();
    let names: Vec<alloc::string::String> = (1..=lags).map(|l| alloc::format!("e2_lag{l}")).collect();
    let regs: Vec<Regressor<'_>> = lagged
        .iter()
        .zip(&names)
        .map(|(v, name)| Regressor::new(name, v))
        .collect();
    let f = fit("squared residuals", 0, y, &regs, true)?;
    let stat = y.len() as f64 * f.r_squared;
    Ok(TestStat {
        statistic: stat,
        p_value: chi2_sf(stat, lags as f64),
    })
}

/// Serial correlation, normality and ARCH results for one residual series.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    /// Ljung-Box results for lag orders 1..=5.
    pub ljung_box: Vec<TestStat>,
    pub jarque_bera: Option<TestStat>,
    pub arch_lm: Option<TestStat>,
    pub serial_correlation: bool,
    pub non_normal: bool,
    pub heteroskedastic: bool,
}

pub const DIAGNOSTIC_LAGS: usize = 5;
const LEVEL: f64 = 0.05;

impl DiagnosticsReport {
    /// Runs the battery; tests that need more data than available are
    /// left out rather than failing the whole report.
    pub fn new(residuals: &[f64]) -> Self {
        let max_lag = DIAGNOSTIC_LAGS.min(residuals.len().saturating_sub(2));
        let ljung_box = ljung_box_battery(residuals, max_lag).unwrap_or_default();
        let jarque_bera = jarque_bera(residuals).ok();
        let arch_lm = arch_lm(residuals, 1).ok();
        Self {
            serial_correlation: ljung_box.iter().any(|t| t.p_value < LEVEL),
            non_normal: jarque_bera.is_some_and(|t| t.p_value < LEVEL),
            heteroskedastic: arch_lm.is_some_and(|t| t.p_value < LEVEL),
            ljung_box,
            jarque_bera,
            arch_lm,
        }
    }

    pub fn is_clean(&self) -> bool {
        !(self.serial_correlation || self.non_normal || self.heteroskedastic)
    }
}
