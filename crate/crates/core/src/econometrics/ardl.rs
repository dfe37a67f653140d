//! Bounds testing for a long-run relation between real wage growth `z`
//! and the employment rate `lambda`, followed by the levels model and the
//! restricted error-correction model.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::econometrics::diagnostics::DiagnosticsReport;
use crate::econometrics::ols::{fit, RegressionFit, Regressor};
use crate::error::{Error, Result};
use crate::series::{ensure_aligned, AnnualSeries};

pub const Z_LAG: &str = "z_lag1";
pub const LAMBDA_LAG: &str = "lambda_lag1";
pub const D_LAMBDA_LAG: &str = "d_lambda_lag1";
pub const ECT_LAG: &str = "ect_lag1";

/// Unrestricted error-correction model
/// `dz_t = c + phi1 dlambda_{t-1} + phi2 z_{t-1} + phi3 lambda_{t-1} + sum_i psi_i dz_{t-i}`.
#[derive(Debug, Clone)]
pub struct UecmFit {
    pub fit: RegressionFit,
    /// Number of lagged `dz` terms selected.
    pub lags: usize,
    /// BIC of each candidate lag order on the common sample.
    pub bic_by_lag: Vec<f64>,
    y: Vec<f64>,
    regressors: Vec<(String, Vec<f64>)>,
}

impl UecmFit {
    pub fn dependent(&self) -> &[f64] {
        &self.y
    }

    pub fn regressors(&self) -> impl Iterator<Item = Regressor<'_>> {
        self.regressors.iter().map(|(n, v)| Regressor::new(n, v))
    }

    /// Positions of `z_{t-1}` and `lambda_{t-1}` among the coefficients.
    pub fn level_indices(&self) -> Result<[usize; 2]> {
        match (self.fit.index_of(Z_LAG), self.fit.index_of(LAMBDA_LAG)) {
            (Some(a), Some(b)) if a != b && self.fit.names[a] != "const" => Ok([a, b]),
            _ => Err(Error::WrongModelShape(format!(
                "expected `{Z_LAG}` and `{LAMBDA_LAG}` among {:?}",
                self.fit.names
            ))),
        }
    }
}

fn uecm_design(z: &[f64], lambda: &[f64], lags: usize, first: usize) -> (Vec<f64>, Vec<(String, Vec<f64>)>) {
    let rows = first..z.len();
    let y = rows.clone().map(|t| z[t] - z[t - 1]).collect();
    let mut regs = Vec::with_capacity(3 + lags);
    regs.push((
        String::from(D_LAMBDA_LAG),
        rows.clone().map(|t| lambda[t - 1] - lambda[t - 2]).collect(),
    ));
    regs.push((String::from(Z_LAG), rows.clone().map(|t| z[t - 1]).collect()));
    regs.push((String::from(LAMBDA_LAG), rows.clone().map(|t| lambda[t - 1]).collect()));
    for i in 1..=lags {
        regs.push((
            format!("dz_lag{i}"),
            rows.clone().map(|t| z[t - i] - z[t - i - 1]).collect(),
        ));
    }
    (y, regs)
}

fn fit_design(label: &str, start_year: i32, y: &[f64], regs: &[(String, Vec<f64>)]) -> Result<RegressionFit> {
    let r: Vec<Regressor<'_>> = regs.iter().map(|(n, v)| Regressor::new(n, v)).collect();
    fit(label, start_year, y, &r, true)
}

/// Fits the UECM with the `dz` lag order chosen by BIC over `0..=max_lag_p`.
///
/// All candidates are scored on the sample the largest order allows; ties
/// go to the smaller order. The chosen model is refit on its full sample.
pub fn fit_uecm(z: &AnnualSeries, lambda: &AnnualSeries, max_lag_p: usize) -> Result<UecmFit> {
    ensure_aligned(z, lambda)?;
    let n = z.len();
    let common_first = 2usize.max(max_lag_p + 1);
    let largest = 4 + max_lag_p;
    if n < common_first + largest + 1 {
        return Err(Error::TooFewObservations {
            nobs: n.saturating_sub(common_first),
            nparams: largest,
        });
    }
    let mut bic_by_lag = Vec::with_capacity(max_lag_p + 1);
    for p in 0..=max_lag_p {
        let (y, regs) = uecm_design(z.values(), lambda.values(), p, common_first);
        bic_by_lag.push(fit_design("dz", 0, &y, &regs)?.bic());
    }
    let lags = bic_by_lag
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |(bp, bb), (p, &b)| if b < bb { (p, b) } else { (bp, bb) },
        )
        .0;
    let first = 2usize.max(lags + 1);
    let (y, regressors) = uecm_design(z.values(), lambda.values(), lags, first);
    let fit = fit_design("uecm", z.start_year() + first as i32, &y, &regressors)?;
    Ok(UecmFit {
        fit,
        lags,
        bic_by_lag,
        y,
        regressors,
    })
}

/// Lower (all I(0)) and upper (all I(1)) critical values at one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalBounds {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Narayan critical bounds for 50 observations, one regressor, unrestricted
/// intercept and no trend; ordered 1%, 5%, 10%.
pub const NARAYAN_BOUNDS_N50: [CriticalBounds; 3] = [
    CriticalBounds {
        level: 0.01,
        lower: 7.560,
        upper: 8.685,
    },
    CriticalBounds {
        level: 0.05,
        lower: 5.220,
        upper: 6.070,
    },
    CriticalBounds {
        level: 0.10,
        lower: 4.190,
        upper: 4.940,
    },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsDecision {
    RejectAt1,
    RejectAt5,
    RejectAt10,
    Inconclusive,
    FailToReject,
}

impl BoundsDecision {
    pub fn rejects(self) -> bool {
        matches!(self, Self::RejectAt1 | Self::RejectAt5 | Self::RejectAt10)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::RejectAt1 => "reject at 1%",
            Self::RejectAt5 => "reject at 5%",
            Self::RejectAt10 => "reject at 10%",
            Self::Inconclusive => "inconclusive",
            Self::FailToReject => "fail to reject",
        }
    }
}

impl core::fmt::Display for BoundsDecision {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies an F statistic against bounds ordered from the strictest level.
pub fn bounds_decision(f_statistic: f64, bounds: &[CriticalBounds; 3]) -> BoundsDecision {
    let rejected = [
        BoundsDecision::RejectAt1,
        BoundsDecision::RejectAt5,
        BoundsDecision::RejectAt10,
    ];
    for (b, decision) in bounds.iter().zip(rejected) {
        if f_statistic > b.upper {
            return decision;
        }
    }
    if f_statistic < bounds[2].lower {
        BoundsDecision::FailToReject
    } else {
        BoundsDecision::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsTestResult {
    /// F from restricted and unrestricted sums of squared residuals.
    pub f_statistic: f64,
    /// The same hypothesis in Wald form; equal to `f_statistic` up to rounding.
    pub wald_f: f64,
    pub bounds: [CriticalBounds; 3],
    pub decision: BoundsDecision,
}

/// Tests `phi2 = phi3 = 0` (no long-run relation) in the UECM.
pub fn bounds_test(uecm: &UecmFit) -> Result<BoundsTestResult> {
    bounds_test_with(uecm, &NARAYAN_BOUNDS_N50)
}

pub fn bounds_test_with(uecm: &UecmFit, bounds: &[CriticalBounds; 3]) -> Result<BoundsTestResult> {
    for w in bounds.windows(2) {
        if w[0].level >= w[1].level {
            return Err(Error::InvalidArgument("bounds must be ordered by level".into()));
        }
    }
    let idx = uecm.level_indices()?;
    let unrestricted = &uecm.fit;
    let kept: Vec<(String, Vec<f64>)> = uecm
        .regressors
        .iter()
        .filter(|(n, _)| n != Z_LAG && n != LAMBDA_LAG)
        .cloned()
        .collect();
    let restricted = fit_design("restricted", 0, &uecm.y, &kept)?;
    let q = 2.0;
    let f_statistic = ((restricted.ssr - unrestricted.ssr) / q) / unrestricted.sigma2();
    let wald_f = unrestricted.wald_f(&idx)?;
    Ok(BoundsTestResult {
        f_statistic,
        wald_f,
        bounds: *bounds,
        decision: bounds_decision(f_statistic, bounds),
    })
}

/// Long-run relation `z_t = gamma + rho lambda_t + e`.
#[derive(Debug, Clone)]
pub struct LevelsFit {
    pub gamma: f64,
    pub rho: f64,
    pub fit: RegressionFit,
    pub diagnostics: DiagnosticsReport,
}

pub fn levels_model(z: &AnnualSeries, lambda: &AnnualSeries) -> Result<LevelsFit> {
    ensure_aligned(z, lambda)?;
    if z.len() < 4 {
        return Err(Error::SeriesTooShort {
            required: 4,
            available: z.len(),
        });
    }
    let fit = fit(
        "levels",
        z.start_year(),
        z.values(),
        &[Regressor::new("lambda", lambda.values())],
        true,
    )?;
    let diagnostics = DiagnosticsReport::new(fit.residuals.values());
    Ok(LevelsFit {
        gamma: fit.coefficients[0],
        rho: fit.coefficients[1],
        fit,
        diagnostics,
    })
}

/// Restricted ECM `dz_t = c + phi11 dlambda_{t-1} + phi12 v_{t-1}` with
/// `v_{t-1} = z_{t-1} - gamma - rho lambda_{t-1}`.
#[derive(Debug, Clone)]
pub struct EcmFit {
    pub fit: RegressionFit,
    pub adjustment: f64,
    pub adjustment_p: f64,
    /// Adjustment coefficient negative and significant at 5%.
    pub error_correcting: bool,
    pub diagnostics: DiagnosticsReport,
}

pub fn restricted_ecm(z: &AnnualSeries, lambda: &AnnualSeries, levels: &LevelsFit) -> Result<EcmFit> {
    ensure_aligned(z, lambda)?;
    if levels.fit.nobs != z.len() || levels.fit.residuals.start_year() != z.start_year() {
        return Err(Error::WrongModelShape(
            "levels fit was estimated on a different sample".into(),
        ));
    }
    let (zv, lv) = (z.values(), lambda.values());
    let rows = 2..z.len();
    let y: Vec<f64> = rows.clone().map(|t| zv[t] - zv[t - 1]).collect();
    let dl: Vec<f64> = rows.clone().map(|t| lv[t - 1] - lv[t - 2]).collect();
    let ect: Vec<f64> = rows
        .map(|t| zv[t - 1] - levels.gamma - levels.rho * lv[t - 1])
        .collect();
    let fit = fit(
        "recm",
        z.start_year() + 2,
        &y,
        &[Regressor::new(D_LAMBDA_LAG, &dl), Regressor::new(ECT_LAG, &ect)],
        true,
    )?;
    let adjustment = fit.coefficients[2];
    let adjustment_p = fit.p_values[2];
    let diagnostics = DiagnosticsReport::new(fit.residuals.values());
    Ok(EcmFit {
        adjustment,
        adjustment_p,
        error_correcting: adjustment < 0.0 && adjustment_p < 0.05,
        fit,
        diagnostics,
    })
}
