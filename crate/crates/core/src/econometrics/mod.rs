//! Least squares, residual diagnostics, unit-root and bounds testing,
//! error-correction models and structural-stability tests.

pub mod adf;
pub mod ardl;
pub mod diagnostics;
pub mod ols;
pub mod stability;

pub use adf::{adf_test, AdfResult, AdfSpec};
pub use ardl::{
    bounds_decision, bounds_test, fit_uecm, levels_model, restricted_ecm, BoundsDecision, BoundsTestResult,
    CriticalBounds, EcmFit, LevelsFit, UecmFit, NARAYAN_BOUNDS_N50,
};
pub use diagnostics::{arch_lm, jarque_bera, ljung_box, DiagnosticsReport, TestStat};
pub use ols::{fit, log_trend, ols, LogTrend, RegressionFit, Regressor};
pub use stability::{cusum, StabilityTestResult};
