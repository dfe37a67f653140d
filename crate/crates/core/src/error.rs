use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,
    #[error("series `{label}` holds a non-finite value at year {year}")]
    NonFinite { label: String, year: i32 },
    #[error("series `{label}` has a non-positive value {value} at year {year}")]
    NonPositiveValue { label: String, year: i32, value: f64 },
    #[error("series too short: need at least {required} observations, have {available}")]
    SeriesTooShort { required: usize, available: usize },
    #[error("series do not overlap in time")]
    NoOverlap,
    #[error("series are not aligned: {0}")]
    Misaligned(String),
    #[error("year window {first}..={last} selects no observations")]
    EmptyWindow { first: i32, last: i32 },

    #[error("profits are non-positive in {year} (wage bill {wage_bill} >= output {output})")]
    NonPositiveProfit { year: i32, wage_bill: f64, output: f64 },
    #[error("division by zero in `{quantity}` at year {year}")]
    DivisionDomain { quantity: &'static str, year: i32 },

    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("too few observations: {nobs} for {nparams} parameters")]
    TooFewObservations { nobs: usize, nparams: usize },
    #[error("regression does not have the expected shape: {0}")]
    WrongModelShape(String),

    #[error("Phillips slope rho is zero")]
    ZeroRho,
    #[error("no interior center: (alpha - gamma) = {wage_factor}, (k/nu - (alpha + beta + delta)) = {profit_factor}")]
    ComplexPeriod { wage_factor: f64, profit_factor: f64 },
    #[error("state left the positive quadrant at t = {time}")]
    NonPositiveState { time: f64 },
    #[error("conserved-quantity drift {drift:e} exceeds tolerance with {steps_per_year} steps per year")]
    DriftToleranceUnmet { drift: f64, steps_per_year: usize },
    #[error("orbit did not close within {horizon} years")]
    OrbitNotClosed { horizon: f64 },

    #[error("series have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("mean squared error is zero; Theil proportions are undefined")]
    ZeroMse,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
