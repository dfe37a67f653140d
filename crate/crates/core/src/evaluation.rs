//! Fit of the model against data: equilibrium-versus-mean errors, orbit
//! selection over observed initial conditions and Theil decompositions.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::macro_vars::DerivedSeries;
use crate::model::{simulate_window, GoodwinParams, PhasePoint, Trajectory};
use crate::series::{ensure_aligned, AnnualSeries};

/// Gaps between sample means and model equilibria; relative errors are
/// fractions of the empirical mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumErrors {
    pub abs_err_lambda: f64,
    pub rel_err_lambda: f64,
    pub abs_err_omega: f64,
    pub rel_err_omega: f64,
}

/// `emp` and `est` are both `(omega, lambda)`.
pub fn equilibrium_errors(emp: (f64, f64), est: (f64, f64)) -> Result<EquilibriumErrors> {
    let (mean_omega, mean_lambda) = emp;
    if !(mean_omega > 0.0 && mean_lambda > 0.0) {
        return Err(Error::InvalidArgument("empirical means must be positive".into()));
    }
    let abs_err_omega = (mean_omega - est.0).abs();
    let abs_err_lambda = (mean_lambda - est.1).abs();
    Ok(EquilibriumErrors {
        abs_err_lambda,
        rel_err_lambda: abs_err_lambda / mean_lambda,
        abs_err_omega,
        rel_err_omega: abs_err_omega / mean_omega,
    })
}

/// Bias, variance and covariance shares of the mean squared error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheilDecomposition {
    pub mse: f64,
    pub rmse_over_mean: f64,
    pub u_bias: f64,
    pub u_variance: f64,
    pub u_covariance: f64,
}

impl TheilDecomposition {
    /// A perfect fit: zero error and, by convention, zero proportions.
    pub fn exact() -> Self {
        Self {
            mse: 0.0,
            rmse_over_mean: 0.0,
            u_bias: 0.0,
            u_variance: 0.0,
            u_covariance: 0.0,
        }
    }
}

/// Decomposes `mean((sim − obs)²)` with population moments:
///
/// ```text
/// MSE = (m_s − m_o)² + (σ_s − σ_o)² + 2(1 − r) σ_s σ_o
/// ```
pub fn theil_decompose(observed: &[f64], simulated: &[f64]) -> Result<TheilDecomposition> {
    let n = observed.len();
    if n != simulated.len() {
        return Err(Error::LengthMismatch {
            left: n,
            right: simulated.len(),
        });
    }
    if n < 2 {
        return Err(Error::SeriesTooShort {
            required: 2,
            available: n,
        });
    }
    let nf = n as f64;
    let mo = observed.iter().sum::<f64>() / nf;
    let ms = simulated.iter().sum::<f64>() / nf;
    if !(mo > 0.0) {
        return Err(Error::InvalidArgument("observed mean must be positive".into()));
    }
    let mse = observed
        .iter()
        .zip(simulated)
        .map(|(o, s)| (s - o) * (s - o))
        .sum::<f64>()
        / nf;
    if mse == 0.0 {
        return Err(Error::ZeroMse);
    }
    let var_o = observed.iter().map(|o| (o - mo) * (o - mo)).sum::<f64>() / nf;
    let var_s = simulated.iter().map(|s| (s - ms) * (s - ms)).sum::<f64>() / nf;
    let cov = observed
        .iter()
        .zip(simulated)
        .map(|(o, s)| (o - mo) * (s - ms))
        .sum::<f64>()
        / nf;
    let (sd_o, sd_s) = (var_o.sqrt(), var_s.sqrt());
    let bias = (ms - mo) * (ms - mo);
    let variance = (sd_s - sd_o) * (sd_s - sd_o);
    // 2(1 − r)σ_sσ_o written without forming r
    let covariance = (2.0 * ((var_s * var_o).sqrt() - cov)).max(0.0);
    Ok(TheilDecomposition {
        mse,
        rmse_over_mean: mse.sqrt() / mo,
        u_bias: bias / mse,
        u_variance: variance / mse,
        u_covariance: covariance / mse,
    })
}

fn decompose_or_exact(observed: &[f64], simulated: &[f64]) -> Result<TheilDecomposition> {
    match theil_decompose(observed, simulated) {
        Err(Error::ZeroMse) => Ok(TheilDecomposition::exact()),
        r => r,
    }
}

/// How the initial condition is chosen among observed pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MseMode {
    /// One orbit minimizing the average of the λ and ω errors.
    #[default]
    Joint,
    /// Separate orbits minimizing the λ error and the ω error.
    PerVariable,
}

/// Per-candidate errors: `(year, mse_lambda, mse_omega)`.
pub type CandidateScore = (i32, f64, f64);

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitEvaluation {
    pub mode: MseMode,
    /// Winning observed pair and its year; for [`MseMode::PerVariable`] the
    /// λ winner.
    pub best_initial: (i32, PhasePoint),
    pub simulated: Trajectory,
    /// `(MSE_λ + MSE_ω) / 2` of `simulated`.
    pub joint_mse: f64,
    pub lambda_eval: TheilDecomposition,
    pub omega_eval: TheilDecomposition,
    /// ω winner when it differs in mode; `None` in joint mode.
    pub omega_orbit: Option<(i32, PhasePoint, Trajectory)>,
    pub candidates: Vec<CandidateScore>,
}

fn mse(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64
}

/// Simulates from every observed pair (anchored at its own year, run both
/// ways to cover the sample) and keeps the candidate with the smallest
/// error. Ties go to the earliest year.
pub fn best_orbit(p: &GoodwinParams, observed: &DerivedSeries, mode: MseMode) -> Result<OrbitEvaluation> {
    best_orbit_on(p, &observed.omega, &observed.lambda, mode)
}

pub fn best_orbit_on(
    p: &GoodwinParams,
    omega: &AnnualSeries,
    lambda: &AnnualSeries,
    mode: MseMode,
) -> Result<OrbitEvaluation> {
    ensure_aligned(omega, lambda)?;
    if omega.len() < 3 {
        return Err(Error::SeriesTooShort {
            required: 3,
            available: omega.len(),
        });
    }
    let (first, last) = (omega.start_year(), omega.end_year());
    let mut candidates = Vec::with_capacity(omega.len());
    let mut trajectories = Vec::with_capacity(omega.len());
    for (i, year) in omega.years().enumerate() {
        let x0 = PhasePoint::new(omega.values()[i], lambda.values()[i]);
        let tr = simulate_window(p, x0, year, first, last)?;
        let ml = mse(&tr.lambda(), lambda.values());
        let mw = mse(&tr.omega(), omega.values());
        candidates.push((year, ml, mw));
        trajectories.push(tr);
    }
    let argmin = |score: &dyn Fn(&CandidateScore) -> f64| {
        let mut best = 0;
        for (i, c) in candidates.iter().enumerate() {
            if score(c) < score(&candidates[best]) {
                best = i;
            }
        }
        best
    };
    let (main, omega_idx) = match mode {
        MseMode::Joint => {
            let b = argmin(&|c| 0.5 * (c.1 + c.2));
            (b, b)
        }
        MseMode::PerVariable => (argmin(&|c| c.1), argmin(&|c| c.2)),
    };
    let simulated = trajectories[main].clone();
    let omega_traj = &trajectories[omega_idx];
    let lambda_eval = decompose_or_exact(lambda.values(), &simulated.lambda())?;
    let omega_eval = decompose_or_exact(omega.values(), &omega_traj.omega())?;
    let omega_orbit = match mode {
        MseMode::Joint => None,
        MseMode::PerVariable => Some((candidates[omega_idx].0, omega_traj.initial, omega_traj.clone())),
    };
    Ok(OrbitEvaluation {
        mode,
        best_initial: (candidates[main].0, simulated.initial),
        joint_mse: 0.5 * (candidates[main].1 + candidates[main].2),
        simulated,
        lambda_eval,
        omega_eval,
        omega_orbit,
        candidates,
    })
}
