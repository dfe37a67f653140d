//! Synthetic countries with known parameters.
//!
//! Productivity and the labor force are exact exponentials, the employment
//! rate is a stationary AR(1) around `lambda_bar`, real wage growth follows
//! `z_t = gamma + rho lambda_t + noise` with `gamma = alpha - rho lambda_bar`,
//! and `nu`, `delta`, `k` are constant. Prices, taxes and self-employment are
//! non-trivial so that every step of the derivation is exercised.

use goodwin_core::error::{Error, Result};
use goodwin_core::macro_vars::CountrySeries;
use goodwin_core::model::GoodwinParams;
use goodwin_core::series::AnnualSeries;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// From `year` on the Phillips relation becomes `gamma + rho lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhillipsBreak {
    pub year: i32,
    pub gamma: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub country: String,
    pub start_year: i32,
    pub years: usize,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub nu: f64,
    pub k: f64,
    pub rho: f64,
    pub lambda_bar: f64,
    pub lambda_ar: f64,
    pub lambda_sd: f64,
    pub z_noise_sd: f64,
    pub omega0: f64,
    /// Multiplicative log-noise on productivity and both deflators.
    pub level_noise_sd: f64,
    pub phillips_break: Option<PhillipsBreak>,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            country: "synthetic".into(),
            start_year: 1960,
            years: 51,
            alpha: 0.02,
            beta: 0.01,
            delta: 0.05,
            nu: 3.0,
            k: 0.7,
            rho: 0.4,
            lambda_bar: 0.94,
            lambda_ar: 0.3,
            lambda_sd: 0.025,
            z_noise_sd: 1e-3,
            omega0: 0.65,
            level_noise_sd: 0.0,
            phillips_break: None,
            seed: 7,
        }
    }
}

impl SyntheticSpec {
    /// Noisier wages, calmer employment and noisy price and productivity
    /// levels; every stage of the study passes on this fixture.
    pub fn benchmark() -> Self {
        Self {
            country: "benchmark".into(),
            lambda_sd: 0.01,
            z_noise_sd: 0.01,
            level_noise_sd: 0.005,
            seed: BENCHMARK_SEED,
            ..Self::default()
        }
    }

    pub fn gamma(&self) -> f64 {
        self.alpha - self.rho * self.lambda_bar
    }

    /// The parameters the fixture is built from (before any break).
    pub fn params(&self) -> GoodwinParams {
        GoodwinParams {
            alpha: self.alpha,
            beta: self.beta,
            delta: self.delta,
            nu: self.nu,
            gamma: self.gamma(),
            rho: self.rho,
            k: self.k,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCountry {
    pub raw: CountrySeries,
    pub omega: Vec<f64>,
    pub lambda: Vec<f64>,
}

pub const BENCHMARK_SEED: u64 = 2;

const TAX_SHARE: f64 = 0.1;
const SELF_EMPLOYED_RATIO: f64 = 0.12;
const INFLATION: f64 = 1.03;
const INVESTMENT_INFLATION: f64 = 1.025;

pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticCountry> {
    if spec.years < 3 {
        return Err(Error::InvalidArgument("need at least three years".into()));
    }
    let normal = |sd: f64| Normal::new(0.0, sd).map_err(|e| Error::InvalidArgument(e.to_string()));
    let lambda_shock = normal(spec.lambda_sd)?;
    let z_noise = normal(spec.z_noise_sd)?;
    let level_noise = normal(spec.level_noise_sd)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.years;

    let mut lambda = vec![spec.lambda_bar; n];
    for t in 1..n {
        let next = spec.lambda_bar + spec.lambda_ar * (lambda[t - 1] - spec.lambda_bar) + lambda_shock.sample(&mut rng);
        lambda[t] = next.clamp(0.5, 0.995);
    }
    let a0 = 50.0;
    let mut a: Vec<f64> = (0..n).map(|t| a0 * (spec.alpha * t as f64).exp()).collect();
    let labor_force: Vec<f64> = (0..n).map(|t| 2000.0 * (spec.beta * t as f64).exp()).collect();
    let mut w = vec![spec.omega0 * a0; n];
    for t in 1..n {
        let year = spec.start_year + t as i32;
        let (gamma, rho) = match spec.phillips_break {
            Some(b) if year >= b.year => (b.gamma, b.rho),
            _ => (spec.gamma(), spec.rho),
        };
        w[t] = w[t - 1] * (gamma + rho * lambda[t] + z_noise.sample(&mut rng)).exp();
    }
    let mut p: Vec<f64> = (0..n).map(|t| INFLATION.powi(t as i32)).collect();
    let mut q: Vec<f64> = (0..n).map(|t| INVESTMENT_INFLATION.powi(t as i32)).collect();
    if spec.level_noise_sd > 0.0 {
        for t in 1..n {
            a[t] *= level_noise.sample(&mut rng).exp();
            p[t] *= level_noise.sample(&mut rng).exp();
            q[t] *= level_noise.sample(&mut rng).exp();
        }
    }
    let omega: Vec<f64> = w.iter().zip(&a).map(|(w, a)| w / a).collect();
    if let Some(t) = omega.iter().position(|&o| !(o > 0.0 && o < 1.0)) {
        return Err(Error::InvalidArgument(format!(
            "wage share {} leaves (0, 1) in year {}",
            omega[t],
            spec.start_year + t as i32
        )));
    }

    let mut cols: [Vec<f64>; 11] = Default::default();
    for t in 0..n {
        let (p, q) = (p[t], q[t]);
        let l = lambda[t] * labor_force[t];
        let y = a[t] * l;
        let wage_bill = w[t] * l;
        let employees = l / (1.0 + SELF_EMPLOYED_RATIO);
        let gdp = p * y / (1.0 - TAX_SHARE);
        let capital = spec.nu * y;
        let row = [
            gdp,
            TAX_SHARE * gdp,
            p,
            p * wage_bill / (1.0 + SELF_EMPLOYED_RATIO),
            employees,
            l - employees,
            labor_force[t] - l,
            capital,
            spec.delta * q * capital,
            q,
            spec.k * p * (y - wage_bill),
        ];
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    let names = goodwin_core::macro_vars::RAW_COLUMNS;
    let mut series = Vec::with_capacity(11);
    for (c, name) in cols.into_iter().zip(names) {
        series.push(AnnualSeries::new(name, spec.start_year, c)?);
    }
    let arr: [AnnualSeries; 11] = series.try_into().expect("eleven columns");
    Ok(SyntheticCountry {
        raw: CountrySeries::new(spec.country.clone(), arr)?,
        omega,
        lambda,
    })
}
