//! Parameter estimation and the per-country study sequence.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::econometrics::adf::{adf_test, AdfResult, AdfSpec};
use crate::econometrics::ardl::{
    bounds_test, fit_uecm, levels_model, restricted_ecm, BoundsTestResult, EcmFit, LevelsFit, UecmFit,
};
use crate::econometrics::diagnostics::DiagnosticsReport;
use crate::econometrics::ols::{log_trend, LogTrend, Regressor};
use crate::econometrics::stability::{cusum, StabilityTestResult};
use crate::error::{Error, Result};
use crate::evaluation::{best_orbit, equilibrium_errors, EquilibriumErrors, MseMode, OrbitEvaluation};
use crate::macro_vars::{derive, empirical_means, CountrySeries, DerivedSeries, KDeflator};
use crate::model::{equilibrium, measure_period, period, Equilibrium, GoodwinParams, PhasePoint};
use crate::series::{log_growth, summarize, AnnualSeries, SummaryStats};

/// Which procedure produced each parameter, in `GoodwinParams` field order.
pub const PROVENANCE: [(&str, &str); 7] = [
    ("alpha", "slope of the log-trend regression of labor productivity"),
    ("beta", "slope of the log-trend regression of the labor force"),
    ("delta", "sample mean of the depreciation rate"),
    ("nu", "sample mean of the capital-to-output ratio"),
    (
        "gamma",
        "intercept of the levels model of real wage growth on the employment rate",
    ),
    (
        "rho",
        "slope of the levels model of real wage growth on the employment rate",
    ),
    ("k", "sample mean of the accumulation rate"),
];

#[derive(Debug, Clone)]
pub struct Estimates {
    pub params: GoodwinParams,
    pub alpha_fit: LogTrend,
    pub beta_fit: LogTrend,
    pub levels: LevelsFit,
    /// Real wage growth `z_t = ln w_t − ln w_{t−1}`.
    pub z: AnnualSeries,
    /// Employment rate over the years of `z`.
    pub lambda: AnnualSeries,
}

impl Estimates {
    /// `(name, value, provenance)` for every parameter.
    pub fn provenance(&self) -> [(&'static str, f64, &'static str); 7] {
        let p = &self.params;
        let values = [p.alpha, p.beta, p.delta, p.nu, p.gamma, p.rho, p.k];
        let mut out = [("", 0.0, ""); 7];
        for (o, ((name, note), v)) in out.iter_mut().zip(PROVENANCE.iter().zip(values)) {
            *o = (name, v, note);
        }
        out
    }
}

/// Real wage growth and the employment rate on its years.
pub fn phillips_data(d: &DerivedSeries) -> Result<(AnnualSeries, AnnualSeries)> {
    let z = log_growth(&d.wage_rate)?.with_label("z");
    let lambda = d.lambda.window(z.start_year(), z.end_year())?;
    Ok((z, lambda))
}

pub fn estimate_params(d: &DerivedSeries) -> Result<Estimates> {
    let alpha_fit = log_trend(&d.productivity)?;
    let beta_fit = log_trend(&d.n)?;
    let (z, lambda) = phillips_data(d)?;
    let levels = levels_model(&z, &lambda)?;
    let params = GoodwinParams {
        alpha: alpha_fit.growth,
        beta: beta_fit.growth,
        delta: d.delta.mean(),
        nu: d.nu.mean(),
        gamma: levels.gamma,
        rho: levels.rho,
        k: d.k_rate.mean(),
    };
    Ok(Estimates {
        params,
        alpha_fit,
        beta_fit,
        levels,
        z,
        lambda,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyOptions {
    pub max_lag_p: usize,
    pub adf_spec: AdfSpec,
    pub adf_max_lags: usize,
    pub k_deflator: KDeflator,
    pub mse_mode: MseMode,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            max_lag_p: 4,
            adf_spec: AdfSpec::Constant,
            adf_max_lags: 4,
            k_deflator: KDeflator::Gdp,
            mse_mode: MseMode::Joint,
        }
    }
}

/// Series tested for a unit root, in report order.
pub const ADF_SERIES: [&str; 5] = [
    "real wage growth",
    "employment rate",
    "productivity growth",
    "inflation",
    "nominal wage growth",
];

#[derive(Debug, Clone, PartialEq)]
pub struct AdfRow {
    pub series: &'static str,
    pub result: core::result::Result<AdfResult, Error>,
}

/// Outcome of one stage of the study.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub name: &'static str,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct CountryReport {
    pub country: String,
    pub derived: DerivedSeries,
    pub omega_summary: SummaryStats,
    pub lambda_summary: SummaryStats,
    pub adf: Vec<AdfRow>,
    pub estimates: Estimates,
    pub alpha_diagnostics: DiagnosticsReport,
    pub beta_diagnostics: DiagnosticsReport,
    pub uecm: Result<UecmFit>,
    pub uecm_diagnostics: Option<DiagnosticsReport>,
    pub bounds: Result<BoundsTestResult>,
    pub recm: Result<EcmFit>,
    pub cusum_uecm: Result<StabilityTestResult>,
    pub cusum_levels: Result<StabilityTestResult>,
    pub equilibrium: Result<Equilibrium>,
    /// Linearized period.
    pub period: Result<f64>,
    /// Revolution time of the orbit through the sample-mean point.
    pub measured_period: Result<f64>,
    pub empirical_means: (f64, f64),
    pub errors: Result<EquilibriumErrors>,
    pub orbit: Result<OrbitEvaluation>,
    pub stages: Vec<Stage>,
    pub warnings: Vec<String>,
}

impl CountryReport {
    pub fn params(&self) -> &GoodwinParams {
        &self.estimates.params
    }

    pub fn all_passed(&self) -> bool {
        self.stages.iter().all(|s| s.passed)
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }
}

fn stage(name: &'static str, passed: bool, note: impl Into<String>) -> Stage {
    Stage {
        name,
        passed,
        note: note.into(),
    }
}

fn err_note<T>(r: &Result<T>) -> String {
    match r {
        Ok(_) => String::new(),
        Err(e) => format!("{e}"),
    }
}

fn adf_battery(raw: &CountrySeries, d: &DerivedSeries, z: &AnnualSeries, opts: &StudyOptions) -> Vec<AdfRow> {
    let nominal_wage = d
        .wage_rate
        .zip_with(&raw.gdp_deflator, "nominal wage", |w, p| w * p)
        .and_then(|s| log_growth(&s));
    let inputs: [Result<AnnualSeries>; 5] = [
        Ok(z.clone()),
        Ok(d.lambda.clone()),
        log_growth(&d.productivity),
        log_growth(&raw.gdp_deflator),
        nominal_wage,
    ];
    ADF_SERIES
        .iter()
        .zip(inputs)
        .map(|(name, s)| AdfRow {
            series: name,
            result: s.and_then(|s| adf_test(s.values(), opts.adf_spec, opts.adf_max_lags)),
        })
        .collect()
}

/// Runs the full study for one country. Only derivation and parameter
/// estimation are fatal; every later stage records its outcome.
pub fn run_country(raw: &CountrySeries, opts: &StudyOptions) -> Result<CountryReport> {
    let derived = derive(raw, opts.k_deflator)?;
    let omega_summary = summarize(&derived.omega)?;
    let lambda_summary = summarize(&derived.lambda)?;
    let estimates = estimate_params(&derived)?;
    let (z, lambda) = (&estimates.z, &estimates.lambda);
    let mut stages = Vec::new();
    let mut warnings: Vec<String> = estimates.params.warnings().into_iter().map(String::from).collect();

    let adf = adf_battery(raw, &derived, z, opts);
    let adf_failures: Vec<&str> = adf.iter().filter(|r| r.result.is_err()).map(|r| r.series).collect();
    stages.push(stage(
        "adf",
        adf_failures.is_empty(),
        if adf_failures.is_empty() {
            String::new()
        } else {
            format!("not computed for {}", adf_failures.join(", "))
        },
    ));

    let alpha_diagnostics = DiagnosticsReport::new(estimates.alpha_fit.fit.residuals.values());
    let beta_diagnostics = DiagnosticsReport::new(estimates.beta_fit.fit.residuals.values());

    let uecm = fit_uecm(z, lambda, opts.max_lag_p);
    let uecm_diagnostics = uecm
        .as_ref()
        .ok()
        .map(|u| DiagnosticsReport::new(u.fit.residuals.values()));
    let serial = uecm_diagnostics.as_ref().map(|d| d.serial_correlation);
    stages.push(stage(
        "uecm",
        serial == Some(false),
        match serial {
            None => err_note(&uecm),
            Some(true) => "serial correlation in residuals at 5%".into(),
            Some(false) => String::new(),
        },
    ));

    let bounds = uecm.as_ref().map_err(Clone::clone).and_then(bounds_test);
    stages.push(match &bounds {
        Ok(b) => stage("bounds_test", b.decision.rejects(), b.decision.as_str()),
        Err(e) => stage("bounds_test", false, format!("{e}")),
    });

    let levels = &estimates.levels;
    stages.push(stage(
        "levels_model",
        levels.rho > 0.0 && !levels.diagnostics.serial_correlation,
        if levels.rho <= 0.0 {
            "non-positive Phillips slope"
        } else if levels.diagnostics.serial_correlation {
            "serial correlation in residuals at 5%"
        } else {
            ""
        },
    ));

    let recm = restricted_ecm(z, lambda, levels);
    stages.push(match &recm {
        Ok(e) => stage(
            "recm",
            e.error_correcting,
            if e.error_correcting {
                ""
            } else {
                "adjustment coefficient not negative and significant"
            },
        ),
        Err(e) => stage("recm", false, format!("{e}")),
    });

    let cusum_uecm = uecm.as_ref().map_err(Clone::clone).and_then(|u| {
        let regs: Vec<Regressor<'_>> = u.regressors().collect();
        cusum(u.dependent(), &regs, true, u.fit.residuals.start_year())
    });
    let cusum_levels = cusum(
        z.values(),
        &[Regressor::new("lambda", lambda.values())],
        true,
        z.start_year(),
    );
    for (name, r) in [("cusum_uecm", &cusum_uecm), ("cusum_levels", &cusum_levels)] {
        stages.push(match r {
            Ok(s) => stage(
                name,
                s.is_stable(),
                match (s.cusum_ok, s.cusumsq_ok) {
                    (true, true) => "",
                    (false, true) => "CUSUM leaves the 99% band",
                    (true, false) => "CUSUMSQ leaves the 99% band",
                    (false, false) => "CUSUM and CUSUMSQ leave the 99% band",
                },
            ),
            Err(e) => stage(name, false, format!("{e}")),
        });
    }

    let p = estimates.params;
    let equilibrium = equilibrium(&p);
    let period = period(&p);
    let means = empirical_means(&derived)?;
    let measured_period = measure_period(&p, PhasePoint::new(means.0, means.1));
    let errors = equilibrium
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|e| equilibrium_errors(means, (e.point.omega, e.point.lambda)));
    stages.push(match (&equilibrium, &period) {
        (Ok(e), Ok(_)) => stage(
            "equilibrium",
            e.interior_omega && e.interior_lambda,
            if e.interior_omega && e.interior_lambda {
                ""
            } else {
                "equilibrium outside the unit square"
            },
        ),
        (Err(e), _) | (_, Err(e)) => stage("equilibrium", false, format!("{e}")),
    });

    let orbit = best_orbit(&p, &derived, opts.mse_mode);
    stages.push(match &orbit {
        Ok(o) => {
            if o.simulated.exceeds_full_employment {
                warnings.push("simulated employment rate exceeds 1".into());
            }
            stage("orbit", true, "")
        }
        Err(e) => stage("orbit", false, format!("{e}")),
    });

    for s in &stages {
        if !s.passed {
            warnings.push(format!("{}: {}", s.name, s.note));
        }
    }

    Ok(CountryReport {
        country: raw.country.clone(),
        derived,
        omega_summary,
        lambda_summary,
        adf,
        estimates,
        alpha_diagnostics,
        beta_diagnostics,
        uecm,
        uecm_diagnostics,
        bounds,
        recm,
        cusum_uecm,
        cusum_levels,
        equilibrium,
        period,
        measured_period,
        empirical_means: means,
        errors,
        orbit,
        stages,
        warnings,
    })
}
