//! CSV output. Every file starts with `# config-hash: <hash>`; numbers use
//! the shortest representation that round-trips, so identical runs give
//! identical bytes.
//!
//! | file | rows |
//! |---|---|
//! | `summary_statistics.csv` | wage share and employment rate moments per country |
//! | `parameter_estimates.csv` | the seven parameters, equilibrium and periods |
//! | `parameter_provenance.csv` | one row per parameter with its source procedure |
//! | `equilibrium_errors.csv` | means versus equilibrium, plus `Average` |
//! | `orbit_fit.csv` | best initial condition and Theil shares, plus `Average` |
//! | `trend_regressions.csv` | productivity and labor-force trends with diagnostics |
//! | `unit_root.csv` | ADF statistic and p-value per series |
//! | `uecm.csv` | selected lag and residual Ljung-Box p-values |
//! | `bounds_test.csv` | F statistic, bounds and decision |
//! | `levels_model.csv` | Phillips intercept and slope with diagnostics |
//! | `restricted_ecm.csv` | error-correction coefficients |
//! | `stability.csv` | CUSUM and CUSUMSQ verdicts |
//! | `stability/<country>_<model>.csv` | paths and bands |
//! | `trajectories/<country>.csv` | observed and simulated series |
//! | `status.csv` | completion, failed stages, warnings or the error |

use std::fs;
use std::path::{Path, PathBuf};

use goodwin_core::econometrics::diagnostics::{DiagnosticsReport, DIAGNOSTIC_LAGS};
use goodwin_core::econometrics::ols::RegressionFit;
use goodwin_core::econometrics::StabilityTestResult;
use goodwin_core::estimation::CountryReport;

use crate::pipeline::CountryOutcome;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("cannot write {}: {source}", path.display())]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no country reports to write")]
    Empty,
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        "NA".into()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

fn flag(b: bool) -> String {
    if b { "true" } else { "false" }.into()
}

fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn stub(&mut self, id: &str) {
        let mut row = vec![id.to_string()];
        row.resize(self.header.len(), String::new());
        self.rows.push(row);
    }

    /// Appends the unweighted mean of each numeric column over the rows
    /// that have a value; text columns are left blank.
    fn average_row(&mut self, numeric: &[usize]) {
        let mut row = vec![String::new(); self.header.len()];
        row[0] = "Average".into();
        for &c in numeric {
            let vals: Vec<f64> = self.rows.iter().filter_map(|r| r[c].parse::<f64>().ok()).collect();
            if !vals.is_empty() {
                row[c] = num(vals.iter().sum::<f64>() / vals.len() as f64);
            }
        }
        self.rows.push(row);
    }

    fn write(&self, path: &Path, hash: &str) -> Result<(), ReportError> {
        let io = |source| ReportError::IoFailure {
            path: path.into(),
            source,
        };
        let mut out = format!("# config-hash: {hash}\n").into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.header).map_err(|e| io(e.into()))?;
            for r in &self.rows {
                w.write_record(r).map_err(|e| io(e.into()))?;
            }
            w.flush().map_err(io)?;
        }
        fs::write(path, out).map_err(io)
    }
}

fn lb_header(prefix: &str) -> Vec<String> {
    (1..=DIAGNOSTIC_LAGS).map(|m| format!("{prefix}lb_p{m}")).collect()
}

fn lb_cells(d: Option<&DiagnosticsReport>) -> Vec<String> {
    (0..DIAGNOSTIC_LAGS)
        .map(|i| opt(d.and_then(|d| d.ljung_box.get(i)).map(|t| t.p_value)))
        .collect()
}

fn diag_cells(d: &DiagnosticsReport) -> Vec<String> {
    let mut v = lb_cells(Some(d));
    v.push(opt(d.jarque_bera.map(|t| t.statistic)));
    v.push(opt(d.jarque_bera.map(|t| t.p_value)));
    v.push(opt(d.arch_lm.map(|t| t.statistic)));
    v.push(opt(d.arch_lm.map(|t| t.p_value)));
    v
}

fn with_diag_header(base: &[&str]) -> Vec<String> {
    let mut h: Vec<String> = base.iter().map(|s| s.to_string()).collect();
    h.extend(lb_header(""));
    h.extend(["jb_stat", "jb_p", "arch_stat", "arch_p"].map(String::from));
    h
}

fn fit_cells(f: &RegressionFit) -> Vec<String> {
    vec![num(f.r_squared), num(f.adj_r_squared), opt(f.f_stat), opt(f.f_p_value)]
}

struct Tables {
    summary: Table,
    params: Table,
    provenance: Table,
    errors: Table,
    orbit: Table,
    trends: Table,
    unit_root: Table,
    uecm: Table,
    bounds: Table,
    levels: Table,
    recm: Table,
    stability: Table,
    status: Table,
}

impl Tables {
    fn new() -> Self {
        let header = |cols: Vec<String>| Table {
            header: cols,
            rows: Vec::new(),
        };
        Self {
            summary: Table::new(&[
                "country",
                "first_year",
                "last_year",
                "n",
                "omega_mean",
                "omega_std",
                "omega_min",
                "omega_max",
                "lambda_mean",
                "lambda_std",
                "lambda_min",
                "lambda_max",
            ]),
            params: Table::new(&[
                "country",
                "alpha",
                "beta",
                "delta",
                "nu",
                "gamma",
                "rho",
                "k",
                "omega_g",
                "lambda_g",
                "period_g",
                "measured_period",
            ]),
            provenance: Table::new(&["country", "parameter", "value", "source"]),
            errors: Table::new(&[
                "country",
                "mean_lambda",
                "lambda_g",
                "abs_err_lambda",
                "rel_err_lambda",
                "mean_omega",
                "omega_g",
                "abs_err_omega",
                "rel_err_omega",
            ]),
            orbit: Table::new(&[
                "country",
                "mse_mode",
                "initial_year",
                "initial_omega",
                "initial_lambda",
                "joint_mse",
                "lambda_rmse_over_mean",
                "lambda_u_bias",
                "lambda_u_variance",
                "lambda_u_covariance",
                "omega_initial_year",
                "omega_rmse_over_mean",
                "omega_u_bias",
                "omega_u_variance",
                "omega_u_covariance",
            ]),
            trends: header(with_diag_header(&[
                "country",
                "variable",
                "log_level0",
                "growth",
                "growth_se",
                "growth_p",
                "r_squared",
                "adj_r_squared",
                "f_stat",
                "f_p",
            ])),
            unit_root: Table::new(&[
                "country",
                "series",
                "statistic",
                "p_value",
                "lags_used",
                "nobs",
                "error",
            ]),
            uecm: header({
                let mut h: Vec<String> = ["country", "lags", "nobs", "r_squared", "adj_r_squared"]
                    .map(String::from)
                    .to_vec();
                h.extend(lb_header(""));
                h
            }),
            bounds: Table::new(&[
                "country",
                "f_statistic",
                "wald_f",
                "decision",
                "lower_1",
                "upper_1",
                "lower_5",
                "upper_5",
                "lower_10",
                "upper_10",
            ]),
            levels: header(with_diag_header(&[
                "country",
                "nobs",
                "gamma",
                "gamma_se",
                "gamma_p",
                "rho",
                "rho_se",
                "rho_p",
                "r_squared",
                "adj_r_squared",
                "f_stat",
                "f_p",
            ])),
            recm: header(with_diag_header(&[
                "country",
                "nobs",
                "const",
                "d_lambda_lag1",
                "ect_lag1",
                "const_p",
                "d_lambda_lag1_p",
                "ect_lag1_p",
                "r_squared",
                "adj_r_squared",
                "f_stat",
                "f_p",
                "error_correcting",
            ])),
            stability: Table::new(&[
                "country",
                "model",
                "first_year",
                "m",
                "c0",
                "cusum_ok",
                "cusumsq_ok",
                "error",
            ]),
            status: Table::new(&[
                "country",
                "first_year",
                "last_year",
                "status",
                "failed_stages",
                "detail",
            ]),
        }
    }

    fn add(&mut self, r: &CountryReport) {
        let id = r.country.clone();
        let d = &r.derived;
        let (so, sl) = (&r.omega_summary, &r.lambda_summary);
        self.summary.push(vec![
            id.clone(),
            d.start_year().to_string(),
            d.end_year().to_string(),
            so.n.to_string(),
            num(so.mean),
            num(so.std),
            num(so.min),
            num(so.max),
            num(sl.mean),
            num(sl.std),
            num(sl.min),
            num(sl.max),
        ]);

        let p = r.params();
        let eq = r.equilibrium.as_ref().ok();
        self.params.push(vec![
            id.clone(),
            num(p.alpha),
            num(p.beta),
            num(p.delta),
            num(p.nu),
            num(p.gamma),
            num(p.rho),
            num(p.k),
            opt(eq.map(|e| e.point.omega)),
            opt(eq.map(|e| e.point.lambda)),
            opt(r.period.as_ref().ok().copied()),
            opt(r.measured_period.as_ref().ok().copied()),
        ]);
        for (name, value, source) in r.estimates.provenance() {
            self.provenance
                .push(vec![id.clone(), name.into(), num(value), source.into()]);
        }

        let (mean_omega, mean_lambda) = r.empirical_means;
        let e = r.errors.as_ref().ok();
        self.errors.push(vec![
            id.clone(),
            num(mean_lambda),
            opt(eq.map(|e| e.point.lambda)),
            opt(e.map(|e| e.abs_err_lambda)),
            opt(e.map(|e| e.rel_err_lambda)),
            num(mean_omega),
            opt(eq.map(|e| e.point.omega)),
            opt(e.map(|e| e.abs_err_omega)),
            opt(e.map(|e| e.rel_err_omega)),
        ]);

        match &r.orbit {
            Ok(o) => {
                let omega_year = o.omega_orbit.as_ref().map_or(o.best_initial.0, |w| w.0);
                let (l, w) = (&o.lambda_eval, &o.omega_eval);
                self.orbit.push(vec![
                    id.clone(),
                    format!("{:?}", o.mode).to_lowercase(),
                    o.best_initial.0.to_string(),
                    num(o.best_initial.1.omega),
                    num(o.best_initial.1.lambda),
                    num(o.joint_mse),
                    num(l.rmse_over_mean),
                    num(l.u_bias),
                    num(l.u_variance),
                    num(l.u_covariance),
                    omega_year.to_string(),
                    num(w.rmse_over_mean),
                    num(w.u_bias),
                    num(w.u_variance),
                    num(w.u_covariance),
                ]);
            }
            Err(_) => self.orbit.stub(&id),
        }

        for (name, t) in [
            ("productivity", &r.estimates.alpha_fit),
            ("labor_force", &r.estimates.beta_fit),
        ] {
            let f = &t.fit;
            let diag = if name == "productivity" {
                &r.alpha_diagnostics
            } else {
                &r.beta_diagnostics
            };
            let mut row = vec![
                id.clone(),
                name.into(),
                num(t.level0),
                num(t.growth),
                num(f.std_errors[1]),
                num(f.p_values[1]),
            ];
            row.extend(fit_cells(f));
            row.extend(diag_cells(diag));
            self.trends.push(row);
        }

        for a in &r.adf {
            let row = match &a.result {
                Ok(x) => vec![
                    id.clone(),
                    a.series.into(),
                    num(x.statistic),
                    num(x.p_value),
                    x.lags_used.to_string(),
                    x.nobs.to_string(),
                    String::new(),
                ],
                Err(e) => vec![
                    id.clone(),
                    a.series.into(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    e.to_string(),
                ],
            };
            self.unit_root.push(row);
        }

        match &r.uecm {
            Ok(u) => {
                let mut row = vec![
                    id.clone(),
                    u.lags.to_string(),
                    u.fit.nobs.to_string(),
                    num(u.fit.r_squared),
                    num(u.fit.adj_r_squared),
                ];
                row.extend(lb_cells(r.uecm_diagnostics.as_ref()));
                self.uecm.push(row);
            }
            Err(_) => self.uecm.stub(&id),
        }

        match &r.bounds {
            Ok(b) => {
                let mut row = vec![
                    id.clone(),
                    num(b.f_statistic),
                    num(b.wald_f),
                    b.decision.as_str().into(),
                ];
                for c in &b.bounds {
                    row.push(num(c.lower));
                    row.push(num(c.upper));
                }
                self.bounds.push(row);
            }
            Err(_) => self.bounds.stub(&id),
        }

        let lv = &r.estimates.levels;
        let f = &lv.fit;
        let mut row = vec![
            id.clone(),
            f.nobs.to_string(),
            num(lv.gamma),
            num(f.std_errors[0]),
            num(f.p_values[0]),
            num(lv.rho),
            num(f.std_errors[1]),
            num(f.p_values[1]),
        ];
        row.extend(fit_cells(f));
        row.extend(diag_cells(&lv.diagnostics));
        self.levels.push(row);

        match &r.recm {
            Ok(e) => {
                let f = &e.fit;
                let mut row = vec![id.clone(), f.nobs.to_string()];
                row.extend(f.coefficients.iter().map(|&c| num(c)));
                row.extend(f.p_values.iter().map(|&c| num(c)));
                row.extend(fit_cells(f));
                row.push(flag(e.error_correcting));
                row.extend(diag_cells(&e.diagnostics));
                self.recm.push(row);
            }
            Err(_) => self.recm.stub(&id),
        }

        for (model, s) in [("uecm", &r.cusum_uecm), ("levels", &r.cusum_levels)] {
            self.stability.push(match s {
                Ok(s) => vec![
                    id.clone(),
                    model.into(),
                    s.start_year.to_string(),
                    s.recursive_residuals.len().to_string(),
                    num(s.c0),
                    flag(s.cusum_ok),
                    flag(s.cusumsq_ok),
                    String::new(),
                ],
                Err(e) => {
                    let mut row = vec![id.clone(), model.into()];
                    row.resize(7, String::new());
                    row.push(e.to_string());
                    row
                }
            });
        }

        let failed: Vec<&str> = r.stages.iter().filter(|s| !s.passed).map(|s| s.name).collect();
        self.status.push(vec![
            id,
            d.start_year().to_string(),
            d.end_year().to_string(),
            if failed.is_empty() {
                "ok"
            } else {
                "completed with warnings"
            }
            .into(),
            failed.join(";"),
            r.warnings.join("; "),
        ]);
    }

    fn add_failure(&mut self, o: &CountryOutcome, error: &str) {
        for t in [
            &mut self.summary,
            &mut self.params,
            &mut self.errors,
            &mut self.orbit,
            &mut self.uecm,
            &mut self.bounds,
            &mut self.levels,
            &mut self.recm,
        ] {
            t.stub(&o.id);
        }
        self.status.push(vec![
            o.id.clone(),
            o.window.first.to_string(),
            o.window.last.to_string(),
            "failed".into(),
            String::new(),
            error.into(),
        ]);
    }
}

fn stability_table(s: &StabilityTestResult) -> Table {
    let mut t = Table::new(&[
        "year",
        "recursive_residual",
        "cusum",
        "cusum_lower",
        "cusum_upper",
        "cusumsq",
        "cusumsq_lower",
        "cusumsq_upper",
    ]);
    for i in 0..s.recursive_residuals.len() {
        t.push(vec![
            (s.start_year + i as i32).to_string(),
            num(s.recursive_residuals[i]),
            num(s.cusum_path[i]),
            num(s.cusum_bounds.0[i]),
            num(s.cusum_bounds.1[i]),
            num(s.cusumsq_path[i]),
            num(s.cusumsq_bounds.0[i]),
            num(s.cusumsq_bounds.1[i]),
        ]);
    }
    t
}

fn trajectory_table(r: &CountryReport) -> Option<Table> {
    let o = r.orbit.as_ref().ok()?;
    let per_variable = o.omega_orbit.is_some();
    let mut header = vec![
        "year",
        "omega_observed",
        "lambda_observed",
        "omega_simulated",
        "lambda_simulated",
    ];
    if per_variable {
        header.push("omega_simulated_omega_orbit");
    }
    let mut t = Table::new(&header);
    let d = &r.derived;
    for (i, year) in d.omega.years().enumerate() {
        let x = o.simulated.at(year)?;
        let mut row = vec![
            year.to_string(),
            num(d.omega.values()[i]),
            num(d.lambda.values()[i]),
            num(x.omega),
            num(x.lambda),
        ];
        if let Some((_, _, tr)) = &o.omega_orbit {
            row.push(opt(tr.at(year).map(|p| p.omega)));
        }
        t.push(row);
    }
    Some(t)
}

fn create_dir(path: &Path) -> Result<(), ReportError> {
    fs::create_dir_all(path).map_err(|source| ReportError::IoFailure {
        path: path.into(),
        source,
    })
}

/// Writes all tables into `dir` (created if needed) and returns the paths
/// written, in a fixed order.
pub fn emit_reports(outcomes: &[CountryOutcome], dir: &Path, config_hash: &str) -> Result<Vec<PathBuf>, ReportError> {
    if outcomes.is_empty() {
        return Err(ReportError::Empty);
    }
    create_dir(dir)?;
    let mut tables = Tables::new();
    let mut written = Vec::new();
    for o in outcomes {
        match &o.result {
            Ok(r) => tables.add(r),
            Err(e) => tables.add_failure(o, e),
        }
    }
    tables.errors.average_row(&[1, 2, 3, 4, 5, 6, 7, 8]);
    tables.orbit.average_row(&[5, 6, 7, 8, 9, 11, 12, 13, 14]);

    let Tables {
        summary,
        params,
        provenance,
        errors,
        orbit,
        trends,
        unit_root,
        uecm,
        bounds,
        levels,
        recm,
        stability,
        status,
    } = tables;
    for (name, t) in [
        ("summary_statistics.csv", summary),
        ("parameter_estimates.csv", params),
        ("parameter_provenance.csv", provenance),
        ("equilibrium_errors.csv", errors),
        ("orbit_fit.csv", orbit),
        ("trend_regressions.csv", trends),
        ("unit_root.csv", unit_root),
        ("uecm.csv", uecm),
        ("bounds_test.csv", bounds),
        ("levels_model.csv", levels),
        ("restricted_ecm.csv", recm),
        ("stability.csv", stability),
        ("status.csv", status),
    ] {
        let path = dir.join(name);
        t.write(&path, config_hash)?;
        written.push(path);
    }

    let (traj_dir, stab_dir) = (dir.join("trajectories"), dir.join("stability"));
    for o in outcomes {
        let Ok(r) = &o.result else { continue };
        let stem = file_stem(&o.id);
        if let Some(t) = trajectory_table(r) {
            create_dir(&traj_dir)?;
            let path = traj_dir.join(format!("{stem}.csv"));
            t.write(&path, config_hash)?;
            written.push(path);
        }
        for (model, s) in [("uecm", &r.cusum_uecm), ("levels", &r.cusum_levels)] {
            if let Ok(s) = s {
                create_dir(&stab_dir)?;
                let path = stab_dir.join(format!("{stem}_{model}.csv"));
                stability_table(s).write(&path, config_hash)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}
