use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use goodwin_core::model::{conserved_quantity, simulate, GoodwinParams, PhasePoint};
use goodwin_study::config::{CountryConfig, PipelineConfig};
use goodwin_study::{emit_reports, run_study, selftest};
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "goodwin", version, about = "Growth-cycle model study")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the study and write CSV tables.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Run only this country (added if the config lacks it).
        #[arg(long)]
        country: Option<String>,
    },
    /// Simulate one orbit and print `year,omega,lambda`.
    Simulate {
        /// TOML file with alpha, beta, delta, nu, gamma, rho, k.
        #[arg(long)]
        params: PathBuf,
        /// Initial state as `omega,lambda`.
        #[arg(long)]
        init: String,
        #[arg(long)]
        years: usize,
        #[arg(long, default_value_t = 0)]
        start_year: i32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the synthetic-fixture checks.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    alpha: f64,
    beta: f64,
    delta: f64,
    nu: f64,
    gamma: f64,
    rho: f64,
    k: f64,
}

fn run(config: Option<PathBuf>, country: Option<String>) -> anyhow::Result<bool> {
    let mut cfg = match (&config, &country) {
        (Some(path), _) => PipelineConfig::load(path)?,
        (None, Some(id)) => PipelineConfig::with_countries(vec![CountryConfig::new(id.clone())]),
        (None, None) => bail!("give --config, --country or both"),
    };
    if let Some(id) = &country {
        let chosen = cfg
            .countries
            .iter()
            .find(|c| &c.id == id)
            .cloned()
            .unwrap_or_else(|| CountryConfig::new(id.clone()));
        cfg.countries = vec![chosen];
    }
    cfg.apply_env();
    let outcomes = run_study(&cfg)?;
    let written = emit_reports(&outcomes, &cfg.output_dir, &cfg.hash())?;
    let mut ok = true;
    for o in &outcomes {
        match &o.result {
            Ok(r) if r.all_passed() => eprintln!("{}: ok", o.id),
            Ok(r) => eprintln!("{}: completed with warnings: {}", o.id, r.warnings.join("; ")),
            Err(e) => {
                ok = false;
                eprintln!("{}: failed: {e}", o.id);
            }
        }
    }
    eprintln!("wrote {} files to {}", written.len(), cfg.output_dir.display());
    Ok(ok)
}

fn simulate_cmd(
    params: PathBuf,
    init: &str,
    years: usize,
    start_year: i32,
    output: Option<PathBuf>,
) -> anyhow::Result<()> {
    let text = fs::read_to_string(&params).with_context(|| format!("cannot read {}", params.display()))?;
    let f: ParamsFile = toml::from_str(&text).with_context(|| format!("invalid parameters in {}", params.display()))?;
    let p = GoodwinParams {
        alpha: f.alpha,
        beta: f.beta,
        delta: f.delta,
        nu: f.nu,
        gamma: f.gamma,
        rho: f.rho,
        k: f.k,
    };
    let (w, l) = init.split_once(',').context("--init must be `omega,lambda`")?;
    let x0 = PhasePoint::new(w.trim().parse()?, l.trim().parse()?);
    let tr = simulate(&p, x0, start_year, years)?;
    let mut out = format!(
        "# conserved quantity {} with max relative drift {:e}\n",
        conserved_quantity(&p, x0),
        tr.max_drift
    );
    if tr.exceeds_full_employment {
        out.push_str("# employment rate exceeds 1 along the orbit\n");
    }
    out.push_str("year,omega,lambda\n");
    for (i, x) in tr.points.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", tr.start_year + i as i32, x.omega, x.lambda));
    }
    match output {
        Some(path) => fs::write(&path, out).with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(out.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, country } => run(config, country),
        Command::Simulate {
            params,
            init,
            years,
            start_year,
            output,
        } => simulate_cmd(params, &init, years, start_year, output).map(|()| true),
        Command::Selftest { seed } => {
            let checks = selftest::run(seed);
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(checks.iter().all(|c| c.passed))
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
