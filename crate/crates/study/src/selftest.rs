//! End-to-end checks on synthetic countries, run by `goodwin selftest`.

use goodwin_core::econometrics::BoundsDecision;
use goodwin_core::estimation::{run_country, StudyOptions};
use goodwin_core::macro_vars::{derive, KDeflator};

use crate::synthetic::{generate, PhillipsBreak, SyntheticSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// The fixture with a shift in the Phillips intercept halfway through.
pub fn break_spec(seed: u64) -> SyntheticSpec {
    let base = SyntheticSpec {
        seed,
        ..SyntheticSpec::default()
    };
    SyntheticSpec {
        phillips_break: Some(PhillipsBreak {
            year: base.start_year + base.years as i32 / 2,
            gamma: base.gamma() + 0.01,
            rho: base.rho,
        }),
        ..base
    }
}

pub fn run(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let spec = SyntheticSpec {
        seed,
        ..SyntheticSpec::default()
    };
    let fixture = match generate(&spec) {
        Ok(f) => f,
        Err(e) => {
            checks.push(check("fixture", false, e.to_string()));
            return checks;
        }
    };

    let paths = derive(&fixture.raw, KDeflator::Gdp).map(|d| {
        let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        gap(d.omega.values(), &fixture.omega).max(gap(d.lambda.values(), &fixture.lambda))
    });
    checks.push(match paths {
        Ok(g) => check("derive recovers paths", g < 1e-10, format!("max gap {g:.2e}")),
        Err(e) => check("derive recovers paths", false, e.to_string()),
    });

    match run_country(&fixture.raw, &StudyOptions::default()) {
        Ok(report) => {
            let truth = spec.params();
            let got = report.params();
            let errs = [
                got.alpha - truth.alpha,
                got.beta - truth.beta,
                got.delta - truth.delta,
                got.nu - truth.nu,
                got.gamma - truth.gamma,
                got.rho - truth.rho,
                got.k - truth.k,
            ];
            let worst = errs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
            checks.push(check(
                "parameter recovery",
                worst < 1e-2,
                format!("max |error| {worst:.2e}"),
            ));
            let decision = report.bounds.as_ref().map(|b| b.decision);
            checks.push(check(
                "bounds test rejects at 1%",
                decision == Ok(BoundsDecision::RejectAt1),
                format!("{decision:?}"),
            ));
        }
        Err(e) => checks.push(check("run synthetic country", false, e.to_string())),
    }

    let benchmark = generate(&SyntheticSpec::benchmark()).and_then(|f| run_country(&f.raw, &StudyOptions::default()));
    checks.push(match benchmark {
        Ok(r) => {
            let failed: Vec<&str> = r.stages.iter().filter(|s| !s.passed).map(|s| s.name).collect();
            check("benchmark passes every stage", failed.is_empty(), failed.join(", "))
        }
        Err(e) => check("benchmark passes every stage", false, e.to_string()),
    });

    let broken = generate(&break_spec(seed)).and_then(|f| run_country(&f.raw, &StudyOptions::default()));
    checks.push(match broken {
        Ok(r) => {
            let flagged = r.stage("cusum_levels").is_some_and(|s| !s.passed);
            check("structural break flagged", flagged, r.warnings.join("; "))
        }
        Err(e) => check("structural break flagged", false, e.to_string()),
    });
    checks
}
