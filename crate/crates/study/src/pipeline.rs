//! Runs the study for every configured country.

use anyhow::Context;
use goodwin_core::estimation::{run_country, CountryReport, StudyOptions};
use goodwin_core::macro_vars::CountrySeries;
use rayon::prelude::*;

use crate::config::{CountryConfig, PipelineConfig};
use crate::ingest::{load_country_csv, ColumnMap, SampleWindow};

/// Result for one country; failures keep their message so the country is
/// still reported.
#[derive(Debug)]
pub struct CountryOutcome {
    pub id: String,
    pub window: SampleWindow,
    pub result: Result<CountryReport, String>,
}

pub fn run_loaded(id: &str, raw: &CountrySeries, opts: &StudyOptions) -> CountryOutcome {
    CountryOutcome {
        id: id.into(),
        window: SampleWindow {
            first: raw.start_year(),
            last: raw.end_year(),
        },
        result: run_country(raw, opts).map_err(|e| format!("{e}")),
    }
}

fn run_one(cfg: &PipelineConfig, map: &ColumnMap, country: &CountryConfig) -> CountryOutcome {
    let window = country.window();
    let loaded = load_country_csv(&country.path(&cfg.data_dir), &country.id, window, map)
        .with_context(|| format!("loading `{}`", country.id));
    match loaded {
        Ok(raw) => run_loaded(&country.id, &raw, &cfg.options()),
        Err(e) => CountryOutcome {
            id: country.id.clone(),
            window,
            result: Err(format!("{e:#}")),
        },
    }
}

/// Countries run in parallel; the output keeps the configured order.
pub fn run_study(cfg: &PipelineConfig) -> anyhow::Result<Vec<CountryOutcome>> {
    let map = match &cfg.column_map {
        Some(p) => ColumnMap::load(&cfg.data_dir.join(p))?,
        None => ColumnMap::default(),
    };
    Ok(cfg.countries.par_iter().map(|c| run_one(cfg, &map, c)).collect())
}
