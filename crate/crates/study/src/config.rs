//! Pipeline configuration (TOML).
//!
//! ```toml
//! data_dir = "data"
//! output_dir = "out"
//! k_deflator = "gdp"        # or "investment"
//! mse_mode = "joint"        # or "per_variable"
//!
//! [[countries]]
//! id = "germany"
//! first_year = 1960
//! last_year = 1990
//! ```
//!
//! `GOODWIN_DATA_DIR` and `GOODWIN_OUTPUT_DIR` override the two paths.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use goodwin_core::econometrics::AdfSpec;
use goodwin_core::estimation::StudyOptions;
use goodwin_core::evaluation::MseMode;
use goodwin_core::macro_vars::KDeflator;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ingest::SampleWindow;

pub const DATA_DIR_ENV: &str = "GOODWIN_DATA_DIR";
pub const OUTPUT_DIR_ENV: &str = "GOODWIN_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdfSpecChoice {
    #[default]
    Constant,
    ConstantTrend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KDeflatorChoice {
    #[default]
    Gdp,
    Investment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MseModeChoice {
    #[default]
    Joint,
    PerVariable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountryConfig {
    pub id: String,
    /// Defaults to `<id>.csv` inside the data directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_year: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_year: Option<i32>,
}

impl CountryConfig {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            file: None,
            first_year: None,
            last_year: None,
        }
    }

    pub fn window(&self) -> SampleWindow {
        let d = SampleWindow::default_for(&self.id);
        SampleWindow {
            first: self.first_year.unwrap_or(d.first),
            last: self.last_year.unwrap_or(d.last),
        }
    }

    pub fn path(&self, data_dir: &Path) -> PathBuf {
        match &self.file {
            Some(f) => data_dir.join(f),
            None => data_dir.join(format!("{}.csv", self.id)),
        }
    }
}

fn default_data_dir() -> PathBuf {
    PathBuf::from("data")
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("output")
}

fn four() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default = "default_data_dir")]
    pub data_dir: PathBuf,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Optional column-renaming file, relative to `data_dir`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column_map: Option<PathBuf>,
    #[serde(default = "four")]
    pub max_lag_p: usize,
    #[serde(default)]
    pub adf_spec: AdfSpecChoice,
    #[serde(default = "four")]
    pub adf_max_lags: usize,
    #[serde(default)]
    pub k_deflator: KDeflatorChoice,
    #[serde(default)]
    pub mse_mode: MseModeChoice,
    #[serde(default)]
    pub seed: u64,
    pub countries: Vec<CountryConfig>,
}

impl PipelineConfig {
    pub fn with_countries(countries: Vec<CountryConfig>) -> Self {
        Self {
            data_dir: default_data_dir(),
            output_dir: default_output_dir(),
            column_map: None,
            max_lag_p: 4,
            adf_spec: AdfSpecChoice::default(),
            adf_max_lags: 4,
            k_deflator: KDeflatorChoice::default(),
            mse_mode: MseModeChoice::default(),
            seed: 0,
            countries,
        }
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let cfg: Self = toml::from_str(text).context("invalid pipeline config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths resolve against its directory.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let mut cfg = Self::parse(&text).with_context(|| format!("in {}", path.display()))?;
        if let Some(base) = path.parent() {
            if cfg.data_dir.is_relative() {
                cfg.data_dir = base.join(&cfg.data_dir);
            }
            if cfg.output_dir.is_relative() {
                cfg.output_dir = base.join(&cfg.output_dir);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.countries.is_empty() {
            bail!("no countries configured");
        }
        for c in &self.countries {
            let w = c.window();
            if w.first > w.last {
                bail!(
                    "country `{}`: first_year {} is after last_year {}",
                    c.id,
                    w.first,
                    w.last
                );
            }
        }
        Ok(())
    }

    /// Applies the environment overrides for the two directories.
    pub fn apply_env(&mut self) {
        self.apply_overrides(
            std::env::var_os(DATA_DIR_ENV).map(PathBuf::from),
            std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from),
        );
    }

    pub fn apply_overrides(&mut self, data_dir: Option<PathBuf>, output_dir: Option<PathBuf>) {
        if let Some(d) = data_dir {
            self.data_dir = d;
        }
        if let Some(d) = output_dir {
            self.output_dir = d;
        }
    }

    pub fn options(&self) -> StudyOptions {
        StudyOptions {
            max_lag_p: self.max_lag_p,
            adf_spec: match self.adf_spec {
                AdfSpecChoice::Constant => AdfSpec::Constant,
                AdfSpecChoice::ConstantTrend => AdfSpec::ConstantTrend,
            },
            adf_max_lags: self.adf_max_lags,
            k_deflator: match self.k_deflator {
                KDeflatorChoice::Gdp => KDeflator::Gdp,
                KDeflatorChoice::Investment => KDeflator::Investment,
            },
            mse_mode: match self.mse_mode {
                MseModeChoice::Joint => MseMode::Joint,
                MseModeChoice::PerVariable => MseMode::PerVariable,
            },
        }
    }

    /// First 16 hex digits of the SHA-256 of the settings that affect
    /// results. The output directory is excluded.
    pub fn hash(&self) -> String {
        let mut hashed = self.clone();
        hashed.output_dir = PathBuf::new();
        let text = toml::to_string(&hashed).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_windows() {
        let cfg = PipelineConfig::parse(
            r#"
            [[countries]]
            id = "germany"
            [[countries]]
            id = "norway"
            last_year = 2000
            "#,
        )
        .unwrap();
        assert_eq!(cfg.max_lag_p, 4);
        assert_eq!(cfg.countries[0].window(), SampleWindow::GERMANY);
        assert_eq!(
            cfg.countries[1].window(),
            SampleWindow {
                first: 1960,
                last: 2000
            }
        );
        assert_eq!(cfg.options(), StudyOptions::default());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(PipelineConfig::parse("countries = []").is_err());
        assert!(PipelineConfig::parse("bogus = 1\n[[countries]]\nid = \"x\"").is_err());
        assert!(PipelineConfig::parse("mse_mode = \"median\"\n[[countries]]\nid = \"x\"").is_err());
        assert!(PipelineConfig::parse("[[countries]]\nid = \"x\"\nfirst_year = 2000\nlast_year = 1990").is_err());
    }

    #[test]
    fn hash_tracks_settings_but_not_output() {
        let a = PipelineConfig::with_countries(vec![CountryConfig::new("x")]);
        let mut b = a.clone();
        b.output_dir = "elsewhere".into();
        assert_eq!(a.hash(), b.hash());
        b.mse_mode = MseModeChoice::PerVariable;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }

    #[test]
    fn overrides_replace_paths() {
        let mut cfg = PipelineConfig::with_countries(vec![CountryConfig::new("x")]);
        cfg.apply_overrides(Some("/d".into()), None);
        assert_eq!(cfg.data_dir, PathBuf::from("/d"));
        assert_eq!(cfg.output_dir, PathBuf::from("output"));
    }
}
