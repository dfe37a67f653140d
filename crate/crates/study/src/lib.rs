//! Ingestion, configuration, synthetic fixtures, the multi-country runner
//! and CSV reports for the growth-cycle study.

pub mod config;
pub mod ingest;
pub mod pipeline;
pub mod report;
pub mod selftest;
pub mod synthetic;

pub use config::PipelineConfig;
pub use ingest::{load_country_csv, ColumnMap, IngestError, SampleWindow};
pub use pipeline::{run_study, CountryOutcome};
pub use report::emit_reports;
