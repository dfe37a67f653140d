//! Per-country CSV input.
//!
//! One row per year, first column `year`, then the eleven raw columns named
//! in [`RAW_COLUMNS`]. A mapping file can rename source columns:
//!
//! ```toml
//! [columns]
//! year = "YEAR"
//! gdp_current = "UVGD"
//! ```
//!
//! Blank cells are allowed before a column starts and after it ends; the
//! country is cut to the years every column covers. Blank cells inside that
//! range are errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use goodwin_core::macro_vars::{CountrySeries, RAW_COLUMNS};
use goodwin_core::series::AnnualSeries;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: missing column `{column}`", path.display())]
    MissingColumn { path: PathBuf, column: String },
    #[error("{}: line {line}: {reason}", path.display())]
    MalformedRow { path: PathBuf, line: u64, reason: String },
    #[error("{}: year {next} follows {prev}", path.display())]
    GapInYears { path: PathBuf, prev: i32, next: i32 },
    #[error("{}: no observations in {first}..={last}", path.display())]
    EmptyWindow { path: PathBuf, first: i32, last: i32 },
    #[error("{}: {source}", path.display())]
    Invalid {
        path: PathBuf,
        #[source]
        source: goodwin_core::error::Error,
    },
    #[error("mapping file {}: {reason}", path.display())]
    Mapping { path: PathBuf, reason: String },
}

/// Source column name for each canonical column.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColumnMap {
    renames: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingFile {
    #[serde(default)]
    columns: BTreeMap<String, String>,
}

impl ColumnMap {
    pub fn new(renames: BTreeMap<String, String>) -> Result<Self, String> {
        for key in renames.keys() {
            if key != "year" && !RAW_COLUMNS.contains(&key.as_str()) {
                return Err(format!("unknown column `{key}`"));
            }
        }
        Ok(Self { renames })
    }

    pub fn load(path: &Path) -> Result<Self, IngestError> {
        let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.into(),
            source,
        })?;
        let file: MappingFile = toml::from_str(&text).map_err(|e| IngestError::Mapping {
            path: path.into(),
            reason: e.to_string(),
        })?;
        Self::new(file.columns).map_err(|reason| IngestError::Mapping {
            path: path.into(),
            reason,
        })
    }

    pub fn source_name<'a>(&'a self, canonical: &'a str) -> &'a str {
        self.renames.get(canonical).map_or(canonical, String::as_str)
    }
}

/// Inclusive range of sample years.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleWindow {
    pub first: i32,
    pub last: i32,
}

impl SampleWindow {
    pub const DEFAULT: Self = Self {
        first: 1960,
        last: 2010,
    };
    /// Pre-unification data only.
    pub const GERMANY: Self = Self {
        first: 1960,
        last: 1990,
    };

    pub fn default_for(country: &str) -> Self {
        match country.to_ascii_lowercase().as_str() {
            "germany" | "de" | "deu" => Self::GERMANY,
            _ => Self::DEFAULT,
        }
    }
}

/// Reads one country and applies `window`.
pub fn load_country_csv(
    path: &Path,
    country: &str,
    window: SampleWindow,
    map: &ColumnMap,
) -> Result<CountrySeries, IngestError> {
    let full = read_full(path, country, map)?;
    full.window(window.first, window.last).map_err(|e| match e {
        goodwin_core::error::Error::EmptyWindow { .. } => IngestError::EmptyWindow {
            path: path.into(),
            first: window.first,
            last: window.last,
        },
        source => IngestError::Invalid {
            path: path.into(),
            source,
        },
    })
}

/// Reads one country over the years every column covers.
pub fn read_full(path: &Path, country: &str, map: &ColumnMap) -> Result<CountrySeries, IngestError> {
    let malformed = |line: u64, reason: String| IngestError::MalformedRow {
        path: path.into(),
        line,
        reason,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => IngestError::Io {
                path: path.into(),
                source,
            },
            other => malformed(1, format!("{other:?}")),
        })?;
    let headers = reader.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    let position = |canonical: &str| {
        let name = map.source_name(canonical);
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn {
                path: path.into(),
                column: canonical.into(),
            })
    };
    let year_col = position("year")?;
    let cols = RAW_COLUMNS.iter().map(|c| position(c)).collect::<Result<Vec<_>, _>>()?;

    let mut years: Vec<i32> = Vec::new();
    let mut lines: Vec<u64> = Vec::new();
    let mut cells: Vec<Vec<Option<f64>>> = vec![Vec::new(); RAW_COLUMNS.len()];
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let year_text = record.get(year_col).unwrap_or("");
        let year: i32 = year_text
            .parse()
            .map_err(|_| malformed(line, format!("bad year `{year_text}`")))?;
        if let Some(&prev) = years.last() {
            if year <= prev {
                return Err(malformed(line, format!("year {year} is not after {prev}")));
            }
            if year != prev + 1 {
                return Err(IngestError::GapInYears {
                    path: path.into(),
                    prev,
                    next: year,
                });
            }
        }
        for (c, (&idx, name)) in cols.iter().zip(RAW_COLUMNS).enumerate() {
            let text = record.get(idx).unwrap_or("");
            let value = if text.is_empty() || text.eq_ignore_ascii_case("na") {
                None
            } else {
                let v: f64 = text
                    .parse()
                    .map_err(|_| malformed(line, format!("bad value `{text}` in `{name}`")))?;
                if !v.is_finite() {
                    return Err(malformed(line, format!("non-finite value in `{name}`")));
                }
                Some(v)
            };
            cells[c].push(value);
        }
        years.push(year);
        lines.push(line);
    }
    if years.is_empty() {
        return Err(IngestError::EmptyWindow {
            path: path.into(),
            first: 0,
            last: 0,
        });
    }

    let mut lo = 0usize;
    let mut hi = years.len();
    for col in &cells {
        let first = col.iter().position(Option::is_some).unwrap_or(col.len());
        let last = col.iter().rposition(Option::is_some).map_or(0, |i| i + 1);
        lo = lo.max(first);
        hi = hi.min(last);
    }
    if lo >= hi {
        return Err(IngestError::EmptyWindow {
            path: path.into(),
            first: years[0],
            last: years[years.len() - 1],
        });
    }
    let mut series = Vec::with_capacity(RAW_COLUMNS.len());
    for (col, name) in cells.iter().zip(RAW_COLUMNS) {
        let mut values = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            match col[i] {
                Some(v) => values.push(v),
                None => return Err(malformed(lines[i], format!("missing value in `{name}`"))),
            }
        }
        series.push(
            AnnualSeries::new(name, years[lo], values).map_err(|source| IngestError::Invalid {
                path: path.into(),
                source,
            })?,
        );
    }
    let arr: [AnnualSeries; 11] = series.try_into().expect("one series per raw column");
    CountrySeries::new(country, arr).map_err(|source| IngestError::Invalid {
        path: path.into(),
        source,
    })
}

/// Writes a country in the canonical layout.
pub fn write_country_csv(path: &Path, country: &CountrySeries) -> Result<(), IngestError> {
    let io = |source| IngestError::Io {
        path: path.into(),
        source,
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["year"];
    header.extend(RAW_COLUMNS);
    w.write_record(&header).map_err(|e| io(e.into()))?;
    let cols = country.columns();
    for (i, year) in cols[0].years().enumerate() {
        let mut row = vec![year.to_string()];
        row.extend(cols.iter().map(|c| c.values()[i].to_string()));
        w.write_record(&row).map_err(|e| io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| io(e.into_error()))?;
    fs::write(path, bytes).map_err(io)
}
