use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use goodwin_core::macro_vars::RAW_COLUMNS;
use goodwin_study::ingest::{read_full, write_country_csv};
use goodwin_study::synthetic::{generate, SyntheticSpec};
use goodwin_study::{load_country_csv, ColumnMap, IngestError, SampleWindow};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn fixture_text() -> String {
    fs::read_to_string(data_dir().join("benchmark.csv")).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

/// Replaces cell `col` of the data line for `year`.
fn edit_cell(text: &str, year: i32, col: usize, value: &str) -> String {
    text.lines()
        .map(|l| {
            if l.starts_with(&format!("{year},")) {
                let mut cells: Vec<&str> = l.split(',').collect();
                cells[col] = value;
                cells.join(",")
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn committed_fixtures_match_the_generator() {
    let map = ColumnMap::default();
    let bench = read_full(&data_dir().join("benchmark.csv"), "benchmark", &map).unwrap();
    assert_eq!(bench, generate(&SyntheticSpec::benchmark()).unwrap().raw);
    let spec = SyntheticSpec {
        country: "germany".into(),
        seed: 1,
        ..SyntheticSpec::benchmark()
    };
    let germany = read_full(&data_dir().join("germany.csv"), "germany", &map).unwrap();
    assert_eq!(germany, generate(&spec).unwrap().raw);
}

#[test]
fn germany_window_keeps_thirty_one_years() {
    let path = data_dir().join("germany.csv");
    let raw = load_country_csv(
        &path,
        "germany",
        SampleWindow::default_for("germany"),
        &ColumnMap::default(),
    )
    .unwrap();
    assert_eq!(raw.len(), 31);
    assert_eq!((raw.start_year(), raw.end_year()), (1960, 1990));
    let full = load_country_csv(&path, "germany", SampleWindow::DEFAULT, &ColumnMap::default()).unwrap();
    assert_eq!(full.len(), 51);
}

#[test]
fn round_trip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let raw = generate(&SyntheticSpec::default()).unwrap().raw;
    let path = dir.path().join("synthetic.csv");
    write_country_csv(&path, &raw).unwrap();
    assert_eq!(read_full(&path, "synthetic", &ColumnMap::default()).unwrap(), raw);
}

#[test]
fn missing_column_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = fixture_text()
        .lines()
        .map(|l| {
            let mut cells: Vec<&str> = l.split(',').collect();
            cells.remove(7);
            cells.join(",") + "\n"
        })
        .collect();
    let path = write(dir.path(), "x.csv", &text);
    match load_country_csv(&path, "x", SampleWindow::DEFAULT, &ColumnMap::default()) {
        Err(IngestError::MissingColumn { column, .. }) => assert_eq!(column, "unemployed"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn interior_gap_in_a_column_is_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "x.csv", &edit_cell(&fixture_text(), 1975, 3, "NA"));
    match load_country_csv(&path, "x", SampleWindow::DEFAULT, &ColumnMap::default()) {
        Err(IngestError::MalformedRow { line, reason, .. }) => {
            assert_eq!(line, 17);
            assert!(reason.contains("gdp_deflator"), "{reason}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn leading_and_trailing_blanks_shrink_the_sample() {
    let dir = tempfile::tempdir().unwrap();
    let text = edit_cell(&edit_cell(&fixture_text(), 1960, 5, ""), 2010, 11, "NA");
    let path = write(dir.path(), "x.csv", &text);
    let raw = load_country_csv(&path, "x", SampleWindow::DEFAULT, &ColumnMap::default()).unwrap();
    assert_eq!((raw.start_year(), raw.end_year()), (1961, 2009));
}

#[test]
fn missing_year_is_a_gap() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = fixture_text()
        .lines()
        .filter(|l| !l.starts_with("1980,"))
        .map(|l| format!("{l}\n"))
        .collect();
    let path = write(dir.path(), "x.csv", &text);
    match load_country_csv(&path, "x", SampleWindow::DEFAULT, &ColumnMap::default()) {
        Err(IngestError::GapInYears { prev, next, .. }) => assert_eq!((prev, next), (1979, 1981)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unordered_years_and_bad_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let mut lines: Vec<String> = fixture_text().lines().map(String::from).collect();
    let repeated = lines[4].clone();
    lines.insert(5, repeated);
    let path = write(dir.path(), "a.csv", &lines.join("\n"));
    assert!(matches!(
        load_country_csv(&path, "a", SampleWindow::DEFAULT, &ColumnMap::default()),
        Err(IngestError::MalformedRow { .. })
    ));
    let path = write(dir.path(), "b.csv", &edit_cell(&fixture_text(), 1990, 2, "1,5e3"));
    assert!(matches!(
        load_country_csv(&path, "b", SampleWindow::DEFAULT, &ColumnMap::default()),
        Err(IngestError::MalformedRow { .. })
    ));
}

#[test]
fn invalid_values_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "x.csv", &edit_cell(&fixture_text(), 1990, 5, "-3"));
    assert!(matches!(
        load_country_csv(&path, "x", SampleWindow::DEFAULT, &ColumnMap::default()),
        Err(IngestError::Invalid { .. })
    ));
}

#[test]
fn window_outside_the_data() {
    let path = data_dir().join("benchmark.csv");
    let w = SampleWindow {
        first: 2020,
        last: 2030,
    };
    assert!(matches!(
        load_country_csv(&path, "x", w, &ColumnMap::default()),
        Err(IngestError::EmptyWindow { .. })
    ));
}

#[test]
fn missing_file_is_io() {
    let err = load_country_csv(
        Path::new("/nonexistent/x.csv"),
        "x",
        SampleWindow::DEFAULT,
        &ColumnMap::default(),
    );
    assert!(matches!(err, Err(IngestError::Io { .. })));
}

#[test]
fn comments_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "x.csv", &format!("# exported 2010\n{}", fixture_text()));
    let raw = load_country_csv(&path, "x", SampleWindow::DEFAULT, &ColumnMap::default()).unwrap();
    assert_eq!(raw.len(), 51);
}

#[test]
fn mapping_file_renames_headers() {
    let dir = tempfile::tempdir().unwrap();
    let example = data_dir().join("columns.example.toml");
    let map = ColumnMap::load(&example).unwrap();
    let text = fixture_text();
    let (header, body) = text.split_once('\n').unwrap();
    let renamed: Vec<&str> = header.split(',').map(|h| map.source_name(h)).collect();
    let path = write(dir.path(), "x.csv", &format!("{}\n{body}", renamed.join(",")));
    let raw = load_country_csv(&path, "benchmark", SampleWindow::DEFAULT, &map).unwrap();
    assert_eq!(raw, generate(&SyntheticSpec::benchmark()).unwrap().raw);
    // the canonical headers no longer match
    let plain = load_country_csv(&path, "benchmark", SampleWindow::DEFAULT, &ColumnMap::default());
    assert!(matches!(plain, Err(IngestError::MissingColumn { .. })));
}

#[test]
fn mapping_rejects_unknown_columns() {
    let mut renames = BTreeMap::new();
    renames.insert("wages".to_string(), "W".to_string());
    assert!(ColumnMap::new(renames).is_err());
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "m.toml", "[columns]\nunemployed = 3\n");
    assert!(matches!(ColumnMap::load(&path), Err(IngestError::Mapping { .. })));
    assert_eq!(RAW_COLUMNS.len(), 11);
}
