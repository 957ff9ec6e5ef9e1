//! Output artifacts: CSV/JSON tables, JSON reports, and the run manifest
//! written alongside every artifact.
//!
//! CSV uses a `.` decimal separator, `\n` newlines, a header row, and
//! shortest-round-trip float formatting, so values re-parsed from a CSV are
//! bit-identical to the originals. JSON mirrors the same column names.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use uowc_core::RawParams;

use crate::CliError;

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    /// A float, emitted with shortest round-trip formatting.
    F(f64),
    /// An unsigned integer.
    U(u64),
    /// A boolean (`true`/`false`).
    B(bool),
    /// A plain string (must not contain separators).
    S(String),
    /// Missing value: empty CSV field, JSON `null`.
    Empty,
}

impl Cell {
    /// Optional float helper.
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::F)
    }

    fn csv(&self) -> String {
        match self {
            Cell::F(v) => format!("{v}"),
            Cell::U(v) => format!("{v}"),
            Cell::B(v) => format!("{v}"),
            Cell::S(v) => v.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::F(v) => serde_json::json!(v),
            Cell::U(v) => serde_json::json!(v),
            Cell::B(v) => serde_json::json!(v),
            Cell::S(v) => serde_json::json!(v),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// A column-named table, the payload of every sweep-style command.
#[derive(Debug, Clone)]
pub struct Table {
    /// Column names, in emission order.
    pub columns: Vec<&'static str>,
    /// Rows; each row must match the column count.
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// New empty table with the given header.
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    /// Append a row.
    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Render as CSV (header always present, even for empty tables).
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Render as a JSON array of column-keyed objects.
    pub fn to_json(&self) -> String {
        let arr: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    obj.insert((*name).to_string(), cell.json());
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&arr).expect("table serializes");
        s.push('\n');
        s
    }
}

/// Output format for data artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Comma-separated values.
    Csv,
    /// JSON array of objects.
    Json,
}

/// Provenance record written next to every artifact; feeding `params` back
/// as a config file with the same seed reproduces the artifact byte-for-byte.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// Command (or figure) that produced the artifact.
    pub command: String,
    /// Tool version.
    pub version: String,
    /// RNG seed in effect.
    pub seed: u64,
    /// Worker threads in effect.
    pub workers: usize,
    /// Effective parameters, file units (angles in degrees).
    pub params: RawParams,
    /// Artifact paths written by the run.
    pub outputs: Vec<String>,
    /// Wall-clock time of the run (UNIX seconds); informational only and
    /// deliberately excluded from the data artifacts themselves.
    pub timestamp_unix_s: u64,
}

/// Writer that drops artifacts plus their manifest into the output directory.
pub struct Emitter {
    dir: PathBuf,
    format: Format,
    stem: String,
    outputs: Vec<String>,
}

impl Emitter {
    /// Prepare an emitter for command `stem` under `dir`.
    pub fn new(dir: &Path, stem: &str, format: Format) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), format, stem: stem.to_string(), outputs: Vec::new() })
    }

    fn write(&mut self, path: &Path, contents: &str) -> Result<(), CliError> {
        let mut f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        f.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }

    /// Emit a table under the command stem (or `<stem>-<suffix>`).
    pub fn table(&mut self, suffix: Option<&str>, table: &Table) -> Result<PathBuf, CliError> {
        let name = match suffix {
            Some(s) => format!("{}-{s}", self.stem),
            None => self.stem.clone(),
        };
        let (ext, body) = match self.format {
            Format::Csv => ("csv", table.to_csv()),
            Format::Json => ("json", table.to_json()),
        };
        let path = self.dir.join(format!("{name}.{ext}"));
        self.write(&path.clone(), &body)?;
        Ok(path)
    }

    /// Emit a single JSON report (independent of the table format flag).
    pub fn json_report<T: Serialize>(&mut self, report: &T) -> Result<PathBuf, CliError> {
        let path = self.dir.join(format!("{}.json", self.stem));
        let mut body = serde_json::to_string_pretty(report).expect("report serializes");
        body.push('\n');
        self.write(&path.clone(), &body)?;
        Ok(path)
    }

    /// Write the manifest and finish.
    pub fn finish(self, command: &str, params: &RawParams, seed: u64, workers: usize) -> Result<(), CliError> {
        let manifest = RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            workers,
            params: params.clone(),
            outputs: self.outputs.clone(),
            timestamp_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let path = self.dir.join(format!("{}.manifest.json", self.stem));
        let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        body.push('\n');
        fs::File::create(&path)
            .and_then(|mut f| f.write_all(body.as_bytes()))
            .map_err(|e| CliError::io(&path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_full_precision() {
        let mut t = Table::new(vec!["x", "flag", "note"]);
        let values = [0.1 + 0.2, 1.0 / 3.0, 5.490137065726458e-6, f64::MIN_POSITIVE];
        for &v in &values {
            t.push(vec![Cell::F(v), Cell::B(true), Cell::S("a".into())]);
        }
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "x,flag,note");
        for (line, &want) in lines.zip(&values) {
            let field = line.split(',').next().unwrap();
            let parsed: f64 = field.parse().unwrap();
            assert_eq!(parsed.to_bits(), want.to_bits(), "lossy CSV field {field}");
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(vec!["a", "b"]);
        assert_eq!(t.to_csv(), "a,b\n");
        assert_eq!(t.to_json().trim(), "[]");
    }

    #[test]
    fn json_and_csv_carry_equal_values() {
        let mut t = Table::new(vec!["v", "missing"]);
        t.push(vec![Cell::F(2.5e-7), Cell::Empty]);
        let csv_field: f64 = t.to_csv().lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(json[0]["v"].as_f64().unwrap().to_bits(), csv_field.to_bits());
        assert!(json[0]["missing"].is_null());
        assert!(t.to_csv().lines().nth(1).unwrap().ends_with(','));
    }
}
