//! Deterministic CSV/JSON emission and the run manifest.
//!
//! CSV: comma separated, '.' decimal, one header row, LF line endings,
//! floats at 17 significant digits so identical runs are byte-identical.

use std::fmt::Write as FmtWrite;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(i64),
    UInt(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // 17 significant digits; round-trips every f64.
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// A rectangular table for CSV export.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON view: an array of objects keyed by the header.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (key, cell) in self.header.iter().zip(row) {
                    let v = match cell {
                        Cell::Float(x) => serde_json::json!(x),
                        Cell::Int(x) => serde_json::json!(x),
                        Cell::UInt(x) => serde_json::json!(x),
                        Cell::Text(s) => serde_json::json!(s),
                    };
                    obj.insert(key.clone(), v);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// Collects output files for one run and writes them under a directory.
pub struct OutputSink {
    dir: PathBuf,
    format: Format,
    written: Vec<String>,
}

impl OutputSink {
    pub fn new(dir: &Path, format: Format) -> anyhow::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), format, written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// Writes a table as CSV (always) and additionally as JSON when the
    /// JSON format is selected.
    pub fn write_table(&mut self, name: &str, table: &Table) -> anyhow::Result<()> {
        self.write_raw(&format!("{name}.csv"), table.to_csv().as_bytes())?;
        if self.format == Format::Json {
            let mut text = serde_json::to_string_pretty(&table.to_json())?;
            text.push('\n');
            self.write_raw(&format!("{name}.json"), text.as_bytes())?;
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_raw(&format!("{name}.json"), text.as_bytes())
    }

    pub fn write_raw(&mut self, file_name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let path = self.dir.join(file_name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, bytes)?;
        self.written.push(file_name.to_string());
        Ok(())
    }
}

/// Record of one completed run; rerunning the embedded config with the same
/// seed reproduces the data files byte for byte (the manifest itself holds
/// the wall-clock duration and may differ).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub rng_algorithm: String,
    pub duration_seconds: f64,
    pub outputs: Vec<String>,
    /// The exact config (parseable by `--config`) that produced the run.
    pub config: serde_json::Value,
}

/// Renders an aligned key/value block for terminal summaries.
pub fn aligned_block(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in pairs {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_formatting() {
        let mut t = Table::new(["a", "b", "n"]);
        t.push(vec![Cell::Float(1.0 / 3.0), Cell::Float(2.5e6), Cell::UInt(42)]);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "a,b,n");
        let row = lines.next().unwrap();
        assert!(row.starts_with("3.3333333333333331e-1,"));
        assert!(row.ends_with(",42"));
        // LF endings only.
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn float_cells_round_trip() {
        for v in [std::f64::consts::PI, 1e-300, 6.02214076e23, -0.1] {
            let rendered = Cell::Float(v).render();
            let back: f64 = rendered.parse().unwrap();
            assert_eq!(back, v, "{rendered}");
        }
    }
}
