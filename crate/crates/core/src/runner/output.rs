//! Tabular results and their CSV form.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::RunnerError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    /// Undefined value, written as an empty field.
    Missing,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }

    pub fn flag(b: bool) -> Self {
        Cell::Int(b as i64)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(x) => Some(x),
            Cell::Int(i) => Some(i as f64),
            Cell::Missing => None,
        }
    }

    fn render(&self) -> String {
        match *self {
            Cell::Num(x) if x.is_finite() => format_float(x),
            Cell::Int(i) => i.to_string(),
            _ => String::new(),
        }
    }
}

/// Nine significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.8e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem of the CSV.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Vec<(String, String)>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx].as_f64()).collect())
    }

    /// CSV text: `#` metadata lines (each config line echoed), header, rows.
    pub fn to_csv(&self, preamble: &[(String, String)], config_toml: &str) -> Result<String, RunnerError> {
        let mut out = String::new();
        for (k, v) in preamble.iter().chain(&self.metadata) {
            let _ = writeln!(out, "# {k}: {v}");
        }
        for line in config_toml.lines() {
            let _ = writeln!(out, "{}", format!("# config | {line}").trim_end());
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_error)?;
        }
        let body = w.into_inner().map_err(|e| RunnerError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| RunnerError::Io(e.to_string()))?);
        Ok(out)
    }

    pub fn write(&self, dir: &Path, preamble: &[(String, String)], config_toml: &str) -> Result<PathBuf, RunnerError> {
        let path = dir.join(format!("{}.csv", self.name));
        let text = self.to_csv(preamble, config_toml)?;
        std::fs::write(&path, text).map_err(|e| RunnerError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

fn csv_error(e: csv::Error) -> RunnerError {
    RunnerError::Io(e.to_string())
}
