//! Tabular results: CSV with six significant digits, JSON with full precision.

use std::path::{Path, PathBuf};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: Option<String>,
}

impl Column {
    pub fn header(&self) -> String {
        match &self.unit {
            Some(u) => format!("{}[{u}]", self.name),
            None => self.name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<Option<usize>> for Cell {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Cell::Empty, Cell::from)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<bool>> for Cell {
    fn from(v: Option<bool>) -> Self {
        v.map_or(Cell::Empty, Cell::Bool)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    pub fn csv_text(&self) -> String {
        match self {
            Cell::Num(v) => format_sig(*v, 6),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Num(v) => s.serialize_str(&format_sig(*v, 6)),
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Empty => s.serialize_none(),
        }
    }
}

/// `%g`-style rendering with `digits` significant digits; `inf`, `-inf`, `nan` for non-finite values.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let precision = digits.saturating_sub(1);
    let sci = format!("{v:.precision$e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (precision as i32 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl ResultTable {
    /// Columns as `(name, unit)`; an empty unit means dimensionless.
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns
                .iter()
                .map(|(n, u)| Column {
                    name: n.to_string(),
                    unit: (!u.is_empty()).then(|| u.to_string()),
                })
                .collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match the {} columns of {}",
            self.columns.len(),
            self.name
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(self.columns.iter().map(Column::header))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    /// Writes `<dir>/<name>.<ext>` and returns the path.
    pub fn write(&self, dir: &Path, format: Format) -> CliResult<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.{}", self.name, format.extension()));
        let text = match format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json()?,
        };
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

impl Serialize for ResultTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("name", &self.name)?;
        m.serialize_entry("columns", &self.columns)?;
        m.serialize_entry("rows", &self.rows)?;
        m.serialize_entry("notes", &self.notes)?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(29.305_084, 6), "29.3051");
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(-1.5, 6), "-1.5");
        assert_eq!(format_sig(123_456_789.0, 6), "1.23457e8");
        assert_eq!(format_sig(999_999.7, 6), "1e6");
        assert_eq!(format_sig(0.000_012_345_67, 6), "1.23457e-5");
        assert_eq!(format_sig(0.000_123_456_7, 6), "0.000123457");
        assert_eq!(format_sig(84.300_000_000_01, 6), "84.3");
        assert_eq!(format_sig(f64::INFINITY, 6), "inf");
        assert_eq!(format_sig(100.0, 6), "100");
    }

    #[test]
    fn csv_layout() {
        let mut t = ResultTable::new("t", &[("prn", ""), ("range_bias", "m")]);
        t.push(vec![18u32.into(), 39.937_421.into()]);
        t.push(vec![23u32.into(), Cell::Empty]);
        assert_eq!(t.to_csv().unwrap(), "prn,range_bias[m]\n18,39.9374\n23,\n");
    }

    #[test]
    fn json_keeps_full_precision() {
        let mut t = ResultTable::new("t", &[("x", "m")]);
        t.push(vec![0.1f64.into()]);
        t.push(vec![f64::INFINITY.into()]);
        let v: serde_json::Value = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(v["rows"][0][0].as_f64(), Some(0.1));
        assert_eq!(v["rows"][1][0], "inf");
    }

    #[test]
    #[should_panic]
    fn ragged_rows_rejected() {
        let mut t = ResultTable::new("t", &[("a", ""), ("b", "")]);
        t.push(vec![1.0.into()]);
    }
}
