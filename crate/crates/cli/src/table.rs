//! Tabular output as CSV (with a config comment line) or JSON, written atomically.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(u64::from(v))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // shortest round-trip form; scientific outside [1e-4, 1e16)
            Cell::Num(v) if *v != 0.0 && v.is_finite() && !(1e-4..1e16).contains(&v.abs()) => format!("{v:e}"),
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => Value::from(*v),
            Cell::Num(v) => Value::from(v.to_string()),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render<C: Serialize>(&self, format: Format, config: &C) -> String {
        match format {
            Format::Csv => {
                let mut out = format!("# config: {}\n", serde_json::to_string(config).expect("config serializes"));
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = serde_json::json!({ "config": config, "rows": rows });
                let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
                s.push('\n');
                s
            }
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> std::io::Result<()> {
    match path {
        None => std::io::stdout().lock().write_all(contents.as_bytes()),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(contents.as_bytes())?;
            tmp.flush()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
