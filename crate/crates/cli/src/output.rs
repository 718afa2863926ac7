//! Deterministic CSV and JSON emission.
//!
//! CSV cells use Rust's shortest round-trip float formatting, the header row
//! is mandatory, and row order is fixed by the callers, so identical runs
//! produce byte-identical artifacts.

use crate::config::{ConfigError, OutputFormat, OutputSpec};
use serde::Serialize;
use std::io::Write;

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Bool(v) => write!(f, "{v}"),
            Cell::Text(v) => write!(f, "{v}"),
        }
    }
}

/// A rectangular table with named columns, plus optional trailer comments.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Emitted after the data as `# key: value` lines (CSV only).
    pub trailers: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new(), trailers: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (key, value) in &self.trailers {
            out.push_str(&format!("# {key}: {value}\n"));
        }
        out
    }

    fn to_json(&self) -> String {
        let mut objects = Vec::new();
        for row in &self.rows {
            let mut map = serde_json::Map::new();
            for (name, cell) in self.columns.iter().zip(row) {
                let value = match cell {
                    Cell::Int(v) => serde_json::json!(v),
                    Cell::Float(v) => serde_json::json!(v),
                    Cell::Bool(v) => serde_json::json!(v),
                    Cell::Text(v) => serde_json::json!(v),
                };
                map.insert((*name).to_string(), value);
            }
            objects.push(serde_json::Value::Object(map));
        }
        let mut root = serde_json::Map::new();
        root.insert("rows".to_string(), serde_json::Value::Array(objects));
        for (key, value) in &self.trailers {
            root.insert(key.clone(), serde_json::json!(value));
        }
        serde_json::to_string_pretty(&serde_json::Value::Object(root)).unwrap()
    }
}

/// Write a table per the output settings.
pub fn emit_table(table: &Table, output: &OutputSpec) -> Result<(), ConfigError> {
    let text = match output.format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
    };
    write_out(&text, output)
}

/// Write a single JSON document (used by `check`), regardless of format.
pub fn emit_json<T: Serialize>(value: &T, output: &OutputSpec) -> Result<(), ConfigError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| ConfigError(format!("serialization failure: {e}")))?;
    text.push('\n');
    write_out(&text, output)
}

fn write_out(text: &str, output: &OutputSpec) -> Result<(), ConfigError> {
    match &output.path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| ConfigError(format!("cannot write {path}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| ConfigError(format!("stdout write failure: {e}")))
        }
    }
}
