//! Report documents and their JSON/CSV encodings.
//!
//! Every command produces one or more [`Table`]s. JSON output nests them in a
//! document with sorted keys and floats at 17 significant digits; CSV output
//! writes the rows with the table's own column order.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rows with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let map: Map<String, Value> =
                        self.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect();
                    Value::Object(map)
                })
                .collect(),
        )
    }
}

/// A float cell; non-finite values become strings so they survive JSON.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
    } else {
        Value::String(format!("{x}"))
    }
}

pub fn int(x: impl Into<i64>) -> Value {
    Value::from(x.into())
}

pub fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

pub struct Document {
    pub command: Value,
    pub tables: Vec<Table>,
    pub seed: Option<u64>,
    pub wall_time: Option<f64>,
}

impl Document {
    pub fn to_value(&self) -> Value {
        let mut results = Map::new();
        for t in &self.tables {
            results.insert(t.name.to_string(), t.to_json());
        }
        let mut provenance = Map::new();
        provenance.insert("build".into(), text(concat!("gkf ", env!("CARGO_PKG_VERSION"))));
        if let Some(seed) = self.seed {
            provenance.insert("seed".into(), Value::from(seed));
        }
        if let Some(t) = self.wall_time {
            provenance.insert("wall_time_s".into(), num(t));
        }
        let mut doc = Map::new();
        doc.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        doc.insert("command".into(), self.command.clone());
        doc.insert("results".into(), Value::Object(results));
        doc.insert("provenance".into(), Value::Object(provenance));
        Value::Object(doc)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut out = String::new();
                write_json(&self.to_value(), 0, &mut out);
                out.push('\n');
                Ok(out)
            }
            Format::Csv => {
                let mut out = String::new();
                for (i, t) in self.tables.iter().enumerate() {
                    if self.tables.len() > 1 {
                        if i > 0 {
                            out.push('\n');
                        }
                        let _ = writeln!(out, "# {}", t.name);
                    }
                    out.push_str(&write_csv(t)?);
                }
                Ok(out)
            }
        }
    }
}

/// Floats at 17 significant digits; integers as integers.
pub fn format_number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN))
    } else {
        n.to_string()
    }
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&format_number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            // serde_json's default map is ordered by key
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => format_number(n),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_csv(t: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.columns)?;
    for row in &t.rows {
        w.write_record(row.iter().map(csv_cell))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}
