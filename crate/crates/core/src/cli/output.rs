//! CSV and JSON rendering of result tables.

use serde_json::{json, Map, Value};

use super::config::{Format, ScenarioConfig, SCHEMA_VERSION};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    B(bool),
    S(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// 17 significant digits, which round-trips every f64.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(v) => format_float(*v),
            Cell::I(v) => v.to_string(),
            Cell::B(v) => v.to_string(),
            Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // JSON has no non-finite numbers.
            Cell::F(v) if v.is_finite() => json!(v),
            Cell::F(v) => json!(format_float(*v)),
            Cell::I(v) => json!(v),
            Cell::B(v) => json!(v),
            Cell::S(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Table {
            command,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, config: &ScenarioConfig) -> String {
        match format {
            Format::Csv => self.csv(config),
            Format::Json => self.json(config),
        }
    }

    fn csv(&self, config: &ScenarioConfig) -> String {
        let resolved = serde_json::to_string(&config_value(config)).expect("config serializes");
        let mut out = format!(
            "# schema_version={SCHEMA_VERSION}\n# tool={TOOL_VERSION}\n# command={}\n# config={resolved}\n",
            self.command
        );
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self, config: &ScenarioConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("tool".into(), json!(TOOL_VERSION));
        doc.insert("command".into(), json!(self.command));
        doc.insert("config".into(), config_value(config));
        doc.insert("columns".into(), json!(self.columns));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json serializes");
        s.push('\n');
        s
    }
}

/// Resolved configuration with defaults filled in; keys are sorted.
pub fn config_value(config: &ScenarioConfig) -> Value {
    serde_json::to_value(config).expect("config serializes")
}
