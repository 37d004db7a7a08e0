//! Tables and their CSV/JSON encodings.
//!
//! CSV numbers use the shortest representation that parses back to the same
//! `f64`. JSON writes `NaN` as `null`.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::args::Format;
use crate::CliError;

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Cell::Num(a), Cell::Num(b)) => {
                a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
            }
            (Cell::Int(a), Cell::Int(b)) => a == b,
            (Cell::Text(a), Cell::Text(b)) => a == b,
            _ => false,
        }
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }

    fn from_json(v: &Value) -> Result<Cell, String> {
        match v {
            Value::Null => Ok(Cell::Num(f64::NAN)),
            Value::Number(n) if n.is_i64() => Ok(Cell::Int(n.as_i64().unwrap_or_default())),
            Value::Number(n) => n
                .as_f64()
                .map(Cell::Num)
                .ok_or_else(|| format!("unrepresentable number {n}")),
            Value::String(s) => Ok(Cell::Text(s.clone())),
            other => Err(format!("unexpected cell value {other}")),
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Shortest text that parses back to `x`, switching to exponent notation
/// outside `[1e-5, 1e16)` so that tiny values stay short.
pub fn format_number(x: f64) -> String {
    let mag = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&mag) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: String,
    pub params: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(schema: &str, columns: &[&str]) -> Self {
        Table {
            schema: schema.to_string(),
            params: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        let value = value.into();
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Converts the named numeric columns from radians to degrees.
    pub fn to_degrees(&mut self, angle_columns: &[&str]) {
        let idx: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .filter(|(_, c)| angle_columns.contains(&c.as_str()))
            .map(|(i, _)| i)
            .collect();
        for row in &mut self.rows {
            for &i in &idx {
                if let Cell::Num(x) = row[i] {
                    row[i] = Cell::Num(x.to_degrees());
                }
            }
        }
        self.params.insert("angle_unit".into(), Value::from("deg"));
    }

    pub fn to_json_value(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(r.iter().map(Cell::to_json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut out = Map::new();
        out.insert("schema".into(), Value::from(self.schema.as_str()));
        out.insert("params".into(), Value::Object(self.params.clone()));
        out.insert("rows".into(), Value::Array(rows));
        Value::Object(out)
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value())
            .expect("table values are always serializable");
        s.push('\n');
        s
    }

    /// Inverse of [`Table::render_json`]. Column order follows the first row,
    /// so an empty table comes back without columns.
    pub fn parse_json(text: &str) -> Result<Table, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let schema = v["schema"].as_str().ok_or("missing schema")?.to_string();
        let params = v["params"].as_object().ok_or("missing params")?.clone();
        let raw_rows = v["rows"].as_array().ok_or("missing rows")?;
        let columns: Vec<String> = match raw_rows.first() {
            Some(Value::Object(o)) => o.keys().cloned().collect(),
            _ => Vec::new(),
        };
        let rows = raw_rows
            .iter()
            .map(|r| {
                columns
                    .iter()
                    .map(|c| Cell::from_json(&r[c.as_str()]))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Table {
            schema,
            params,
            columns,
            rows,
        })
    }

    pub fn render_csv(&self, header: bool) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        if header {
            w.write_record(&self.columns).expect("in-memory write");
        }
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))
                .expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("cells are UTF-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(true),
            Format::Json => self.render_json(),
        }
    }
}

/// Writes to `path` or, when absent, to standard output.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
