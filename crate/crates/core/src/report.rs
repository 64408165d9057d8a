//! Tabular command output rendered as CSV or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::scalar::{format_decimal, format_rational, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(i64),
    Rat(Q),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self, decimals: Option<usize>) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Rat(v) => match decimals {
                Some(d) => format_decimal(v, d),
                None => format_rational(v),
            },
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self, decimals: Option<usize>) -> serde_json::Value {
        match self {
            Cell::Int(v) => (*v).into(),
            Cell::Bool(b) => (*b).into(),
            Cell::Empty => serde_json::Value::Null,
            other => other.render(decimals).into(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Q> for Cell {
    fn from(v: Q) -> Self {
        Cell::Rat(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    /// Ordered run metadata: model hash, seed, options, version.
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
    /// Structured payload such as a certificate, emitted in JSON output.
    pub payload: Option<serde_json::Value>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    command: &'a str,
    metadata: &'a BTreeMap<String, String>,
    columns: &'a [String],
    rows: Vec<Vec<serde_json::Value>>,
    notes: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    payload: Option<&'a serde_json::Value>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            metadata: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
            payload: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Metadata, notes and payload as `#` comment lines, then the header and
    /// rows.
    pub fn to_csv(&self, decimals: Option<usize>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# tropdeg {}", self.command);
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        if let Some(p) = &self.payload {
            let _ = writeln!(out, "# payload: {p}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_field(&c.render(decimals))).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self, decimals: Option<usize>) -> String {
        let j = JsonReport {
            command: &self.command,
            metadata: &self.metadata,
            columns: &self.columns,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| c.json(decimals)).collect())
                .collect(),
            notes: &self.notes,
            payload: self.payload.as_ref(),
        };
        let mut s = serde_json::to_string_pretty(&j).expect("report serializes");
        s.push('\n');
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
