use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::tradestudy::ENGINE_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Cell::Num(v)
        } else {
            Cell::Empty
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::from)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
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

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub column: Column,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub column: Column,
    /// `values[row][col]`; `None` marks a cell without a value.
    pub values: Vec<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Payload {
    Table {
        columns: Vec<Column>,
        rows: Vec<Vec<Cell>>,
    },
    Series {
        x: Column,
        x_values: Vec<f64>,
        lines: Vec<Line>,
    },
    Matrix {
        row_axis: Column,
        row_values: Vec<f64>,
        col_axis: Column,
        col_values: Vec<f64>,
        layers: Vec<Layer>,
    },
}

impl Payload {
    pub fn shape_name(&self) -> &'static str {
        match self {
            Payload::Table { .. } => "table",
            Payload::Series { .. } => "series",
            Payload::Matrix { .. } => "matrix",
        }
    }

    /// Columns in CSV order.
    pub fn columns(&self) -> Vec<&Column> {
        match self {
            Payload::Table { columns, .. } => columns.iter().collect(),
            Payload::Series { x, lines, .. } => std::iter::once(x).chain(lines.iter().map(|l| &l.column)).collect(),
            Payload::Matrix {
                row_axis,
                col_axis,
                layers,
                ..
            } => [row_axis, col_axis]
                .into_iter()
                .chain(layers.iter().map(|l| &l.column))
                .collect(),
        }
    }
}

/// A result with its provenance: which scenario, which engine, when.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub scenario_hash: String,
    pub tool_version: String,
    pub timestamp_utc: String,
    pub title: String,
    /// Unit of every column, keyed by column name.
    pub units: BTreeMap<String, String>,
    pub metadata: BTreeMap<String, Value>,
    pub payload: Payload,
}

impl ResultEnvelope {
    pub fn new(
        scenario_hash: impl Into<String>,
        timestamp_utc: impl Into<String>,
        title: impl Into<String>,
        payload: Payload,
    ) -> Self {
        let units = payload
            .columns()
            .into_iter()
            .map(|c| (c.name.clone(), c.unit.clone()))
            .collect();
        Self {
            scenario_hash: scenario_hash.into(),
            tool_version: ENGINE_VERSION.to_string(),
            timestamp_utc: timestamp_utc.into(),
            title: title.into(),
            units,
            metadata: BTreeMap::new(),
            payload,
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }
}

/// Current UTC time in RFC 3339, or `SOURCE_DATE_EPOCH` when set so runs
/// can be made byte-reproducible.
pub fn timestamp_now() -> String {
    let ts = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(chrono::Utc::now);
    ts.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
