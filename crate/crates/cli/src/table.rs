use std::fmt::Write as _;

use serde_json::{json, Value};

/// One table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    /// Plain label without commas or quotes.
    Text(&'static str),
    /// Undefined value, written as `NaN` in CSV and `null` in JSON.
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Real)
    }
}

/// A named output table with fixed columns and units.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub units: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, spec: &[(&'static str, &'static str)]) -> Self {
        Table {
            name: name.into(),
            columns: spec.iter().map(|c| c.0).collect(),
            units: spec.iter().map(|c| c.1).collect(),
            rows: Vec::new(),
        }
    }

    /// CSV with a header row; reals carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Int(v) => write!(out, "{v}").unwrap(),
                    Cell::Text(v) => out.push_str(v),
                    Cell::Real(v) if v.is_finite() => write!(out, "{v:.16e}").unwrap(),
                    Cell::Real(_) | Cell::Missing => out.push_str("NaN"),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|c| match c {
                            Cell::Int(v) => json!(v),
                            Cell::Text(v) => json!(v),
                            Cell::Real(v) if v.is_finite() => json!(v),
                            Cell::Real(_) | Cell::Missing => Value::Null,
                        })
                        .collect(),
                )
            })
            .collect();
        let doc = json!({
            "table": self.name,
            "columns": self.columns,
            "units": self.units,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
        text.push('\n');
        text
    }
}
