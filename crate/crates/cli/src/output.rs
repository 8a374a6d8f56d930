use std::collections::BTreeMap;
use std::fs;

use anyhow::{Context, Result};
use psieve_core::report::{fmt_float, to_json, Table};
use serde::Serialize;
use serde_json::Value;

use crate::{Format, Global};

/// A cell of a generic report row.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Cell {
    U(u64),
    F(f64),
    B(bool),
    S(String),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::U(v) => v.to_string(),
            Cell::F(v) => fmt_float(*v),
            Cell::B(v) => v.to_string(),
            Cell::S(v) => v.clone(),
            Cell::Null => String::new(),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// Rows sharing a fixed column list. JSON form: `{"rows": [{...}, ...]}`.
pub struct Rows {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Rows {
    pub fn new(columns: &[&'static str]) -> Self {
        Rows { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut t = Table::new(self.columns.iter().copied());
                for r in &self.rows {
                    t.push(r.iter().map(Cell::csv).collect());
                }
                Ok(t.to_csv())
            }
            Format::Json => {
                let rows: Vec<BTreeMap<&str, &Cell>> =
                    self.rows.iter().map(|r| self.columns.iter().copied().zip(r).collect()).collect();
                let mut obj = BTreeMap::new();
                obj.insert("rows", serde_json::to_value(rows)?);
                Ok(to_json(&obj)?)
            }
        }
    }
}

/// JSON for a typed report.
pub fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(to_json(v)?)
}

/// JSON object from key/value pairs.
pub fn json_object(pairs: Vec<(&str, Value)>) -> Result<String> {
    let map: BTreeMap<&str, Value> = pairs.into_iter().collect();
    Ok(to_json(&map)?)
}

pub fn write(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
