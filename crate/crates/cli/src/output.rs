// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Result bundles: CSV tables plus `metadata.json`.
//!
//! Floats are written with `{:?}`, the shortest representation that parses
//! back to the same value, so identical runs give identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

/// One CSV cell.
pub enum Cell {
    F(f64),
    I(usize),
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
        Cell::I(v)
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

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::F)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => format!("{v:?}"),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Everything needed to understand and re-run a result.
#[derive(Debug, Serialize)]
pub struct Metadata {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub source: String,
    /// The configuration as parsed, with every key spelled out.
    pub config: Value,
    /// Quantities derived from the configuration (Rabi frequencies, grids...).
    pub resolved: Value,
    /// Modelling choices in effect for this command.
    pub decisions: Vec<String>,
    pub accuracy: Value,
    pub warnings: Vec<String>,
    pub files: Vec<String>,
}

impl Metadata {
    pub fn new(command: &'static str, source: String, config: &impl Serialize) -> Result<Self> {
        Ok(Self {
            toolkit: "peit",
            version: env!("CARGO_PKG_VERSION"),
            command,
            source,
            config: serde_json::to_value(config)?,
            resolved: Value::Null,
            decisions: Vec::new(),
            accuracy: Value::Null,
            warnings: Vec::new(),
            files: Vec::new(),
        })
    }
}

/// Writes `tables` and `metadata.json` into `dir`, returning the paths.
pub fn write_bundle(dir: &Path, tables: &[(&str, &Table)], meta: &mut Metadata) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, table) in tables {
        let p = dir.join(name);
        table.write(&p)?;
        meta.files.push((*name).to_string());
        paths.push(p);
    }
    let p = dir.join("metadata.json");
    fs::write(&p, serde_json::to_string_pretty(meta)? + "\n")?;
    paths.push(p);
    Ok(paths)
}
