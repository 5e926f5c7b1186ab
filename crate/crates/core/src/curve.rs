//! Tabulated yield curves and their CSV form.
//!
//! Numbers are written as the shortest decimal that round-trips to the same
//! `f64`, with `,` as delimiter and LF line endings.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{contract, DistillError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YieldCurve {
    /// Column names; the first is the swept parameter.
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Shortest round-trip decimal, with negative zero printed as `0`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

impl YieldCurve {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(contract(format!("row has {} values, header has {}", row.len(), self.header.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| DistillError::Config("empty CSV".into()))?;
        let mut curve = Self::new(header.split(',').map(str::trim));
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|_| DistillError::Config(format!("row {}: bad number '{c}'", i + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            curve.push_row(row)?;
        }
        Ok(curve)
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}
