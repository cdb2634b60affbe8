use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// One asserted invariant with its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// `value ≤ bound`.
    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value: value.into(), bound: Some(bound), pass: value <= bound }
    }

    /// `value ≥ bound`.
    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value: value.into(), bound: Some(bound), pass: value >= bound }
    }

    pub fn holds(name: &str, pass: bool) -> Self {
        Check { name: name.into(), value: pass.into(), bound: None, pass }
    }
}

/// A plot series written as CSV.
#[derive(Clone, Debug, Default)]
pub struct Series {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(header: &[&str]) -> Self {
        Series { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        writeln!(f, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            writeln!(f, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// What a scenario computes, before the run metadata is attached.
pub struct Outcome {
    pub values: Value,
    pub checks: Vec<Check>,
    pub series: Option<Series>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub params: Value,
    pub values: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub wall_time_s: f64,
}
