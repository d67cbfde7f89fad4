//! Report assembly and output files.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// A named numerical check `value ≤ limit` (or `≥`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: &'static str,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, relation: "<=", limit, pass: value <= limit }
    }

    pub fn ge(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, relation: ">=", limit, pass: value >= limit }
    }

    /// A boolean condition, recorded as `1 ≥ 1` or `0 ≥ 1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::ge(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }
}

/// Result of one experiment run: the JSON report body, an optional CSV table
/// and the checks that decide the exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub results: Value,
    pub constants: Value,
    pub checks: Vec<Check>,
    pub csv: Option<Vec<u8>>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The full JSON document: config, constants, results, checks, status.
    pub fn document(&self, config: &ExperimentConfig) -> Value {
        json!({
            "experiment": config.experiment,
            "config": config,
            "constants": self.constants,
            "results": self.results,
            "checks": self.checks,
            "status": if self.passed() { "pass" } else { "fail" },
        })
    }

    /// Writes `<out>/<output.json>` and, when present, `<out>/<output.csv>`.
    pub fn write(&self, config: &ExperimentConfig, out: &Path) -> Result<(), CliError> {
        std::fs::create_dir_all(out)?;
        let mut text = serde_json::to_string_pretty(&self.document(config))?;
        text.push('\n');
        std::fs::write(out.join(&config.output.json), text)?;
        if let Some(csv) = &self.csv {
            std::fs::write(out.join(&config.output.csv), csv)?;
        }
        Ok(())
    }
}

/// Serialises `rows` as CSV with a header taken from the row type.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
