//! Experiment configuration: defaults per experiment, JSON file overlay,
//! `--set` overrides, then strict deserialisation and validation.

use std::f64::consts::PI;
use std::path::Path;

use clap::ValueEnum;
use jaclab::norms::{BumpShape, SearchBudget, SymbolClass, SymbolSpec};
use jaclab::{BeurlingBackend, GridSpec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Identities,
    Regimes,
    Lowerbound,
    Jacobian,
    Sparse,
    Scaling,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Identities => "identities",
            Experiment::Regimes => "regimes",
            Experiment::Lowerbound => "lowerbound",
            Experiment::Jacobian => "jacobian",
            Experiment::Sparse => "sparse",
            Experiment::Scaling => "scaling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
    pub periodic: bool,
}

impl GridConfig {
    /// A grid centred at the origin with these parameters.
    pub fn spec(&self) -> jaclab::Result<GridSpec> {
        self.with_n(self.n)
    }

    pub fn with_n(&self, n: usize) -> jaclab::Result<GridSpec> {
        let half = -0.5 * self.length;
        GridSpec::new(n, self.length, self.periodic, jaclab::Complex64::new(half, half))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exponents {
    pub p: f64,
    pub q: f64,
}

/// One row family of the regime scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeCase {
    pub p: f64,
    pub q: f64,
    pub symbol: SymbolSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub ns: Vec<usize>,
    pub cases: Vec<RegimeCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputNames {
    pub json: String,
    pub csv: String,
}

/// Deliberate faults for exercising failure paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// perturbs the Beurling multiplier on one mode
    CorruptMultiplier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub grid: GridConfig,
    pub exponents: Exponents,
    pub symbol: SymbolSpec,
    /// sign samples, random fields or corpus draws, depending on the experiment
    pub samples: usize,
    pub seed: u64,
    pub backend: BeurlingBackend,
    pub search: SearchBudget,
    /// stopping threshold Λ of sparse decompositions
    pub threshold: f64,
    pub sweep: Sweep,
    /// dilation ladder of the scaling experiment
    pub lambdas: Vec<f64>,
    /// band limit of random test maps
    pub kmax: usize,
    pub output: OutputNames,
    pub fault: Option<Fault>,
}

fn gaussian(scale: f64) -> SymbolSpec {
    SymbolSpec::new(SymbolClass::LrBump { shape: BumpShape::Gaussian, scale, offset: 0.0 })
}

fn default_cases() -> Vec<RegimeCase> {
    let case = |p: f64, q: f64, symbol: SymbolSpec| RegimeCase { p, q, symbol };
    let constant = SymbolSpec::new(SymbolClass::Constant { value: 1.5 });
    vec![
        case(2.0, 2.0, constant.clone()),
        case(2.0, 4.0, constant.clone()),
        case(1.5, 12.0, constant.clone()),
        case(4.0, 2.0, constant),
        case(2.0, 2.0, SymbolSpec::new(SymbolClass::BmoLog { clamp: true }).windowed(1.0)),
        case(2.0, 4.0, SymbolSpec::new(SymbolClass::Holder { alpha: 0.5 }).windowed(1.0)),
        case(1.5, 3.0, SymbolSpec::new(SymbolClass::Holder { alpha: 2.0 / 3.0 }).windowed(1.0)),
        case(1.5, 12.0, gaussian(0.5)),
        case(1.2, 12.0, gaussian(0.5)),
        case(4.0, 2.0, gaussian(0.5)),
    ]
}

/// Fully populated defaults for `experiment`.
pub fn defaults(experiment: Experiment) -> Value {
    let (grid, exponents, samples, symbol) = match experiment {
        Experiment::Identities => (json!({"n": 128, "length": 2.0 * PI, "periodic": true}), [2.0, 2.0], 20, gaussian(1.0)),
        Experiment::Regimes => (json!({"n": 128, "length": 2.0, "periodic": false}), [2.0, 2.0], 32, gaussian(0.5)),
        Experiment::Lowerbound => (json!({"n": 128, "length": 8.0, "periodic": false}), [4.0, 2.0], 256, gaussian(1.0)),
        Experiment::Jacobian => (json!({"n": 64, "length": 2.0 * PI, "periodic": true}), [2.0, 2.0], 20, gaussian(1.0)),
        Experiment::Sparse => (json!({"n": 64, "length": 4.0, "periodic": false}), [2.0, 2.0], 100, gaussian(0.5)),
        Experiment::Scaling => (json!({"n": 256, "length": 256.0, "periodic": false}), [2.0, 2.0], 1, gaussian(1.0)),
    };
    let backend = if grid["periodic"] == json!(true) {
        BeurlingBackend::Spectral
    } else {
        BeurlingBackend::QuadratureFft
    };
    let search = match experiment {
        Experiment::Regimes => SearchBudget { restarts: 2, steps: 10, ..SearchBudget::default() },
        _ => SearchBudget::default(),
    };
    json!({
        "experiment": experiment,
        "grid": grid,
        "exponents": {"p": exponents[0], "q": exponents[1]},
        "symbol": symbol,
        "samples": samples,
        "seed": 0,
        "backend": backend,
        "search": search,
        "threshold": 2.0,
        "sweep": {"ns": [64, 128, 256], "cases": default_cases()},
        "lambdas": [1.0, 2.0, 4.0, 8.0, 16.0],
        "kmax": 4,
        "output": {"json": format!("{}.json", experiment.name()), "csv": format!("{}.csv", experiment.name())},
        "fault": null,
    })
}

/// Recursively overlays `patch` onto `base`; objects merge, everything else replaces.
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Applies `key.path=value`; the value is read as JSON, or as a string if
/// it is not valid JSON.
fn apply_set(config: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {assignment:?}")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut slot = config;
    let keys: Vec<&str> = path.split('.').collect();
    for (i, key) in keys.iter().enumerate() {
        let obj = slot
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("--set {path}: {key:?} is not inside an object")))?;
        if i + 1 == keys.len() {
            obj.insert(key.to_string(), value);
            return Ok(());
        }
        slot = obj.entry(key.to_string()).or_insert_with(|| json!({}));
    }
    Err(CliError::Config(format!("--set {path}: empty key")))
}

fn check_exponent(name: &str, s: f64) -> Result<(), CliError> {
    if s > 1.0 && s.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} = {s} must lie in (1, ∞)")))
    }
}

impl ExperimentConfig {
    /// Resolves defaults, the optional config file and overrides, then validates.
    pub fn resolve(experiment: Experiment, file: Option<&Path>, sets: &[String]) -> Result<Self, CliError> {
        let mut value = defaults(experiment);
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let patch: Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if !patch.is_object() {
                return Err(CliError::Config("config must be a JSON object".into()));
            }
            merge(&mut value, patch);
        }
        for s in sets {
            apply_set(&mut value, s)?;
        }
        let config: ExperimentConfig =
            serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
        if config.experiment != experiment {
            return Err(CliError::Config(format!(
                "config names experiment {:?} but {:?} was requested",
                config.experiment.name(),
                experiment.name()
            )));
        }
        config.validate()?;
        Ok(config)
    }

    /// Band limit actually used on an `n`-point grid.
    pub fn band_limit(&self, n: usize) -> usize {
        self.kmax.min(n / 2 - 1)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let grid = self.grid.spec().map_err(|e| CliError::Config(e.to_string()))?;
        check_exponent("p", self.exponents.p)?;
        check_exponent("q", self.exponents.q)?;
        self.backend.check_grid(&grid).map_err(|e| CliError::Config(e.to_string()))?;
        if self.samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if self.search.restarts == 0 || self.search.steps == 0 || !(self.search.tol >= 0.0) {
            return Err(CliError::Config("search needs restarts ≥ 1, steps ≥ 1 and tol ≥ 0".into()));
        }
        if !(self.threshold >= 2.0 && self.threshold.is_finite()) {
            return Err(CliError::Config(format!("threshold {} must be at least 2", self.threshold)));
        }
        if self.kmax == 0 {
            return Err(CliError::Config("kmax must be at least 1".into()));
        }
        for name in [&self.output.json, &self.output.csv] {
            if name.is_empty() || name.contains('/') || name.contains('\\') {
                return Err(CliError::Config(format!("output name {name:?} must be a plain file name")));
            }
        }
        jaclab::norms::generate_symbol(&self.symbol, &grid).map_err(|e| CliError::Config(e.to_string()))?;
        match self.experiment {
            Experiment::Identities | Experiment::Jacobian if !self.grid.periodic => {
                Err(CliError::Config(format!("{} needs a periodic grid", self.experiment.name())))
            }
            Experiment::Lowerbound | Experiment::Sparse | Experiment::Regimes if self.grid.periodic => {
                Err(CliError::Config(format!("{} needs a bounded grid", self.experiment.name())))
            }
            Experiment::Lowerbound if !(self.exponents.p > self.exponents.q) => Err(CliError::Config(format!(
                "lowerbound needs p > q, got p = {}, q = {}",
                self.exponents.p, self.exponents.q
            ))),
            Experiment::Lowerbound if !self.backend.is_quadrature() => {
                Err(CliError::Config("lowerbound needs a quadrature backend".into()))
            }
            Experiment::Regimes => self.validate_sweep(),
            Experiment::Scaling => self.validate_lambdas(),
            _ => Ok(()),
        }
    }

    fn validate_sweep(&self) -> Result<(), CliError> {
        if self.sweep.ns.is_empty() || self.sweep.cases.is_empty() {
            return Err(CliError::Config("sweep needs at least one n and one case".into()));
        }
        if !self.backend.is_quadrature() {
            return Err(CliError::Config("regimes needs a quadrature backend".into()));
        }
        for &n in &self.sweep.ns {
            let g = self.grid.with_n(n).map_err(|e| CliError::Config(e.to_string()))?;
            for case in &self.sweep.cases {
                check_exponent("sweep p", case.p)?;
                check_exponent("sweep q", case.q)?;
                jaclab::norms::generate_symbol(&case.symbol, &g).map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
        Ok(())
    }

    fn validate_lambdas(&self) -> Result<(), CliError> {
        if self.lambdas.len() < 2 || self.lambdas.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(CliError::Config("lambdas needs at least two positive values".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(exp: Experiment, sets: &[&str]) -> Result<ExperimentConfig, CliError> {
        let sets: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        ExperimentConfig::resolve(exp, None, &sets)
    }

    #[test]
    fn every_default_validates() {
        for exp in Experiment::value_variants() {
            resolve(*exp, &[]).unwrap();
        }
    }

    #[test]
    fn overrides_and_rejections() {
        let c = resolve(Experiment::Sparse, &["threshold=4", "grid.n=32", "symbol.class.scale=0.25"]).unwrap();
        assert_eq!(c.threshold, 4.0);
        assert_eq!(c.grid.n, 32);
        assert!(resolve(Experiment::Sparse, &["grid.n=48"]).is_err());
        assert!(resolve(Experiment::Sparse, &["exponents.p=1"]).is_err());
        assert!(resolve(Experiment::Sparse, &["exponents.q=inf"]).is_err());
        assert!(resolve(Experiment::Sparse, &["bogus=1"]).is_err());
        assert!(resolve(Experiment::Sparse, &["grid.bogus=1"]).is_err());
        assert!(resolve(Experiment::Lowerbound, &["exponents.p=2", "exponents.q=3"]).is_err());
        assert!(resolve(Experiment::Identities, &["grid.periodic=false"]).is_err());
        assert!(resolve(Experiment::Sparse, &["threshold"]).is_err());
        assert!(resolve(Experiment::Sparse, &["experiment=\"regimes\""]).is_err());
    }
}
