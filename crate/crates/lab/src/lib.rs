//! Experiment runner: configuration, the six experiment suites and their
//! JSON/CSV reports.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::{Experiment, ExperimentConfig};
pub use error::CliError;
pub use report::{Check, Outcome};

/// Runs the experiment named in `config`.
pub fn run(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    match config.experiment {
        Experiment::Identities => experiments::identities::run(config),
        Experiment::Regimes => experiments::regimes::run(config),
        Experiment::Lowerbound => experiments::lowerbound::run(config),
        Experiment::Jacobian => experiments::jacobian::run(config),
        Experiment::Sparse => experiments::sparse::run(config),
        Experiment::Scaling => experiments::scaling::run(config),
    }
}
