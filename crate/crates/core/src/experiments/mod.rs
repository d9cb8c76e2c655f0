//! Monte-Carlo harness: trials, aggregation, sweeps and CSV output.

mod calibrate;
mod config;
pub mod presets;
mod runner;
mod stats;
mod sweep;
mod trial;

use thiserror::Error;

use crate::bandit::BanditError;
use crate::regression::RegressionError;
use crate::simulation::SimulationError;

pub use calibrate::{calibrate_regression_strategies, calibrate_step_features, PILOT_SEED_OFFSET};
pub use config::{apply_param, default_start_date, ExperimentConfig, SweepGrid, SweepParam};
pub use runner::{run_experiment, ExperimentResult, FREQUENCY_ARMS};
pub use stats::{paired_difference, PairedDifference, Z95};
pub use sweep::{format_sig9, run_sweep, write_results, write_results_csv, SweepPoint, SweepResult};
pub use trial::{run_trial, Simulator, Trajectory};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Regression(#[from] RegressionError),
}

impl From<BanditError> for ExperimentError {
    fn from(e: BanditError) -> Self {
        ExperimentError::Config(e.to_string())
    }
}

impl From<SimulationError> for ExperimentError {
    fn from(e: SimulationError) -> Self {
        ExperimentError::Config(e.to_string())
    }
}

impl ExperimentError {
    /// Process exit code: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            _ => 1,
        }
    }
}
