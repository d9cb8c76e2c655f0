//! Player modeling with multi-armed bandits.
//!
//! The bandit picks one of three social-comparison arms each day; a
//! simulated player reacts with steps and motivation reports; the
//! experiment harness runs many such trials to compare strategies. The
//! numeric kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix them to `f64`.

pub mod bandit;
pub mod datafit;
pub mod experiments;
pub mod regression;
pub mod rng;
pub mod scalar;
pub mod simulation;

pub use bandit::{Arm, Strategy, StrategyConfig, StrategyKind};
pub use experiments::{run_experiment, run_sweep, ExperimentConfig, ExperimentResult};
pub use scalar::Scalar;
pub use simulation::{ObservationRecord, RewardMode};

pub type FittedModel = regression::FittedModel<f64>;
pub type DesignMatrix = regression::DesignMatrix<f64>;
pub type Elimination = regression::Elimination<f64>;
pub type StepModel = simulation::StepModel<f64>;
