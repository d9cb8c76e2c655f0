//! Bandit strategies over the three comparison arms.
//!
//! A [`Strategy`] owns the per-arm statistics of one player. Each decision
//! first consults the forced-exploration schedule, then the configured
//! selection rule; the arm's expected reward comes from either the running
//! mean or the per-arm regression estimator.

mod arm;
mod config;
mod schedule;
mod strategy;
mod ucb;

use thiserror::Error;

pub use arm::{Arm, ArmSpec, PROFILES_PER_SESSION};
pub use config::{EstimatorKind, RegressionFeatures, StrategyConfig, StrategyKind};
pub use schedule::{epsilon_at, forced_exploration_schedule};
pub use strategy::{
    ArmStats, Decision, DecisionMode, EstimatorContext, Strategy, StrategyState,
};
pub use ucb::ucb1_score;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BanditError {
    #[error("invalid strategy configuration: {0}")]
    Config(String),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("arm {0} has not been pulled; it must be force-selected")]
    Unpulled(Arm),
    #[error("arm {0} is not part of this strategy")]
    UnknownArm(Arm),
}
