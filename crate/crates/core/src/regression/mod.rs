//! Least squares with significance statistics, backward elimination, the
//! lagged step and motivation feature builders, and the per-arm reward
//! estimator built on them.

mod elimination;
mod estimate;
mod features;
mod ols;
mod tdist;

use thiserror::Error;

pub use elimination::{backward_eliminate, Elimination};
pub use estimate::regression_arm_estimate;
pub use features::{build_motivation_features, build_step_features, Feature, FeatureSpec};
pub use ols::{ols_fit, ols_predict, DesignMatrix, FittedModel};
pub use tdist::{incomplete_beta, ln_gamma, student_t_two_sided};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegressionError {
    #[error("no observations to fit")]
    EmptyData,
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("insufficient history: {0}")]
    InsufficientHistory(String),
    #[error("p-values unavailable (rank-deficient design or no residual degrees of freedom)")]
    PValuesUnavailable,
}
