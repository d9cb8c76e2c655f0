//! Simulated players: gamma step model, comparison orientation, and the
//! selector / step / motivation behaviors, plus the reward shared with the
//! study service.

mod behavior;
mod player;
mod profiles;
mod record;
mod reward;
mod steps;

use thiserror::Error;

pub use behavior::{
    report_post_motivation, report_pre_motivation, select_profile, simulate_steps, ScoProfile,
};
pub use player::{PlayerConfig, SessionResponse, SimulatedPlayer};
pub use profiles::{ComparisonProfile, ContentPack, ProfileDetail, ProfileGenerator, ProfileRanges};
pub use record::{Direction, ObservationRecord, StepHistory};
pub use reward::{combined_z, compute_reward, z_score, RewardMode};
pub use steps::{sample_base_steps, StepModel, StepSampler};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("content pack: {0}")]
    ContentPack(String),
}
