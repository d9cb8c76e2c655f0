use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::bandit::Arm;

/// Daily step counts keyed by calendar date.
pub type StepHistory = BTreeMap<NaiveDate, f64>;

/// Direction of a comparison relative to the player's previous-day steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upward,
    Downward,
}

/// One day of interaction between a player and the strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationRecord {
    /// 1-based day within the program.
    pub day: u32,
    pub date: NaiveDate,
    pub arm: Arm,
    pub selected_direction: Direction,
    pub target_steps: u32,
    pub steps: u32,
    pub pre_motivation: u8,
    pub post_motivation: u8,
    pub reward: f64,
}
