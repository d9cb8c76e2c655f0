use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::simulation::ObservationRecord;

/// Reward signal fed to the bandit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardMode {
    /// The day's step count.
    #[default]
    RawSteps,
    /// Mean of the step and motivation z-scores against the player's prior days.
    CombinedZ,
}

impl RewardMode {
    pub fn reward(self, history: &[ObservationRecord], steps: f64, motivation: f64) -> f64 {
        match self {
            RewardMode::RawSteps => steps,
            RewardMode::CombinedZ => compute_reward(history, steps, motivation),
        }
    }
}

/// z-score of `x` against `prior` using the population standard deviation.
///
/// Zero with fewer than two prior values or a zero spread.
pub fn z_score<T: Scalar>(prior: &[T], x: T) -> T {
    if prior.len() < 2 {
        return T::zero();
    }
    let n = T::from_usize_lossy(prior.len());
    let mean = prior.iter().copied().sum::<T>() / n;
    let var = prior.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / n;
    let sd = var.sqrt();
    if sd == T::zero() {
        return T::zero();
    }
    (x - mean) / sd
}

/// `((s - mean_s) / sd_s + (m - mean_m) / sd_m) / 2` over strictly prior observations.
pub fn combined_z<T: Scalar>(prior_steps: &[T], prior_motivation: &[T], steps: T, motivation: T) -> T {
    (z_score(prior_steps, steps) + z_score(prior_motivation, motivation)) / T::lit(2.0)
}

/// Combined reward of a day given the player's earlier observations.
pub fn compute_reward(history: &[ObservationRecord], steps: f64, motivation: f64) -> f64 {
    let prior_steps: Vec<f64> = history.iter().map(|r| f64::from(r.steps)).collect();
    let prior_motivation: Vec<f64> = history.iter().map(|r| f64::from(r.post_motivation)).collect();
    combined_z(&prior_steps, &prior_motivation, steps, motivation)
}
