use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::simulation::{
    report_post_motivation, report_pre_motivation, select_profile, simulate_steps, ComparisonProfile,
    Direction, ProfileRanges, ScoProfile, SimulationError, StepModel, StepSampler,
};

/// Parameters of a simulated player.
/// Missing fields take their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlayerConfig {
    pub u: f64,
    pub d: f64,
    pub k: f64,
    pub theta: f64,
    pub profile_ranges: ProfileRanges,
}

impl Default for PlayerConfig {
    fn default() -> Self {
        Self { u: 0.3, d: 0.6, k: 2.8, theta: 3100.0, profile_ranges: ProfileRanges::default() }
    }
}

impl PlayerConfig {
    pub fn sco(&self) -> Result<ScoProfile, SimulationError> {
        ScoProfile::new(self.u, self.d)
    }

    pub fn step_model(&self) -> Result<StepModel<f64>, SimulationError> {
        StepModel::new(self.k, self.theta)
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        self.sco()?;
        self.step_model()?;
        self.profile_ranges.validate()
    }
}

/// What a player did in one session.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SessionResponse {
    pub profile_index: usize,
    pub direction: Direction,
    pub target_steps: u32,
    pub base_steps: f64,
    pub steps: u32,
    pub pre_motivation: u8,
    pub post_motivation: u8,
}

/// Behavioral model of one player: selector, step simulator and motivation reports.
#[derive(Debug, Clone)]
pub struct SimulatedPlayer {
    pub sco: ScoProfile,
    pub step_model: StepModel<f64>,
    sampler: StepSampler,
}

impl SimulatedPlayer {
    pub fn new(config: &PlayerConfig) -> Result<Self, SimulationError> {
        let step_model = config.step_model()?;
        Ok(Self { sco: config.sco()?, step_model, sampler: step_model.sampler() })
    }

    /// An ordinary day without any comparison.
    pub fn baseline_day<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.sampler.sample(rng).round() as u32
    }

    /// Draws, in order: profile choice, base steps, pre- then post-motivation.
    pub fn respond<R: Rng + ?Sized>(&self, profiles: &[ComparisonProfile], rng: &mut R) -> SessionResponse {
        let profile_index = select_profile(profiles, &self.sco, rng);
        let target = profiles[profile_index];
        let base_steps = self.sampler.sample(rng);
        let steps = simulate_steps(base_steps, f64::from(target.steps), target.direction, &self.sco);
        let pre_motivation = report_pre_motivation(rng);
        let post_motivation = report_post_motivation(pre_motivation, target.direction, &self.sco, rng);
        SessionResponse {
            profile_index,
            direction: target.direction,
            target_steps: target.steps,
            base_steps,
            steps: steps.round() as u32,
            pre_motivation,
            post_motivation,
        }
    }
}
