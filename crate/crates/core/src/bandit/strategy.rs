use chrono::NaiveDate;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bandit::{
    epsilon_at, forced_exploration_schedule, ucb1_score, Arm, BanditError, EstimatorKind,
    StrategyConfig, StrategyKind,
};
use crate::regression::regression_arm_estimate;
use crate::simulation::{ObservationRecord, RewardMode, StepHistory};

static NO_STEPS: StepHistory = StepHistory::new();

/// Player data available to an estimator when a decision is made.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorContext<'a> {
    /// Settled observations of this player, oldest first.
    pub records: &'a [ObservationRecord],
    /// Daily step counts keyed by calendar date, including pre-study days.
    pub steps: &'a StepHistory,
    /// Date of the session the decision is for.
    pub target_date: NaiveDate,
    pub reward_mode: RewardMode,
}

impl EstimatorContext<'static> {
    /// Context with no player data; the regression estimator falls back to the mean.
    pub fn empty() -> Self {
        Self {
            records: &[],
            steps: &NO_STEPS,
            target_date: NaiveDate::MIN,
            reward_mode: RewardMode::RawSteps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmStats {
    pub arm: Arm,
    pub pull_count: u64,
    pub reward_sum: f64,
    /// `(decision clock, reward)` pairs in observation order.
    pub reward_history: Vec<(u64, f64)>,
}

impl ArmStats {
    fn new(arm: Arm) -> Self {
        Self { arm, pull_count: 0, reward_sum: 0.0, reward_history: Vec::new() }
    }

    pub fn mean(&self) -> Option<f64> {
        (self.pull_count > 0).then(|| self.reward_sum / self.pull_count as f64)
    }
}

/// Everything a strategy has learned about one player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyState {
    pub per_arm: Vec<ArmStats>,
    /// Decision clock; equals observations received plus one.
    pub t: u64,
    pub forced_schedule: Vec<Arm>,
    /// Selections awaiting their reward, oldest first.
    pub pending: Vec<Arm>,
}

impl StrategyState {
    pub fn observations(&self) -> u64 {
        self.t - 1
    }

    /// Selections issued so far, settled or not.
    pub fn selections(&self) -> u64 {
        self.observations() + self.pending.len() as u64
    }

    pub fn stats(&self, arm: Arm) -> Option<&ArmStats> {
        self.per_arm.iter().find(|s| s.arm == arm)
    }

    pub fn in_forced_phase(&self) -> bool {
        (self.selections() as usize) < self.forced_schedule.len()
    }
}

/// Why an arm was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionMode {
    Forced,
    /// An arm without observations, tried before scoring begins.
    Initial,
    Explore,
    Exploit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub arm: Arm,
    pub mode: DecisionMode,
}

/// A configured strategy bound to the state of a single player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    config: StrategyConfig,
    horizon: u32,
    state: StrategyState,
}

impl Strategy {
    /// Fresh strategy; draws the forced-exploration order from `rng`.
    pub fn new<R: Rng + ?Sized>(
        config: StrategyConfig,
        arms: &[Arm],
        horizon: u32,
        rng: &mut R,
    ) -> Result<Self, BanditError> {
        if arms.is_empty() {
            return Err(BanditError::Config("strategy needs at least one arm".into()));
        }
        config.validate()?;
        let forced_schedule = forced_exploration_schedule(arms, config.forced_exploration_pulls, rng);
        let state = StrategyState {
            per_arm: arms.iter().copied().map(ArmStats::new).collect(),
            t: 1,
            forced_schedule,
            pending: Vec::new(),
        };
        Ok(Self { config, horizon, state })
    }

    pub fn config(&self) -> &StrategyConfig {
        &self.config
    }

    pub fn state(&self) -> &StrategyState {
        &self.state
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn select<R: Rng + ?Sized>(&mut self, ctx: &EstimatorContext<'_>, rng: &mut R) -> Arm {
        self.decide(ctx, rng).arm
    }

    /// Chooses the next arm and records it as pending until observed.
    pub fn decide<R: Rng + ?Sized>(&mut self, ctx: &EstimatorContext<'_>, rng: &mut R) -> Decision {
        let decision = self.choose(ctx, rng);
        self.state.pending.push(decision.arm);
        decision
    }

    fn choose<R: Rng + ?Sized>(&self, ctx: &EstimatorContext<'_>, rng: &mut R) -> Decision {
        let issued = self.state.selections() as usize;
        if let Some(&arm) = self.state.forced_schedule.get(issued) {
            return Decision { arm, mode: DecisionMode::Forced };
        }
        match self.config.kind {
            StrategyKind::Random => Decision { arm: self.uniform_arm(rng), mode: DecisionMode::Explore },
            StrategyKind::Ucb1 { c } => {
                if let Some(arm) = self.first_untried() {
                    return Decision { arm, mode: DecisionMode::Initial };
                }
                let total: u64 = self.state.per_arm.iter().map(|s| s.pull_count).sum();
                let scores: Vec<(Arm, f64)> = self
                    .state
                    .per_arm
                    .iter()
                    .filter(|s| s.pull_count > 0)
                    .map(|s| {
                        let estimate = self.estimate(s, ctx);
                        (s.arm, ucb1_score(estimate, s.pull_count, total, c))
                    })
                    .collect();
                self.argmax(&scores, rng)
            }
            _ => {
                let eps = epsilon_at(&self.config.kind, self.state.t, self.horizon);
                // The explore coin is always drawn before any arm draw.
                let coin: f64 = rng.random();
                if coin < eps {
                    return Decision { arm: self.uniform_arm(rng), mode: DecisionMode::Explore };
                }
                if let Some(arm) = self.first_untried() {
                    return Decision { arm, mode: DecisionMode::Initial };
                }
                let estimates: Vec<(Arm, f64)> = self
                    .state
                    .per_arm
                    .iter()
                    .filter(|s| s.pull_count > 0)
                    .map(|s| (s.arm, self.estimate(s, ctx)))
                    .collect();
                self.argmax(&estimates, rng)
            }
        }
    }

    /// First arm (in arm order) with no observations and no outstanding selection.
    fn first_untried(&self) -> Option<Arm> {
        self.state
            .per_arm
            .iter()
            .find(|s| s.pull_count == 0 && !self.state.pending.contains(&s.arm))
            .map(|s| s.arm)
    }

    fn uniform_arm<R: Rng + ?Sized>(&self, rng: &mut R) -> Arm {
        let i = rng.random_range(0..self.state.per_arm.len());
        self.state.per_arm[i].arm
    }

    fn argmax<R: Rng + ?Sized>(&self, scored: &[(Arm, f64)], rng: &mut R) -> Decision {
        let best = scored.iter().map(|&(_, s)| s).fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<Arm> = scored.iter().filter(|&&(_, s)| s == best).map(|&(a, _)| a).collect();
        let arm = match tied.len() {
            // every arm is awaiting its first reward
            0 => self.state.pending.first().copied().unwrap_or(self.state.per_arm[0].arm),
            1 => tied[0],
            n => tied[rng.random_range(0..n)],
        };
        Decision { arm, mode: DecisionMode::Exploit }
    }

    fn estimate(&self, stats: &ArmStats, ctx: &EstimatorContext<'_>) -> f64 {
        let mean = stats.mean().expect("estimate of a pulled arm");
        match self.config.estimator {
            EstimatorKind::Mean => mean,
            EstimatorKind::Regression => regression_arm_estimate(
                ctx.records,
                ctx.steps,
                stats.arm,
                ctx.target_date,
                &self.config.regression,
                ctx.reward_mode,
            )
            .unwrap_or(mean),
        }
    }

    /// Expected reward of `arm` under the configured estimator.
    pub fn arm_estimate(&self, arm: Arm, ctx: &EstimatorContext<'_>) -> Result<f64, BanditError> {
        let stats = self.state.stats(arm).ok_or(BanditError::UnknownArm(arm))?;
        if stats.pull_count == 0 {
            return Err(BanditError::Unpulled(arm));
        }
        Ok(self.estimate(stats, ctx))
    }

    /// Credits `reward` to the oldest outstanding selection of `arm`.
    pub fn observe(&mut self, arm: Arm, reward: f64) -> Result<(), BanditError> {
        if !reward.is_finite() {
            return Err(BanditError::Protocol(format!("non-finite reward {reward} for arm {arm}")));
        }
        let pos = self
            .state
            .pending
            .iter()
            .position(|&a| a == arm)
            .ok_or_else(|| BanditError::Protocol(format!("arm {arm} has no outstanding selection")))?;
        self.state.pending.remove(pos);
        let t = self.state.t;
        let stats = self
            .state
            .per_arm
            .iter_mut()
            .find(|s| s.arm == arm)
            .ok_or(BanditError::UnknownArm(arm))?;
        stats.pull_count += 1;
        stats.reward_sum += reward;
        stats.reward_history.push((t, reward));
        self.state.t += 1;
        Ok(())
    }
}
