use chrono::Days;

use crate::bandit::{Arm, DecisionMode, EstimatorContext, Strategy};
use crate::experiments::{ExperimentConfig, ExperimentError};
use crate::rng::TrialStreams;
use crate::simulation::{ContentPack, ObservationRecord, ProfileGenerator, SimulatedPlayer, StepHistory};

/// Full record of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<ObservationRecord>,
    /// Steps by date, including the pre-study day 0.
    pub steps: StepHistory,
    pub modes: Vec<DecisionMode>,
}

impl Trajectory {
    pub fn rewards(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.reward)
    }
}

/// Validated experiment ready to run trials.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: ExperimentConfig,
    player: SimulatedPlayer,
    generator: ProfileGenerator,
}

impl Simulator {
    pub fn new(config: &ExperimentConfig) -> Result<Self, ExperimentError> {
        config.validate()?;
        let player = SimulatedPlayer::new(&config.player)?;
        let generator = ProfileGenerator::new(
            config.player.profile_ranges,
            player.step_model.mean(),
            ContentPack::bundled().len(),
        )?;
        Ok(Self { config: config.clone(), player, generator })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    /// Runs trial `index` with fresh strategy state.
    ///
    /// Each day: select arm, fabricate profiles, let the player respond,
    /// compute the reward, and let the strategy observe it.
    pub fn run_trial(&self, index: u64) -> Trajectory {
        let cfg = &self.config;
        let mut streams = TrialStreams::new(cfg.master_seed, index);
        let mut strategy = Strategy::new(cfg.strategy.clone(), &Arm::ALL, cfg.horizon, &mut streams.strategy)
            .expect("strategy validated with the config");

        let day_zero = cfg.start_date - Days::new(1);
        let mut steps = StepHistory::new();
        let mut prev = self.player.baseline_day(&mut streams.player);
        steps.insert(day_zero, f64::from(prev));

        let mut records: Vec<ObservationRecord> = Vec::with_capacity(cfg.horizon as usize);
        let mut modes = Vec::with_capacity(cfg.horizon as usize);
        for day in 1..=cfg.horizon {
            let date = cfg.start_date + Days::new(u64::from(day - 1));
            let ctx = EstimatorContext { records: &records, steps: &steps, target_date: date, reward_mode: cfg.reward_mode };
            let decision = strategy.decide(&ctx, &mut streams.strategy);
            let profiles = self.generator.generate(decision.arm, prev, &mut streams.environment);
            let response = self.player.respond(&profiles, &mut streams.player);
            let reward = cfg.reward_mode.reward(
                &records,
                f64::from(response.steps),
                f64::from(response.post_motivation),
            );
            strategy.observe(decision.arm, reward).expect("observing the arm just selected");
            records.push(ObservationRecord {
                day,
                date,
                arm: decision.arm,
                selected_direction: response.direction,
                target_steps: response.target_steps,
                steps: response.steps,
                pre_motivation: response.pre_motivation,
                post_motivation: response.post_motivation,
                reward,
            });
            steps.insert(date, f64::from(response.steps));
            modes.push(decision.mode);
            prev = response.steps;
        }
        Trajectory { records, steps, modes }
    }
}

/// One trial of `config`; trial streams derive from `(master_seed, trial_index)`.
pub fn run_trial(config: &ExperimentConfig, trial_index: u64) -> Result<Trajectory, ExperimentError> {
    Ok(Simulator::new(config)?.run_trial(trial_index))
}
