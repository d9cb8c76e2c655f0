use rayon::prelude::*;
use serde::Serialize;

use crate::bandit::Arm;
use crate::experiments::{ExperimentConfig, ExperimentError, Simulator, Trajectory};

/// Trials per aggregation chunk; chunks are merged in index order.
const CHUNK: u64 = 256;

/// Aggregate of `trials_run` independent trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub label: String,
    pub horizon: u32,
    pub trials_run: u64,
    pub per_step_mean_reward: Vec<f64>,
    pub per_step_mean_steps: Vec<f64>,
    pub overall_mean: f64,
    /// `[step][arm]` selection proportions, arms in A, B, C order.
    pub per_step_arm_frequencies: Vec<[f64; 3]>,
    /// Mean reward of each trial over the whole horizon.
    pub trial_means: Vec<f64>,
    /// Row-major `[trial][step]` rewards, kept only when requested.
    #[serde(skip)]
    pub trial_rewards: Option<Vec<f64>>,
}

impl ExperimentResult {
    /// Mean reward of each trial over steps `from..=to` (1-based).
    pub fn window_means(&self, from: u32, to: u32) -> Option<Vec<f64>> {
        let rewards = self.trial_rewards.as_ref()?;
        if from < 1 || to < from || to > self.horizon {
            return None;
        }
        let m = self.horizon as usize;
        let (a, b) = (from as usize - 1, to as usize);
        let width = (b - a) as f64;
        Some(rewards.chunks_exact(m).map(|row| row[a..b].iter().sum::<f64>() / width).collect())
    }
}

#[derive(Debug, Clone)]
struct Partial {
    reward_sums: Vec<f64>,
    step_sums: Vec<f64>,
    arm_counts: Vec<[u64; 3]>,
    trial_means: Vec<f64>,
    trial_rewards: Vec<f64>,
}

impl Partial {
    fn new(horizon: usize) -> Self {
        Self {
            reward_sums: vec![0.0; horizon],
            step_sums: vec![0.0; horizon],
            arm_counts: vec![[0; 3]; horizon],
            trial_means: Vec::new(),
            trial_rewards: Vec::new(),
        }
    }

    fn add(&mut self, trajectory: &Trajectory, retain: bool) {
        let mut total = 0.0;
        for (i, rec) in trajectory.records.iter().enumerate() {
            self.reward_sums[i] += rec.reward;
            self.step_sums[i] += f64::from(rec.steps);
            self.arm_counts[i][rec.arm.index()] += 1;
            total += rec.reward;
            if retain {
                self.trial_rewards.push(rec.reward);
            }
        }
        self.trial_means.push(total / trajectory.records.len() as f64);
    }

    fn merge(&mut self, other: Partial) {
        for (a, b) in self.reward_sums.iter_mut().zip(&other.reward_sums) {
            *a += b;
        }
        for (a, b) in self.step_sums.iter_mut().zip(&other.step_sums) {
            *a += b;
        }
        for (a, b) in self.arm_counts.iter_mut().zip(&other.arm_counts) {
            for k in 0..3 {
                a[k] += b[k];
            }
        }
        self.trial_means.extend(other.trial_means);
        self.trial_rewards.extend(other.trial_rewards);
    }
}

fn run_chunk(sim: &Simulator, start: u64, end: u64) -> Partial {
    let cfg = sim.config();
    let mut partial = Partial::new(cfg.horizon as usize);
    for i in start..end {
        partial.add(&sim.run_trial(i), cfg.retain_trials);
    }
    partial
}

/// Runs every trial of `config` and aggregates per-step statistics.
///
/// Trials are grouped into fixed chunks whose partial sums are combined in
/// chunk order, so the result does not depend on `workers`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, ExperimentError> {
    let sim = Simulator::new(config)?;
    let n = config.trials;
    let starts: Vec<u64> = (0..n).step_by(CHUNK as usize).collect();
    let job = |s: &u64| run_chunk(&sim, *s, (*s + CHUNK).min(n));
    let partials: Vec<Partial> = if config.workers == 1 {
        starts.iter().map(job).collect()
    } else if config.workers == 0 {
        starts.par_iter().map(job).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| ExperimentError::Runtime(format!("thread pool: {e}")))?
            .install(|| starts.par_iter().map(job).collect())
    };

    let m = config.horizon as usize;
    let mut total = Partial::new(m);
    for p in partials {
        total.merge(p);
    }
    let nf = n as f64;
    let per_step_mean_reward: Vec<f64> = total.reward_sums.iter().map(|s| s / nf).collect();
    let per_step_mean_steps = total.step_sums.iter().map(|s| s / nf).collect();
    let per_step_arm_frequencies = total
        .arm_counts
        .iter()
        .map(|c| [c[0] as f64 / nf, c[1] as f64 / nf, c[2] as f64 / nf])
        .collect();
    let overall_mean = per_step_mean_reward.iter().sum::<f64>() / m as f64;
    Ok(ExperimentResult {
        label: config.strategy.label(),
        horizon: config.horizon,
        trials_run: n,
        per_step_mean_reward,
        per_step_mean_steps,
        overall_mean,
        per_step_arm_frequencies,
        trial_means: total.trial_means,
        trial_rewards: config.retain_trials.then_some(total.trial_rewards),
    })
}

/// Arm order of the frequency columns.
pub const FREQUENCY_ARMS: [Arm; 3] = Arm::ALL;
