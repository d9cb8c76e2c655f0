use rand::seq::SliceRandom;
use rand::Rng;

use crate::bandit::{Arm, StrategyKind};

/// Exploration probability at decision `t` (1-based), clamped to `[0, 1]`.
///
/// `horizon` is only consulted by ε-first. Random always explores and
/// UCB1 never does.
pub fn epsilon_at(kind: &StrategyKind, t: u64, horizon: u32) -> f64 {
    let t = t.max(1);
    let eps = match *kind {
        StrategyKind::Random => 1.0,
        StrategyKind::Ucb1 { .. } => 0.0,
        StrategyKind::EpsGreedy { epsilon } => epsilon,
        StrategyKind::EpsFirst { epsilon } => {
            let cutoff = (epsilon * f64::from(horizon)).ceil();
            if (t as f64) <= cutoff {
                1.0
            } else {
                0.0
            }
        }
        StrategyKind::EpsDecLinear { linear_start, linear_end, linear_steps } => {
            if t >= u64::from(linear_steps) {
                linear_end
            } else {
                let frac = (t - 1) as f64 / f64::from(linear_steps - 1);
                linear_start + (linear_end - linear_start) * frac
            }
        }
        StrategyKind::EpsDecExp { epsilon } => 1.0 / (t as f64).powf(epsilon),
    };
    eps.clamp(0.0, 1.0)
}

/// Shuffled opening schedule in which every arm appears `pulls_per_arm` times.
pub fn forced_exploration_schedule<R: Rng + ?Sized>(
    arms: &[Arm],
    pulls_per_arm: u32,
    rng: &mut R,
) -> Vec<Arm> {
    let mut schedule: Vec<Arm> = arms
        .iter()
        .flat_map(|&arm| std::iter::repeat_n(arm, pulls_per_arm as usize))
        .collect();
    schedule.shuffle(rng);
    schedule
}
