//! The three desk-scale experiment layouts.

use crate::bandit::{EstimatorKind, StrategyConfig, StrategyKind};
use crate::experiments::{ExperimentConfig, SweepGrid};
use crate::regression::FeatureSpec;

fn base(strategy: StrategyConfig, trials: u64, master_seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(strategy);
    cfg.trials = trials;
    cfg.master_seed = master_seed;
    cfg
}

/// UCB1 over `C = 400, 800, ..., 3600`.
pub fn c_sweep(trials: u64, master_seed: u64) -> ExperimentConfig {
    let mut cfg = base(StrategyConfig::new(StrategyKind::Ucb1 { c: 2400.0 }), trials, master_seed);
    cfg.sweep = Some(SweepGrid::ucb1_c_grid());
    cfg
}

/// UCB1(C=2400), exponential epsilon-decreasing (1.0) and epsilon-greedy (0.1).
pub fn strategy_comparison(trials: u64, master_seed: u64) -> ExperimentConfig {
    let mut cfg = base(StrategyConfig::new(StrategyKind::Random), trials, master_seed);
    cfg.sweep = Some(SweepGrid::Strategies {
        strategies: vec![
            StrategyConfig::new(StrategyKind::Ucb1 { c: 2400.0 }),
            StrategyConfig::new(StrategyKind::EpsDecExp { epsilon: 1.0 }),
            StrategyConfig::new(StrategyKind::EpsGreedy { epsilon: 0.1 }),
        ],
    });
    cfg.retain_trials = true;
    cfg
}

/// Epsilon variants paired as (mean, regression), all with nine forced pulls.
pub fn epsilon_variants() -> Vec<StrategyKind> {
    vec![
        StrategyKind::EpsGreedy { epsilon: 0.1 },
        StrategyKind::EpsFirst { epsilon: 0.5 },
        StrategyKind::EpsDecLinear { linear_start: 1.0, linear_end: 0.0, linear_steps: 21 },
        StrategyKind::EpsDecExp { epsilon: 1.0 },
    ]
}

/// Mean and regression estimators for every epsilon variant, interleaved.
pub fn regression_comparison(trials: u64, master_seed: u64, step_features: &FeatureSpec) -> ExperimentConfig {
    let mut strategies = Vec::new();
    for kind in epsilon_variants() {
        let plain = StrategyConfig::new(kind).with_forced_pulls(3);
        let reg = plain.clone().with_estimator(EstimatorKind::Regression).with_step_features(step_features.clone());
        strategies.push(plain);
        strategies.push(reg);
    }
    let mut cfg = base(StrategyConfig::new(StrategyKind::Random), trials, master_seed);
    cfg.sweep = Some(SweepGrid::Strategies { strategies });
    cfg.retain_trials = true;
    cfg
}
