use crate::bandit::{EstimatorKind, StrategyConfig, StrategyKind};
use crate::experiments::{ExperimentConfig, ExperimentError, Simulator, SweepGrid};
use crate::regression::{backward_eliminate, DesignMatrix, Elimination, FeatureSpec};

/// Selects step-model features by backward elimination on pilot trajectories.
///
/// Runs `pilot_trials` trials of `config`'s player under uniform random arms,
/// pools every day that has the full lag history of `start`, and eliminates
/// at level `alpha`. The pilot uses `config.master_seed`; pass a seed that is
/// not reused by the experiment being calibrated.
pub fn calibrate_step_features(
    config: &ExperimentConfig,
    start: &FeatureSpec,
    pilot_trials: u64,
    alpha: f64,
) -> Result<Elimination<f64>, ExperimentError> {
    let mut pilot = config.clone();
    pilot.strategy = StrategyConfig::new(StrategyKind::Random);
    pilot.sweep = None;
    pilot.trials = pilot_trials.max(1);
    let sim = Simulator::new(&pilot)?;
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for i in 0..pilot.trials {
        let traj = sim.run_trial(i);
        let motivations: Vec<f64> = traj.records.iter().map(|r| f64::from(r.post_motivation)).collect();
        for (k, rec) in traj.records.iter().enumerate() {
            if let Ok(row) = start.row::<f64>(&traj.steps, &motivations[..k], rec.date) {
                rows.push(row);
                y.push(f64::from(rec.steps));
            }
        }
    }
    let x = DesignMatrix::from_rows(&rows)?;
    Ok(backward_eliminate(&x, &y, start, alpha)?)
}

/// Offset between an experiment's master seed and its calibration pilot's.
pub const PILOT_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// Calibrates step features on a pilot seeded apart from `config` and installs
/// them in every regression strategy of its grid (and its base strategy).
pub fn calibrate_regression_strategies(
    config: &mut ExperimentConfig,
    pilot_trials: u64,
    alpha: f64,
) -> Result<Elimination<f64>, ExperimentError> {
    let mut pilot = config.clone();
    pilot.master_seed = config.master_seed.wrapping_add(PILOT_SEED_OFFSET);
    let el = calibrate_step_features(&pilot, &FeatureSpec::step_default(), pilot_trials, alpha)?;
    let install = |s: &mut StrategyConfig| {
        if s.estimator == EstimatorKind::Regression {
            s.regression.steps = el.spec.clone();
        }
    };
    install(&mut config.strategy);
    if let Some(SweepGrid::Strategies { strategies }) = config.sweep.as_mut() {
        strategies.iter_mut().for_each(install);
    }
    Ok(el)
}
