use chrono::NaiveDate;

use crate::bandit::{Arm, RegressionFeatures};
use crate::regression::{ols_fit, DesignMatrix, FeatureSpec, FittedModel};
use crate::simulation::{compute_reward, ObservationRecord, RewardMode, StepHistory};

/// Fits `spec` on the sessions where `arm` was chosen; `target` maps a record to the response.
///
/// `None` unless there are at least `p + 1` usable rows and the design has full rank.
fn fit_on_arm(
    records: &[ObservationRecord],
    steps: &StepHistory,
    motivations: &[f64],
    arm: Arm,
    spec: &FeatureSpec,
    target: impl Fn(&ObservationRecord) -> f64,
) -> Option<FittedModel<f64>> {
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for (i, rec) in records.iter().enumerate().filter(|(_, r)| r.arm == arm) {
        if let Ok(row) = spec.row::<f64>(steps, &motivations[..i], rec.date) {
            rows.push(row);
            y.push(target(rec));
        }
    }
    if rows.len() < spec.width() + 1 {
        return None;
    }
    let model = ols_fit(&DesignMatrix::from_rows(&rows).ok()?, &y).ok()?;
    (!model.is_rank_deficient()).then_some(model)
}

/// Predicted reward of choosing `arm` on `target_date`.
///
/// Predicts the day's steps from the step model and, when the reward needs
/// it, the post-session motivation from the motivation model; both models
/// are fit only on sessions that used `arm`. `None` signals the caller to
/// fall back to the mean estimate.
pub fn regression_arm_estimate(
    records: &[ObservationRecord],
    steps: &StepHistory,
    arm: Arm,
    target_date: NaiveDate,
    features: &RegressionFeatures,
    reward_mode: RewardMode,
) -> Option<f64> {
    let motivations: Vec<f64> = records.iter().map(|r| f64::from(r.post_motivation)).collect();
    let step_model = fit_on_arm(records, steps, &motivations, arm, &features.steps, |r| f64::from(r.steps))?;
    let x = features.steps.row::<f64>(steps, &motivations, target_date).ok()?;
    let predicted_steps = step_model.predict(&x).ok()?;
    match reward_mode {
        RewardMode::RawSteps => Some(predicted_steps),
        RewardMode::CombinedZ => {
            let motivation_model = fit_on_arm(records, steps, &motivations, arm, &features.motivation, |r| {
                f64::from(r.post_motivation)
            })?;
            let x = features.motivation.row::<f64>(steps, &motivations, target_date).ok()?;
            let predicted_motivation = motivation_model.predict(&x).ok()?;
            Some(compute_reward(records, predicted_steps, predicted_motivation))
        }
    }
}
