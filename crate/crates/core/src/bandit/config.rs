use serde::{Deserialize, Serialize};

use crate::bandit::BanditError;
use crate::regression::FeatureSpec;

/// Selection rule of a strategy, with the parameters each rule needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyKind {
    Random,
    Ucb1 {
        c: f64,
    },
    EpsGreedy {
        epsilon: f64,
    },
    /// Explores for the first `ceil(epsilon * horizon)` decisions.
    EpsFirst {
        epsilon: f64,
    },
    EpsDecLinear {
        linear_start: f64,
        linear_end: f64,
        linear_steps: u32,
    },
    /// Exploration probability `min(1, 1 / t^epsilon)`.
    EpsDecExp {
        epsilon: f64,
    },
}

impl StrategyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Random => "random",
            StrategyKind::Ucb1 { .. } => "ucb1",
            StrategyKind::EpsGreedy { .. } => "eps_greedy",
            StrategyKind::EpsFirst { .. } => "eps_first",
            StrategyKind::EpsDecLinear { .. } => "eps_dec_linear",
            StrategyKind::EpsDecExp { .. } => "eps_dec_exp",
        }
    }

    /// True for the rules that flip an explore/exploit coin each decision.
    pub fn is_epsilon_family(&self) -> bool {
        matches!(
            self,
            StrategyKind::EpsGreedy { .. }
                | StrategyKind::EpsFirst { .. }
                | StrategyKind::EpsDecLinear { .. }
                | StrategyKind::EpsDecExp { .. }
        )
    }
}

/// How a strategy estimates the expected reward of an arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    #[default]
    Mean,
    Regression,
}

/// Feature sets used by the regression estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFeatures {
    pub steps: FeatureSpec,
    pub motivation: FeatureSpec,
}

impl Default for RegressionFeatures {
    fn default() -> Self {
        Self { steps: FeatureSpec::step_default(), motivation: FeatureSpec::motivation_default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    #[serde(flatten)]
    pub kind: StrategyKind,
    #[serde(default)]
    pub estimator: EstimatorKind,
    #[serde(default)]
    pub regression: RegressionFeatures,
    /// Pulls of every arm, in shuffled order, before the rule engages.
    #[serde(default)]
    pub forced_exploration_pulls: u32,
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind) -> Self {
        Self {
            kind,
            estimator: EstimatorKind::Mean,
            regression: RegressionFeatures::default(),
            forced_exploration_pulls: 0,
        }
    }

    pub fn with_estimator(mut self, estimator: EstimatorKind) -> Self {
        self.estimator = estimator;
        self
    }

    pub fn with_forced_pulls(mut self, pulls: u32) -> Self {
        self.forced_exploration_pulls = pulls;
        self
    }

    pub fn with_step_features(mut self, spec: FeatureSpec) -> Self {
        self.regression.steps = spec;
        self
    }

    /// Strategy deployed with participants: exponential decay with
    /// epsilon 1.0, nine forced pulls and the regression estimator.
    pub fn deployed() -> Self {
        Self::new(StrategyKind::EpsDecExp { epsilon: 1.0 })
            .with_estimator(EstimatorKind::Regression)
            .with_forced_pulls(3)
    }

    /// Short label used in result files, e.g. `ucb1(c=2400)+reg`.
    pub fn label(&self) -> String {
        let mut label = match &self.kind {
            StrategyKind::Random => "random".to_string(),
            StrategyKind::Ucb1 { c } => format!("ucb1(c={c})"),
            StrategyKind::EpsGreedy { epsilon } => format!("eps_greedy(eps={epsilon})"),
            StrategyKind::EpsFirst { epsilon } => format!("eps_first(eps={epsilon})"),
            StrategyKind::EpsDecLinear { linear_start, linear_end, linear_steps } => {
                format!("eps_dec_linear({linear_start}->{linear_end}/{linear_steps})")
            }
            StrategyKind::EpsDecExp { epsilon } => format!("eps_dec_exp(eps={epsilon})"),
        };
        if self.estimator == EstimatorKind::Regression {
            label.push_str("+reg");
        }
        if self.forced_exploration_pulls > 0 {
            label.push_str(&format!("+forced{}", self.forced_exploration_pulls));
        }
        label
    }

    pub fn validate(&self) -> Result<(), BanditError> {
        let bad = |msg: String| Err(BanditError::Config(msg));
        match self.kind {
            StrategyKind::Random => {}
            StrategyKind::Ucb1 { c } => {
                if !(c.is_finite() && c >= 0.0) {
                    return bad(format!("ucb1 exploration coefficient must be finite and >= 0, got {c}"));
                }
            }
            StrategyKind::EpsGreedy { epsilon }
            | StrategyKind::EpsFirst { epsilon }
            | StrategyKind::EpsDecExp { epsilon } => {
                if !(epsilon.is_finite() && epsilon >= 0.0) {
                    return bad(format!("epsilon must be finite and >= 0, got {epsilon}"));
                }
            }
            StrategyKind::EpsDecLinear { linear_start, linear_end, linear_steps } => {
                if linear_steps < 1 {
                    return bad("linear_steps must be >= 1".into());
                }
                if !(linear_start.is_finite() && linear_end.is_finite()) {
                    return bad("linear schedule endpoints must be finite".into());
                }
                if linear_start < linear_end {
                    return bad(format!(
                        "linear schedule must not increase: start {linear_start} < end {linear_end}"
                    ));
                }
            }
        }
        self.regression.steps.validate().map_err(|e| BanditError::Config(e.to_string()))?;
        self.regression.motivation.validate().map_err(|e| BanditError::Config(e.to_string()))?;
        Ok(())
    }
}
