use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::bandit::{StrategyConfig, StrategyKind};
use crate::experiments::ExperimentError;
use crate::simulation::{PlayerConfig, RewardMode};

fn default_horizon() -> u32 {
    21
}

fn default_trials() -> u64 {
    100_000
}

/// Calendar date of simulated day 1 (a Monday).
pub fn default_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 1, 1).expect("valid date")
}

/// One Monte-Carlo experiment: a strategy, a player and the trial layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub strategy: StrategyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepGrid>,
    #[serde(default)]
    pub player: PlayerConfig,
    #[serde(default = "default_horizon")]
    pub horizon: u32,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub reward_mode: RewardMode,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_start_date")]
    pub start_date: NaiveDate,
    /// Keep every trial's per-step rewards in the result.
    #[serde(default)]
    pub retain_trials: bool,
}

impl ExperimentConfig {
    pub fn new(strategy: StrategyConfig) -> Self {
        Self {
            strategy,
            sweep: None,
            player: PlayerConfig::default(),
            horizon: default_horizon(),
            trials: default_trials(),
            master_seed: 0,
            reward_mode: RewardMode::RawSteps,
            workers: 0,
            start_date: default_start_date(),
            retain_trials: false,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ExperimentError> {
        let config: Self = toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.horizon < 1 {
            return Err(ExperimentError::Config("horizon must be at least 1".into()));
        }
        if self.trials < 1 {
            return Err(ExperimentError::Config("trials must be at least 1".into()));
        }
        self.strategy.validate()?;
        self.player.validate()?;
        if let Some(grid) = &self.sweep {
            for (_, point) in grid.points(self)? {
                point.strategy.validate()?;
                point.player.validate()?;
            }
        }
        Ok(())
    }
}

/// Parameter that a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    C,
    Epsilon,
    ForcedExplorationPulls,
    U,
    D,
}

/// Points of a sweep: values of one parameter, or a list of strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepGrid {
    Parameter { param: SweepParam, values: Vec<f64> },
    Strategies { strategies: Vec<StrategyConfig> },
}

impl SweepGrid {
    /// `C = k * 400` for `k` in 1..=9.
    pub fn ucb1_c_grid() -> Self {
        SweepGrid::Parameter { param: SweepParam::C, values: (1..=9).map(|k| f64::from(k) * 400.0).collect() }
    }

    pub fn len(&self) -> usize {
        match self {
            SweepGrid::Parameter { values, .. } => values.len(),
            SweepGrid::Strategies { strategies } => strategies.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(label, config)` for every point, derived from `base`.
    pub fn points(&self, base: &ExperimentConfig) -> Result<Vec<(String, ExperimentConfig)>, ExperimentError> {
        let mut base = base.clone();
        base.sweep = None;
        match self {
            SweepGrid::Strategies { strategies } => Ok(strategies
                .iter()
                .map(|s| {
                    let mut cfg = base.clone();
                    cfg.strategy = s.clone();
                    (s.label(), cfg)
                })
                .collect()),
            SweepGrid::Parameter { param, values } => values
                .iter()
                .map(|&v| {
                    let mut cfg = base.clone();
                    apply_param(&mut cfg, *param, v)?;
                    Ok((format_param(v), cfg))
                })
                .collect(),
        }
    }
}

fn format_param(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Sets one named parameter on a config.
pub fn apply_param(cfg: &mut ExperimentConfig, param: SweepParam, value: f64) -> Result<(), ExperimentError> {
    match param {
        SweepParam::C => match &mut cfg.strategy.kind {
            StrategyKind::Ucb1 { c } => *c = value,
            other => {
                return Err(ExperimentError::Config(format!("`c` does not apply to strategy {}", other.name())))
            }
        },
        SweepParam::Epsilon => match &mut cfg.strategy.kind {
            StrategyKind::EpsGreedy { epsilon }
            | StrategyKind::EpsFirst { epsilon }
            | StrategyKind::EpsDecExp { epsilon } => *epsilon = value,
            other => {
                return Err(ExperimentError::Config(format!(
                    "`epsilon` does not apply to strategy {}",
                    other.name()
                )))
            }
        },
        SweepParam::ForcedExplorationPulls => {
            if !(value >= 0.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX)) {
                return Err(ExperimentError::Config(format!("forced pulls must be a whole number, got {value}")));
            }
            cfg.strategy.forced_exploration_pulls = value as u32;
        }
        SweepParam::U => cfg.player.u = value,
        SweepParam::D => cfg.player.d = value,
    }
    Ok(())
}
