use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::simulation::{ComparisonProfile, Direction, SimulationError};

/// Social comparison orientation: affinity for upward (`u`) and downward (`d`) comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoProfile {
    pub u: f64,
    pub d: f64,
}

impl ScoProfile {
    pub fn new(u: f64, d: f64) -> Result<Self, SimulationError> {
        if !((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&d)) {
            return Err(SimulationError::InvalidParameter(format!(
                "comparison affinities must lie in [0, 1], got u={u} d={d}"
            )));
        }
        Ok(Self { u, d })
    }

    pub fn upward_probability(&self) -> f64 {
        let total = self.u + self.d;
        if total > 0.0 {
            self.u / total
        } else {
            0.5
        }
    }

    /// Aggregate affect of a comparison: `u - d` upward, `d - u` downward.
    pub fn affect(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Upward => self.u - self.d,
            Direction::Downward => self.d - self.u,
        }
    }
}

/// Picks the profile the player inspects; returns its index.
///
/// One draw for the preferred direction, one for the profile; when no
/// profile goes the preferred way the choice falls to all four.
pub fn select_profile<R: Rng + ?Sized>(profiles: &[ComparisonProfile], sco: &ScoProfile, rng: &mut R) -> usize {
    let wanted = if rng.random::<f64>() < sco.upward_probability() {
        Direction::Upward
    } else {
        Direction::Downward
    };
    let matching: Vec<usize> =
        profiles.iter().enumerate().filter(|(_, p)| p.direction == wanted).map(|(i, _)| i).collect();
    if matching.is_empty() {
        rng.random_range(0..profiles.len())
    } else {
        matching[rng.random_range(0..matching.len())]
    }
}

/// Steps after comparing against a target of `target` steps.
pub fn simulate_steps<T: Scalar>(base: T, target: T, direction: Direction, sco: &ScoProfile) -> T {
    let influenced = match direction {
        Direction::Upward => base * (T::one() + T::lit(sco.u) * (target - base) / base),
        Direction::Downward => base * (T::one() + T::lit(sco.d) * (base - target) / base),
    };
    influenced.max(T::zero())
}

/// Pre-session motivation: uniform over {2, 3, 4}.
pub fn report_pre_motivation<R: Rng + ?Sized>(rng: &mut R) -> u8 {
    rng.random_range(2..=4)
}

/// Post-session motivation on the 1..=5 scale, driven by the comparison's affect.
pub fn report_post_motivation<R: Rng + ?Sized>(
    pre: u8,
    direction: Direction,
    sco: &ScoProfile,
    rng: &mut R,
) -> u8 {
    let pre = pre.clamp(1, 5);
    let affect = sco.affect(direction);
    let (low, high) = if affect > 0.0 {
        (pre, 5)
    } else if affect < 0.0 {
        (1, pre)
    } else {
        (pre.saturating_sub(1).max(1), (pre + 1).min(5))
    };
    rng.random_range(low..=high)
}
