use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::simulation::SimulationError;

/// Gamma-distributed daily step count with shape `k` and scale `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepModel<T = f64> {
    pub k: T,
    pub theta: T,
}

impl<T: Scalar> StepModel<T> {
    pub fn new(k: T, theta: T) -> Result<Self, SimulationError> {
        if !(k.is_finite() && theta.is_finite() && k > T::zero() && theta > T::zero()) {
            return Err(SimulationError::InvalidParameter(format!(
                "gamma shape and scale must be positive, got k={k} theta={theta}"
            )));
        }
        Ok(Self { k, theta })
    }

    pub fn mean(&self) -> T {
        self.k * self.theta
    }

    pub fn variance(&self) -> T {
        self.k * self.theta * self.theta
    }

    pub fn sampler(&self) -> StepSampler {
        let gamma = Gamma::new(self.k.to_f64_lossy(), self.theta.to_f64_lossy())
            .expect("validated gamma parameters");
        StepSampler { gamma }
    }
}

impl Default for StepModel<f64> {
    fn default() -> Self {
        Self { k: 2.8, theta: 3100.0 }
    }
}

/// Prepared exact gamma sampler (Marsaglia-Tsang).
#[derive(Debug, Clone, Copy)]
pub struct StepSampler {
    gamma: Gamma<f64>,
}

impl StepSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.gamma.sample(rng)
    }
}

/// Draws the uninfluenced step count of a day.
pub fn sample_base_steps<T: Scalar, R: Rng + ?Sized>(model: &StepModel<T>, rng: &mut R) -> T {
    T::lit(model.sampler().sample(rng))
}
