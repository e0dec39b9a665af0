//! GSE, GSE* and the PRM* baseline.

mod gse;
mod prm;
mod sampling;
mod steer;
mod trace;

pub use gse::{GsePlanner, StepOutcome, Variant};
pub use prm::{prm_gamma, prm_star_plan, PrmStar};
pub use sampling::{RngSampler, SampleSource, SampleTape};
pub use steer::{steer, steer_gse, SteerResult};
pub use trace::{RunTrace, TraceRecord};
pub(crate) use trace::format_cost;

use thiserror::Error;

use crate::geometry::{Environment, GeometryError, DEFAULT_SAMPLE_ATTEMPTS};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlannerError {
    #[error("invalid planner configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// User-facing planner settings. Unset options take environment-dependent
/// defaults in [`PlannerConfig::resolve`].
#[derive(Clone, Debug, PartialEq)]
pub struct PlannerConfig<T> {
    /// Steering radius; defaults to a quarter of the bounds diagonal.
    pub eta: Option<T>,
    pub phi: T,
    pub rho: T,
    /// Connection-radius constant; defaults to 1.1 times the lower bound.
    pub gamma_override: Option<T>,
    pub iterations: usize,
    pub seed: u64,
    /// Oracle resolution; defaults to 1e-3 of the bounds diagonal.
    pub collision_step: Option<T>,
    pub sample_attempts: usize,
}

impl<T: Scalar> Default for PlannerConfig<T> {
    fn default() -> Self {
        Self {
            eta: None,
            phi: T::one(),
            rho: T::lit(0.5),
            gamma_override: None,
            iterations: 500,
            seed: 0,
            collision_step: None,
            sample_attempts: DEFAULT_SAMPLE_ATTEMPTS,
        }
    }
}

/// Fully resolved, validated parameters for one environment.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannerParams<T> {
    pub eta: T,
    pub phi: T,
    pub rho: T,
    pub gamma: T,
    pub gamma_bound: T,
    pub iterations: usize,
    pub seed: u64,
    pub collision_step: T,
    pub sample_attempts: usize,
}

impl<T: Scalar> PlannerConfig<T> {
    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn resolve(&self, env: &Environment<T>) -> Result<PlannerParams<T>, PlannerError> {
        let positive = |name: &str, v: T| {
            if v.is_finite() && v > T::zero() {
                Ok(v)
            } else {
                Err(PlannerError::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let phi = positive("phi", self.phi)?;
        if !(self.rho > T::zero() && self.rho < T::one()) {
            return Err(PlannerError::Config(format!("rho must lie in (0, 1), got {}", self.rho)));
        }
        let eta = positive("eta", self.eta.unwrap_or_else(|| T::lit(0.25) * env.bounds().diagonal()))?;
        let collision_step = positive("collision_step", self.collision_step.unwrap_or_else(|| env.default_collision_step()))?;
        if self.sample_attempts == 0 {
            return Err(PlannerError::Config("sample_attempts must be at least 1".into()));
        }
        let gamma_bound = gamma_lower_bound(env.dim(), env.free_measure().value, self.rho, phi);
        let gamma = match self.gamma_override {
            Some(g) if g > gamma_bound && g.is_finite() => g,
            Some(g) => {
                return Err(PlannerError::Config(format!("gamma {g} does not exceed the lower bound {gamma_bound}")))
            }
            None => T::lit(1.1) * gamma_bound,
        };
        assert!(gamma > gamma_bound, "gamma must exceed its lower bound");
        Ok(PlannerParams {
            eta,
            phi,
            rho: self.rho,
            gamma,
            gamma_bound,
            iterations: self.iterations,
            seed: self.seed,
            collision_step,
            sample_attempts: self.sample_attempts,
        })
    }
}

/// Shrinking neighbor radius `min(γ (ln n / n)^(1/d), η)`.
pub fn connection_radius<T: Scalar>(vertex_count: usize, d: usize, gamma: T, eta: T) -> T {
    let n = T::from_usize_lossy(vertex_count);
    let r = gamma * (n.ln() / n).powf(T::one() / T::from_usize_lossy(d));
    r.min(eta)
}

/// Smallest `γ` for which GSE* is asymptotically optimal:
/// `h [(1 + 1/d) μ / (1 − ρ)]^(1/d)` with `h = (1 + φ) / (2 + φ)²`.
pub fn gamma_lower_bound<T: Scalar>(d: usize, mu_free: T, rho: T, phi: T) -> T {
    let two = T::lit(2.0);
    let h = (T::one() + phi) / ((two + phi) * (two + phi));
    let inv_d = T::one() / T::from_usize_lossy(d);
    h * ((T::one() + inv_d) * mu_free / (T::one() - rho)).powf(inv_d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Aabb, Obstacle};
    use approx::assert_relative_eq;

    #[test]
    fn radius_matches_direct_evaluation() {
        let direct = 2.0 * (100f64.ln() / 100.0).sqrt();
        assert_relative_eq!(connection_radius(100, 2, 2.0, 0.5), direct, epsilon = 1e-15);
        assert_relative_eq!(direct, 0.429_193_2, epsilon = 1e-7);
        assert_eq!(connection_radius(100, 2, 2.0, 0.1), 0.1);
    }

    #[test]
    fn radius_is_nonincreasing_past_three() {
        let mut prev = f64::INFINITY;
        for n in 3..5000 {
            let r = connection_radius(n, 3, 5.0, 10.0);
            assert!(r <= prev && r <= 10.0);
            prev = r;
        }
    }

    #[test]
    fn gamma_bound_closed_form() {
        assert_relative_eq!(gamma_lower_bound(2, 12.0, 0.5, 1.0), 4.0 / 3.0, epsilon = 1e-12);
        assert!(gamma_lower_bound(2, 12.0, 0.9, 1.0) > gamma_lower_bound(2, 12.0, 0.5, 1.0));
    }

    fn promenade() -> Environment<f64> {
        Environment::new(Aabb::cube(2, 4.0).unwrap(), vec![Obstacle::axis_box(vec![1.0, 1.0], vec![3.0, 3.0]).unwrap()])
            .unwrap()
    }

    #[test]
    fn default_resolution() {
        let p = PlannerConfig::<f64>::default().resolve(&promenade()).unwrap();
        assert_relative_eq!(p.gamma_bound, 4.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(p.gamma, 1.1 * 4.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(p.eta, 0.25 * 32f64.sqrt());
        assert_relative_eq!(p.collision_step, 1e-3 * 32f64.sqrt());
    }

    #[test]
    fn rejects_bad_configs() {
        let env = promenade();
        let low = PlannerConfig { gamma_override: Some(1.0), ..PlannerConfig::default() };
        assert!(matches!(low.resolve(&env), Err(PlannerError::Config(_))));
        let ok = PlannerConfig { gamma_override: Some(2.0), ..PlannerConfig::default() };
        assert_eq!(ok.resolve(&env).unwrap().gamma, 2.0);
        for rho in [0.0, 1.0, -0.2] {
            let c = PlannerConfig { rho, ..PlannerConfig::default() };
            assert!(c.resolve(&env).is_err());
        }
        let c = PlannerConfig { eta: Some(0.0), ..PlannerConfig::default() };
        assert!(c.resolve(&env).is_err());
    }
}
