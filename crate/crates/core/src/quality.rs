//! PoI quality dynamics and the perturbation that turns offered quality
//! into a vehicle's stored experience.

use rand::{Rng, RngCore};

/// Relative spread of perceived quality around the offered quality.
pub const EXPERIENCE_SPREAD: f64 = 0.25;
pub const DEFAULT_STEP_SIGMA: f64 = 0.05;

/// A stochastic process driving every PoI's quality, one step per hour.
pub trait QualityProcess: Send + Sync {
    fn init(&self, rng: &mut dyn RngCore) -> f64;
    fn step(&self, quality: f64, rng: &mut dyn RngCore) -> f64;
}

/// Clamped uniform random walk: each hour adds a step drawn uniformly from
/// `[-step_sigma, +step_sigma]` and clamps to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomWalk {
    pub step_sigma: f64,
}

impl Default for RandomWalk {
    fn default() -> Self {
        RandomWalk {
            step_sigma: DEFAULT_STEP_SIGMA,
        }
    }
}

impl QualityProcess for RandomWalk {
    fn init(&self, rng: &mut dyn RngCore) -> f64 {
        init_quality(rng)
    }

    fn step(&self, quality: f64, rng: &mut dyn RngCore) -> f64 {
        step_quality(quality, self.step_sigma, rng)
    }
}

/// Initial quality, uniform on `[0, 1)`.
pub fn init_quality<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}

/// One random-walk step.
pub fn step_quality<R: Rng + ?Sized>(quality: f64, step_sigma: f64, rng: &mut R) -> f64 {
    let delta = step_sigma * (2.0 * rng.random::<f64>() - 1.0);
    apply_step(quality, delta)
}

pub fn apply_step(quality: f64, delta: f64) -> f64 {
    (quality + delta).clamp(0.0, 1.0)
}

/// Perceived quality: `quality * (1 + u)` with `u` uniform on
/// `[-0.25, +0.25]`. Deliberately not clamped to 1.
pub fn experience_of<R: Rng + ?Sized>(quality: f64, rng: &mut R) -> f64 {
    let u = EXPERIENCE_SPREAD * (2.0 * rng.random::<f64>() - 1.0);
    perturb(quality, u)
}

pub fn perturb(quality: f64, relative: f64) -> f64 {
    quality * (1.0 + relative)
}
