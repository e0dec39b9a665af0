use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Environment, GeometryError, Point};
use crate::scalar::Scalar;

/// Stream of free-space samples consumed one per planner iteration.
pub trait SampleSource<T>: Send {
    fn next_sample(&mut self, env: &Environment<T>) -> Result<Point<T>, GeometryError>;
}

/// Seeded rejection sampler. The generator is touched by nothing else, so two
/// planners seeded alike see the same sample sequence.
#[derive(Clone, Debug)]
pub struct RngSampler {
    rng: ChaCha8Rng,
    max_attempts: usize,
}

impl RngSampler {
    pub fn new(seed: u64, max_attempts: usize) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), max_attempts }
    }
}

impl<T: Scalar> SampleSource<T> for RngSampler {
    fn next_sample(&mut self, env: &Environment<T>) -> Result<Point<T>, GeometryError> {
        env.sample_free(&mut self.rng, self.max_attempts)
    }
}

/// Prerecorded samples replayed in order.
#[derive(Clone, Debug)]
pub struct SampleTape<T> {
    samples: Vec<Point<T>>,
    pos: usize,
}

impl<T: Scalar> SampleTape<T> {
    pub fn new(samples: Vec<Point<T>>) -> Self {
        Self { samples, pos: 0 }
    }

    /// Records `n` samples from a seeded [`RngSampler`].
    pub fn record(env: &Environment<T>, seed: u64, n: usize, max_attempts: usize) -> Result<Self, GeometryError> {
        let mut src = RngSampler::new(seed, max_attempts);
        let samples = (0..n).map(|_| src.next_sample(env)).collect::<Result<_, _>>()?;
        Ok(Self::new(samples))
    }

    pub fn samples(&self) -> &[Point<T>] {
        &self.samples
    }
}

impl<T: Scalar> SampleSource<T> for SampleTape<T> {
    fn next_sample(&mut self, _env: &Environment<T>) -> Result<Point<T>, GeometryError> {
        let p = self.samples.get(self.pos).cloned().ok_or(GeometryError::SamplingBudgetExceeded(self.samples.len()))?;
        self.pos += 1;
        Ok(p)
    }
}
