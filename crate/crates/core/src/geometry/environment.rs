use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

use super::{Aabb, GeometryError, Obstacle, Point};

/// Rejection-sampling cap used by the planners unless configured otherwise.
pub const DEFAULT_SAMPLE_ATTEMPTS: usize = 1_000_000;

/// Monte-Carlo samples per hull obstacle when estimating the free measure.
pub const DEFAULT_MEASURE_SAMPLES: usize = 200_000;

const MEASURE_SEED: u64 = 0x6d65_6173_7572_6531;

/// Lebesgue measure of the free space, with the Monte-Carlo standard error of
/// any hull volumes that went into it (zero when everything is closed-form).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreeMeasure<T> {
    pub value: T,
    pub std_error: T,
}

/// Bounded box workspace with pairwise-disjoint convex obstacles strictly inside it.
#[derive(Clone, Debug)]
pub struct Environment<T> {
    bounds: Aabb<T>,
    obstacles: Vec<Obstacle<T>>,
    obstacle_boxes: Vec<Aabb<T>>,
    free_measure: FreeMeasure<T>,
}

impl<T: Scalar> Environment<T> {
    pub fn new(bounds: Aabb<T>, obstacles: Vec<Obstacle<T>>) -> Result<Self, GeometryError> {
        Self::with_measure_samples(bounds, obstacles, DEFAULT_MEASURE_SAMPLES)
    }

    pub fn empty(bounds: Aabb<T>) -> Self {
        let value = bounds.volume();
        Self { bounds, obstacles: Vec::new(), obstacle_boxes: Vec::new(), free_measure: FreeMeasure { value, std_error: T::zero() } }
    }

    pub fn with_measure_samples(
        bounds: Aabb<T>,
        obstacles: Vec<Obstacle<T>>,
        measure_samples: usize,
    ) -> Result<Self, GeometryError> {
        let d = bounds.dim();
        if d < 2 {
            return Err(GeometryError::InvalidEnvironment(format!("dimension must be at least 2, got {d}")));
        }
        let mut obstacle_boxes = Vec::with_capacity(obstacles.len());
        for (i, ob) in obstacles.iter().enumerate() {
            if ob.dim() != d {
                return Err(GeometryError::DimensionMismatch { expected: d, got: ob.dim() });
            }
            let bb = ob.bounding_box();
            if !(bounds.contains_strictly(bb.lo()) && bounds.contains_strictly(bb.hi())) {
                return Err(GeometryError::InvalidEnvironment(format!("obstacle {i} is not strictly inside the bounds")));
            }
            obstacle_boxes.push(bb);
        }
        for i in 0..obstacles.len() {
            for j in i + 1..obstacles.len() {
                if obstacles[i].separation(&obstacles[j]) <= T::zero() {
                    return Err(GeometryError::InvalidEnvironment(format!("obstacles {i} and {j} overlap or touch")));
                }
            }
        }
        let mut env = Self {
            bounds,
            obstacles,
            obstacle_boxes,
            free_measure: FreeMeasure { value: T::zero(), std_error: T::zero() },
        };
        env.free_measure = env.estimate_free_measure(measure_samples, MEASURE_SEED);
        if !(env.free_measure.value > T::zero()) {
            return Err(GeometryError::InvalidEnvironment("free space has no volume".into()));
        }
        Ok(env)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Aabb<T> {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Obstacle<T>] {
        &self.obstacles
    }

    pub fn free_measure(&self) -> FreeMeasure<T> {
        self.free_measure
    }

    /// Oracle resolution used when none is configured: 1e-3 of the bounds diagonal.
    pub fn default_collision_step(&self) -> T {
        self.bounds.diagonal() * T::lit(1e-3)
    }

    /// Index of the first obstacle containing `p`.
    pub fn colliding_obstacle(&self, p: &[T]) -> Option<usize> {
        self.obstacles
            .iter()
            .zip(&self.obstacle_boxes)
            .position(|(ob, bb)| bb.contains(p) && ob.contains(p))
    }

    pub fn in_collision(&self, p: &[T]) -> bool {
        self.colliding_obstacle(p).is_some()
    }

    pub fn is_free(&self, p: &[T]) -> bool {
        self.bounds.contains(p) && !self.in_collision(p)
    }

    /// Dense sampling collision check of the segment `[a, b]`.
    ///
    /// Tests the points `a + t (b - a)` for `t` in `{0, s, 2s, ..., 1}` with
    /// `s = step / |b - a|`. Obstacles whose bounding box misses the segment are
    /// skipped, which cannot change the answer.
    pub fn segment_collision_free(&self, a: &Point<T>, b: &Point<T>, step: T) -> bool {
        let len = a.distance(b);
        let relevant: Vec<usize> = (0..self.obstacles.len())
            .filter(|&i| self.obstacle_boxes[i].intersects_segment(a.coords(), b.coords()))
            .collect();
        if relevant.is_empty() {
            return true;
        }
        let hits = |p: &[T]| relevant.iter().any(|&i| self.obstacle_boxes[i].contains(p) && self.obstacles[i].contains(p));
        if !(len > T::zero()) {
            return !hits(a.coords());
        }
        let dt = step / len;
        let mut buf = vec![T::zero(); a.dim()];
        let mut k = 0usize;
        loop {
            let t = (T::from_usize_lossy(k) * dt).min(T::one());
            for ((o, &x), &y) in buf.iter_mut().zip(a.coords()).zip(b.coords()) {
                *o = x + t * (y - x);
            }
            if hits(&buf) {
                return false;
            }
            if t >= T::one() {
                return true;
            }
            k += 1;
        }
    }

    /// One raw uniform draw from the bounds (no rejection).
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point<T> {
        Point::new(
            self.bounds
                .lo()
                .iter()
                .zip(self.bounds.hi())
                .map(|(&l, &h)| l + (h - l) * T::lit(rng.gen::<f64>()))
                .collect(),
        )
    }

    /// Uniform sample of the free space by rejection from the bounds.
    pub fn sample_free<R: Rng + ?Sized>(&self, rng: &mut R, max_attempts: usize) -> Result<Point<T>, GeometryError> {
        for _ in 0..max_attempts {
            let p = self.sample_uniform(rng);
            if !self.in_collision(p.coords()) {
                return Ok(p);
            }
        }
        Err(GeometryError::SamplingBudgetExceeded(max_attempts))
    }

    /// Free measure: exact for spheres and boxes, Monte-Carlo over each hull's
    /// bounding box with `samples` draws otherwise.
    pub fn estimate_free_measure(&self, samples: usize, seed: u64) -> FreeMeasure<T> {
        let mut value = self.bounds.volume();
        let mut var = 0.0_f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (ob, bb) in self.obstacles.iter().zip(&self.obstacle_boxes) {
            match ob.volume() {
                Some(v) => value = value - v,
                None => {
                    let n = samples.max(1);
                    let box_env = Environment::empty(bb.clone());
                    let inside = (0..n).filter(|_| ob.contains(box_env.sample_uniform(&mut rng).coords())).count();
                    let frac = inside as f64 / n as f64;
                    let bv = bb.volume().to_f64_lossy();
                    value = value - T::lit(bv * frac);
                    var += bv * bv * frac * (1.0 - frac) / n as f64;
                }
            }
        }
        FreeMeasure { value, std_error: T::lit(var.sqrt()) }
    }
}

/// A planning query: the environment plus start and goal points in its free space.
#[derive(Clone, Debug)]
pub struct Problem<T> {
    pub env: Environment<T>,
    pub init: Point<T>,
    pub goal: Point<T>,
}

impl<T: Scalar> Problem<T> {
    pub fn new(env: Environment<T>, init: Point<T>, goal: Point<T>) -> Result<Self, GeometryError> {
        for p in [&init, &goal] {
            if p.dim() != env.dim() {
                return Err(GeometryError::DimensionMismatch { expected: env.dim(), got: p.dim() });
            }
            if !env.bounds().contains(p.coords()) {
                return Err(GeometryError::InvalidEnvironment("start or goal outside the bounds".into()));
            }
            if let Some(i) = env.colliding_obstacle(p.coords()) {
                return Err(GeometryError::InsideObstacle(Some(i)));
            }
        }
        Ok(Self { env, init, goal })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(c: &[f64]) -> Point<f64> {
        Point::from_slice(c)
    }

    fn promenade2() -> Environment<f64> {
        Environment::new(
            Aabb::cube(2, 4.0).unwrap(),
            vec![Obstacle::axis_box(vec![1.0, 1.0], vec![3.0, 3.0]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn empty_environment_segments_are_free() {
        let env = Environment::empty(Aabb::cube(2, 1.0).unwrap());
        assert!(env.segment_collision_free(&p(&[0.0, 0.0]), &p(&[1.0, 1.0]), 1e-3));
    }

    #[test]
    fn promenade_segments() {
        let env = promenade2();
        let step = env.default_collision_step();
        assert!(!env.segment_collision_free(&p(&[0.5, 2.0]), &p(&[3.5, 2.0]), step));
        assert!(env.segment_collision_free(&p(&[0.5, 0.5]), &p(&[3.5, 0.5]), step));
    }

    #[test]
    fn free_measure_closed_form() {
        assert_relative_eq!(promenade2().free_measure().value, 12.0);
        let env = Environment::new(
            Aabb::cube(3, 1.0).unwrap(),
            vec![Obstacle::sphere(p(&[0.5, 0.5, 0.5]), 0.1).unwrap()],
        )
        .unwrap();
        assert_relative_eq!(env.free_measure().value, 1.0 - 4.0 / 3.0 * std::f64::consts::PI * 1e-3, epsilon = 1e-12);
        assert_relative_eq!(env.free_measure().value, 0.99581, epsilon = 1e-5);
        assert_eq!(env.free_measure().std_error, 0.0);
    }

    #[test]
    fn free_measure_monte_carlo_for_hull() {
        let sq = vec![p(&[1.5, 1.5]), p(&[2.5, 1.5]), p(&[2.5, 2.5]), p(&[1.5, 2.5]), p(&[2.0, 1.5])];
        let env = Environment::with_measure_samples(Aabb::cube(2, 4.0).unwrap(), vec![Obstacle::hull(sq).unwrap()], 1000).unwrap();
        let m = env.estimate_free_measure(1_000_000, 7);
        // the square fills its bounding box, so the estimate is exact here
        assert_relative_eq!(m.value, 15.0, epsilon = 1e-9);
        let tri = vec![p(&[1.0, 1.0]), p(&[3.0, 1.0]), p(&[1.0, 3.0])];
        let env = Environment::with_measure_samples(Aabb::cube(2, 4.0).unwrap(), vec![Obstacle::hull(tri).unwrap()], 1000).unwrap();
        let m = env.estimate_free_measure(1_000_000, 7);
        assert!(m.std_error > 0.0);
        assert!((m.value - 14.0).abs() < 4.0 * m.std_error, "{m:?}");
    }

    #[test]
    fn rejects_overlapping_or_outside_obstacles() {
        let b = Aabb::cube(2, 4.0).unwrap();
        let overlapping = vec![
            Obstacle::axis_box(vec![1.0, 1.0], vec![2.0, 2.0]).unwrap(),
            Obstacle::sphere(p(&[2.2, 2.2]), 0.5).unwrap(),
        ];
        assert!(Environment::new(b.clone(), overlapping).is_err());
        let outside = vec![Obstacle::sphere(p(&[3.8, 2.0]), 0.5).unwrap()];
        assert!(Environment::new(b.clone(), outside).is_err());
        let touching_wall = vec![Obstacle::axis_box(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap()];
        assert!(Environment::new(b, touching_wall).is_err());
    }

    #[test]
    fn first_free_sample_of_empty_env_is_first_raw_draw() {
        let env = Environment::empty(Aabb::cube(2, 1.0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = env.sample_free(&mut rng, 10).unwrap();
        let mut raw = ChaCha8Rng::seed_from_u64(11);
        let expected = [raw.gen::<f64>(), raw.gen::<f64>()];
        assert_eq!(s.coords(), &expected);
    }

    #[test]
    fn sampling_budget_exhausted_when_nearly_full() {
        let env = Environment::new(
            Aabb::cube(2, 1.0).unwrap(),
            vec![Obstacle::axis_box(vec![1e-9, 1e-9], vec![1.0 - 1e-9, 1.0 - 1e-9]).unwrap()],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(env.sample_free(&mut rng, 1000), Err(GeometryError::SamplingBudgetExceeded(1000)));
    }

    #[test]
    fn sample_free_is_uniform_over_free_space() {
        let env = promenade2();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 100_000;
        let mut bottom = 0usize;
        for _ in 0..n {
            let s = env.sample_free(&mut rng, 1000).unwrap();
            assert!(env.is_free(s.coords()));
            if s[1] < 1.0 {
                bottom += 1;
            }
        }
        // bottom strip [0,4]x[0,1] is 4 of the 12 free units
        let p = 4.0 / 12.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((bottom as f64 / n as f64 - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let env = promenade2();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| env.sample_free(&mut rng, 100).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }

    #[test]
    fn problem_rejects_start_in_obstacle() {
        let env = promenade2();
        assert!(Problem::new(env.clone(), p(&[2.0, 2.0]), p(&[0.5, 0.5])).is_err());
        assert!(Problem::new(env, p(&[0.5, 0.5]), p(&[3.5, 3.5])).is_ok());
    }
}
