use std::time::Instant;

use crate::geometry::{unit_ball_volume, Environment, Problem};
use crate::roadmap::{PathResult, Roadmap, VertexId};
use crate::scalar::Scalar;

use super::{PlannerConfig, PlannerError, RngSampler, RunTrace, SampleSource, TraceRecord};

/// `1.1 · 2 (1 + 1/d)^(1/d) (μ / ζ_d)^(1/d)`, with `ζ_d` the unit-ball volume.
pub fn prm_gamma<T: Scalar>(d: usize, mu_free: T) -> T {
    let inv_d = T::one() / T::from_usize_lossy(d);
    T::lit(2.2) * (T::one() + inv_d).powf(inv_d) * (mu_free / unit_ball_volume::<T>(d)).powf(inv_d)
}

/// Incremental PRM*: each free sample is joined to every vertex within
/// `γ (ln n / n)^(1/d)` whose connecting segment passes the collision oracle.
pub struct PrmStar<T: Scalar> {
    env: Environment<T>,
    roadmap: Roadmap<T>,
    gamma: T,
    step: T,
    iterations: usize,
    source: Box<dyn SampleSource<T>>,
    records: Vec<TraceRecord<T>>,
}

impl<T: Scalar> PrmStar<T> {
    pub fn new(problem: &Problem<T>, config: &PlannerConfig<T>) -> Result<Self, PlannerError> {
        let env = problem.env.clone();
        let params = config.resolve(&env)?;
        let gamma = prm_gamma(env.dim(), env.free_measure().value);
        let roadmap =
            Roadmap::new(env.bounds().clone(), problem.init.clone(), None, problem.goal.clone(), None);
        let mut prm = Self {
            env,
            roadmap,
            gamma,
            step: params.collision_step,
            iterations: params.iterations,
            source: Box::new(RngSampler::new(params.seed, params.sample_attempts)),
            records: Vec::new(),
        };
        prm.connect(prm.roadmap.goal_id());
        Ok(prm)
    }

    pub fn roadmap(&self) -> &Roadmap<T> {
        &self.roadmap
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn best_path(&self) -> PathResult<T> {
        self.roadmap.min_path()
    }

    fn radius(&self) -> T {
        let n = T::from_usize_lossy(self.roadmap.vertex_count());
        self.gamma * (n.ln() / n).powf(T::one() / T::from_usize_lossy(self.env.dim()))
    }

    fn connect(&mut self, id: VertexId) {
        let r = self.radius();
        let x = self.roadmap.point(id).clone();
        for u in self.roadmap.near(&x, r) {
            if u != id && self.env.segment_collision_free(self.roadmap.point(u), &x, self.step) {
                self.roadmap.add_edge(u, id);
            }
        }
    }

    pub fn step(&mut self) -> Result<(), PlannerError> {
        let x = self.source.next_sample(&self.env)?;
        let id = self.roadmap.add_vertex(x, None);
        self.connect(id);
        self.records.push(TraceRecord {
            iteration: self.records.len() + 1,
            vertices: self.roadmap.vertex_count(),
            edges: self.roadmap.edge_count(),
            best_cost: self.roadmap.best_cost(),
        });
        Ok(())
    }

    pub fn run(&mut self) -> Result<RunTrace<T>, PlannerError> {
        let start = Instant::now();
        for _ in 0..self.iterations {
            self.step()?;
        }
        Ok(RunTrace { records: self.records.clone(), wall_time: start.elapsed() })
    }
}

/// Runs PRM* for `iterations` samples with default settings otherwise.
pub fn prm_star_plan<T: Scalar>(problem: &Problem<T>, iterations: usize, seed: u64) -> Result<RunTrace<T>, PlannerError> {
    let cfg = PlannerConfig::default().with_iterations(iterations).with_seed(seed);
    PrmStar::new(problem, &cfg)?.run()
}
