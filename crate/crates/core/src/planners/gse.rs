use std::time::Instant;

use crate::geometry::{Environment, Point, Problem};
use crate::roadmap::{PathResult, PointSet, Roadmap, VertexId};
use crate::scalar::Scalar;
use crate::shape::{build_shape, shapes_connect, GeneralizedShape};

use super::{
    connection_radius, steer, steer_gse, PlannerConfig, PlannerError, PlannerParams, RngSampler, RunTrace,
    SampleSource, TraceRecord,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Shape expansion only.
    Gse,
    /// Shape expansion plus metric steering and radius connections.
    GseStar,
}

/// What one iteration did.
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome<T> {
    pub x_rand: Point<T>,
    /// Vertices added this iteration, in insertion order.
    pub added: Vec<VertexId>,
}

/// One GSE or GSE* run. Owns its environment, graph and sample stream.
pub struct GsePlanner<T: Scalar> {
    env: Environment<T>,
    params: PlannerParams<T>,
    variant: Variant,
    roadmap: Roadmap<T>,
    // vertices produced by shape expansion, in insertion order
    layer: PointSet<T>,
    layer_ids: Vec<VertexId>,
    source: Box<dyn SampleSource<T>>,
    records: Vec<TraceRecord<T>>,
}

impl<T: Scalar> GsePlanner<T> {
    /// Planner drawing samples from a generator seeded with `config.seed`.
    pub fn new(problem: &Problem<T>, config: &PlannerConfig<T>, variant: Variant) -> Result<Self, PlannerError> {
        let source = RngSampler::new(config.seed, config.sample_attempts);
        Self::with_source(problem, config, variant, Box::new(source))
    }

    pub fn with_source(
        problem: &Problem<T>,
        config: &PlannerConfig<T>,
        variant: Variant,
        source: Box<dyn SampleSource<T>>,
    ) -> Result<Self, PlannerError> {
        let env = problem.env.clone();
        let params = config.resolve(&env)?;
        let init_shape = build_shape(&env, &problem.init)?;
        let goal_shape = build_shape(&env, &problem.goal)?;
        let connected = shapes_connect(&init_shape, &goal_shape);
        let mut roadmap = Roadmap::new(
            env.bounds().clone(),
            problem.init.clone(),
            Some(init_shape),
            problem.goal.clone(),
            Some(goal_shape),
        );
        if connected {
            roadmap.add_edge(roadmap.init_id(), roadmap.goal_id());
        }
        let mut layer = PointSet::new(env.bounds().clone());
        let mut layer_ids = Vec::new();
        for id in [roadmap.init_id(), roadmap.goal_id()] {
            layer.push(roadmap.point(id).clone());
            layer_ids.push(id);
        }
        Ok(Self { env, params, variant, roadmap, layer, layer_ids, source, records: Vec::new() })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn params(&self) -> &PlannerParams<T> {
        &self.params
    }

    pub fn env(&self) -> &Environment<T> {
        &self.env
    }

    pub fn roadmap(&self) -> &Roadmap<T> {
        &self.roadmap
    }

    pub fn iteration(&self) -> usize {
        self.records.len()
    }

    /// Ids of the shape-expansion vertices, including start and goal.
    pub fn layer_vertices(&self) -> &[VertexId] {
        &self.layer_ids
    }

    pub fn best_cost(&self) -> T {
        self.roadmap.best_cost()
    }

    pub fn best_path(&self) -> PathResult<T> {
        self.roadmap.min_path()
    }

    pub fn trace(&self) -> RunTrace<T> {
        RunTrace { records: self.records.clone(), wall_time: Default::default() }
    }

    fn shape(&self, id: VertexId) -> &GeneralizedShape<T> {
        self.roadmap.shape(id).expect("every planner vertex carries a shape")
    }

    /// Runs one iteration. Degenerate samples still count as an iteration.
    pub fn step(&mut self) -> Result<StepOutcome<T>, PlannerError> {
        let x_rand = self.source.next_sample(&self.env)?;
        let mut added = Vec::new();
        let nearest_all = self.roadmap.nearest(&x_rand);
        let nearest_layer = match self.variant {
            Variant::Gse => nearest_all,
            Variant::GseStar => self.layer_ids[self.layer.nearest(&x_rand).expect("layer holds start and goal")],
        };

        if let Some(x_new) = steer_gse(self.shape(nearest_layer), &x_rand).point() {
            // a point on an obstacle boundary has no shape; treat as no progress
            if let Ok(shape) = build_shape(&self.env, &x_new) {
                let id = self.roadmap.add_vertex(x_new.clone(), Some(shape));
                for v in 0..id {
                    if shapes_connect(self.shape(v), self.shape(id)) {
                        self.roadmap.add_edge(v, id);
                    }
                }
                self.layer.push(x_new);
                self.layer_ids.push(id);
                added.push(id);
            }
        }

        if self.variant == Variant::GseStar {
            let from = self.roadmap.point(nearest_all).clone();
            if let Some(x_new) = steer(&from, &x_rand, self.params.eta, &self.env).point() {
                let duplicate = added.first().copied().filter(|&g| *self.roadmap.point(g) == x_new);
                let id = match duplicate {
                    Some(g) => Some(g),
                    None => build_shape(&self.env, &x_new).ok().map(|shape| {
                        let id = self.roadmap.add_vertex(x_new, Some(shape));
                        added.push(id);
                        id
                    }),
                };
                if let Some(id) = id {
                    let n = self.roadmap.vertex_count();
                    let r = connection_radius(n, self.env.dim(), self.params.gamma, self.params.eta);
                    let center = self.roadmap.point(id).clone();
                    for u in self.roadmap.near(&center, r) {
                        if u != id && self.shape(id).contains(self.roadmap.point(u)) {
                            self.roadmap.add_edge(u, id);
                        }
                    }
                }
            }
        }

        self.records.push(TraceRecord {
            iteration: self.records.len() + 1,
            vertices: self.roadmap.vertex_count(),
            edges: self.roadmap.edge_count(),
            best_cost: self.roadmap.best_cost(),
        });
        Ok(StepOutcome { x_rand, added })
    }

    /// Runs the configured number of iterations and returns the trace.
    pub fn run(&mut self) -> Result<RunTrace<T>, PlannerError> {
        let start = Instant::now();
        for _ in 0..self.params.iterations {
            self.step()?;
        }
        let mut trace = self.trace();
        trace.wall_time = start.elapsed();
        Ok(trace)
    }
}
