//! The planner graph: vertices with their shapes, undirected Euclidean edges,
//! metric queries and shortest-path extraction.

mod grid;

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;

use crate::geometry::{dist_sq, Aabb, Point};
use crate::scalar::Scalar;
use crate::shape::GeneralizedShape;

use grid::GridIndex;

/// Vertex count above which metric queries go through the bucket grid.
pub const LINEAR_SCAN_LIMIT: usize = 4096;

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct PathResult<T> {
    pub vertices: Vec<VertexId>,
    /// Sum of edge weights; `+inf` when no path exists.
    pub cost: T,
    pub found: bool,
}

impl<T: Scalar> PathResult<T> {
    pub fn not_found() -> Self {
        Self { vertices: Vec::new(), cost: T::infinity(), found: false }
    }
}

#[derive(Clone, Debug)]
pub struct Roadmap<T> {
    points: PointSet<T>,
    shapes: Vec<Option<GeneralizedShape<T>>>,
    adjacency: Vec<Vec<(VertexId, T)>>,
    edges: Vec<(VertexId, VertexId, T)>,
    edge_set: HashSet<(VertexId, VertexId)>,
    init: VertexId,
    goal: VertexId,
    // distance-from-init labels, kept exact under insertions
    labels: Vec<T>,
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier<T> {
    cost: T,
    id: VertexId,
}

impl<T: Scalar> Eq for Frontier<T> {}

impl<T: Scalar> Ord for Frontier<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (cost, id)
        other.cost.partial_cmp(&self.cost).unwrap_or(Ordering::Equal).then_with(|| other.id.cmp(&self.id))
    }
}

impl<T: Scalar> PartialOrd for Frontier<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Roadmap<T> {
    /// Roadmap holding only the start (id 0) and goal (id 1).
    pub fn new(
        bounds: Aabb<T>,
        init: Point<T>,
        init_shape: Option<GeneralizedShape<T>>,
        goal: Point<T>,
        goal_shape: Option<GeneralizedShape<T>>,
    ) -> Self {
        let mut rm = Self {
            points: PointSet::new(bounds),
            shapes: Vec::new(),
            adjacency: Vec::new(),
            edges: Vec::new(),
            edge_set: HashSet::new(),
            init: 0,
            goal: 1,
            labels: Vec::new(),
        };
        rm.add_vertex(init, init_shape);
        rm.add_vertex(goal, goal_shape);
        rm.labels[0] = T::zero();
        rm
    }

    pub fn init_id(&self) -> VertexId {
        self.init
    }

    pub fn goal_id(&self) -> VertexId {
        self.goal
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn point(&self, id: VertexId) -> &Point<T> {
        self.points.get(id)
    }

    pub fn points(&self) -> &[Point<T>] {
        self.points.points()
    }

    pub fn shape(&self, id: VertexId) -> Option<&GeneralizedShape<T>> {
        self.shapes[id].as_ref()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, T)] {
        &self.edges
    }

    pub fn neighbors(&self, id: VertexId) -> &[(VertexId, T)] {
        &self.adjacency[id]
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edge_set.contains(&(a.min(b), a.max(b)))
    }

    pub fn add_vertex(&mut self, p: Point<T>, shape: Option<GeneralizedShape<T>>) -> VertexId {
        let id = self.points.push(p);
        self.shapes.push(shape);
        self.adjacency.push(Vec::new());
        self.labels.push(T::infinity());
        id
    }

    /// Inserts the undirected edge `{a, b}` weighted by Euclidean length.
    ///
    /// Returns `false` (and stores nothing) for self loops, coincident
    /// endpoints and duplicates.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        if a == b {
            return false;
        }
        let key = (a.min(b), a.max(b));
        if self.edge_set.contains(&key) {
            return false;
        }
        let w = self.point(a).distance(self.point(b));
        if !(w > T::zero()) {
            return false;
        }
        self.edge_set.insert(key);
        self.adjacency[a].push((b, w));
        self.adjacency[b].push((a, w));
        self.edges.push((key.0, key.1, w));
        if self.labels[a] + w < self.labels[b] {
            self.labels[b] = self.labels[a] + w;
            self.propagate(b);
        } else if self.labels[b] + w < self.labels[a] {
            self.labels[a] = self.labels[b] + w;
            self.propagate(a);
        }
        true
    }

    fn propagate(&mut self, from: VertexId) {
        let mut heap = BinaryHeap::new();
        heap.push(Frontier { cost: self.labels[from], id: from });
        while let Some(Frontier { cost, id }) = heap.pop() {
            if cost > self.labels[id] {
                continue;
            }
            for &(n, w) in &self.adjacency[id] {
                let c = cost + w;
                if c < self.labels[n] {
                    self.labels[n] = c;
                    heap.push(Frontier { cost: c, id: n });
                }
            }
        }
    }

    /// Current shortest start-to-goal cost (`+inf` while disconnected), kept
    /// up to date on every edge insertion.
    pub fn best_cost(&self) -> T {
        self.labels[self.goal]
    }

    /// Vertex closest to `x`; lowest id on ties.
    pub fn nearest(&self, x: &Point<T>) -> VertexId {
        self.points.nearest(x).expect("roadmap is never empty")
    }

    /// Vertices within distance `r` of `x` (inclusive), ascending id.
    pub fn near(&self, x: &Point<T>, r: T) -> Vec<VertexId> {
        self.points.near(x, r)
    }

    /// Dijkstra from the start to the goal.
    ///
    /// Among equal-cost paths the lexicographically smallest id sequence wins.
    pub fn min_path(&self) -> PathResult<T> {
        let n = self.points.len();
        let mut dist = vec![T::infinity(); n];
        let mut pred: Vec<Option<VertexId>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[self.init] = T::zero();
        heap.push(Frontier { cost: T::zero(), id: self.init });
        while let Some(Frontier { cost, id }) = heap.pop() {
            if done[id] || cost > dist[id] {
                continue;
            }
            done[id] = true;
            if id == self.goal {
                break;
            }
            for &(nb, w) in &self.adjacency[id] {
                if done[nb] {
                    continue;
                }
                let c = cost + w;
                if c < dist[nb] {
                    dist[nb] = c;
                    pred[nb] = Some(id);
                    heap.push(Frontier { cost: c, id: nb });
                } else if c == dist[nb] && pred[nb] != Some(id) {
                    let current = pred[nb].map(|p| chain(&pred, p)).unwrap_or_default();
                    if chain(&pred, id) < current {
                        pred[nb] = Some(id);
                    }
                }
            }
        }
        if !dist[self.goal].is_finite() {
            return PathResult::not_found();
        }
        let mut vertices = chain(&pred, self.goal);
        vertices.shrink_to_fit();
        let cost = vertices.windows(2).fold(T::zero(), |acc, w| acc + self.point(w[0]).distance(self.point(w[1])));
        PathResult { vertices, cost, found: true }
    }

    /// Polyline of a path's vertex coordinates.
    pub fn polyline(&self, path: &PathResult<T>) -> Vec<Point<T>> {
        path.vertices.iter().map(|&v| self.point(v).clone()).collect()
    }

    pub fn dump(&self) -> RoadmapDump {
        RoadmapDump {
            vertices: self.points().iter().map(|p| p.coords().iter().map(|c| c.to_f64_lossy()).collect()).collect(),
            edges: self.edges.iter().map(|&(a, b, w)| (a, b, w.to_f64_lossy())).collect(),
        }
    }
}

/// Point collection answering nearest and radius queries, by linear scan up to
/// [`LINEAR_SCAN_LIMIT`] points and through a bucket grid beyond.
#[derive(Clone, Debug)]
pub struct PointSet<T> {
    points: Vec<Point<T>>,
    bounds: Aabb<T>,
    grid: Option<GridIndex<T>>,
}

impl<T: Scalar> PointSet<T> {
    /// Empty set; `bounds` must contain every point pushed later.
    pub fn new(bounds: Aabb<T>) -> Self {
        Self { points: Vec::new(), bounds, grid: None }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, id: usize) -> &Point<T> {
        &self.points[id]
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn push(&mut self, p: Point<T>) -> usize {
        let id = self.points.len();
        if let Some(g) = self.grid.as_mut() {
            g.insert(id, p.coords());
        }
        self.points.push(p);
        if self.grid.is_none() && self.points.len() > LINEAR_SCAN_LIMIT {
            let mut g = GridIndex::new(&self.bounds, self.points.len() * 2);
            for (i, q) in self.points.iter().enumerate() {
                g.insert(i, q.coords());
            }
            self.grid = Some(g);
        }
        id
    }

    /// Index of the closest point, lowest index on ties.
    pub fn nearest(&self, x: &Point<T>) -> Option<usize> {
        match &self.grid {
            Some(g) => g.nearest(&self.points, x.coords()),
            None => nearest_linear(&self.points, x.coords()),
        }
    }

    /// Indices within distance `r` of `x` (inclusive), ascending.
    pub fn near(&self, x: &Point<T>, r: T) -> Vec<usize> {
        let mut ids = match &self.grid {
            Some(g) => g.within(&self.points, x.coords(), r),
            None => {
                let r2 = r * r;
                (0..self.points.len()).filter(|&i| dist_sq(self.points[i].coords(), x.coords()) <= r2).collect()
            }
        };
        ids.sort_unstable();
        ids
    }
}

/// Id sequence from the root to `v` following predecessors.
fn chain(pred: &[Option<VertexId>], v: VertexId) -> Vec<VertexId> {
    let mut seq = vec![v];
    let mut cur = v;
    while let Some(p) = pred[cur] {
        seq.push(p);
        cur = p;
    }
    seq.reverse();
    seq
}

pub(crate) fn nearest_linear<T: Scalar>(points: &[Point<T>], q: &[T]) -> Option<VertexId> {
    let mut best: Option<(T, VertexId)> = None;
    for (i, p) in points.iter().enumerate() {
        let d = dist_sq(p.coords(), q);
        if best.map_or(true, |(bd, _)| d < bd) {
            best = Some((d, i));
        }
    }
    best.map(|(_, i)| i)
}

/// JSON form of a roadmap for external visualization.
#[derive(Clone, Debug, Serialize)]
pub struct RoadmapDump {
    pub vertices: Vec<Vec<f64>>,
    pub edges: Vec<(VertexId, VertexId, f64)>,
}
