use std::fmt::Write as _;
use std::time::Duration;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord<T> {
    pub iteration: usize,
    pub vertices: usize,
    pub edges: usize,
    /// `+inf` until a start-to-goal path exists.
    pub best_cost: T,
}

/// Per-iteration progress of one planning run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunTrace<T> {
    pub records: Vec<TraceRecord<T>>,
    pub wall_time: Duration,
}

impl<T: Scalar> RunTrace<T> {
    pub fn final_cost(&self) -> T {
        self.records.last().map_or_else(T::infinity, |r| r.best_cost)
    }

    /// First iteration with a finite cost.
    pub fn first_solution_iteration(&self) -> Option<usize> {
        self.records.iter().find(|r| r.best_cost.is_finite()).map(|r| r.iteration)
    }

    /// CSV with header `iteration,vertices,edges,best_cost`; infinite costs are written as `inf`.
    /// Wall time is left out so that output is reproducible.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,vertices,edges,best_cost\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{}", r.iteration, r.vertices, r.edges, format_cost(r.best_cost));
        }
        out
    }
}

pub(crate) fn format_cost<T: Scalar>(c: T) -> String {
    if c.is_finite() {
        format!("{}", c.to_f64_lossy())
    } else {
        "inf".to_string()
    }
}
