//! Benchmark harness and command-line front end for the planners.

pub mod cli;
pub mod study;
pub mod workspace;

use gse_core::planners::PlannerError;
use gse_core::promenade::PromenadeError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// Bad arguments, spec files or environment files.
    #[error("configuration error: {0}")]
    Config(String),
    /// Failures while planning or writing results.
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 2,
            BenchError::Runtime(_) => 3,
        }
    }
}

impl From<PlannerError> for BenchError {
    fn from(e: PlannerError) -> Self {
        match e {
            PlannerError::Config(m) => BenchError::Config(m),
            other => BenchError::Runtime(other.to_string()),
        }
    }
}

impl From<PromenadeError> for BenchError {
    fn from(e: PromenadeError) -> Self {
        match e {
            PromenadeError::Config(m) | PromenadeError::Planner(PlannerError::Config(m)) => BenchError::Config(m),
            other => BenchError::Runtime(other.to_string()),
        }
    }
}
