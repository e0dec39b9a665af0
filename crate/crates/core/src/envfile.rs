//! JSON environment files.
//!
//! ```json
//! { "dim": 2, "bounds": {"lo": [0, 0], "hi": [4, 4]},
//!   "obstacles": [ {"type": "box", "lo": [1, 1], "hi": [3, 3]} ],
//!   "init": [0.95, 1.1], "goal": [3.05, 1.1] }
//! ```
//!
//! `init` and `goal` are optional.

use serde::{Deserialize, Serialize};

use crate::geometry::{Aabb, ConvexHull, Environment, GeometryError, Obstacle, Point, Problem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvFile {
    pub dim: usize,
    pub bounds: BoundsFile,
    pub obstacles: Vec<ObstacleFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsFile {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObstacleFile {
    Sphere { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Hull { points: Vec<Vec<f64>> },
}

#[derive(Debug, thiserror::Error)]
pub enum EnvFileError {
    #[error("malformed environment file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid environment: {0}")]
    Geometry(#[from] GeometryError),
    #[error("environment file has no {0} point")]
    MissingEndpoint(&'static str),
}

impl EnvFile {
    pub fn parse(text: &str) -> Result<Self, EnvFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("environment files always serialize")
    }

    pub fn from_environment(env: &Environment<f64>) -> Self {
        let obstacles = env
            .obstacles()
            .iter()
            .map(|ob| match ob {
                Obstacle::Sphere { center, radius } => {
                    ObstacleFile::Sphere { center: center.coords().to_vec(), radius: *radius }
                }
                Obstacle::AxisBox(b) => ObstacleFile::Box { lo: b.lo().to_vec(), hi: b.hi().to_vec() },
                Obstacle::Hull(h) => ObstacleFile::Hull { points: h.points().iter().map(|p| p.coords().to_vec()).collect() },
            })
            .collect();
        Self {
            dim: env.dim(),
            bounds: BoundsFile { lo: env.bounds().lo().to_vec(), hi: env.bounds().hi().to_vec() },
            obstacles,
            init: None,
            goal: None,
        }
    }

    pub fn from_problem(problem: &Problem<f64>) -> Self {
        Self {
            init: Some(problem.init.coords().to_vec()),
            goal: Some(problem.goal.coords().to_vec()),
            ..Self::from_environment(&problem.env)
        }
    }

    /// Builds and validates the environment.
    pub fn to_environment(&self) -> Result<Environment<f64>, EnvFileError> {
        let bounds = Aabb::new(self.bounds.lo.clone(), self.bounds.hi.clone())?;
        if bounds.dim() != self.dim {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, got: bounds.dim() }.into());
        }
        let obstacles = self
            .obstacles
            .iter()
            .map(|o| match o {
                ObstacleFile::Sphere { center, radius } => Obstacle::sphere(Point::from_slice(center), *radius),
                ObstacleFile::Box { lo, hi } => Obstacle::axis_box(lo.clone(), hi.clone()),
                ObstacleFile::Hull { points } => {
                    ConvexHull::new(points.iter().map(|p| Point::from_slice(p)).collect()).map(Obstacle::Hull)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Environment::new(bounds, obstacles)?)
    }

    /// Builds the environment and its start/goal query.
    pub fn to_problem(&self) -> Result<Problem<f64>, EnvFileError> {
        let init = self.init.as_ref().ok_or(EnvFileError::MissingEndpoint("init"))?;
        let goal = self.goal.as_ref().ok_or(EnvFileError::MissingEndpoint("goal"))?;
        Ok(Problem::new(self.to_environment()?, Point::from_slice(init), Point::from_slice(goal))?)
    }
}
