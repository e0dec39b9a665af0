//! Sampling-based motion planning with generalized shapes.
//!
//! Every vertex carries a star-convex safe region built from the obstacles
//! around it. GSE grows the graph by steering samples onto these regions and
//! joins vertices whose regions cover the segment between them. GSE* adds a
//! metric steering step with a shrinking connection radius. A PRM* baseline
//! supplies reference costs.
//!
//! The library is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod envfile;
pub mod geometry;
pub mod planners;
pub mod promenade;
pub mod roadmap;
pub mod scalar;
pub mod shape;
pub mod stats;

pub use scalar::Scalar;

pub type Point = geometry::Point<f64>;
pub type Aabb = geometry::Aabb<f64>;
pub type Obstacle = geometry::Obstacle<f64>;
pub type ConvexHull = geometry::ConvexHull<f64>;
pub type Environment = geometry::Environment<f64>;
pub type Problem = geometry::Problem<f64>;
pub type GeneralizedShape = shape::GeneralizedShape<f64>;
pub type Roadmap = roadmap::Roadmap<f64>;
pub type PathResult = roadmap::PathResult<f64>;
pub type PlannerConfig = planners::PlannerConfig<f64>;
pub type PlannerParams = planners::PlannerParams<f64>;
pub type GsePlanner = planners::GsePlanner<f64>;
pub type PrmStar = planners::PrmStar<f64>;
pub type RunTrace = planners::RunTrace<f64>;
pub type PromenadeSpec = promenade::PromenadeSpec<f64>;
pub type Promenade = promenade::Promenade<f64>;
