//! Seeded random workspaces: a cube of side 10 with alternating spheres and
//! boxes, start and goal in opposite corner regions.

use gse_core::geometry::{Aabb, Environment, GeometryError, Obstacle, Point, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const WORKSPACE_SIDE: f64 = 10.0;
const PLACEMENT_ATTEMPTS: usize = 10_000;
/// Start and goal are drawn from the corner cubes of this fraction of the side.
const CORNER_FRACTION: f64 = 0.2;

#[derive(Debug, thiserror::Error)]
pub enum WorkspaceError {
    #[error("could not place obstacle {placed} of {requested} within {PLACEMENT_ATTEMPTS} attempts")]
    PlacementBudget { placed: usize, requested: usize },
    #[error("no free {0} point in its corner region")]
    Endpoint(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Generates a workspace with `m` pairwise-separated obstacles.
///
/// Obstacle half-extents are drawn from `[0.15, 0.30] · side / m^(1/d)`;
/// consecutive obstacles alternate between spheres and boxes. Start and goal
/// lie in the low and high corner cubes, so they are at least 0.6 diagonals apart.
pub fn random_workspace(d: usize, m: usize, seed: u64) -> Result<Problem<f64>, WorkspaceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = WORKSPACE_SIDE;
    let bounds = Aabb::cube(d, side)?;
    let scale = side / (m.max(1) as f64).powf(1.0 / d as f64);
    let gap = 0.02 * scale;
    let mut obstacles: Vec<Obstacle<f64>> = Vec::with_capacity(m);
    let mut attempts = 0;
    while obstacles.len() < m {
        attempts += 1;
        if attempts > PLACEMENT_ATTEMPTS * m {
            return Err(WorkspaceError::PlacementBudget { placed: obstacles.len(), requested: m });
        }
        let half = rng.gen_range(0.15..=0.30) * scale;
        let margin = half + gap;
        let center: Vec<f64> = (0..d).map(|_| rng.gen_range(margin..side - margin)).collect();
        let candidate = if obstacles.len() % 2 == 0 {
            Obstacle::sphere(Point::new(center), half)?
        } else {
            Obstacle::axis_box(center.iter().map(|c| c - half).collect(), center.iter().map(|c| c + half).collect())?
        };
        if obstacles.iter().all(|o| o.separation(&candidate) > gap) {
            obstacles.push(candidate);
        }
    }
    let env = Environment::new(bounds, obstacles)?;
    let corner = CORNER_FRACTION * side;
    let init = corner_point(&env, &mut rng, 0.0, corner).ok_or(WorkspaceError::Endpoint("start"))?;
    let goal = corner_point(&env, &mut rng, side - corner, side).ok_or(WorkspaceError::Endpoint("goal"))?;
    Ok(Problem::new(env, init, goal)?)
}

fn corner_point(env: &Environment<f64>, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Option<Point<f64>> {
    (0..PLACEMENT_ATTEMPTS).find_map(|_| {
        let p = Point::new((0..env.dim()).map(|_| rng.gen_range(lo..hi)).collect());
        env.is_free(p.coords()).then_some(p)
    })
}
