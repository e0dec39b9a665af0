#![allow(dead_code)]

use gse_core::geometry::{Aabb, Environment, Obstacle, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SIDE: f64 = 10.0;

/// Random environment mixing spheres, boxes and hulls, placed by rejection.
pub fn random_env(dim: usize, m: usize, seed: u64) -> Environment<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = Aabb::cube(dim, SIDE).unwrap();
    let mut obstacles: Vec<Obstacle<f64>> = Vec::new();
    let scale = SIDE / (m.max(1) as f64).powf(1.0 / dim as f64);
    while obstacles.len() < m {
        let half = rng.gen_range(0.1..0.25) * scale;
        let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(half + 0.2..SIDE - half - 0.2)).collect();
        let ob = match obstacles.len() % 3 {
            0 => Obstacle::sphere(Point::new(c), half).unwrap(),
            1 => Obstacle::axis_box(c.iter().map(|x| x - half).collect(), c.iter().map(|x| x + half).collect()).unwrap(),
            _ => {
                let pts = (0..dim + 4)
                    .map(|_| Point::new(c.iter().map(|x| x + rng.gen_range(-half..half)).collect()))
                    .collect();
                match Obstacle::hull(pts) {
                    Ok(h) => h,
                    Err(_) => continue,
                }
            }
        };
        if obstacles.iter().all(|o| o.separation(&ob) > 0.05) {
            obstacles.push(ob);
        }
    }
    Environment::with_measure_samples(bounds, obstacles, 2_000).unwrap()
}
