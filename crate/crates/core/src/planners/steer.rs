use crate::geometry::{Environment, Point};
use crate::scalar::Scalar;
use crate::shape::GeneralizedShape;

const BISECTION_STEPS: usize = 32;

/// Outcome of a steering call.
#[derive(Clone, Debug, PartialEq)]
pub enum SteerResult<T> {
    Point(Point<T>),
    /// No usable point; the caller should draw a fresh sample.
    NoProgress,
}

impl<T> SteerResult<T> {
    pub fn point(self) -> Option<Point<T>> {
        match self {
            SteerResult::Point(p) => Some(p),
            SteerResult::NoProgress => None,
        }
    }
}

/// Pulls `x_rand` back to the boundary of `shape` along the ray from its center.
pub fn steer_gse<T: Scalar>(shape: &GeneralizedShape<T>, x_rand: &Point<T>) -> SteerResult<T> {
    if shape.contains(x_rand) {
        return SteerResult::Point(x_rand.clone());
    }
    let c = shape.center();
    let delta = x_rand.sub(c);
    let len = delta.norm();
    let u = match delta.normalized() {
        Some(u) => u,
        None => return SteerResult::NoProgress,
    };
    let t = shape.free_length_along(u.coords()).min(len);
    if !(t > T::zero()) {
        return SteerResult::NoProgress;
    }
    SteerResult::Point(c.offset(&u, t))
}

/// Point of segment `[x, y]` within distance `eta` of `x` that is closest to
/// `y` and free.
///
/// The candidate at distance `min(eta, |y - x|)` is returned when free.
/// Otherwise it lies in one convex obstacle, and the entry point of the
/// segment into that obstacle is located by bisection.
pub fn steer<T: Scalar>(x: &Point<T>, y: &Point<T>, eta: T, env: &Environment<T>) -> SteerResult<T> {
    let len = x.distance(y);
    if !(len > T::zero()) {
        return SteerResult::NoProgress;
    }
    let reach = eta.min(len) / len;
    let z = Point::lerp(x, y, reach);
    let hit = match env.colliding_obstacle(z.coords()) {
        None if env.bounds().contains(z.coords()) => return SteerResult::Point(z),
        None => return SteerResult::NoProgress,
        Some(k) => k,
    };
    let obstacle = &env.obstacles()[hit];
    let (mut lo, mut hi) = (T::zero(), reach);
    for _ in 0..BISECTION_STEPS {
        let mid = (lo + hi) / T::lit(2.0);
        if obstacle.contains(Point::lerp(x, y, mid).coords()) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let z = Point::lerp(x, y, lo);
    if lo > T::zero() && z != *x && env.is_free(z.coords()) {
        SteerResult::Point(z)
    } else {
        SteerResult::NoProgress
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Aabb, Obstacle};
    use crate::shape::build_shape;
    use approx::assert_relative_eq;

    fn p(c: &[f64]) -> Point<f64> {
        Point::from_slice(c)
    }

    fn sphere_env() -> Environment<f64> {
        Environment::new(
            Aabb::new(vec![-5.0, -5.0], vec![5.0, 5.0]).unwrap(),
            vec![Obstacle::sphere(p(&[3.0, 0.0]), 1.0).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn steer_gse_keeps_members_and_truncates_outsiders() {
        let env = sphere_env();
        let s = build_shape(&env, &p(&[0.0, 0.0])).unwrap();
        assert_eq!(steer_gse(&s, &p(&[0.0, 4.0])), SteerResult::Point(p(&[0.0, 4.0])));
        let z = steer_gse(&s, &p(&[4.5, 0.0])).point().unwrap();
        assert_relative_eq!(z[0], 2.0);
        assert_relative_eq!(z[1], 0.0);
    }

    #[test]
    fn steer_gse_in_empty_box_returns_sample() {
        let env = Environment::empty(Aabb::cube(2, 1.0).unwrap());
        let s = build_shape(&env, &p(&[0.5, 0.5])).unwrap();
        assert_eq!(steer_gse(&s, &p(&[0.9, 0.1])), SteerResult::Point(p(&[0.9, 0.1])));
    }

    #[test]
    fn steer_clips_to_eta() {
        let env = Environment::empty(Aabb::cube(2, 5.0).unwrap());
        assert_eq!(steer(&p(&[0.0, 0.0]), &p(&[3.0, 0.0]), 1.0, &env), SteerResult::Point(p(&[1.0, 0.0])));
        assert_eq!(steer(&p(&[0.0, 0.0]), &p(&[0.5, 0.5]), 1.0, &env), SteerResult::Point(p(&[0.5, 0.5])));
        assert_eq!(steer(&p(&[1.0, 1.0]), &p(&[1.0, 1.0]), 1.0, &env), SteerResult::NoProgress);
    }

    #[test]
    fn steer_stops_at_analytic_sphere_entry() {
        // segment from (-2, 0.5) to (3, 0.5) enters the unit sphere at (3, 0) where
        // (x - 3)^2 + 0.25 = 1, i.e. x = 3 - sqrt(0.75)
        let env = sphere_env();
        let x = p(&[-2.0, 0.5]);
        let y = p(&[3.0, 0.5]);
        let z = steer(&x, &y, 5.0, &env).point().unwrap();
        let entry = 3.0 - 0.75f64.sqrt();
        assert!((z[0] - entry).abs() < 1e-6, "{} vs {}", z[0], entry);
        assert!(z[0] <= entry);
        assert!(env.is_free(z.coords()));
    }

    #[test]
    fn steer_entry_at_four_tenths() {
        // target inside the sphere, which the segment enters at t = 0.4
        let env = Environment::new(
            Aabb::cube(2, 15.0).unwrap(),
            vec![Obstacle::sphere(p(&[8.0, 5.0]), 4.0).unwrap()],
        )
        .unwrap();
        let z = steer(&p(&[0.0, 5.0]), &p(&[10.0, 5.0]), 10.0, &env).point().unwrap();
        assert!((z[0] - 4.0).abs() < 1e-6);
        assert_relative_eq!(z[1], 5.0);
    }
}
