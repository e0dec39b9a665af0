use crate::scalar::Scalar;

use super::hull::{min_norm_point, ConvexHull};
use super::{angle_between, angle_from, dist_sq, dot, unit_ball_volume, Aabb, GeometryError, Point};

/// A closed convex obstacle.
#[derive(Clone, Debug, PartialEq)]
pub enum Obstacle<T> {
    Sphere { center: Point<T>, radius: T },
    AxisBox(Aabb<T>),
    Hull(ConvexHull<T>),
}

/// Largest angle between `axis` and `x - origin` over `points`.
///
/// Points coinciding with `origin` are skipped; an empty set gives zero.
pub fn spread_over_points<'a, T, I>(origin: &[T], axis: &[T], points: I) -> Result<T, GeometryError>
where
    T: Scalar,
    I: IntoIterator<Item = &'a [T]>,
{
    let unit = unit_axis(axis)?;
    let mut best = T::zero();
    for p in points {
        if let Some(a) = angle_from(origin, p, &unit) {
            best = best.max(a);
        }
    }
    Ok(best)
}

fn unit_axis<T: Scalar>(axis: &[T]) -> Result<Vec<T>, GeometryError> {
    let n = dot(axis, axis).sqrt();
    if !(n > T::zero()) || !n.is_finite() {
        return Err(GeometryError::DegenerateAxis);
    }
    Ok(axis.iter().map(|&a| a / n).collect())
}

impl<T: Scalar> Obstacle<T> {
    pub fn sphere(center: Point<T>, radius: T) -> Result<Self, GeometryError> {
        if !(radius > T::zero()) || !radius.is_finite() || !center.is_finite() {
            return Err(GeometryError::InvalidEnvironment(format!("sphere radius must be positive, got {radius}")));
        }
        Ok(Obstacle::Sphere { center, radius })
    }

    pub fn axis_box(lo: Vec<T>, hi: Vec<T>) -> Result<Self, GeometryError> {
        Ok(Obstacle::AxisBox(Aabb::new(lo, hi)?))
    }

    pub fn hull(points: Vec<Point<T>>) -> Result<Self, GeometryError> {
        Ok(Obstacle::Hull(ConvexHull::new(points)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Obstacle::Sphere { center, .. } => center.dim(),
            Obstacle::AxisBox(b) => b.dim(),
            Obstacle::Hull(h) => h.dim(),
        }
    }

    /// Closed point-in-obstacle test.
    pub fn contains(&self, p: &[T]) -> bool {
        match self {
            Obstacle::Sphere { center, radius } => dist_sq(center.coords(), p) <= *radius * *radius,
            Obstacle::AxisBox(b) => b.contains(p),
            Obstacle::Hull(h) => h.contains(p),
        }
    }

    pub fn bounding_box(&self) -> Aabb<T> {
        match self {
            Obstacle::Sphere { center, radius } => Aabb::new(
                center.coords().iter().map(|&c| c - *radius).collect(),
                center.coords().iter().map(|&c| c + *radius).collect(),
            )
            .expect("positive radius"),
            Obstacle::AxisBox(b) => b.clone(),
            Obstacle::Hull(h) => h.bounding_box().clone(),
        }
    }

    /// Closed-form volume; `None` for hull clouds.
    pub fn volume(&self) -> Option<T> {
        match self {
            Obstacle::Sphere { center, radius } => Some(unit_ball_volume::<T>(center.dim()) * radius.powi(center.dim() as i32)),
            Obstacle::AxisBox(b) => Some(b.volume()),
            Obstacle::Hull(_) => None,
        }
    }

    /// Vector from `x` to the nearest obstacle point, and its length.
    pub fn min_distance_vector(&self, x: &Point<T>) -> Result<(Point<T>, T), GeometryError> {
        let r_vec: Vec<T> = match self {
            Obstacle::Sphere { center, radius } => {
                let to_center = center.sub(x);
                let dist = to_center.norm();
                if dist <= *radius {
                    return Err(GeometryError::InsideObstacle(None));
                }
                return Ok((to_center.scale((dist - *radius) / dist), dist - *radius));
            }
            Obstacle::AxisBox(b) => {
                let nearest = b.clamp(x.coords());
                nearest.iter().zip(x.coords()).map(|(&n, &c)| n - c).collect()
            }
            Obstacle::Hull(h) => {
                if h.contains(x.coords()) {
                    return Err(GeometryError::InsideObstacle(None));
                }
                h.nearest_offset(x.coords())
            }
        };
        let mag = dot(&r_vec, &r_vec).sqrt();
        if !(mag > T::zero()) {
            return Err(GeometryError::InsideObstacle(None));
        }
        Ok((Point::new(r_vec), mag))
    }

    /// Half-angle of the cone with apex `x` and axis `r_vec` that covers the whole obstacle.
    ///
    /// Exact for every kind: spheres through tangent geometry, boxes and hulls
    /// through their extreme points (the cone is convex because a convex
    /// obstacle seen from outside spans less than a half-space).
    pub fn max_angular_spread(&self, x: &Point<T>, r_vec: &Point<T>) -> Result<T, GeometryError> {
        let axis = unit_axis(r_vec.coords())?;
        match self {
            Obstacle::Sphere { center, radius } => {
                let to_center = center.sub(x);
                let dist = to_center.norm();
                if dist <= *radius {
                    return Err(GeometryError::InsideObstacle(None));
                }
                let off_axis = angle_between(&axis, to_center.coords()).unwrap_or_else(T::zero);
                Ok((off_axis + (*radius / dist).asin()).min(T::PI()))
            }
            Obstacle::AxisBox(b) => {
                if b.contains(x.coords()) {
                    return Err(GeometryError::InsideObstacle(None));
                }
                let corners: Vec<Vec<T>> = b.corners().collect();
                spread_over_points(x.coords(), &axis, corners.iter().map(Vec::as_slice))
            }
            Obstacle::Hull(h) => {
                if h.contains(x.coords()) {
                    return Err(GeometryError::InsideObstacle(None));
                }
                spread_over_points(x.coords(), &axis, h.points().iter().map(Point::coords))
            }
        }
    }

    /// Point of the obstacle minimizing `p . dir` (polytopes only).
    fn support_min(&self, dir: &[T]) -> Vec<T> {
        match self {
            Obstacle::AxisBox(b) => dir
                .iter()
                .zip(b.lo().iter().zip(b.hi()))
                .map(|(&di, (&l, &h))| if di >= T::zero() { l } else { h })
                .collect(),
            Obstacle::Hull(h) => h.support_min(dir).coords().to_vec(),
            Obstacle::Sphere { center, radius } => {
                let n = dot(dir, dir).sqrt();
                if n > T::zero() {
                    center.coords().iter().zip(dir).map(|(&c, &d)| c - *radius * d / n).collect()
                } else {
                    center.coords().to_vec()
                }
            }
        }
    }

    /// Euclidean gap between two obstacles; zero when they touch or overlap.
    pub fn separation(&self, other: &Obstacle<T>) -> T {
        use Obstacle::*;
        let gap = match (self, other) {
            (Sphere { center: a, radius: ra }, Sphere { center: b, radius: rb }) => a.distance(b) - *ra - *rb,
            (Sphere { center, radius }, AxisBox(b)) | (AxisBox(b), Sphere { center, radius }) => {
                dist_sq(&b.clamp(center.coords()), center.coords()).sqrt() - *radius
            }
            (Sphere { center, radius }, Hull(h)) | (Hull(h), Sphere { center, radius }) => {
                h.distance(center.coords()) - *radius
            }
            (AxisBox(a), AxisBox(b)) => a
                .lo()
                .iter()
                .zip(a.hi())
                .zip(b.lo().iter().zip(b.hi()))
                .map(|((&alo, &ahi), (&blo, &bhi))| {
                    let g = (blo - ahi).max(alo - bhi).max(T::zero());
                    g * g
                })
                .fold(T::zero(), |s, g| s + g)
                .sqrt(),
            _ => {
                // polytope pair: min norm point of the Minkowski difference
                let support = |dir: &[T]| -> Vec<T> {
                    let neg: Vec<T> = dir.iter().map(|&d| -d).collect();
                    let a = self.support_min(dir);
                    let b = other.support_min(&neg);
                    a.iter().zip(&b).map(|(&x, &y)| x - y).collect()
                };
                let start = support(&vec![T::one(); self.dim()]);
                let v = min_norm_point(start, support, false).point;
                let gap = dot(&v, &v).sqrt();
                // residual of the iterative solve on overlapping pairs
                let scale = self.bounding_box().diagonal() + other.bounding_box().diagonal();
                if gap <= scale * T::epsilon().sqrt() * T::lit(1e-2) {
                    T::zero()
                } else {
                    gap
                }
            }
        };
        gap.max(T::zero())
    }
}
