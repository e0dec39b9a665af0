//! Generalized shapes: the star-convex safe region around a free point.
//!
//! For every obstacle the shape keeps the cone (apex at the center, axis
//! along the minimum distance vector, half-angle covering the obstacle).
//! A point belongs to the shape when, for each obstacle, it is either outside
//! that obstacle's cone or closer to the center than the obstacle is. The
//! region is clipped to the environment bounds.

use crate::geometry::{angle_from, dist_sq, Aabb, Environment, GeometryError, Point};
use crate::scalar::Scalar;

/// Absolute slack on angle comparisons, in radians.
pub const ANGLE_TOLERANCE: f64 = 1e-9;

/// Cone parameters of one obstacle as seen from the shape center.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstacleRecord<T> {
    /// Unit vector along the minimum distance vector.
    pub axis: Point<T>,
    /// Distance to the obstacle.
    pub r_mag: T,
    /// Half-angle of the covering cone.
    pub theta: T,
    /// Index of the obstacle in the environment.
    pub obstacle: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedShape<T> {
    center: Point<T>,
    records: Vec<ObstacleRecord<T>>,
    bounds: Aabb<T>,
}

impl<T: Scalar> GeneralizedShape<T> {
    /// Builds the shape about `x`, which must lie in the free space.
    ///
    /// Records are ordered by distance, ties by obstacle index.
    pub fn build(env: &Environment<T>, x: &Point<T>) -> Result<Self, GeometryError> {
        if x.dim() != env.dim() {
            return Err(GeometryError::DimensionMismatch { expected: env.dim(), got: x.dim() });
        }
        if !env.bounds().contains(x.coords()) {
            return Err(GeometryError::InvalidEnvironment("shape center outside the bounds".into()));
        }
        let mut records = Vec::with_capacity(env.obstacles().len());
        for (i, ob) in env.obstacles().iter().enumerate() {
            let (r_vec, r_mag) = ob.min_distance_vector(x).map_err(|e| match e {
                GeometryError::InsideObstacle(_) => GeometryError::InsideObstacle(Some(i)),
                other => other,
            })?;
            let theta = ob.max_angular_spread(x, &r_vec)?;
            let axis = r_vec.scale(T::one() / r_mag);
            records.push(ObstacleRecord { axis, r_mag, theta, obstacle: i });
        }
        records.sort_by(|a, b| a.r_mag.partial_cmp(&b.r_mag).expect("finite distances").then(a.obstacle.cmp(&b.obstacle)));
        Ok(Self { center: x.clone(), records, bounds: env.bounds().clone() })
    }

    pub fn center(&self) -> &Point<T> {
        &self.center
    }

    pub fn records(&self) -> &[ObstacleRecord<T>] {
        &self.records
    }

    pub fn bounds(&self) -> &Aabb<T> {
        &self.bounds
    }

    /// Membership test. The center itself is always a member.
    pub fn contains(&self, p: &Point<T>) -> bool {
        self.contains_coords(p.coords())
    }

    pub(crate) fn contains_coords(&self, p: &[T]) -> bool {
        let c = self.center.coords();
        let dist = dist_sq(p, c).sqrt();
        if dist == T::zero() {
            return true;
        }
        if !self.bounds.contains(p) {
            return false;
        }
        let tol = T::lit(ANGLE_TOLERANCE);
        for rec in &self.records {
            // sorted by r_mag: once inside one truncation radius, inside all later ones
            if dist < rec.r_mag {
                return true;
            }
            let angle = angle_from(c, p, rec.axis.coords()).expect("p differs from center");
            if angle <= rec.theta + tol {
                return false;
            }
        }
        true
    }

    /// Distance from the center to the shape boundary along unit direction `u`.
    ///
    /// Every point at a smaller distance is a member. Past it, the ray either
    /// leaves the bounds or enters a cone beyond its truncation radius.
    pub fn free_length_along(&self, u: &[T]) -> T {
        let c = self.center.coords();
        let mut t = self.bounds.exit_distance(c, u);
        let tol = T::lit(ANGLE_TOLERANCE);
        for rec in &self.records {
            if rec.r_mag >= t {
                break;
            }
            let angle = crate::geometry::angle_between(u, rec.axis.coords()).unwrap_or_else(T::zero);
            if angle <= rec.theta + tol {
                t = rec.r_mag;
                break;
            }
        }
        t
    }

    /// Whether the segment between two shape centers has a point in both shapes.
    ///
    /// Both shapes are star-convex about their centers, so it is enough to
    /// compare the free lengths each center sees along the segment.
    pub fn connects(&self, other: &GeneralizedShape<T>) -> bool {
        let a = self.center.coords();
        let b = other.center.coords();
        let len = dist_sq(a, b).sqrt();
        if !(len > T::zero()) {
            return false;
        }
        let u: Vec<T> = a.iter().zip(b).map(|(&x, &y)| (y - x) / len).collect();
        let t_a = self.free_length_along(&u);
        if t_a >= len {
            // B's own free length is positive, so the overlap is non-empty
            return true;
        }
        let back: Vec<T> = u.iter().map(|&x| -x).collect();
        let t_b = other.free_length_along(&back);
        t_a + t_b > len
    }
}

/// Free function form of [`GeneralizedShape::build`].
pub fn build_shape<T: Scalar>(env: &Environment<T>, x: &Point<T>) -> Result<GeneralizedShape<T>, GeometryError> {
    GeneralizedShape::build(env, x)
}

/// Free function form of [`GeneralizedShape::connects`].
pub fn shapes_connect<T: Scalar>(a: &GeneralizedShape<T>, b: &GeneralizedShape<T>) -> bool {
    a.connects(b)
}
