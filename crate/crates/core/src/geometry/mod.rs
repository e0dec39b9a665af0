//! Points, boxes and convex obstacles, plus the environment that owns them.
//!
//! Everything here is a pure function of its inputs. The planners certify
//! edges through [`crate::shape`]; the dense segment sampler in
//! [`Environment::segment_collision_free`] exists so tests have an
//! independent way to check those certificates.

mod environment;
mod hull;
mod obstacle;

use std::ops::Index;

use thiserror::Error;

use crate::scalar::Scalar;

pub use environment::{Environment, FreeMeasure, Problem, DEFAULT_MEASURE_SAMPLES, DEFAULT_SAMPLE_ATTEMPTS};
pub use hull::{min_norm_point, ConvexHull};
pub use obstacle::{spread_over_points, Obstacle};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point lies inside or on an obstacle{}", .0.map(|i| format!(" (index {i})")).unwrap_or_default())]
    InsideObstacle(Option<usize>),
    #[error("minimum distance vector has zero length")]
    DegenerateAxis,
    #[error("no free sample found after {0} attempts")]
    SamplingBudgetExceeded(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),
}

/// A point (or displacement) in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn from_slice(coords: &[T]) -> Self {
        Self { coords: coords.to_vec() }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: vec![T::zero(); dim] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    #[inline]
    pub fn norm(&self) -> T {
        dot(&self.coords, &self.coords).sqrt()
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        dot(&self.coords, &other.coords)
    }

    #[inline]
    pub fn distance(&self, other: &Self) -> T {
        dist_sq(&self.coords, &other.coords).sqrt()
    }

    /// `self - other`
    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(&a, &b)| a - b).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(&a, &b)| a + b).collect())
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coords.iter().map(|&a| a * s).collect())
    }

    /// `self + t * dir`
    pub fn offset(&self, dir: &Self, t: T) -> Self {
        Self::new(self.coords.iter().zip(&dir.coords).map(|(&a, &u)| a + t * u).collect())
    }

    /// Point at parameter `t` on the segment from `a` to `b`.
    pub fn lerp(a: &Self, b: &Self, t: T) -> Self {
        Self::new(a.coords.iter().zip(&b.coords).map(|(&x, &y)| x + t * (y - x)).collect())
    }

    /// Unit vector along `self`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(self.scale(T::one() / n))
        } else {
            None
        }
    }
}

impl<T> Index<usize> for Point<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

impl<T: Scalar> From<Vec<T>> for Point<T> {
    fn from(coords: Vec<T>) -> Self {
        Self::new(coords)
    }
}

#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn dist_sq<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

/// Angle in `[0, pi]` between `a` and `b`.
///
/// Uses `2 atan2(|a^ - b^|, |a^ + b^|)`, which stays accurate near 0 and pi
/// where `acos` of the normalized dot product loses half its digits.
/// Returns `None` when either vector is zero.
pub fn angle_between<T: Scalar>(a: &[T], b: &[T]) -> Option<T> {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na <= T::zero() || nb <= T::zero() {
        return None;
    }
    let (mut diff, mut sum) = (T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(b) {
        let (ux, uy) = (x / na, y / nb);
        diff = diff + (ux - uy) * (ux - uy);
        sum = sum + (ux + uy) * (ux + uy);
    }
    Some(T::lit(2.0) * diff.sqrt().atan2(sum.sqrt()))
}

/// Angle between `p - origin` and the unit vector `axis`, without allocating.
pub(crate) fn angle_from<T: Scalar>(origin: &[T], p: &[T], axis: &[T]) -> Option<T> {
    let len = dist_sq(p, origin).sqrt();
    if len <= T::zero() {
        return None;
    }
    let (mut diff, mut sum) = (T::zero(), T::zero());
    for ((&x, &o), &u) in p.iter().zip(origin).zip(axis) {
        let d = (x - o) / len;
        diff = diff + (d - u) * (d - u);
        sum = sum + (d + u) * (d + u);
    }
    Some(T::lit(2.0) * diff.sqrt().atan2(sum.sqrt()))
}

/// Closed axis-aligned box `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Aabb<T> {
    lo: Vec<T>,
    hi: Vec<T>,
}

impl<T: Scalar> Aabb<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Result<Self, GeometryError> {
        if lo.len() != hi.len() {
            return Err(GeometryError::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if lo.is_empty() {
            return Err(GeometryError::InvalidEnvironment("box has zero dimension".into()));
        }
        for (l, h) in lo.iter().zip(&hi) {
            if !(l.is_finite() && h.is_finite() && l < h) {
                return Err(GeometryError::InvalidEnvironment(format!(
                    "box corner lo={l} must be strictly below hi={h}"
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    /// `[0, side]^dim`
    pub fn cube(dim: usize, side: T) -> Result<Self, GeometryError> {
        Self::new(vec![T::zero(); dim], vec![side; dim])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[T] {
        &self.lo
    }

    pub fn hi(&self) -> &[T] {
        &self.hi
    }

    pub fn contains(&self, p: &[T]) -> bool {
        p.iter().zip(&self.lo).zip(&self.hi).all(|((&x, &l), &h)| x >= l && x <= h)
    }

    /// Componentwise `lo < p < hi`.
    pub fn contains_strictly(&self, p: &[T]) -> bool {
        p.iter().zip(&self.lo).zip(&self.hi).all(|((&x, &l), &h)| x > l && x < h)
    }

    pub fn volume(&self) -> T {
        self.lo.iter().zip(&self.hi).fold(T::one(), |acc, (&l, &h)| acc * (h - l))
    }

    pub fn diagonal(&self) -> T {
        dist_sq(&self.lo, &self.hi).sqrt()
    }

    pub fn clamp(&self, p: &[T]) -> Vec<T> {
        p.iter().zip(&self.lo).zip(&self.hi).map(|((&x, &l), &h)| x.max(l).min(h)).collect()
    }

    /// Distance from `origin` (inside the box) to the box boundary along unit direction `u`.
    pub fn exit_distance(&self, origin: &[T], u: &[T]) -> T {
        let mut t = T::infinity();
        for (((&o, &ui), &l), &h) in origin.iter().zip(u).zip(&self.lo).zip(&self.hi) {
            if ui > T::zero() {
                t = t.min((h - o) / ui);
            } else if ui < T::zero() {
                t = t.min((l - o) / ui);
            }
        }
        t.max(T::zero())
    }

    pub fn corners(&self) -> impl Iterator<Item = Vec<T>> + '_ {
        let d = self.dim();
        (0..(1usize << d)).map(move |mask| {
            (0..d).map(|i| if mask >> i & 1 == 1 { self.hi[i] } else { self.lo[i] }).collect()
        })
    }

    /// Whether the segment `[a, b]` meets this closed box (slab clipping).
    pub fn intersects_segment(&self, a: &[T], b: &[T]) -> bool {
        let (mut t0, mut t1) = (T::zero(), T::one());
        for i in 0..self.dim() {
            let d = b[i] - a[i];
            if d == T::zero() {
                if a[i] < self.lo[i] || a[i] > self.hi[i] {
                    return false;
                }
                continue;
            }
            let (mut ta, mut tb) = ((self.lo[i] - a[i]) / d, (self.hi[i] - a[i]) / d);
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t0 = t0.max(ta);
            t1 = t1.min(tb);
            if t0 > t1 {
                return false;
            }
        }
        true
    }
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume<T: Scalar>(d: usize) -> T {
    // V_0 = 1, V_1 = 2, V_d = V_{d-2} * 2 pi / d
    let two_pi = T::lit(2.0) * T::PI();
    let mut v = if d % 2 == 0 { T::one() } else { T::lit(2.0) };
    let mut k = if d % 2 == 0 { 2 } else { 3 };
    while k <= d {
        v = v * two_pi / T::from_usize_lossy(k);
        k += 2;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn angle_is_stable_near_zero_and_pi() {
        let a = [1.0_f64, 0.0];
        let tiny = [1.0_f64, 1e-12];
        assert_relative_eq!(angle_between(&a, &tiny).unwrap(), 1e-12, max_relative = 1e-6);
        let back = [-1.0_f64, 1e-12];
        assert_relative_eq!(angle_between(&a, &back).unwrap(), std::f64::consts::PI - 1e-12, epsilon = 1e-15);
        assert!(angle_between(&a, &[0.0, 0.0]).is_none());
    }

    #[test]
    fn unit_ball_volumes() {
        assert_relative_eq!(unit_ball_volume::<f64>(1), 2.0);
        assert_relative_eq!(unit_ball_volume::<f64>(2), std::f64::consts::PI);
        assert_relative_eq!(unit_ball_volume::<f64>(3), 4.0 / 3.0 * std::f64::consts::PI, epsilon = 1e-12);
        assert_relative_eq!(unit_ball_volume::<f64>(4), std::f64::consts::PI.powi(2) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn exit_distance_from_center_of_unit_box() {
        let b = Aabb::cube(2, 1.0_f64).unwrap();
        assert_relative_eq!(b.exit_distance(&[0.5, 0.5], &[1.0, 0.0]), 0.5);
        let u = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(b.exit_distance(&[0.5, 0.5], &[u, u]), 0.5 * 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn rejects_inverted_box() {
        assert!(Aabb::new(vec![1.0, 0.0], vec![0.0, 1.0]).is_err());
        assert!(Aabb::<f64>::new(vec![0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn segment_box_clipping() {
        let b = Aabb::new(vec![1.0, 1.0], vec![3.0, 3.0]).unwrap();
        assert!(b.intersects_segment(&[0.0, 2.0], &[4.0, 2.0]));
        assert!(!b.intersects_segment(&[0.0, 0.5], &[4.0, 0.5]));
        assert!(b.intersects_segment(&[0.0, 2.0], &[1.0, 2.0]));
        assert!(!b.intersects_segment(&[0.0, 0.0], &[0.9, 3.5]));
    }
}
