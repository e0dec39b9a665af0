use crate::scalar::Scalar;

use super::{dist_sq, dot, Aabb, GeometryError, Point};

const MAX_MAJOR_ITERATIONS: usize = 256;

/// Outcome of [`min_norm_point`].
#[derive(Clone, Debug)]
pub struct MinNorm<T> {
    pub point: Vec<T>,
    /// Set when the search stopped early because a separating direction was found
    /// (`point` is then only an upper bound on the true minimum norm point).
    pub separated: bool,
}

/// Wolfe's minimum-norm-point algorithm over the convex hull of a point set that is
/// only reachable through `support(dir)`, which must return the set element
/// minimizing `p . dir`.
///
/// With `stop_when_separated` the search returns as soon as it can prove the
/// origin lies outside the hull, which is all a containment test needs.
pub fn min_norm_point<T, F>(start: Vec<T>, mut support: F, stop_when_separated: bool) -> MinNorm<T>
where
    T: Scalar,
    F: FnMut(&[T]) -> Vec<T>,
{
    let tol = T::epsilon() * T::lit(64.0);
    let mut scale = dot(&start, &start);
    let mut corral: Vec<Vec<T>> = vec![start.clone()];
    let mut weights: Vec<T> = vec![T::one()];
    let mut x = start;

    for _ in 0..MAX_MAJOR_ITERATIONS {
        let p = support(&x);
        let xx = dot(&x, &x);
        let xp = dot(&x, &p);
        scale = scale.max(dot(&p, &p));
        if stop_when_separated && xp > T::zero() {
            return MinNorm { point: x, separated: true };
        }
        if xx - xp <= tol * scale || corral.iter().any(|q| *q == p) {
            break;
        }
        corral.push(p);
        weights.push(T::zero());

        loop {
            let Some(alpha) = affine_minimizer(&corral, scale) else {
                // new point is affinely dependent on the corral: numerically converged
                corral.pop();
                weights.pop();
                let total = weights.iter().fold(T::zero(), |a, &w| a + w);
                for w in &mut weights {
                    *w = *w / total;
                }
                return MinNorm { point: combine(&corral, &weights), separated: false };
            };
            let eps = T::epsilon() * T::lit(16.0);
            if alpha.iter().all(|&a| a > eps) {
                weights = alpha;
                break;
            }
            let mut theta = T::one();
            for (&l, &a) in weights.iter().zip(&alpha) {
                if a <= eps && l - a > T::zero() {
                    theta = theta.min(l / (l - a));
                }
            }
            for (w, &a) in weights.iter_mut().zip(&alpha) {
                *w = theta * a + (T::one() - theta) * *w;
            }
            // drop at least the blocking vertex
            let min_idx = weights
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite weights"))
                .map(|(i, _)| i)
                .expect("non-empty corral");
            let mut keep: Vec<bool> = weights.iter().map(|&w| w > eps).collect();
            keep[min_idx] = false;
            let mut i = 0;
            corral.retain(|_| {
                let k = keep[i];
                i += 1;
                k
            });
            let mut i = 0;
            weights.retain(|_| {
                let k = keep[i];
                i += 1;
                k
            });
            if corral.is_empty() {
                // cannot happen in exact arithmetic; recover with the newest point
                let p = support(&x);
                corral.push(p);
                weights.push(T::one());
                break;
            }
            let total = weights.iter().fold(T::zero(), |a, &w| a + w);
            for w in &mut weights {
                *w = *w / total;
            }
        }
        x = combine(&corral, &weights);
    }
    MinNorm { point: x, separated: false }
}

fn combine<T: Scalar>(pts: &[Vec<T>], w: &[T]) -> Vec<T> {
    let mut x = vec![T::zero(); pts[0].len()];
    for (p, &wi) in pts.iter().zip(w) {
        for (xi, &pi) in x.iter_mut().zip(p) {
            *xi = *xi + wi * pi;
        }
    }
    x
}

/// Weights `alpha` (summing to one) minimizing `|sum alpha_i p_i|` over the affine hull.
fn affine_minimizer<T: Scalar>(pts: &[Vec<T>], scale: T) -> Option<Vec<T>> {
    let k = pts.len();
    if k == 1 {
        return Some(vec![T::one()]);
    }
    let base = &pts[0];
    let diffs: Vec<Vec<T>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(&a, &b)| a - b).collect())
        .collect();
    let n = k - 1;
    // normal equations (D^T D) beta = -D^T base
    let mut m = vec![vec![T::zero(); n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = dot(&diffs[i], &diffs[j]);
        }
        m[i][n] = -dot(&diffs[i], base);
    }
    let beta = solve_in_place(&mut m, scale * T::epsilon() * T::lit(1e3))?;
    let mut alpha = Vec::with_capacity(k);
    alpha.push(T::one() - beta.iter().fold(T::zero(), |a, &b| a + b));
    alpha.extend(beta);
    Some(alpha)
}

/// Gaussian elimination with partial pivoting on an augmented `n x (n+1)` matrix.
fn solve_in_place<T: Scalar>(m: &mut [Vec<T>], pivot_floor: T) -> Option<Vec<T>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[piv][col].abs() <= pivot_floor {
            return None;
        }
        m.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for c in col..=n {
                let v = m[col][c];
                m[row][c] = m[row][c] - f * v;
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for c in row + 1..n {
            acc = acc - m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Convex hull of a finite point cloud, kept as the raw cloud.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexHull<T> {
    points: Vec<Point<T>>,
    bbox: Aabb<T>,
}

impl<T: Scalar> ConvexHull<T> {
    pub fn new(points: Vec<Point<T>>) -> Result<Self, GeometryError> {
        let d = points.first().map(Point::dim).unwrap_or(0);
        if d == 0 || points.len() < d + 1 {
            return Err(GeometryError::InvalidEnvironment(format!(
                "hull needs at least d+1 points, got {} in dimension {d}",
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != d) {
            return Err(GeometryError::DimensionMismatch { expected: d, got: p.dim() });
        }
        if !points.iter().all(Point::is_finite) {
            return Err(GeometryError::InvalidEnvironment("non-finite hull point".into()));
        }
        let mut lo = points[0].coords().to_vec();
        let mut hi = lo.clone();
        for p in &points {
            for i in 0..d {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let bbox = Aabb::new(lo, hi).map_err(|_| {
            GeometryError::InvalidEnvironment("hull cloud is flat along some axis".into())
        })?;
        Ok(Self { points, bbox })
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.bbox.dim()
    }

    pub fn bounding_box(&self) -> &Aabb<T> {
        &self.bbox
    }

    /// Cloud point minimizing `p . dir`; lowest index on ties.
    pub fn support_min(&self, dir: &[T]) -> &Point<T> {
        let mut best = &self.points[0];
        let mut best_v = dot(best.coords(), dir);
        for p in &self.points[1..] {
            let v = dot(p.coords(), dir);
            if v < best_v {
                best = p;
                best_v = v;
            }
        }
        best
    }

    fn scale_tol(&self) -> T {
        self.bbox.diagonal() * T::epsilon().sqrt() * T::lit(1e-2)
    }

    /// Vector from `x` to the nearest point of the hull (zero if `x` is inside).
    pub fn nearest_offset(&self, x: &[T]) -> Vec<T> {
        let start = self
            .points
            .iter()
            .min_by(|a, b| dist_sq(a.coords(), x).partial_cmp(&dist_sq(b.coords(), x)).unwrap())
            .expect("hull is non-empty");
        let shift = |p: &Point<T>| p.coords().iter().zip(x).map(|(&a, &b)| a - b).collect::<Vec<T>>();
        min_norm_point(shift(start), |dir| shift(self.support_min(dir)), false).point
    }

    /// Closed containment test.
    pub fn contains(&self, x: &[T]) -> bool {
        if !self.bbox.contains(x) {
            return false;
        }
        let shift = |p: &Point<T>| p.coords().iter().zip(x).map(|(&a, &b)| a - b).collect::<Vec<T>>();
        let res = min_norm_point(shift(&self.points[0]), |dir| shift(self.support_min(dir)), true);
        !res.separated && dot(&res.point, &res.point).sqrt() <= self.scale_tol()
    }

    /// Distance from `x` to the hull (zero inside).
    pub fn distance(&self, x: &[T]) -> T {
        let v = self.nearest_offset(x);
        dot(&v, &v).sqrt()
    }
}
