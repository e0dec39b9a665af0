use std::collections::HashMap;

use crate::geometry::{dist_sq, Aabb, Point};
use crate::scalar::Scalar;

/// Uniform bucket grid over the environment bounds.
#[derive(Clone, Debug)]
pub(crate) struct GridIndex<T> {
    lo: Vec<T>,
    cell: T,
    extent: Vec<i64>,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl<T: Scalar> GridIndex<T> {
    /// Grid sized so that roughly `expected` points give a couple per cell.
    pub(crate) fn new(bounds: &Aabb<T>, expected: usize) -> Self {
        let d = bounds.dim();
        let per_cell = T::lit(2.0);
        let cell = (bounds.volume() * per_cell / T::from_usize_lossy(expected.max(1))).powf(T::one() / T::from_usize_lossy(d));
        let extent = bounds
            .lo()
            .iter()
            .zip(bounds.hi())
            .map(|(&l, &h)| ((h - l) / cell).ceil().to_i64().unwrap_or(1).max(1))
            .collect();
        Self { lo: bounds.lo().to_vec(), cell, extent, buckets: HashMap::new() }
    }

    fn key(&self, p: &[T]) -> Vec<i64> {
        p.iter()
            .zip(&self.lo)
            .zip(&self.extent)
            .map(|((&x, &l), &n)| ((x - l) / self.cell).floor().to_i64().unwrap_or(0).clamp(0, n - 1))
            .collect()
    }

    pub(crate) fn insert(&mut self, id: usize, p: &[T]) {
        let k = self.key(p);
        self.buckets.entry(k).or_default().push(id);
    }

    /// Calls `f` for every cell whose Chebyshev offset from `center` is exactly `ring`.
    fn for_ring(&self, center: &[i64], ring: i64, f: &mut impl FnMut(&[usize])) {
        let d = center.len();
        let mut offset = vec![-ring; d];
        loop {
            if offset.iter().any(|o| o.abs() == ring) {
                let cell: Vec<i64> = center.iter().zip(&offset).map(|(&c, &o)| c + o).collect();
                if let Some(ids) = self.buckets.get(&cell) {
                    f(ids);
                }
            }
            // odometer increment over [-ring, ring]^d
            let mut i = 0;
            loop {
                if i == d {
                    return;
                }
                offset[i] += 1;
                if offset[i] <= ring {
                    break;
                }
                offset[i] = -ring;
                i += 1;
            }
        }
    }

    fn max_ring(&self) -> i64 {
        self.extent.iter().copied().max().unwrap_or(1)
    }

    /// Nearest stored point, ties broken by lowest id.
    pub(crate) fn nearest(&self, points: &[Point<T>], q: &[T]) -> Option<usize> {
        let center = self.key(q);
        let mut best: Option<(T, usize)> = None;
        for ring in 0..=self.max_ring() {
            self.for_ring(&center, ring, &mut |ids| {
                for &id in ids {
                    let d = dist_sq(points[id].coords(), q);
                    match best {
                        Some((bd, bid)) if d > bd || (d == bd && id > bid) => {}
                        _ => best = Some((d, id)),
                    }
                }
            });
            if let Some((bd, _)) = best {
                // cells beyond this ring are at least `ring * cell` away
                let reach = T::from_usize_lossy(ring as usize) * self.cell;
                if bd.sqrt() < reach {
                    break;
                }
            }
        }
        best.map(|(_, id)| id)
    }

    /// Ids within distance `r` of `q` (unsorted).
    pub(crate) fn within(&self, points: &[Point<T>], q: &[T], r: T) -> Vec<usize> {
        let center = self.key(q);
        let rings = ((r / self.cell).ceil().to_i64().unwrap_or(i64::MAX) + 1).min(self.max_ring());
        let r2 = r * r;
        let mut out = Vec::new();
        for ring in 0..=rings {
            self.for_ring(&center, ring, &mut |ids| {
                out.extend(ids.iter().copied().filter(|&id| dist_sq(points[id].coords(), q) <= r2));
            });
        }
        out
    }
}
