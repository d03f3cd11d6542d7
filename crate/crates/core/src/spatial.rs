//! Uniform-grid bucketing of planar points for radius and k-nearest queries.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone)]
pub struct GridIndex {
    cell: f64,
    origin: [f64; 2],
    nx: usize,
    ny: usize,
    start: Vec<u32>,
    items: Vec<u32>,
    points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cand(f64, usize);

impl Eq for Cand {}

impl PartialOrd for Cand {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cand {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl GridIndex {
    /// Buckets all `points` into square cells of side `cell`.
    pub fn new(points: &[[f64; 2]], cell: f64) -> Self {
        Self::with_subset(points, 0..points.len(), cell)
    }

    /// Buckets only the listed point indices; query results refer to the
    /// original indices.
    pub fn with_subset(
        points: &[[f64; 2]],
        subset: impl IntoIterator<Item = usize>,
        cell: f64,
    ) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "cell side must be positive");
        let subset: Vec<usize> = subset.into_iter().collect();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for &i in &subset {
            for d in 0..2 {
                lo[d] = lo[d].min(points[i][d]);
                hi[d] = hi[d].max(points[i][d]);
            }
        }
        if subset.is_empty() {
            lo = [0.0; 2];
            hi = [0.0; 2];
        }
        let dim = |d: usize| (((hi[d] - lo[d]) / cell).floor() as usize + 1).min(1 << 15);
        let (nx, ny) = (dim(0), dim(1));
        let mut grid = Self {
            cell,
            origin: lo,
            nx,
            ny,
            start: vec![0; nx * ny + 1],
            items: vec![0; subset.len()],
            points: points.to_vec(),
        };
        let cells: Vec<usize> = subset.iter().map(|&i| grid.cell_of(points[i])).collect();
        for &c in &cells {
            grid.start[c + 1] += 1;
        }
        for c in 0..nx * ny {
            grid.start[c + 1] += grid.start[c];
        }
        let mut fill = grid.start.clone();
        for (&i, &c) in subset.iter().zip(&cells) {
            grid.items[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid
    }

    fn coord(&self, v: f64, d: usize, len: usize) -> usize {
        let k = ((v - self.origin[d]) / self.cell).floor();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(len - 1)
        }
    }

    fn cell_of(&self, p: [f64; 2]) -> usize {
        self.coord(p[1], 1, self.ny) * self.nx + self.coord(p[0], 0, self.nx)
    }

    fn cell_items(&self, cx: usize, cy: usize) -> &[u32] {
        let c = cy * self.nx + cx;
        &self.items[self.start[c] as usize..self.start[c + 1] as usize]
    }

    /// Calls `f(index, distance)` for every bucketed point within distance
    /// `r` (inclusive) of `p`.
    pub fn for_each_within(&self, p: [f64; 2], r: f64, mut f: impl FnMut(usize, f64)) {
        if self.items.is_empty() {
            return;
        }
        let span = |v: f64, d: usize, len: usize| {
            let a = ((v - r - self.origin[d]) / self.cell).floor();
            let b = ((v + r - self.origin[d]) / self.cell).floor();
            if b < 0.0 || a > (len - 1) as f64 {
                return None;
            }
            Some((a.max(0.0) as usize, (b as usize).min(len - 1)))
        };
        let (Some((x0, x1)), Some((y0, y1))) = (span(p[0], 0, self.nx), span(p[1], 1, self.ny))
        else {
            return;
        };
        for cy in y0..=y1 {
            for cx in x0..=x1 {
                for &i in self.cell_items(cx, cy) {
                    let q = self.points[i as usize];
                    let d = (p[0] - q[0]).hypot(p[1] - q[1]);
                    if d <= r {
                        f(i as usize, d);
                    }
                }
            }
        }
    }

    /// The `k` nearest bucketed points to `p` accepted by `keep`, sorted by
    /// `(distance, index)`.
    pub fn k_nearest(
        &self,
        p: [f64; 2],
        k: usize,
        mut keep: impl FnMut(usize) -> bool,
    ) -> Vec<(f64, usize)> {
        if k == 0 || self.items.is_empty() {
            return Vec::new();
        }
        let mut heap: BinaryHeap<Cand> = BinaryHeap::with_capacity(k + 1);
        let cx = self.coord(p[0], 0, self.nx) as isize;
        let cy = self.coord(p[1], 1, self.ny) as isize;
        let max_ring = self.nx.max(self.ny) as isize;
        let mut visit = |x: isize, y: isize, heap: &mut BinaryHeap<Cand>| {
            if x < 0 || y < 0 || x >= self.nx as isize || y >= self.ny as isize {
                return;
            }
            for &i in self.cell_items(x as usize, y as usize) {
                let i = i as usize;
                if !keep(i) {
                    continue;
                }
                let q = self.points[i];
                let c = Cand((p[0] - q[0]).hypot(p[1] - q[1]), i);
                if heap.len() < k {
                    heap.push(c);
                } else if c < *heap.peek().unwrap() {
                    heap.pop();
                    heap.push(c);
                }
            }
        };
        for ring in 0..=max_ring {
            if ring == 0 {
                visit(cx, cy, &mut heap);
            } else {
                for x in cx - ring..=cx + ring {
                    visit(x, cy - ring, &mut heap);
                    visit(x, cy + ring, &mut heap);
                }
                for y in cy - ring + 1..cy + ring {
                    visit(cx - ring, y, &mut heap);
                    visit(cx + ring, y, &mut heap);
                }
            }
            // anything beyond this ring is at least ring * cell away
            if heap.len() == k && heap.peek().unwrap().0 <= ring as f64 * self.cell {
                break;
            }
        }
        let mut out: Vec<Cand> = heap.into_vec();
        out.sort();
        out.into_iter().map(|c| (c.0, c.1)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_euclidean, SeedSpec};

    #[test]
    fn knn_matches_full_scan() {
        let e = gen_euclidean(400, 1.0, SeedSpec::new(3));
        let g = GridIndex::new(&e.points, 0.05);
        for v in (0..400).step_by(37) {
            let got = g.k_nearest(e.points[v], 7, |u| u != v && u % 3 != 0);
            let mut all: Vec<(f64, usize)> = (0..400)
                .filter(|&u| u != v && u % 3 != 0)
                .map(|u| (e.dist(u, v), u))
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            all.truncate(7);
            assert_eq!(got, all);
        }
    }

    #[test]
    fn radius_query_matches_full_scan() {
        let e = gen_euclidean(300, 2.0, SeedSpec::new(4));
        let g = GridIndex::new(&e.points, 0.3);
        let mut got = Vec::new();
        g.for_each_within(e.points[5], 0.4, |i, _| got.push(i));
        got.sort_unstable();
        let want: Vec<usize> = (0..300).filter(|&u| e.dist(u, 5) <= 0.4).collect();
        assert_eq!(got, want);
    }
}
