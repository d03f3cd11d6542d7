//! Repeated colors, isolated pair copies and the rainbow cost gap.
//!
//! Distances for copy detection are in the rescaled square of side
//! `sqrt(n)`, one point per unit area on average; divide by `sqrt(n)` to
//! return to the unit square. Gap experiments use the unit square.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{kruskal_mst, tsp_heuristic};
use crate::error::{Error, Result};
use crate::harness::{fit_scaling, GridMean, ScalingFit};
use crate::instance::{color_edges, edge_count, gen_euclidean, Coloring, Instance, SeedSpec, Stream};
use crate::rainbow_exact::{min_rainbow_spanning_tree, RainbowMst};
use crate::spatial::GridIndex;
use crate::tour_greedy::{palette_size, rainbow_tour, TourParams};

/// Expected number of colors used at least twice when `alpha` items get
/// independent uniform colors from a palette of `beta`:
/// `beta (1 - (1 - 1/beta)^alpha - alpha/beta (1 - 1/beta)^(alpha - 1))`.
pub fn expected_repeat_count(alpha: u64, beta: u64) -> f64 {
    assert!(beta >= 1, "palette must be nonempty");
    if alpha < 2 {
        return 0.0;
    }
    if beta == 1 {
        return 1.0;
    }
    let (a, b) = (alpha as f64, beta as f64);
    let l = (-1.0 / b).ln_1p();
    b * (1.0 - (a * l).exp() - a / b * ((a - 1.0) * l).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeatCountReport {
    pub alpha: u64,
    pub beta: u64,
    pub expected: f64,
    pub empirical: u64,
    pub fraction: f64,
}

/// Samples `alpha` uniform colors from `beta` and counts those drawn at
/// least twice.
pub fn empirical_repeat_count(alpha: u64, beta: u64, seed: SeedSpec) -> RepeatCountReport {
    assert!(beta >= 1, "palette must be nonempty");
    let mut rng = seed.rng(Stream::Colors);
    let mut hits = vec![0u8; beta as usize];
    let mut z = 0;
    for _ in 0..alpha {
        let h = &mut hits[rng.gen_range(0..beta) as usize];
        if *h == 1 {
            z += 1;
        }
        *h = h.saturating_add(1);
    }
    RepeatCountReport {
        alpha,
        beta,
        expected: expected_repeat_count(alpha, beta),
        empirical: z,
        fraction: z as f64 / beta as f64,
    }
}

/// Isolated near-unit pairs: the two-point pattern at unit distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CopySet {
    pub eps: f64,
    pub d: f64,
    /// Copies as `[u, v]` with `u < v`.
    pub copies: Vec<[usize; 2]>,
}

impl CopySet {
    pub fn kappa(&self) -> usize {
        self.copies.len()
    }

    /// Brute-force check of disjointness, the length window and isolation.
    pub fn verify(&self, points: &[[f64; 2]]) -> bool {
        let dist = |a: usize, b: usize| {
            let (p, q) = (points[a], points[b]);
            (p[0] - q[0]).hypot(p[1] - q[1])
        };
        let mut used = vec![false; points.len()];
        self.copies.iter().all(|&[u, v]| {
            let len = dist(u, v);
            !std::mem::replace(&mut used[u], true)
                && !std::mem::replace(&mut used[v], true)
                && len > 1.0 - 2.0 * self.eps
                && len < 1.0 + 2.0 * self.eps
                && (0..points.len())
                    .filter(|&w| w != u && w != v)
                    .all(|w| dist(u, w) > self.d && dist(v, w) > self.d)
        })
    }
}

/// The points of `instance` rescaled to the square of side `sqrt(n)`.
pub fn scaled_points(instance: &crate::instance::EuclideanInstance) -> Vec<[f64; 2]> {
    instance.rescaled((instance.n() as f64).sqrt()).points
}

/// Greedy maximal set of pairs `{u, v}` with `|u - v|` in
/// `(1 - 2 eps, 1 + 2 eps)` and no third point within `d` of either.
/// Needs `eps < 1/2 < d`.
pub fn find_pair_copies(points: &[[f64; 2]], eps: f64, d: f64) -> Result<CopySet> {
    if !(eps > 0.0 && eps < 0.5 && d > 0.5 && d.is_finite()) {
        return Err(Error::Parameter(format!("need 0 < eps < 1/2 < D, got eps = {eps}, D = {d}")));
    }
    let grid = GridIndex::new(points, d);
    let mut used = vec![false; points.len()];
    let mut copies = Vec::new();
    let neighbors = |u: usize| {
        let mut near = Vec::new();
        grid.for_each_within(points[u], d, |w, _| {
            if w != u {
                near.push(w);
            }
        });
        near
    };
    for u in 0..points.len() {
        if used[u] {
            continue;
        }
        let near = neighbors(u);
        let &[v] = near.as_slice() else { continue };
        let p = points[u];
        let len = (p[0] - points[v][0]).hypot(p[1] - points[v][1]);
        if used[v] || len <= 1.0 - 2.0 * eps || len >= 1.0 + 2.0 * eps {
            continue;
        }
        if neighbors(v) == [u] {
            used[u] = true;
            used[v] = true;
            copies.push([u.min(v), u.max(v)]);
        }
    }
    Ok(CopySet { eps, d, copies })
}

/// One seed of a gap experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSample {
    pub seed: u64,
    pub constrained: f64,
    pub unconstrained: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub samples: Vec<GapSample>,
    /// Seeds without a rainbow solution.
    pub excluded: Vec<u64>,
    pub mean: GridMean,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    /// `"exact"` for spanning trees, `"heuristic"` for tours.
    pub basis: &'static str,
    pub rows: Vec<GapRow>,
    pub fit: Option<ScalingFit>,
}

/// Euclidean unit-square instance with `q` colors for cell `(n, replicate)`.
pub fn euclid_cell(n: usize, q: usize, seed: SeedSpec) -> Result<(Instance, Coloring)> {
    let inst = gen_euclidean(n, 1.0, seed).into();
    let col = color_edges(edge_count(n), q, seed)?;
    Ok((inst, col))
}

/// Exact rainbow MST minus Kruskal on one instance with `q = n - 1`;
/// `None` when no rainbow spanning tree exists.
pub fn mst_gap_sample(n: usize, seed: SeedSpec) -> Result<Option<GapSample>> {
    let (inst, col) = euclid_cell(n, n.saturating_sub(1).max(1), seed)?;
    let plain = kruskal_mst(&inst)?.total_cost;
    Ok(match min_rainbow_spanning_tree(&inst, &col)? {
        RainbowMst::Tree(t) => Some(GapSample {
            seed: seed.master,
            constrained: t.total_cost,
            unconstrained: plain,
            gap: t.total_cost - plain,
        }),
        RainbowMst::Infeasible { .. } => None,
    })
}

/// Rainbow tour minus the unconstrained 2-opt tour, both polished with
/// the same 2-opt budget; `None` when no rainbow tour was found.
pub fn tsp_gap_sample(n: usize, eps: f64, params: &TourParams, seed: SeedSpec) -> Result<Option<GapSample>> {
    let (inst, col) = euclid_cell(n, palette_size(n, eps), seed)?;
    let budget = params.polish.unwrap_or_default();
    let params = TourParams {
        eps,
        polish: Some(budget),
        ..params.clone()
    };
    let tour = match rainbow_tour(&inst, &col, &params) {
        Ok((t, _)) => t,
        Err(Error::CompletionFailed { .. } | Error::GreedyStalled { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let (plain, _) = tsp_heuristic(&inst, budget);
    Ok(Some(GapSample {
        seed: seed.master,
        constrained: tour.total_cost,
        unconstrained: plain.total_cost,
        gap: tour.total_cost - plain.total_cost,
    }))
}

fn gap_experiment(
    basis: &'static str,
    grid: &[usize],
    seeds: usize,
    base_seed: u64,
    sample: impl Fn(usize, SeedSpec) -> Result<Option<GapSample>> + Sync,
) -> Result<GapReport> {
    let mut rows = Vec::with_capacity(grid.len());
    for &n in grid {
        let results: Vec<(u64, Result<Option<GapSample>>)> = (0..seeds)
            .into_par_iter()
            .map(|rep| {
                let s = SeedSpec::for_cell(base_seed, n, rep);
                (s.master, sample(n, s))
            })
            .collect();
        let mut samples = Vec::new();
        let mut excluded = Vec::new();
        for (seed, r) in results {
            match r? {
                Some(s) => samples.push(s),
                None => excluded.push(seed),
            }
        }
        let gaps: Vec<f64> = samples.iter().map(|s| s.gap).collect();
        let mean = GridMean::from_samples(n, &gaps);
        rows.push(GapRow {
            n,
            samples,
            excluded,
            mean,
        });
    }
    let means: Vec<GridMean> = rows.iter().map(|r| r.mean).collect();
    let fit = fit_scaling(&means).ok();
    Ok(GapReport { basis, rows, fit })
}

/// `Z_MST - Z*_MST` over an `n` grid, exact on both sides.
pub fn mst_gap_experiment(grid: &[usize], seeds: usize, base_seed: u64) -> Result<GapReport> {
    gap_experiment("exact", grid, seeds, base_seed, mst_gap_sample)
}

/// `Z_TSP - Z*_TSP` over an `n` grid, heuristic on both sides at matched
/// 2-opt effort: directional evidence only.
pub fn tsp_gap_experiment(
    grid: &[usize],
    seeds: usize,
    base_seed: u64,
    eps: f64,
    params: &TourParams,
) -> Result<GapReport> {
    gap_experiment("heuristic", grid, seeds, base_seed, |n, s| tsp_gap_sample(n, eps, params, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_edges() {
        assert_eq!(expected_repeat_count(0, 5), 0.0);
        assert_eq!(expected_repeat_count(1, 5), 0.0);
        assert_eq!(expected_repeat_count(2, 1), 1.0);
        // two items, two colors: a repeat with probability 1/2
        assert!((expected_repeat_count(2, 2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_color_palette() {
        for seed in 0..5 {
            assert_eq!(empirical_repeat_count(3, 1, SeedSpec::new(seed)).empirical, 1);
        }
    }

    #[test]
    fn lone_pair_is_a_copy() {
        let pts = [[3.0, 3.0], [4.0, 3.0]];
        let c = find_pair_copies(&pts, 0.25, 4.0).unwrap();
        assert_eq!(c.copies, vec![[0, 1]]);
        assert!(c.verify(&pts));
    }

    #[test]
    fn crowded_points_give_no_copy() {
        let pts = [[3.0, 3.0], [4.0, 3.0], [3.5, 3.8]];
        assert_eq!(find_pair_copies(&pts, 0.25, 4.0).unwrap().kappa(), 0);
    }

    #[test]
    fn bad_tolerances() {
        assert!(find_pair_copies(&[], 0.6, 4.0).is_err());
        assert!(find_pair_copies(&[], 0.25, 0.4).is_err());
    }

    #[test]
    fn tiny_mst_gap_is_nonnegative() {
        let r = mst_gap_experiment(&[6, 8, 10], 4, 1).unwrap();
        for row in &r.rows {
            assert!(row.samples.iter().all(|s| s.gap >= -1e-12));
        }
    }
}
