//! Rainbow Hamilton cycles by greedy path systems and reserve completion.
//!
//! A reserve `R` of `r = ceil(C sqrt(n))` vertices is set aside. On the
//! remaining vertices the greedy repeatedly adds the cheapest edge that
//! creates no cycle, no vertex of degree 3 and no repeated color, until
//! exactly `r` path components remain. The paths and isolated vertices are
//! then threaded through the reserve by an alternating Hamilton cycle of the
//! completion graph, using only colors the paths left unused.
//!
//! Completion tries, in order: edges whose fresh color occurs once; the same
//! with new random streams; one edge per fresh color occurring at most
//! twice; all fresh edges with color tracking in the search.

mod completion;
mod hamilton;
mod paths;
mod polish;

use serde::Serialize;

pub use completion::{build_completion, CompletionEdge, CompletionGraph, FreshColorFilter};
pub use hamilton::{find_cycle, CompletionCycle, HamiltonBudget};
pub use paths::{greedy_paths, select_reserve, EdgeStream, GreedyStats, PathSystem};
pub use polish::{rainbow_two_opt, RainbowRule};

use crate::baselines::{cycle_cost, TwoOptBudget};
use crate::error::{Error, Result};
use crate::instance::{Coloring, EdgeId, Instance, SeedSpec, Stream};

pub const DEFAULT_EPS: f64 = 0.2;
pub const DEFAULT_C: f64 = 1.5;
/// Growth of `C` after a stalled greedy or a failed completion.
const C_GROWTH: f64 = 1.25;

#[derive(Debug, Clone, PartialEq)]
pub struct TourParams {
    pub eps: f64,
    pub c_param: f64,
    /// Completion effort; `None` uses [`HamiltonBudget::for_n`].
    pub budget: Option<HamiltonBudget>,
    /// Rainbow 2-opt after completion.
    pub polish: Option<TwoOptBudget>,
    pub stream: EdgeStream,
    /// Retries with a larger `C` when the greedy stalls or no completion is
    /// found.
    pub c_retries: usize,
}

impl Default for TourParams {
    fn default() -> Self {
        Self {
            eps: DEFAULT_EPS,
            c_param: DEFAULT_C,
            budget: None,
            polish: Some(TwoOptBudget::default()),
            stream: EdgeStream::FullSort,
            c_retries: 3,
        }
    }
}

/// The smallest palette the pipeline accepts: `ceil((1 + eps) n)`.
pub fn palette_size(n: usize, eps: f64) -> usize {
    ((1.0 + eps) * n as f64 - 1e-9).ceil() as usize
}

/// A Hamilton cycle with pairwise distinct edge colors.
#[derive(Debug, Clone, PartialEq)]
pub struct RainbowTour {
    pub order: Vec<usize>,
    /// Color of the edge from `order[i]` to `order[i + 1]` (cyclically).
    pub colors: Vec<u32>,
    pub total_cost: f64,
}

impl RainbowTour {
    pub fn from_order(instance: &Instance, coloring: &Coloring, order: Vec<usize>) -> Self {
        let n = order.len();
        let edges: Vec<EdgeId> = (0..n).map(|i| EdgeId::new(order[i], order[(i + 1) % n])).collect();
        let colors = edges.iter().map(|&e| coloring.color(e)).collect();
        let total_cost = instance.total_cost(&edges);
        Self {
            order,
            colors,
            total_cost,
        }
    }

    /// Permutation of `0..n` whose `n` cycle edges carry `n` distinct
    /// colors.
    pub fn is_valid(&self, n: usize, coloring: &Coloring) -> bool {
        let mut seen = vec![false; n];
        let perm = n >= 3
            && self.order.len() == n
            && self.order.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true));
        if !perm {
            return false;
        }
        let mut colors: Vec<u32> = (0..n)
            .map(|i| coloring.color_of(self.order[i], self.order[(i + 1) % n]))
            .collect();
        if colors != self.colors {
            return false;
        }
        colors.sort_unstable();
        colors.dedup();
        colors.len() == n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub n: usize,
    pub q: usize,
    pub eps: f64,
    /// `C` of the successful attempt.
    pub c_param: f64,
    pub c_retries: usize,
    pub r: usize,
    pub k0: usize,
    pub greedy_cost: f64,
    pub color_skips: usize,
    pub revealed: usize,
    pub lambda_exceed_fraction: f64,
    pub paths: usize,
    pub isolated: usize,
    /// `q'`, colors unused by the paths.
    pub fresh_colors: usize,
    pub relevant_edges: usize,
    pub gamma1_edges: usize,
    pub gamma2_edges: usize,
    pub c2: usize,
    pub mean_color_usage: f64,
    pub usage_bound: f64,
    pub expected_color_usage: f64,
    /// Completion tier that succeeded.
    pub tier: &'static str,
    pub tiers_tried: usize,
    pub restart: Option<usize>,
    pub completion_cost: f64,
    pub unpolished_cost: f64,
    pub polish_moves: usize,
    pub total_cost: f64,
}

/// Completion edge sets in the order they are tried.
const TIERS: [&str; 4] = ["gamma2", "gamma2-retry", "at-most-twice", "gamma1"];

/// Builds a rainbow Hamilton cycle. Needs `q >= ceil((1 + eps) n)`.
pub fn rainbow_tour(
    instance: &Instance,
    coloring: &Coloring,
    params: &TourParams,
) -> Result<(RainbowTour, Diagnostics)> {
    let n = instance.n();
    if n < 5 {
        return Err(Error::Size {
            what: "rainbow tour",
            n,
            min: 5,
            max: usize::MAX,
        });
    }
    if !(params.eps > 0.0 && params.eps.is_finite()) {
        return Err(Error::Parameter(format!("eps must be positive, got {}", params.eps)));
    }
    coloring.check_covers(n)?;
    let q = coloring.q();
    let need = palette_size(n, params.eps);
    if q < need {
        return Err(Error::Parameter(format!(
            "palette q = {q} is below ceil((1 + eps) n) = {need}"
        )));
    }

    let mut c = params.c_param;
    let mut attempt = 0;
    loop {
        match tour_with_c(instance, coloring, params, c, attempt) {
            Err(e @ (Error::GreedyStalled { .. } | Error::CompletionFailed { .. }))
                if attempt < params.c_retries && select_reserve(n, c * C_GROWTH).is_ok() =>
            {
                log::warn!("{e} with C = {c}; retrying with a larger C");
                attempt += 1;
                c *= C_GROWTH;
            }
            other => return other,
        }
    }
}

fn tour_with_c(
    instance: &Instance,
    coloring: &Coloring,
    params: &TourParams,
    c: f64,
    attempt: usize,
) -> Result<(RainbowTour, Diagnostics)> {
    let n = instance.n();
    let q = coloring.q();
    let (reserve, rest) = select_reserve(n, c)?;
    let r = reserve.len();
    let k0 = rest.len() - r;
    let (paths, stats) = greedy_paths(instance, coloring, &rest, k0, c, params.stream)?;
    if !paths.check(coloring) || paths.components() != r {
        return Err(Error::Contract("greedy output is not a rainbow path system".into()));
    }
    let (graph, filter) = build_completion(&paths, &reserve, instance, coloring);
    debug_assert!(filter
        .gamma2
        .iter()
        .all(|&i| filter.usage[&graph.edges[i].color] == 1));

    let budget = params.budget.unwrap_or_else(|| HamiltonBudget::for_n(n));
    let exhaustive = r <= budget.exhaustive_max_r;
    let seed = SeedSpec::new(instance.seed());
    let mut found = None;
    let mut tiers_tried = 0;
    for (t, name) in TIERS.iter().enumerate() {
        if exhaustive && t == 1 {
            continue;
        }
        let subset = match t {
            0 | 1 => filter.gamma2.clone(),
            2 => filter.at_most_twice_one_each(&graph),
            _ => filter.gamma1.clone(),
        };
        tiers_tried += 1;
        let block = ((attempt * TIERS.len() + t) as u32) << 16;
        let cycle = find_cycle(&graph, &subset, q, budget, |i| {
            seed.rng_indexed(Stream::TieBreak, block | (i as u32 & 0xffff))
        });
        if let Some(cycle) = cycle {
            found = Some((*name, cycle));
            break;
        }
        log::debug!("completion tier {name} failed ({} edges)", subset.len());
    }
    let Some((tier, cycle)) = found else {
        return Err(Error::CompletionFailed {
            attempts: tiers_tried,
        });
    };

    let completion: Vec<EdgeId> = cycle.edges.iter().map(|&i| graph.edges[i].edge).collect();
    let completion_cost = instance.total_cost(&completion);
    let order = stitch(&paths, &completion)?;
    let mut tour = RainbowTour::from_order(instance, coloring, order);
    verify(instance, coloring, &tour)?;
    let unpolished_cost = tour.total_cost;

    let mut polish_moves = 0;
    if let Some(b) = params.polish {
        let mut order = tour.order;
        polish_moves = rainbow_two_opt(instance, coloring, &mut order, b).moves;
        tour = RainbowTour::from_order(instance, coloring, order);
        verify(instance, coloring, &tour)?;
    }

    let (ends, isolated) = paths.ends();
    let diagnostics = Diagnostics {
        n,
        q,
        eps: params.eps,
        c_param: c,
        c_retries: attempt,
        r,
        k0,
        greedy_cost: stats.cost,
        color_skips: stats.color_skips,
        revealed: stats.revealed,
        lambda_exceed_fraction: stats.lambda_exceed_fraction(),
        paths: ends.len(),
        isolated: isolated.len(),
        fresh_colors: filter.fresh_palette(),
        relevant_edges: graph.edges.len(),
        gamma1_edges: filter.gamma1.len(),
        gamma2_edges: filter.gamma2.len(),
        c2: filter.c2,
        mean_color_usage: filter.mean_usage(),
        usage_bound: filter.usage_bound(r),
        expected_color_usage: graph.edges.len() as f64 / q as f64,
        tier,
        tiers_tried,
        restart: cycle.restart,
        completion_cost,
        unpolished_cost,
        polish_moves,
        total_cost: tour.total_cost,
    };
    Ok((tour, diagnostics))
}

/// Joins the path system and the completion edges into one vertex order.
fn stitch(paths: &PathSystem, completion: &[EdgeId]) -> Result<Vec<usize>> {
    let n = paths.n;
    let mut adj = paths.adjacency();
    for e in completion {
        let (a, b) = e.endpoints();
        for (u, v) in [(a, b), (b, a)] {
            let slot = adj[u]
                .iter_mut()
                .find(|s| **s == usize::MAX)
                .ok_or_else(|| Error::Contract(format!("vertex {u} gets degree 3")))?;
            *slot = v;
        }
    }
    let mut order = Vec::with_capacity(n);
    let (mut prev, mut cur) = (usize::MAX, 0);
    for _ in 0..n {
        order.push(cur);
        let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
        if next == usize::MAX {
            return Err(Error::Contract(format!("vertex {cur} has degree below 2")));
        }
        prev = cur;
        cur = next;
    }
    if cur != 0 {
        return Err(Error::Contract("stitched edges do not form one cycle".into()));
    }
    Ok(order)
}

fn verify(instance: &Instance, coloring: &Coloring, tour: &RainbowTour) -> Result<()> {
    let n = instance.n();
    if !tour.is_valid(n, coloring) {
        return Err(Error::Contract("tour is not a rainbow Hamilton cycle".into()));
    }
    let resum = cycle_cost(instance, &tour.order);
    if (resum - tour.total_cost).abs() > 1e-9 * tour.total_cost.abs().max(1e-300) {
        return Err(Error::Contract(format!(
            "cost re-summation {resum} differs from {}",
            tour.total_cost
        )));
    }
    Ok(())
}
