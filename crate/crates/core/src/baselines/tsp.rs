use super::two_opt::{self, TwoOptBudget, TwoOptReport, Unconstrained};
use crate::error::{Error, Result};
use crate::instance::Instance;

pub const TSP_EXACT_MAX_N: usize = 13;

/// A Hamilton cycle given as a vertex order; the closing edge is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub total_cost: f64,
}

impl Tour {
    pub fn from_order(instance: &Instance, order: Vec<usize>) -> Self {
        let total_cost = cycle_cost(instance, &order);
        Self { order, total_cost }
    }

    pub fn is_permutation_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        self.order.len() == n
            && self
                .order
                .iter()
                .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }
}

pub fn cycle_cost(instance: &Instance, order: &[usize]) -> f64 {
    let n = order.len();
    if n < 2 {
        return 0.0;
    }
    (0..n).map(|i| instance.cost(order[i], order[(i + 1) % n])).sum()
}

/// Optimal tour by Held-Karp dynamic programming over subsets, `2 <= n <= 13`.
pub fn tsp_exact(instance: &Instance) -> Result<Tour> {
    let n = instance.n();
    if !(2..=TSP_EXACT_MAX_N).contains(&n) {
        return Err(Error::Size {
            what: "exact TSP",
            n,
            min: 2,
            max: TSP_EXACT_MAX_N,
        });
    }
    // vertex 0 is the fixed start; masks range over vertices 1..n
    let m = n - 1;
    let full = (1usize << m) - 1;
    let c = |a: usize, b: usize| instance.cost(a, b);
    let mut dp = vec![f64::INFINITY; (full + 1) * m];
    let mut parent = vec![u8::MAX; (full + 1) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = c(0, j + 1);
    }
    for mask in 1..=full {
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let cur = dp[mask * m + j];
            if !cur.is_finite() {
                continue;
            }
            for k in 0..m {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let next = mask | (1 << k);
                let cand = cur + c(j + 1, k + 1);
                if cand < dp[next * m + k] {
                    dp[next * m + k] = cand;
                    parent[next * m + k] = j as u8;
                }
            }
        }
    }
    let (mut last, mut best) = (0, f64::INFINITY);
    for j in 0..m {
        let v = dp[full * m + j] + c(j + 1, 0);
        if v < best {
            best = v;
            last = j;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    let mut j = last;
    loop {
        order.push(j + 1);
        let p = parent[mask * m + j];
        mask &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    order.push(0);
    order.reverse();
    Ok(Tour::from_order(instance, order))
}

/// Greedy nearest-neighbor tour from vertex 0; ties go to the lower index.
pub fn nearest_neighbor_tour(instance: &Instance) -> Vec<usize> {
    let n = instance.n();
    if n == 0 {
        return Vec::new();
    }
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = 0;
    visited[0] = true;
    order.push(0);
    for _ in 1..n {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (v, &seen) in visited.iter().enumerate() {
            if !seen {
                let d = instance.cost(cur, v);
                if d < best_d {
                    best_d = d;
                    best = v;
                }
            }
        }
        visited[best] = true;
        order.push(best);
        cur = best;
    }
    order
}

/// Nearest-neighbor construction followed by 2-opt to a local optimum or
/// until `budget` is spent. The cost is an upper bound on the optimal tour.
pub fn tsp_heuristic(instance: &Instance, budget: TwoOptBudget) -> (Tour, TwoOptReport) {
    let mut order = nearest_neighbor_tour(instance);
    let report = two_opt::improve(instance, &mut order, &mut Unconstrained, budget);
    (Tour::from_order(instance, order), report)
}
