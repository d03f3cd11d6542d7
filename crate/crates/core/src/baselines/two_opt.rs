//! 2-opt local search over an array tour.
//!
//! The engine runs a neighbor-list pass with don't-look bits and then full
//! `O(n^2)` sweeps until no improving exchange remains. An [`ExchangeRule`]
//! can veto exchanges; the rainbow tour polish uses this to keep colors
//! distinct, so both tour pipelines share the same search effort.

use std::collections::VecDeque;

use crate::instance::Instance;

/// Improvements at or below this are treated as ties.
pub const GAIN_EPS: f64 = 1e-12;

/// Deterministic effort cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoOptBudget {
    /// Maximum number of applied exchanges.
    pub max_moves: usize,
    /// Candidate neighbors per city in the first pass.
    pub neighbors: usize,
}

impl Default for TwoOptBudget {
    fn default() -> Self {
        Self {
            max_moves: 5_000_000,
            neighbors: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TwoOptReport {
    pub moves: usize,
    pub local_optimum: bool,
}

/// Veto hook for the exchange that replaces `{p1,s1}, {p2,s2}` (with
/// `s = succ(p)`) by `{p1,p2}, {s1,s2}`.
pub trait ExchangeRule {
    fn allows(&self, p1: usize, s1: usize, p2: usize, s2: usize) -> bool;
    fn applied(&mut self, p1: usize, s1: usize, p2: usize, s2: usize);
}

/// Accepts every exchange.
pub struct Unconstrained;

impl ExchangeRule for Unconstrained {
    fn allows(&self, _: usize, _: usize, _: usize, _: usize) -> bool {
        true
    }
    fn applied(&mut self, _: usize, _: usize, _: usize, _: usize) {}
}

/// Sorted candidate lists: the `k` cheapest partners of every vertex.
pub fn neighbor_lists(instance: &Instance, k: usize) -> Vec<Vec<usize>> {
    let n = instance.n();
    let k = k.min(n.saturating_sub(1));
    match instance {
        Instance::Euclidean(e) if n > 64 => {
            let cell = e.scale.max(1e-12) / (n as f64).sqrt();
            let grid = crate::spatial::GridIndex::new(&e.points, cell);
            (0..n)
                .map(|v| {
                    grid.k_nearest(e.points[v], k, |u| u != v)
                        .into_iter()
                        .map(|(_, u)| u)
                        .collect()
                })
                .collect()
        }
        _ => (0..n)
            .map(|v| {
                let mut all: Vec<usize> = (0..n).filter(|&u| u != v).collect();
                all.sort_by(|&a, &b| {
                    instance
                        .cost(v, a)
                        .total_cmp(&instance.cost(v, b))
                        .then(a.cmp(&b))
                });
                all.truncate(k);
                all
            })
            .collect(),
    }
}

struct ArrayTour {
    order: Vec<usize>,
    pos: Vec<usize>,
}

impl ArrayTour {
    fn new(order: Vec<usize>) -> Self {
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        Self { order, pos }
    }

    fn len(&self) -> usize {
        self.order.len()
    }

    fn succ(&self, v: usize) -> usize {
        self.order[(self.pos[v] + 1) % self.len()]
    }

    fn pred(&self, v: usize) -> usize {
        let n = self.len();
        self.order[(self.pos[v] + n - 1) % n]
    }

    /// Replaces `{p1,succ p1}, {p2,succ p2}` by `{p1,p2}, {succ p1,succ p2}`.
    fn exchange(&mut self, p1: usize, p2: usize) {
        let n = self.len();
        let (i, j) = (self.pos[p1], self.pos[p2]);
        let (lo, hi) = if i < j { (i + 1, j) } else { (j + 1, i) };
        let inner = hi + 1 - lo;
        if 2 * inner <= n {
            self.reverse(lo, inner);
        } else {
            self.reverse((hi + 1) % n, n - inner);
        }
    }

    /// Reverses `len` consecutive positions starting at `start`, cyclically.
    fn reverse(&mut self, start: usize, len: usize) {
        let n = self.len();
        let (mut a, mut b) = (start, (start + len + n - 1) % n);
        for _ in 0..len / 2 {
            self.order.swap(a, b);
            self.pos[self.order[a]] = a;
            self.pos[self.order[b]] = b;
            a = (a + 1) % n;
            b = (b + n - 1) % n;
        }
    }
}

/// Improves `tour` in place by 2-exchanges permitted by `rule`.
pub fn improve<R: ExchangeRule>(
    instance: &Instance,
    tour: &mut Vec<usize>,
    rule: &mut R,
    budget: TwoOptBudget,
) -> TwoOptReport {
    let n = tour.len();
    let mut report = TwoOptReport {
        moves: 0,
        local_optimum: true,
    };
    if n < 4 {
        return report;
    }
    let d = |a: usize, b: usize| instance.cost(a, b);
    let mut t = ArrayTour::new(std::mem::take(tour));

    // neighbor-list pass
    let nbrs = neighbor_lists(instance, budget.neighbors);
    let mut queue: VecDeque<usize> = t.order.iter().copied().collect();
    let mut queued = vec![true; n];
    'outer: while let Some(a) = queue.pop_front() {
        queued[a] = false;
        for forward in [true, false] {
            let b = if forward { t.succ(a) } else { t.pred(a) };
            let dab = d(a, b);
            for &c in &nbrs[a] {
                let dac = d(a, c);
                if dac >= dab {
                    break;
                }
                let e = if forward { t.succ(c) } else { t.pred(c) };
                if c == b || e == a {
                    continue;
                }
                let gain = dab + d(c, e) - dac - d(b, e);
                if gain <= GAIN_EPS {
                    continue;
                }
                let (p1, s1, p2, s2) = if forward { (a, b, c, e) } else { (b, a, e, c) };
                if !rule.allows(p1, s1, p2, s2) {
                    continue;
                }
                if report.moves >= budget.max_moves {
                    report.local_optimum = false;
                    break 'outer;
                }
                t.exchange(p1, p2);
                rule.applied(p1, s1, p2, s2);
                report.moves += 1;
                for v in [p1, s1, p2, s2] {
                    if !queued[v] {
                        queued[v] = true;
                        queue.push_back(v);
                    }
                }
                continue 'outer;
            }
        }
    }

    // full sweeps certify the local optimum
    while report.local_optimum {
        let mut improved = false;
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (t.order[i], t.order[i + 1]);
                let (c, e) = (t.order[j], t.order[(j + 1) % n]);
                let gain = d(a, b) + d(c, e) - d(a, c) - d(b, e);
                if gain > GAIN_EPS && rule.allows(a, b, c, e) {
                    if report.moves >= budget.max_moves {
                        report.local_optimum = false;
                        break;
                    }
                    t.exchange(a, c);
                    rule.applied(a, b, c, e);
                    report.moves += 1;
                    improved = true;
                }
            }
            if !report.local_optimum {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    *tour = t.order;
    report
}

/// Best gain of any 2-exchange on `tour` (full scan); non-positive at a
/// 2-opt local optimum.
pub fn best_exchange_gain(instance: &Instance, tour: &[usize]) -> f64 {
    let n = tour.len();
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b, c, e) = (tour[i], tour[i + 1], tour[j], tour[(j + 1) % n]);
            let gain =
                instance.cost(a, b) + instance.cost(c, e) - instance.cost(a, c) - instance.cost(b, e);
            best = best.max(gain);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_euclidean, gen_uniform_costs, SeedSpec};

    fn is_perm(t: &[usize], n: usize) -> bool {
        let mut seen = vec![false; n];
        t.len() == n && t.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }

    #[test]
    fn reaches_a_local_optimum() {
        for seed in 0..5 {
            for inst in [
                Instance::from(gen_euclidean(150, 1.0, SeedSpec::new(seed))),
                Instance::from(gen_uniform_costs(60, SeedSpec::new(seed))),
            ] {
                let n = inst.n();
                let mut t: Vec<usize> = (0..n).collect();
                let r = improve(&inst, &mut t, &mut Unconstrained, TwoOptBudget::default());
                assert!(r.local_optimum);
                assert!(is_perm(&t, n));
                assert!(best_exchange_gain(&inst, &t) <= GAIN_EPS);
            }
        }
    }

    #[test]
    fn budget_caps_moves() {
        let inst = Instance::from(gen_euclidean(200, 1.0, SeedSpec::new(9)));
        let mut t: Vec<usize> = (0..200).collect();
        let b = TwoOptBudget {
            max_moves: 5,
            neighbors: 8,
        };
        let r = improve(&inst, &mut t, &mut Unconstrained, b);
        assert_eq!(r.moves, 5);
        assert!(!r.local_optimum);
        assert!(is_perm(&t, 200));
    }
}
