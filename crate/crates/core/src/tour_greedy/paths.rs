//! Reserve selection and the greedy rainbow path system.

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::instance::{Coloring, EdgeId, Instance};
use crate::spatial::GridIndex;

/// The first `r = ceil(c_param * sqrt(n))` vertices form the reserve `R`;
/// the rest is `N'`.
pub fn select_reserve(n: usize, c_param: f64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(c_param > 0.0 && c_param.is_finite()) {
        return Err(Error::Parameter(format!("C must be positive, got {c_param}")));
    }
    let r = (c_param * (n as f64).sqrt()).ceil() as usize;
    if 2 * r >= n {
        return Err(Error::Parameter(format!(
            "reserve size r = {r} must stay below n/2 = {}",
            n as f64 / 2.0
        )));
    }
    Ok(((0..r).collect(), (r..n).collect()))
}

/// Vertex-disjoint paths and isolated vertices over `N'`, with the set of
/// colors they use.
#[derive(Debug, Clone)]
pub struct PathSystem {
    pub n: usize,
    pub members: Vec<usize>,
    pub edges: Vec<EdgeId>,
    pub degree: Vec<u8>,
    pub used_colors: Vec<bool>,
    dsu: DisjointSets,
    components: usize,
}

impl PathSystem {
    pub fn new(n: usize, q: usize, members: Vec<usize>) -> Self {
        let components = members.len();
        Self {
            n,
            members,
            edges: Vec::new(),
            degree: vec![0; n],
            used_colors: vec![false; q],
            dsu: DisjointSets::new(n),
            components,
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn color_used(&self, c: u32) -> bool {
        self.used_colors[c as usize]
    }

    /// Whether `{a, b}` keeps every component a path.
    pub fn can_join(&mut self, a: usize, b: usize) -> bool {
        self.degree[a] < 2 && self.degree[b] < 2 && !self.dsu.same(a, b)
    }

    pub(crate) fn push(&mut self, a: usize, b: usize, color: u32) {
        debug_assert!(self.can_join(a, b) && !self.color_used(color));
        self.dsu.union(a, b);
        self.degree[a] += 1;
        self.degree[b] += 1;
        self.used_colors[color as usize] = true;
        self.edges.push(EdgeId::new(a, b));
        self.components -= 1;
    }

    /// Nontrivial paths as `[end, end]` and isolated vertices, in order of
    /// the smallest vertex they contain.
    pub fn ends(&self) -> (Vec<[usize; 2]>, Vec<usize>) {
        let mut paths = Vec::new();
        let mut isolated = Vec::new();
        let mut seen = vec![false; self.n];
        let adj = self.adjacency();
        for &v in &self.members {
            if seen[v] {
                continue;
            }
            if self.degree[v] == 0 {
                seen[v] = true;
                isolated.push(v);
            } else if self.degree[v] == 1 {
                let w = walk(&adj, v, &mut seen);
                paths.push([v.min(w), v.max(w)]);
            }
        }
        (paths, isolated)
    }

    pub fn adjacency(&self) -> Vec<[usize; 2]> {
        let mut adj = vec![[usize::MAX; 2]; self.n];
        for e in &self.edges {
            let (a, b) = e.endpoints();
            let slot = |x: &mut [usize; 2], v| {
                if x[0] == usize::MAX {
                    x[0] = v
                } else {
                    x[1] = v
                }
            };
            slot(&mut adj[a], b);
            slot(&mut adj[b], a);
        }
        adj
    }

    /// Every component is a path, colors are distinct, and the component
    /// count matches the edge count.
    pub fn check(&self, coloring: &Coloring) -> bool {
        let mut dsu = DisjointSets::new(self.n);
        let mut deg = vec![0u8; self.n];
        let mut colors = std::collections::HashSet::new();
        let ok = self.edges.iter().all(|&e| {
            let (a, b) = e.endpoints();
            deg[a] += 1;
            deg[b] += 1;
            dsu.union(a, b) && deg[a] <= 2 && deg[b] <= 2 && colors.insert(coloring.color(e))
        });
        ok && self.components == self.members.len() - self.edges.len()
    }
}

/// Walks a path from endpoint `v`, marking it, and returns the far end.
pub(crate) fn walk(adj: &[[usize; 2]], v: usize, seen: &mut [bool]) -> usize {
    let (mut prev, mut cur) = (usize::MAX, v);
    seen[v] = true;
    loop {
        let next = adj[cur].iter().copied().find(|&u| u != usize::MAX && u != prev);
        match next {
            Some(u) => {
                seen[u] = true;
                prev = cur;
                cur = u;
            }
            None => return cur,
        }
    }
}

/// How the greedy enumerates `N'` edges in `(cost, id)` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeStream {
    /// Sort every edge of `N'` up front.
    FullSort,
    /// Euclidean only: emit edges in length bands of growing radius,
    /// restricted to vertices that can still take an edge.
    Banded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStats {
    pub accepted: usize,
    /// Edges rejected because their color was already used.
    pub color_skips: usize,
    /// Edges whose color was inspected.
    pub revealed: usize,
    /// Accepted steps whose edge (in unit-square lengths) exceeded
    /// `lambda_k = C sqrt(n) / (n' - k)`.
    pub lambda_exceed: usize,
    pub cost: f64,
}

impl GreedyStats {
    pub fn lambda_exceed_fraction(&self) -> f64 {
        if self.accepted == 0 {
            0.0
        } else {
            self.lambda_exceed as f64 / self.accepted as f64
        }
    }
}

struct Greedy<'a> {
    instance: &'a Instance,
    coloring: &'a Coloring,
    paths: PathSystem,
    target: usize,
    stats: GreedyStats,
    c_param: f64,
    unit: f64,
    n_prime: usize,
}

impl Greedy<'_> {
    /// Offers edge `{a, b}`; returns true once the target is reached.
    fn offer(&mut self, a: usize, b: usize) -> bool {
        if !self.paths.can_join(a, b) {
            return false;
        }
        let e = EdgeId::new(a, b);
        let c = self.coloring.color(e);
        self.stats.revealed += 1;
        if self.paths.color_used(c) {
            self.stats.color_skips += 1;
            return false;
        }
        let k = self.stats.accepted;
        let len = self.instance.edge_cost(e);
        let lambda = self.c_param * (self.paths.n as f64).sqrt() / (self.n_prime - k) as f64;
        if len / self.unit > lambda {
            self.stats.lambda_exceed += 1;
        }
        self.paths.push(a, b, c);
        self.stats.accepted += 1;
        self.stats.cost += len;
        self.stats.accepted == self.target
    }
}

/// Greedy on `N'`: repeatedly take the cheapest edge that keeps all
/// components paths and repeats no color, until `k0` edges are accepted.
/// Each edge's color is inspected only when it is the cheapest candidate.
pub fn greedy_paths(
    instance: &Instance,
    coloring: &Coloring,
    n_prime: &[usize],
    k0: usize,
    c_param: f64,
    stream: EdgeStream,
) -> Result<(PathSystem, GreedyStats)> {
    let n = instance.n();
    let unit = instance.as_euclidean().map_or(1.0, |e| e.scale.max(f64::MIN_POSITIVE));
    let mut g = Greedy {
        instance,
        coloring,
        paths: PathSystem::new(n, coloring.q(), n_prime.to_vec()),
        target: k0,
        stats: GreedyStats {
            accepted: 0,
            color_skips: 0,
            revealed: 0,
            lambda_exceed: 0,
            cost: 0.0,
        },
        c_param,
        unit,
        n_prime: n_prime.len(),
    };
    if k0 == 0 {
        return Ok((g.paths, g.stats));
    }
    let done = match (stream, instance) {
        (EdgeStream::Banded, Instance::Euclidean(e)) => banded(&mut g, &e.points, e.scale),
        (EdgeStream::Banded, Instance::Uniform(_)) => {
            return Err(Error::Parameter("banded edge stream needs a Euclidean instance".into()))
        }
        (EdgeStream::FullSort, _) => full_sort(&mut g),
    };
    if !done {
        return Err(Error::GreedyStalled {
            accepted: g.stats.accepted,
            target: k0,
        });
    }
    Ok((g.paths, g.stats))
}

fn by_cost(list: &mut [(f64, usize, usize)]) {
    list.sort_unstable_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then_with(|| EdgeId::new(x.1, x.2).cmp(&EdgeId::new(y.1, y.2)))
    });
}

fn full_sort(g: &mut Greedy) -> bool {
    let verts = g.paths.members.clone();
    let mut all = Vec::with_capacity(verts.len() * verts.len().saturating_sub(1) / 2);
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            all.push((g.instance.cost(a, b), a.min(b), a.max(b)));
        }
    }
    by_cost(&mut all);
    for (_, a, b) in all {
        if g.offer(a, b) {
            return true;
        }
    }
    false
}

/// Emits the edges of length in `(lo, hi]` band by band. An edge skipped in
/// one band can never become acceptable later: colors, degrees and
/// components only ever fill up. So dropping saturated vertices between
/// bands keeps the global `(cost, id)` order exact.
fn banded(g: &mut Greedy, points: &[[f64; 2]], scale: f64) -> bool {
    let m = g.paths.members.len() as f64;
    let mut lo = -1.0f64;
    let mut hi = 2.0 * scale / m.max(1.0).sqrt();
    let diag = scale * std::f64::consts::SQRT_2;
    loop {
        let live: Vec<usize> = g
            .paths
            .members
            .iter()
            .copied()
            .filter(|&v| g.paths.degree[v] < 2)
            .collect();
        let grid = GridIndex::with_subset(points, live.iter().copied(), hi.max(1e-9 * scale.max(1.0)));
        let mut band = Vec::new();
        for &a in &live {
            grid.for_each_within(points[a], hi, |b, d| {
                if a < b && d > lo {
                    band.push((d, a, b));
                }
            });
        }
        by_cost(&mut band);
        for (_, a, b) in band {
            if g.offer(a, b) {
                return true;
            }
        }
        if hi > diag {
            return false;
        }
        lo = hi;
        hi *= std::f64::consts::SQRT_2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserve_arithmetic() {
        let (r, rest) = select_reserve(100, 1.0).unwrap();
        assert_eq!(r.len(), 10);
        assert_eq!(rest.len(), 90);
        assert!(select_reserve(10, 3.0).is_err());
        assert!(select_reserve(100, 0.0).is_err());
    }
}
