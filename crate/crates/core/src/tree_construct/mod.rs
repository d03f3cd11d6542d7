//! Rainbow spanning trees of Euclidean instances from a perfect matching
//! between points and colors.
//!
//! Every point except the topmost is matched to a color through one of its
//! upward edges of that color. Each such point then owns exactly one edge to
//! a point above it, so the matched edges form a spanning tree, and the
//! matching makes them rainbow. The bipartite graph is the union of
//!
//! * `E1`: the `K` shortest upward edges of every point, and
//! * `E2`: for every color, the `K` lowest-level edges of that color among
//!   `E_A`, which holds one upward edge per point and length level.

mod matching;

use serde::Serialize;

pub use matching::hopcroft_karp;

use crate::error::{Error, Result};
use crate::instance::{splitmix64, Coloring, EdgeId, EuclideanInstance, Instance, SeedSpec, Stream};
use crate::rainbow_exact::{is_rainbow_spanning_tree, RainbowTree};
use crate::spatial::GridIndex;

pub const DEFAULT_K: usize = 20;
pub const DEFAULT_B: f64 = 2.0;

/// Points sorted by `(y, index)`; the upward neighborhood of the point at
/// position `i` is every point at a later position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpwardOrder {
    pub order: Vec<usize>,
    pub rank: Vec<usize>,
}

impl UpwardOrder {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn is_above(&self, a: usize, b: usize) -> bool {
        self.rank[a] > self.rank[b]
    }

    /// Size of the upward neighborhood of vertex `v`.
    pub fn up_count(&self, v: usize) -> usize {
        self.len() - 1 - self.rank[v]
    }
}

pub fn build_upward_order(instance: &EuclideanInstance) -> UpwardOrder {
    let pts = &instance.points;
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| pts[a][1].total_cmp(&pts[b][1]).then(a.cmp(&b)));
    let mut rank = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    UpwardOrder { order, rank }
}

/// Edge `(lower, color)` of the bipartite graph, with the upward geometric
/// edge that carries the color.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaEdge {
    pub lower: usize,
    pub upper: usize,
    pub color: u32,
    pub edge: EdgeId,
    pub length: f64,
}

fn gamma_edge(inst: &EuclideanInstance, coloring: &Coloring, lower: usize, upper: usize) -> GammaEdge {
    let edge = EdgeId::new(lower, upper);
    GammaEdge {
        lower,
        upper,
        color: coloring.color(edge),
        edge,
        length: inst.dist(lower, upper),
    }
}

/// Grid cell side `B / sqrt(n)` in instance units.
fn grid_cell(inst: &EuclideanInstance, b: f64) -> f64 {
    let n = inst.n().max(1) as f64;
    (b * inst.scale.max(f64::MIN_POSITIVE) / n.sqrt()).max(1e-12)
}

/// `E1`: the `K` shortest upward edges of every point (all of them when
/// fewer than `K` exist).
pub fn build_e1(
    instance: &EuclideanInstance,
    order: &UpwardOrder,
    coloring: &Coloring,
    k: usize,
) -> Vec<GammaEdge> {
    let grid = GridIndex::new(&instance.points, grid_cell(instance, DEFAULT_B));
    let mut out = Vec::new();
    for &x in &order.order {
        if order.up_count(x) == 0 {
            continue;
        }
        let near = grid.k_nearest(instance.points[x], k, |u| order.is_above(u, x));
        out.extend(near.into_iter().map(|(_, u)| gamma_edge(instance, coloring, x, u)));
    }
    out
}

/// Upward edge of a given length level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelEdge {
    pub lower: usize,
    pub upper: usize,
    pub level: usize,
    pub edge: EdgeId,
    pub length: f64,
}

/// One upward edge per point and level (the shortest in the level's length
/// interval), plus the level statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelEdgeSet {
    /// Level count `L = ceil(ln(n)^2)`.
    pub levels: usize,
    /// Levels whose interval starts below the square's diagonal.
    pub reachable_levels: usize,
    pub edges: Vec<LevelEdge>,
    /// Points with an edge at every level `1..=L`.
    pub full_points: usize,
    /// Points with an edge at every reachable level.
    pub reachable_points: usize,
}

pub fn level_count(n: usize) -> usize {
    let l = (n.max(2) as f64).ln();
    (l * l).ceil() as usize
}

/// Level `j >= 1` of a length in unit-square units, if any:
/// `B j^2 / sqrt(n) <= len < B (j+1)^2 / sqrt(n)`.
pub fn level_of(len: f64, n: usize, b: f64) -> Option<usize> {
    let sn = (n as f64).sqrt();
    let lo = |j: usize| b * (j * j) as f64 / sn;
    let mut j = (len * sn / b).sqrt().floor() as usize;
    while j > 0 && lo(j) > len {
        j -= 1;
    }
    while lo(j + 1) <= len {
        j += 1;
    }
    (j >= 1).then_some(j)
}

/// Builds `E_A` and the `E2` edges: for each color the `K` lowest-level
/// `E_A` edges of that color, with a random order inside each level drawn
/// independently per color from the tie-break stream.
pub fn build_ea_and_e2(
    instance: &EuclideanInstance,
    order: &UpwardOrder,
    coloring: &Coloring,
    k: usize,
    b: f64,
    seed: SeedSpec,
) -> (LevelEdgeSet, Vec<GammaEdge>) {
    let n = instance.n();
    let levels = level_count(n);
    let s = instance.scale.max(f64::MIN_POSITIVE);
    let sn = (n.max(1) as f64).sqrt();
    let reachable_levels = (1..=levels)
        .take_while(|&j| b * (j * j) as f64 / sn <= std::f64::consts::SQRT_2)
        .count();

    let mut edges = Vec::new();
    let mut full_points = 0;
    let mut reachable_points = 0;
    let mut best: Vec<Option<(f64, usize)>> = vec![None; levels + 1];
    for (i, &x) in order.order.iter().enumerate() {
        best.fill(None);
        for &y in &order.order[i + 1..] {
            let d = instance.dist(x, y);
            if let Some(j) = level_of(d / s, n, b).filter(|&j| j <= levels) {
                if best[j].is_none_or(|(bd, by)| (d, y) < (bd, by)) {
                    best[j] = Some((d, y));
                }
            }
        }
        let have = best[1..].iter().filter(|e| e.is_some()).count();
        full_points += usize::from(have == levels);
        reachable_points +=
            usize::from(reachable_levels > 0 && best[1..=reachable_levels].iter().all(Option::is_some));
        for (j, e) in best.iter().enumerate() {
            if let Some((d, y)) = *e {
                edges.push(LevelEdge {
                    lower: x,
                    upper: y,
                    level: j,
                    edge: EdgeId::new(x, y),
                    length: d,
                });
            }
        }
    }

    let key = seed.key(Stream::TieBreak);
    let mut ranked: Vec<(u32, usize, u64, usize)> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let c = coloring.color(e.edge);
            let tie = splitmix64(key ^ splitmix64(((c as u64) << 32) ^ e.level as u64) ^ e.edge.0 as u64);
            (c, e.level, tie, i)
        })
        .collect();
    ranked.sort_unstable();
    let mut e2 = Vec::new();
    let mut start = 0;
    while start < ranked.len() {
        let c = ranked[start].0;
        let end = start + ranked[start..].iter().take_while(|r| r.0 == c).count();
        for r in &ranked[start..end.min(start + k)] {
            let e = &edges[r.3];
            e2.push(gamma_edge(instance, coloring, e.lower, e.upper));
        }
        start = end;
    }
    (
        LevelEdgeSet {
            levels,
            reachable_levels,
            edges,
            full_points,
            reachable_points,
        },
        e2,
    )
}

/// Bipartite multigraph between the points below the top and the colors.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaGraph {
    /// Left side: every vertex except the topmost, in upward order.
    pub left: Vec<usize>,
    /// Right side: colors `0..q`.
    pub colors: usize,
    pub edges: Vec<GammaEdge>,
    pub e1_count: usize,
}

impl GammaGraph {
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }
}

/// Maximum matching of `gamma`; a perfect one (saturating every left
/// vertex) yields the rainbow spanning tree of the matched edges.
pub fn match_and_extract(
    instance: &Instance,
    coloring: &Coloring,
    gamma: &GammaGraph,
) -> Result<RainbowTree> {
    let (tree, matched) = match_edges(gamma);
    let needed = gamma.left.len();
    if matched < needed {
        return Err(Error::MatchingFailed { matched, needed });
    }
    let edges: Vec<EdgeId> = tree.into_iter().map(|e| e.edge).collect();
    if !is_rainbow_spanning_tree(instance.n(), coloring, &edges) {
        return Err(Error::Contract("matched edges are not a rainbow spanning tree".into()));
    }
    Ok(RainbowTree::from_edges(instance, coloring, edges))
}

fn match_edges(gamma: &GammaGraph) -> (Vec<GammaEdge>, usize) {
    let n_left = gamma.left.len();
    let mut slot = std::collections::HashMap::with_capacity(n_left);
    for (i, &v) in gamma.left.iter().enumerate() {
        slot.insert(v, i);
    }
    let mut arcs: Vec<Vec<usize>> = vec![Vec::new(); n_left];
    for (i, e) in gamma.edges.iter().enumerate() {
        arcs[slot[&e.lower]].push(i);
    }
    // cheapest arcs first
    for list in &mut arcs {
        list.sort_by(|&a, &b| {
            let (ea, eb) = (&gamma.edges[a], &gamma.edges[b]);
            ea.length.total_cmp(&eb.length).then(a.cmp(&b))
        });
    }
    let adj: Vec<Vec<usize>> = arcs
        .iter()
        .map(|l| l.iter().map(|&i| gamma.edges[i].color as usize).collect())
        .collect();
    let mate = hopcroft_karp(&adj, gamma.colors);
    let mut out = Vec::new();
    for (x, k) in mate.iter().enumerate() {
        if let Some(k) = k {
            out.push(gamma.edges[arcs[x][*k]]);
        }
    }
    let matched = out.len();
    (out, matched)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub n: usize,
    pub q: usize,
    pub k: usize,
    pub b: f64,
    /// `q == n - 1`, the setting of the construction's analysis.
    pub standard_regime: bool,
    pub levels: usize,
    pub reachable_levels: usize,
    pub e1_edges: usize,
    pub ea_edges: usize,
    pub e2_edges: usize,
    /// Points with an `E_A` edge at every level.
    pub a_size: usize,
    /// Points with an `E_A` edge at every reachable level.
    pub a_reachable: usize,
    /// Longest `E2` edge in unit-square units.
    pub max_e2_length: f64,
    pub gamma_weight: f64,
    pub matching_size: usize,
    pub needed: usize,
    pub tree_cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub tree: Option<RainbowTree>,
    pub diagnostics: Diagnostics,
}

impl Construction {
    pub fn into_result(self) -> Result<(RainbowTree, Diagnostics)> {
        match self.tree {
            Some(t) => Ok((t, self.diagnostics)),
            None => Err(Error::MatchingFailed {
                matched: self.diagnostics.matching_size,
                needed: self.diagnostics.needed,
            }),
        }
    }
}

/// The full pipeline on a Euclidean instance. A failed matching is reported
/// through `tree == None` with the shortfall in the diagnostics.
pub fn construct_tree(
    instance: &Instance,
    coloring: &Coloring,
    k: usize,
    b: f64,
) -> Result<Construction> {
    let Some(e) = instance.as_euclidean() else {
        return Err(Error::Parameter("tree construction needs a Euclidean instance".into()));
    };
    let n = e.n();
    if n < 2 {
        return Err(Error::Size {
            what: "tree construction",
            n,
            min: 2,
            max: usize::MAX,
        });
    }
    if k == 0 || !(b > 0.0 && b.is_finite()) {
        return Err(Error::Parameter(format!("need K >= 1 and B > 0, got K = {k}, B = {b}")));
    }
    coloring.check_covers(n)?;
    let q = coloring.q();
    if q != n - 1 {
        log::warn!("q = {q} differs from n - 1 = {}; outside the analysed regime", n - 1);
    }

    let order = build_upward_order(e);
    let e1 = build_e1(e, &order, coloring, k);
    let (ea, e2) = build_ea_and_e2(e, &order, coloring, k, b, SeedSpec::new(e.seed));
    let max_e2_length = e2.iter().map(|g| g.length / e.scale).fold(0.0, f64::max);
    let e1_count = e1.len();
    let e2_count = e2.len();
    let mut edges = e1;
    edges.extend(e2);
    let gamma = GammaGraph {
        left: order.order[..n - 1].to_vec(),
        colors: q,
        edges,
        e1_count,
    };
    let (matched_edges, matched) = match_edges(&gamma);
    let needed = n - 1;
    let tree = if matched == needed {
        let ids: Vec<EdgeId> = matched_edges.iter().map(|g| g.edge).collect();
        if !is_rainbow_spanning_tree(n, coloring, &ids) {
            return Err(Error::Contract("matched edges are not a rainbow spanning tree".into()));
        }
        Some(RainbowTree::from_edges(instance, coloring, ids))
    } else {
        None
    };
    let diagnostics = Diagnostics {
        n,
        q,
        k,
        b,
        standard_regime: q == n - 1,
        levels: ea.levels,
        reachable_levels: ea.reachable_levels,
        e1_edges: e1_count,
        ea_edges: ea.edges.len(),
        e2_edges: e2_count,
        a_size: ea.full_points,
        a_reachable: ea.reachable_points,
        max_e2_length,
        gamma_weight: gamma.total_weight(),
        matching_size: matched,
        needed,
        tree_cost: tree.as_ref().map(|t| t.total_cost),
    };
    Ok(Construction { tree, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{color_edges, gen_euclidean};

    #[test]
    fn upward_order_ties_by_index() {
        let e = EuclideanInstance::new(vec![[0.5, 0.3], [0.1, 0.2], [0.9, 0.2], [0.0, 0.9]], 1.0);
        let o = build_upward_order(&e);
        assert_eq!(o.order, vec![1, 2, 0, 3]);
        for (i, &v) in o.order.iter().enumerate() {
            assert_eq!(o.up_count(v), 3 - i);
        }
    }

    #[test]
    fn level_intervals() {
        let n = 100;
        // B j^2 / sqrt(n) with B = 2: 0.2, 0.8, 1.8
        assert_eq!(level_of(0.19, n, 2.0), None);
        assert_eq!(level_of(0.2, n, 2.0), Some(1));
        assert_eq!(level_of(0.79, n, 2.0), Some(1));
        assert_eq!(level_of(0.8, n, 2.0), Some(2));
        assert_eq!(level_count(100), 22);
    }

    #[test]
    fn two_points() {
        let e = gen_euclidean(2, 1.0, SeedSpec::new(3));
        let inst = Instance::from(e);
        let col = Coloring::new(1, vec![0]).unwrap();
        let c = construct_tree(&inst, &col, 1, 2.0).unwrap();
        assert_eq!(c.tree.unwrap().edges, vec![EdgeId(0)]);
    }

    #[test]
    fn single_color_leaves_deficiency() {
        let n = 12;
        let e = gen_euclidean(n, 1.0, SeedSpec::new(8));
        let inst = Instance::from(e);
        let col = Coloring::new(n - 1, vec![0; n * (n - 1) / 2]).unwrap();
        let c = construct_tree(&inst, &col, 3, 2.0).unwrap();
        assert!(c.tree.is_none());
        assert_eq!(c.diagnostics.needed - c.diagnostics.matching_size, n - 2);
        assert!(matches!(
            c.into_result(),
            Err(Error::MatchingFailed { matched: 1, needed: 11 })
        ));
    }

    #[test]
    fn random_instance_gives_valid_tree() {
        let n = 300;
        let s = SeedSpec::new(11);
        let inst = Instance::from(gen_euclidean(n, 1.0, s));
        let col = color_edges(inst.edge_count(), n - 1, s).unwrap();
        let c = construct_tree(&inst, &col, DEFAULT_K, DEFAULT_B).unwrap();
        let t = c.tree.expect("matching should be perfect");
        assert!(t.is_valid(n, &col));
    }
}
