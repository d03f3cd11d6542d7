//! Exact minimum-cost rainbow spanning trees, rainbow feasibility, and
//! brute-force oracles for tiny instances.

mod intersection;
mod oracle;

use std::collections::HashMap;

use intersection::Engine;
pub use oracle::{
    brute_rainbow_degree_bounded_mst, brute_rainbow_perfect_matching,
    brute_rainbow_spanning_tree, brute_rainbow_tsp, Matching, BRUTE_MATCHING_MAX_N,
    BRUTE_TREE_MAX_N, BRUTE_TSP_MAX_N,
};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::instance::{edge_count, Coloring, EdgeId, Instance};

/// Spanning tree whose edge colors are pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct RainbowTree {
    /// Sorted ascending.
    pub edges: Vec<EdgeId>,
    /// Sorted ascending, one per edge.
    pub colors_used: Vec<u32>,
    pub total_cost: f64,
}

impl RainbowTree {
    pub fn from_edges(instance: &Instance, coloring: &Coloring, mut edges: Vec<EdgeId>) -> Self {
        edges.sort_unstable();
        let mut colors_used: Vec<u32> = edges.iter().map(|&e| coloring.color(e)).collect();
        colors_used.sort_unstable();
        let total_cost = instance.total_cost(&edges);
        Self {
            edges,
            colors_used,
            total_cost,
        }
    }

    /// Spanning, acyclic and rainbow on `n` vertices.
    pub fn is_valid(&self, n: usize, coloring: &Coloring) -> bool {
        is_rainbow_spanning_tree(n, coloring, &self.edges)
    }
}

pub fn is_rainbow_spanning_tree(n: usize, coloring: &Coloring, edges: &[EdgeId]) -> bool {
    if edges.len() + 1 != n.max(1) {
        return false;
    }
    let mut dsu = DisjointSets::new(n);
    let mut colors = std::collections::HashSet::new();
    edges.iter().all(|&e| {
        let (a, b) = e.endpoints();
        b < n && dsu.union(a, b) && colors.insert(coloring.color(e))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum RainbowMst {
    Tree(RainbowTree),
    /// No rainbow spanning tree; `max_rank` is the size of a largest rainbow
    /// forest.
    Infeasible { max_rank: usize },
}

impl RainbowMst {
    pub fn tree(&self) -> Option<&RainbowTree> {
        match self {
            RainbowMst::Tree(t) => Some(t),
            RainbowMst::Infeasible { .. } => None,
        }
    }

    pub fn cost(&self) -> Option<f64> {
        self.tree().map(|t| t.total_cost)
    }
}

/// Work done by [`min_rainbow_spanning_tree_with_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    /// Candidate-set solves, including the final one.
    pub rounds: usize,
    /// Size of the final candidate set.
    pub candidates: usize,
}

/// Integer weights keep the exchange-graph arithmetic exact.
const WEIGHT_BITS: i32 = 40;

fn quantizer(costs: &[f64]) -> impl Fn(f64) -> i64 {
    let max = costs.iter().copied().fold(0.0f64, f64::max);
    let factor = if max > 0.0 {
        (WEIGHT_BITS as f64).exp2() / max
    } else {
        0.0
    };
    move |c| (c * factor).round() as i64
}

/// Dense renumbering of the colors that occur among `ids`.
fn dense_colors(coloring: &Coloring, ids: &[usize]) -> (Vec<u32>, HashMap<u32, u32>) {
    let mut map = HashMap::new();
    let dense = ids
        .iter()
        .map(|&e| {
            let next = map.len() as u32;
            *map.entry(coloring.colors()[e]).or_insert(next)
        })
        .collect();
    (dense, map)
}

fn engine_for(n: usize, ids: &[usize], coloring: &Coloring, weight: Vec<i64>) -> (Engine, HashMap<u32, u32>) {
    let ends = ids
        .iter()
        .map(|&e| {
            let (a, b) = EdgeId(e).endpoints();
            [a as u32, b as u32]
        })
        .collect();
    let (colors, map) = dense_colors(coloring, ids);
    let palette = map.len();
    (Engine::new(n, ends, colors, weight, palette), map)
}

fn check_input(instance: &Instance, coloring: &Coloring) -> Result<usize> {
    let n = instance.n();
    if n == 0 {
        return Err(Error::EmptyInput("rainbow spanning tree needs n >= 1"));
    }
    coloring.check_covers(n)?;
    Ok(n)
}

fn distinct_colors(coloring: &Coloring) -> usize {
    let mut c = coloring.colors().to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Minimum-cost rainbow spanning tree by weighted matroid intersection.
pub fn min_rainbow_spanning_tree(instance: &Instance, coloring: &Coloring) -> Result<RainbowMst> {
    min_rainbow_spanning_tree_with_stats(instance, coloring).map(|(r, _)| r)
}

/// As [`min_rainbow_spanning_tree`], also reporting the candidate rounds.
///
/// The intersection is solved on the `M` cheapest edges. The result is
/// accepted once exchange-graph potentials certify that no edge outside the
/// candidate set can improve it; otherwise `M` grows and the solve repeats.
pub fn min_rainbow_spanning_tree_with_stats(
    instance: &Instance,
    coloring: &Coloring,
) -> Result<(RainbowMst, SolveStats)> {
    let n = check_input(instance, coloring)?;
    let mut stats = SolveStats::default();
    if n == 1 {
        return Ok((RainbowMst::Tree(RainbowTree::from_edges(instance, coloring, vec![])), stats));
    }
    if distinct_colors(coloring) < n - 1 {
        let f = rainbow_feasible(coloring, n)?;
        return Ok((RainbowMst::Infeasible { max_rank: f.max_rank }, stats));
    }

    let costs = instance.all_edge_costs();
    let total = costs.len();
    let quant = quantizer(&costs);
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_unstable_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));

    let nf = n as f64;
    let mut m = ((nf * (3.0 + 2.0 * nf.ln())) as usize).max(4 * n).min(total);
    loop {
        stats.rounds += 1;
        stats.candidates = m;
        let ids = &order[..m];
        let weight = ids.iter().map(|&e| quant(costs[e])).collect();
        let (mut engine, color_map) = engine_for(n, ids, coloring, weight);
        engine.run(n - 1)?;
        if engine.len() < n - 1 {
            if m == total {
                return Ok((RainbowMst::Infeasible { max_rank: engine.len() }, stats));
            }
            m = (2 * m).min(total);
            continue;
        }
        let tree: Vec<EdgeId> = engine.members().iter().map(|&x| EdgeId(ids[x as usize])).collect();
        if m == total {
            return Ok((RainbowMst::Tree(RainbowTree::from_edges(instance, coloring, tree)), stats));
        }

        // certificate: potentials of the final exchange graph must extend
        // to every edge outside the candidate set
        let p = engine.potentials()?;
        let members = engine.members().to_vec();
        let pmin = members.iter().map(|&y| p[y as usize]).min().unwrap_or(0);
        let free_bound = members
            .iter()
            .map(|&y| p[y as usize] + engine.weight(y))
            .max()
            .unwrap_or(i64::MIN);
        let mut worst_violator = None;
        for (k, &e) in order.iter().enumerate().skip(m) {
            let w = quant(costs[e]);
            if w.saturating_add(pmin) >= free_bound {
                // costs are sorted, so every later edge passes as well
                break;
            }
            let need = match color_map.get(&coloring.colors()[e]).and_then(|&c| engine.owner_of(c)) {
                Some(y) => p[y as usize] + engine.weight(y),
                None => free_bound,
            };
            let (a, b) = EdgeId(e).endpoints();
            if w + engine.path_min(&p, a as u32, b as u32) < need {
                worst_violator = Some(k);
            }
        }
        match worst_violator {
            None => {
                return Ok((RainbowMst::Tree(RainbowTree::from_edges(instance, coloring, tree)), stats))
            }
            Some(k) => m = (2 * m).max(k + 1).min(total),
        }
    }
}

/// Outcome of the unweighted intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    /// Size of a largest rainbow forest.
    pub max_rank: usize,
}

/// Whether `K_n` under `coloring` has a rainbow spanning tree.
pub fn rainbow_feasible(coloring: &Coloring, n: usize) -> Result<Feasibility> {
    coloring.check_covers(n)?;
    if n <= 1 {
        return Ok(Feasibility {
            feasible: true,
            max_rank: 0,
        });
    }
    let ids: Vec<usize> = (0..edge_count(n)).collect();
    let (mut engine, _) = engine_for(n, &ids, coloring, vec![0; ids.len()]);
    engine.seed_greedy();
    engine.run(n - 1)?;
    Ok(Feasibility {
        feasible: engine.len() == n - 1,
        max_rank: engine.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{color_edges, gen_uniform_costs, SeedSpec, UniformCostInstance};

    fn uniform(n: usize, seed: u64) -> Instance {
        Instance::from(gen_uniform_costs(n, SeedSpec::new(seed)))
    }

    #[test]
    fn two_vertices() {
        let inst = uniform(2, 1);
        let col = Coloring::new(5, vec![3]).unwrap();
        let t = min_rainbow_spanning_tree(&inst, &col).unwrap();
        assert_eq!(t.tree().unwrap().edges, vec![EdgeId(0)]);
    }

    #[test]
    fn monochromatic_triangle_is_infeasible() {
        let inst = uniform(3, 2);
        let col = Coloring::new(1, vec![0; 3]).unwrap();
        assert_eq!(
            min_rainbow_spanning_tree(&inst, &col).unwrap(),
            RainbowMst::Infeasible { max_rank: 1 }
        );
        assert_eq!(rainbow_feasible(&col, 3).unwrap().max_rank, 1);
    }

    #[test]
    fn rainbow_triangle_is_feasible() {
        let col = Coloring::new(3, vec![0, 1, 2]).unwrap();
        assert!(rainbow_feasible(&col, 3).unwrap().feasible);
    }

    #[test]
    fn wrong_coloring_length_is_a_contract_error() {
        let inst = uniform(4, 0);
        let col = Coloring::new(3, vec![0, 1, 2]).unwrap();
        assert!(matches!(min_rainbow_spanning_tree(&inst, &col), Err(Error::Contract(_))));
    }

    #[test]
    fn color_constraint_forces_a_detour() {
        // MST {01,12,23} has colors 0,0,1; the cheapest fix swaps 12 for 13
        let costs = vec![0.1, 0.9, 0.2, 0.8, 0.7, 0.3];
        let inst = Instance::from(UniformCostInstance::from_edge_costs(4, costs).unwrap());
        let mut colors = vec![2u32; 6];
        colors[EdgeId::new(0, 1).0] = 0;
        colors[EdgeId::new(1, 2).0] = 0;
        colors[EdgeId::new(2, 3).0] = 1;
        colors[EdgeId::new(1, 3).0] = 3;
        let col = Coloring::new(4, colors).unwrap();
        let t = min_rainbow_spanning_tree(&inst, &col).unwrap();
        let t = t.tree().unwrap();
        assert!(t.is_valid(4, &col));
        assert!((t.total_cost - 1.1).abs() < 1e-12, "{t:?}");
    }

    #[test]
    fn candidate_growth_reaches_certified_optimum() {
        // large n forces the restricted candidate set and the certificate
        for seed in 0..4 {
            let n = 120;
            let inst = uniform(n, seed);
            let col = color_edges(inst.edge_count(), n - 1, SeedSpec::new(seed)).unwrap();
            let (r, stats) = min_rainbow_spanning_tree_with_stats(&inst, &col).unwrap();
            assert!(stats.candidates < inst.edge_count());
            let t = r.tree().expect("q = n-1 is feasible w.h.p.");
            assert!(t.is_valid(n, &col));

            // same answer from the full ground set
            let ids: Vec<usize> = (0..inst.edge_count()).collect();
            let costs = inst.all_edge_costs();
            let quant = quantizer(&costs);
            let weight = ids.iter().map(|&e| quant(costs[e])).collect();
            let (mut engine, _) = engine_for(n, &ids, &col, weight);
            engine.run(n - 1).unwrap();
            let full: Vec<EdgeId> = engine.members().iter().map(|&x| EdgeId(x as usize)).collect();
            let full = RainbowTree::from_edges(&inst, &col, full);
            assert_eq!(full.total_cost, t.total_cost);
        }
    }
}
