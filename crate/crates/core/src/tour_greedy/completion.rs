//! The bipartite completion graph between path ends and the reserve.

use std::collections::HashMap;

use super::paths::PathSystem;
use crate::instance::{Coloring, EdgeId, Instance};

/// An edge between a port (path end or isolated vertex) and a reserve
/// vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletionEdge {
    /// Index into [`CompletionGraph::ports`].
    pub port: usize,
    /// Index into [`CompletionGraph::reserve`].
    pub slot: usize,
    pub edge: EdgeId,
    pub color: u32,
    pub cost: f64,
}

/// `X` holds one node per nontrivial path (two ports, entered at one and
/// left at the other) and one per isolated vertex (a single port used both
/// ways); `Y` is the reserve.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionGraph {
    pub reserve: Vec<usize>,
    /// Distinct port vertices.
    pub ports: Vec<usize>,
    /// Per `X` node, its two port indices (equal for an isolated vertex).
    pub nodes: Vec<[usize; 2]>,
    pub paths: usize,
    /// Every port-reserve edge, port-major.
    pub edges: Vec<CompletionEdge>,
}

impl CompletionGraph {
    pub fn r(&self) -> usize {
        self.reserve.len()
    }

    pub fn edge(&self, port: usize, slot: usize) -> &CompletionEdge {
        &self.edges[port * self.reserve.len() + slot]
    }
}

/// Colors of the completion edges split by their use in the paths.
#[derive(Debug, Clone, PartialEq)]
pub struct FreshColorFilter {
    pub q: usize,
    /// `|C1|`, colors already on the paths.
    pub used_in_paths: usize,
    /// Edges with a color outside `C1` (the graph `Gamma_1`).
    pub gamma1: Vec<usize>,
    /// Edges whose fresh color occurs exactly once (`Gamma_2`).
    pub gamma2: Vec<usize>,
    /// Number of fresh colors occurring exactly once (`|C_2|`).
    pub c2: usize,
    /// Fresh-color usage count over `Gamma_1`, per color that occurs.
    pub usage: HashMap<u32, usize>,
}

impl FreshColorFilter {
    /// `q' = q - |C1|`.
    pub fn fresh_palette(&self) -> usize {
        self.q - self.used_in_paths
    }

    /// Mean number of `Gamma_1` edges per fresh color.
    pub fn mean_usage(&self) -> f64 {
        self.gamma1.len() as f64 / self.fresh_palette().max(1) as f64
    }

    /// The bound `2 r^2 / q'` on the mean usage.
    pub fn usage_bound(&self, r: usize) -> f64 {
        2.0 * (r * r) as f64 / self.fresh_palette().max(1) as f64
    }

    /// Fresh edges whose color occurs at most twice, one edge per color:
    /// the cheaper one, ties to the lower edge id.
    pub fn at_most_twice_one_each(&self, graph: &CompletionGraph) -> Vec<usize> {
        let mut pick: HashMap<u32, usize> = HashMap::new();
        for &i in &self.gamma1 {
            let e = &graph.edges[i];
            if self.usage[&e.color] > 2 {
                continue;
            }
            pick.entry(e.color)
                .and_modify(|j| {
                    let f = &graph.edges[*j];
                    if (e.cost, e.edge) < (f.cost, f.edge) {
                        *j = i;
                    }
                })
                .or_insert(i);
        }
        let mut out: Vec<usize> = pick.into_values().collect();
        out.sort_unstable();
        out
    }
}

pub fn build_completion(
    paths: &PathSystem,
    reserve: &[usize],
    instance: &Instance,
    coloring: &Coloring,
) -> (CompletionGraph, FreshColorFilter) {
    let (ends, isolated) = paths.ends();
    let mut ports = Vec::new();
    let mut nodes = Vec::new();
    for [a, b] in &ends {
        nodes.push([ports.len(), ports.len() + 1]);
        ports.push(*a);
        ports.push(*b);
    }
    for &v in &isolated {
        nodes.push([ports.len(), ports.len()]);
        ports.push(v);
    }
    let mut edges = Vec::with_capacity(ports.len() * reserve.len());
    for (port, &v) in ports.iter().enumerate() {
        for (slot, &y) in reserve.iter().enumerate() {
            let edge = EdgeId::new(v, y);
            edges.push(CompletionEdge {
                port,
                slot,
                edge,
                color: coloring.color(edge),
                cost: instance.edge_cost(edge),
            });
        }
    }
    let graph = CompletionGraph {
        reserve: reserve.to_vec(),
        ports,
        nodes,
        paths: ends.len(),
        edges,
    };

    let used_in_paths = paths.used_colors.iter().filter(|&&u| u).count();
    let gamma1: Vec<usize> = (0..graph.edges.len())
        .filter(|&i| !paths.color_used(graph.edges[i].color))
        .collect();
    let mut usage: HashMap<u32, usize> = HashMap::new();
    for &i in &gamma1 {
        *usage.entry(graph.edges[i].color).or_default() += 1;
    }
    let gamma2: Vec<usize> = gamma1
        .iter()
        .copied()
        .filter(|&i| usage[&graph.edges[i].color] == 1)
        .collect();
    let c2 = usage.values().filter(|&&u| u == 1).count();
    let filter = FreshColorFilter {
        q: coloring.q(),
        used_in_paths,
        gamma1,
        gamma2,
        c2,
        usage,
    };
    (graph, filter)
}
