//! Alternating Hamilton cycles in the completion graph.
//!
//! A cycle is a sequence of units alternating between `X` nodes and reserve
//! slots. A path node is entered at one port and left at the other, so each
//! `X` unit carries an orientation. The search is randomized rotation and
//! extension from a reserve slot, with an exhaustive fallback on small
//! graphs. Colors are tracked on every move, so the result is rainbow even
//! when the edge set repeats colors.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::completion::CompletionGraph;

const NONE: u32 = u32::MAX;

/// Effort for one completion attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HamiltonBudget {
    pub restarts: usize,
    /// Rotation and extension steps per restart.
    pub steps: usize,
    /// Search exhaustively, up to `restarts * steps` states, when `r` is at
    /// most this.
    pub exhaustive_max_r: usize,
}

impl HamiltonBudget {
    /// 50 restarts of `10 n` steps each.
    pub fn for_n(n: usize) -> Self {
        Self {
            restarts: 50,
            steps: 10 * n.max(1),
            exhaustive_max_r: 10,
        }
    }
}

/// A found cycle: completion edge indices in cycle order.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionCycle {
    pub edges: Vec<usize>,
    /// Restart index that succeeded; `None` when the exhaustive search did.
    pub restart: Option<usize>,
}

/// The search graph restricted to one edge subset.
struct Search<'a> {
    g: &'a CompletionGraph,
    nx: usize,
    ny: usize,
    /// `ports x ny` lookup of the allowed completion edge, or `NONE`.
    allowed: Vec<u32>,
    port_adj: Vec<Vec<u32>>,
    slot_adj: Vec<Vec<u32>>,
    port_node: Vec<usize>,
    palette: usize,
}

/// Mutable state of one restart.
struct State {
    /// Unit ids: `X` nodes are `0..nx`, slots are `nx..nx+ny`.
    units: Vec<usize>,
    /// `links[j]` joins `units[j - 1]` and `units[j]`; `links[0]` is unused.
    links: Vec<usize>,
    pos: Vec<usize>,
    flip: Vec<bool>,
    color_count: Vec<u16>,
}

impl<'a> Search<'a> {
    fn new(g: &'a CompletionGraph, subset: &[usize], palette: usize) -> Self {
        let ny = g.r();
        let mut allowed = vec![NONE; g.ports.len() * ny];
        let mut port_adj = vec![Vec::new(); g.ports.len()];
        let mut slot_adj = vec![Vec::new(); ny];
        for &i in subset {
            let e = &g.edges[i];
            allowed[e.port * ny + e.slot] = i as u32;
            port_adj[e.port].push(e.slot as u32);
            slot_adj[e.slot].push(e.port as u32);
        }
        let mut port_node = vec![0; g.ports.len()];
        for (x, ports) in g.nodes.iter().enumerate() {
            port_node[ports[0]] = x;
            port_node[ports[1]] = x;
        }
        Self {
            g,
            nx: g.nodes.len(),
            ny,
            allowed,
            port_adj,
            slot_adj,
            port_node,
            palette,
        }
    }

    fn edge(&self, port: usize, slot: usize) -> Option<usize> {
        let i = self.allowed[port * self.ny + slot];
        (i != NONE).then_some(i as usize)
    }

    fn out_port(&self, st: &State, x: usize) -> usize {
        self.g.nodes[x][1 - st.flip[x] as usize]
    }

    fn color(&self, e: usize) -> usize {
        self.g.edges[e].color as usize
    }

    fn cost(&self, e: usize) -> f64 {
        self.g.edges[e].cost
    }

    fn fresh_state(&self) -> State {
        State {
            units: Vec::with_capacity(self.nx + self.ny),
            links: Vec::with_capacity(self.nx + self.ny),
            pos: vec![usize::MAX; self.nx + self.ny],
            flip: vec![false; self.nx],
            color_count: vec![0; self.palette],
        }
    }

    /// Orients `x` so that it is entered at `port`.
    fn enter(&self, st: &mut State, x: usize, port: usize) {
        st.flip[x] = self.g.nodes[x][1] == port && self.g.nodes[x][0] != port;
    }

    fn push(&self, st: &mut State, unit: usize, link: usize) {
        st.pos[unit] = st.units.len();
        st.units.push(unit);
        st.links.push(link);
        st.color_count[self.color(link)] += 1;
    }

    /// Extensions from the current end: `(unit, entry port or NONE, edge)`.
    fn extensions(&self, st: &State, out: &mut Vec<(usize, usize, usize)>) {
        out.clear();
        let end = *st.units.last().unwrap();
        if end >= self.nx {
            let slot = end - self.nx;
            for &p in &self.slot_adj[slot] {
                let p = p as usize;
                let x = self.port_node[p];
                let e = self.edge(p, slot).unwrap();
                if st.pos[x] == usize::MAX && st.color_count[self.color(e)] == 0 {
                    out.push((x, p, e));
                }
            }
        } else {
            let p = self.out_port(st, end);
            for &s in &self.port_adj[p] {
                let s = s as usize;
                let e = self.edge(p, s).unwrap();
                if st.pos[self.nx + s] == usize::MAX && st.color_count[self.color(e)] == 0 {
                    out.push((self.nx + s, usize::MAX, e));
                }
            }
        }
    }

    /// Rotations from the current end: `(pivot position, new edge)`.
    fn rotations(&self, st: &State, out: &mut Vec<(usize, usize)>) {
        out.clear();
        let k = st.units.len() - 1;
        let end = st.units[k];
        let mut consider = |i: usize, e: usize| {
            if i + 2 <= k {
                let c = self.color(e);
                if st.color_count[c] == 0 || c == self.color(st.links[i + 1]) {
                    out.push((i, e));
                }
            }
        };
        if end >= self.nx {
            let slot = end - self.nx;
            for &p in &self.slot_adj[slot] {
                let p = p as usize;
                let x = self.port_node[p];
                if st.pos[x] != usize::MAX && self.out_port(st, x) == p {
                    consider(st.pos[x], self.edge(p, slot).unwrap());
                }
            }
        } else {
            let p = self.out_port(st, end);
            for &s in &self.port_adj[p] {
                let s = s as usize;
                let u = self.nx + s;
                if st.pos[u] != usize::MAX {
                    consider(st.pos[u], self.edge(p, s).unwrap());
                }
            }
        }
    }

    /// Replaces the link after position `i` by `e` and reverses the units
    /// after `i`.
    fn rotate(&self, st: &mut State, i: usize, e: usize) {
        let k = st.units.len() - 1;
        st.color_count[self.color(st.links[i + 1])] -= 1;
        st.color_count[self.color(e)] += 1;
        st.links[i + 1] = e;
        st.units[i + 1..=k].reverse();
        st.links[i + 2..=k].reverse();
        for j in i + 1..=k {
            let u = st.units[j];
            st.pos[u] = j;
            if u < self.nx {
                st.flip[u] = !st.flip[u];
            }
        }
    }

    /// Closing edge from the last unit back to the first slot, if allowed.
    fn closing(&self, st: &State) -> Option<usize> {
        let last = *st.units.last()?;
        if last >= self.nx || st.units.len() != self.nx + self.ny {
            return None;
        }
        let e = self.edge(self.out_port(st, last), st.units[0] - self.nx)?;
        (st.color_count[self.color(e)] == 0).then_some(e)
    }

    fn finish(&self, st: &State, close: usize) -> Vec<usize> {
        let mut edges: Vec<usize> = st.links[1..].to_vec();
        edges.push(close);
        edges
    }

    fn restart(&self, rng: &mut ChaCha20Rng, steps: usize) -> Option<Vec<usize>> {
        let mut st = self.fresh_state();
        let start = self.nx + rng.gen_range(0..self.ny);
        st.pos[start] = 0;
        st.units.push(start);
        st.links.push(usize::MAX);
        let mut ext = Vec::new();
        let mut rot = Vec::new();
        for _ in 0..steps {
            if let Some(e) = self.closing(&st) {
                return Some(self.finish(&st, e));
            }
            if st.units.len() < self.nx + self.ny {
                self.extensions(&st, &mut ext);
                if !ext.is_empty() {
                    let a = ext[rng.gen_range(0..ext.len())];
                    let b = ext[rng.gen_range(0..ext.len())];
                    let (unit, port, e) = if self.cost(b.2) < self.cost(a.2) { b } else { a };
                    if unit < self.nx {
                        self.enter(&mut st, unit, port);
                    }
                    self.push(&mut st, unit, e);
                    continue;
                }
            }
            self.rotations(&st, &mut rot);
            let &(i, e) = rot.choose(rng)?;
            self.rotate(&mut st, i, e);
        }
        None
    }

    /// Depth-first search over all alternating cycles through slot 0, up to
    /// `limit` visited states.
    fn exhaustive(&self, limit: usize) -> Option<Vec<usize>> {
        let mut st = self.fresh_state();
        let start = self.nx;
        st.pos[start] = 0;
        st.units.push(start);
        st.links.push(usize::MAX);
        let mut left = limit;
        self.dfs(&mut st, &mut left).then(|| {
            let close = self.closing(&st).unwrap();
            self.finish(&st, close)
        })
    }

    fn dfs(&self, st: &mut State, left: &mut usize) -> bool {
        if *left == 0 {
            return false;
        }
        *left -= 1;
        if st.units.len() == self.nx + self.ny {
            return self.closing(st).is_some();
        }
        let mut ext = Vec::new();
        self.extensions(st, &mut ext);
        ext.sort_by(|a, b| self.cost(a.2).total_cmp(&self.cost(b.2)).then(a.2.cmp(&b.2)));
        for (unit, port, e) in ext {
            if st.color_count[self.color(e)] != 0 {
                continue;
            }
            if unit < self.nx {
                self.enter(st, unit, port);
            }
            self.push(st, unit, e);
            if self.dfs(st, left) {
                return true;
            }
            st.units.pop();
            st.links.pop();
            st.pos[unit] = usize::MAX;
            st.color_count[self.color(e)] -= 1;
        }
        false
    }
}

/// Searches the completion graph restricted to `subset` for an alternating
/// Hamilton cycle whose edges have distinct colors. Restart `i` draws from
/// `rng_for(i)`.
pub fn find_cycle(
    graph: &CompletionGraph,
    subset: &[usize],
    palette: usize,
    budget: HamiltonBudget,
    mut rng_for: impl FnMut(usize) -> ChaCha20Rng,
) -> Option<CompletionCycle> {
    let search = Search::new(graph, subset, palette);
    if search.nx != search.ny || search.ny == 0 {
        return None;
    }
    if search.ny <= budget.exhaustive_max_r {
        let limit = budget.restarts.saturating_mul(budget.steps).max(1);
        return search.exhaustive(limit).map(|edges| CompletionCycle { edges, restart: None });
    }
    (0..budget.restarts).find_map(|i| {
        search
            .restart(&mut rng_for(i), budget.steps)
            .map(|edges| CompletionCycle { edges, restart: Some(i) })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tour_greedy::completion::CompletionEdge;
    use crate::instance::EdgeId;
    use rand::SeedableRng;

    /// X: one path with ports 0,1 and one isolated port 2; Y: two slots.
    fn tiny(colors: [u32; 6]) -> CompletionGraph {
        let ports = vec![10, 11, 12];
        let reserve = vec![0, 1];
        let mut edges = Vec::new();
        for port in 0..3 {
            for slot in 0..2 {
                edges.push(CompletionEdge {
                    port,
                    slot,
                    edge: EdgeId::new(ports[port], reserve[slot]),
                    color: colors[port * 2 + slot],
                    cost: 1.0,
                });
            }
        }
        CompletionGraph {
            reserve,
            ports,
            nodes: vec![[0, 1], [2, 2]],
            paths: 1,
            edges,
        }
    }

    fn check(g: &CompletionGraph, cyc: &[usize]) {
        assert_eq!(cyc.len(), 4);
        let mut colors: Vec<u32> = cyc.iter().map(|&i| g.edges[i].color).collect();
        colors.sort_unstable();
        colors.dedup();
        assert_eq!(colors.len(), 4);
        // each port used once except the isolated one, used twice
        let mut deg = [0; 3];
        for &i in cyc {
            deg[g.edges[i].port] += 1;
        }
        assert_eq!(deg, [1, 1, 2]);
    }

    #[test]
    fn four_cycle_exhaustive() {
        let g = tiny([0, 1, 2, 3, 4, 5]);
        let all: Vec<usize> = (0..6).collect();
        let budget = HamiltonBudget::for_n(10);
        let c = find_cycle(&g, &all, 6, budget, |i| ChaCha20Rng::seed_from_u64(i as u64)).unwrap();
        assert_eq!(c.restart, None);
        check(&g, &c.edges);
    }

    #[test]
    fn four_cycle_by_rotation() {
        let g = tiny([0, 1, 2, 3, 4, 5]);
        let all: Vec<usize> = (0..6).collect();
        let budget = HamiltonBudget {
            exhaustive_max_r: 0,
            ..HamiltonBudget::for_n(10)
        };
        let c = find_cycle(&g, &all, 6, budget, |i| ChaCha20Rng::seed_from_u64(i as u64)).unwrap();
        assert!(c.restart.is_some());
        check(&g, &c.edges);
    }

    #[test]
    fn repeated_colors_block_the_cycle() {
        // the isolated port must use both slots, colors 4 and 4
        let g = tiny([0, 1, 2, 3, 4, 4]);
        let all: Vec<usize> = (0..6).collect();
        let c = find_cycle(&g, &all, 6, HamiltonBudget::for_n(10), |i| {
            ChaCha20Rng::seed_from_u64(i as u64)
        });
        assert!(c.is_none());
    }

    #[test]
    fn path_node_needs_both_ports() {
        // drop every edge at port 1: the path can't be left
        let g = tiny([0, 1, 2, 3, 4, 5]);
        let subset = vec![0, 1, 4, 5];
        let c = find_cycle(&g, &subset, 6, HamiltonBudget::for_n(10), |i| {
            ChaCha20Rng::seed_from_u64(i as u64)
        });
        assert!(c.is_none());
    }
}
