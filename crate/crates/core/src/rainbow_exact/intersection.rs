//! Matroid intersection of the graphic matroid of `K_n` and the partition
//! matroid of the color classes, by successive shortest augmenting paths.
//!
//! Exchange graph for a common independent set `I`:
//!
//! * `y -> x` when `I - y + x` is a forest (`y` on the tree path of `x`),
//! * `x -> y` when `I - y + x` repeats no color (`y` holds the color of `x`),
//! * sources `X1 = {x : I + x forest}`, sinks `X2 = {x : color of x unused}`.
//!
//! Sources and sinks are adjacent to every member of `I`; those arcs go
//! through two hub nodes so the graph stays linear in the path lengths.
//! Node lengths are `w(x)` outside `I` and `-w(y)` inside; paths are
//! compared by (length, arcs).

use std::collections::VecDeque;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

pub(crate) struct Engine {
    n: usize,
    ends: Vec<[u32; 2]>,
    color: Vec<u32>,
    weight: Vec<i64>,
    in_set: Vec<bool>,
    owner: Vec<u32>,
    members: Vec<u32>,
    forest: Forest,
}

/// Rooted view of the current forest.
struct Forest {
    comp: Vec<u32>,
    depth: Vec<u32>,
    parent: Vec<u32>,
    parent_elem: Vec<u32>,
}

/// Arcs of the current exchange graph that depend on the forest.
struct Exchange {
    is_source: Vec<bool>,
    sources: Vec<u32>,
    out_start: Vec<u32>,
    out: Vec<u32>,
}

impl Engine {
    /// `colors` must be dense in `0..palette`.
    pub(crate) fn new(
        n: usize,
        ends: Vec<[u32; 2]>,
        colors: Vec<u32>,
        weight: Vec<i64>,
        palette: usize,
    ) -> Self {
        let m = ends.len();
        Self {
            n,
            ends,
            color: colors,
            weight,
            in_set: vec![false; m],
            owner: vec![NONE; palette],
            members: Vec::new(),
            forest: Forest {
                comp: vec![0; n],
                depth: vec![0; n],
                parent: vec![NONE; n],
                parent_elem: vec![NONE; n],
            },
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.members.len()
    }

    pub(crate) fn members(&self) -> &[u32] {
        &self.members
    }

    /// Greedy maximal common independent set in element order. Only valid as
    /// a start when all weights are equal.
    pub(crate) fn seed_greedy(&mut self) {
        let mut dsu = DisjointSets::new(self.n);
        for x in 0..self.ends.len() {
            let [a, b] = self.ends[x];
            let c = self.color[x] as usize;
            if self.owner[c] == NONE && dsu.union(a as usize, b as usize) {
                self.in_set[x] = true;
                self.owner[c] = x as u32;
                self.members.push(x as u32);
            }
        }
    }

    /// Augments until the set has `target` elements or no augmenting path
    /// exists. Each intermediate set is minimum weight for its size.
    pub(crate) fn run(&mut self, target: usize) -> Result<()> {
        while self.members.len() < target {
            self.root_forest();
            let ex = self.exchange();
            match self.shortest_path(&ex)? {
                Some(path) => self.augment(&path)?,
                None => break,
            }
        }
        Ok(())
    }

    fn root_forest(&mut self) {
        let n = self.n;
        let mut adj_start = vec![0u32; n + 1];
        for &y in &self.members {
            let [a, b] = self.ends[y as usize];
            adj_start[a as usize + 1] += 1;
            adj_start[b as usize + 1] += 1;
        }
        for v in 0..n {
            adj_start[v + 1] += adj_start[v];
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![0u32; 2 * self.members.len()];
        for &y in &self.members {
            let [a, b] = self.ends[y as usize];
            adj[fill[a as usize] as usize] = y;
            fill[a as usize] += 1;
            adj[fill[b as usize] as usize] = y;
            fill[b as usize] += 1;
        }
        let f = &mut self.forest;
        f.comp.fill(NONE);
        let mut stack = Vec::new();
        for root in 0..n {
            if f.comp[root] != NONE {
                continue;
            }
            f.comp[root] = root as u32;
            f.depth[root] = 0;
            f.parent[root] = NONE;
            f.parent_elem[root] = NONE;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for &y in &adj[adj_start[v] as usize..adj_start[v + 1] as usize] {
                    let [a, b] = self.ends[y as usize];
                    let u = if a as usize == v { b } else { a } as usize;
                    if f.comp[u] == NONE {
                        f.comp[u] = root as u32;
                        f.depth[u] = f.depth[v] + 1;
                        f.parent[u] = v as u32;
                        f.parent_elem[u] = y;
                        stack.push(u);
                    }
                }
            }
        }
    }

    /// Calls `f` on every forest element on the path between `a` and `b`,
    /// which must lie in one component.
    fn walk_path(&self, a: u32, b: u32, mut f: impl FnMut(u32)) {
        let fo = &self.forest;
        let (mut u, mut v) = (a as usize, b as usize);
        while u != v {
            if fo.depth[u] >= fo.depth[v] {
                f(fo.parent_elem[u]);
                u = fo.parent[u] as usize;
            } else {
                f(fo.parent_elem[v]);
                v = fo.parent[v] as usize;
            }
        }
    }

    fn exchange(&self) -> Exchange {
        let m = self.ends.len();
        let mut is_source = vec![false; m];
        let mut sources = Vec::new();
        let mut count = vec![0u32; m + 1];
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for x in 0..m {
            if self.in_set[x] {
                continue;
            }
            let [a, b] = self.ends[x];
            if self.forest.comp[a as usize] != self.forest.comp[b as usize] {
                is_source[x] = true;
                sources.push(x as u32);
            } else {
                self.walk_path(a, b, |y| {
                    count[y as usize + 1] += 1;
                    pairs.push((y, x as u32));
                });
            }
        }
        for i in 0..m {
            count[i + 1] += count[i];
        }
        let out_start = count.clone();
        let mut out = vec![0u32; pairs.len()];
        for (y, x) in pairs {
            out[count[y as usize] as usize] = x;
            count[y as usize] += 1;
        }
        Exchange {
            is_source,
            sources,
            out_start,
            out,
        }
    }

    fn node_length(&self, v: usize) -> i64 {
        if v >= self.ends.len() {
            0
        } else if self.in_set[v] {
            -self.weight[v]
        } else {
            self.weight[v]
        }
    }

    /// Visits the out-arcs of `u` as `(head, hop increment)`.
    fn for_each_arc(&self, ex: &Exchange, u: usize, mut f: impl FnMut(usize, u32)) {
        let m = self.ends.len();
        let (hub1, hub2) = (m, m + 1);
        if u == hub1 {
            for &x in &ex.sources {
                f(x as usize, 1);
            }
        } else if u == hub2 {
            for &y in &self.members {
                f(y as usize, 1);
            }
        } else if self.in_set[u] {
            for &x in &ex.out[ex.out_start[u] as usize..ex.out_start[u + 1] as usize] {
                f(x as usize, 1);
            }
            if !ex.sources.is_empty() {
                f(hub1, 0);
            }
        } else {
            let o = self.owner[self.color[u] as usize];
            if o == NONE {
                f(hub2, 0);
            } else {
                f(o as usize, 1);
            }
        }
    }

    /// Lexicographically shortest source-to-sink path, as element indices.
    fn shortest_path(&self, ex: &Exchange) -> Result<Option<Vec<u32>>> {
        let m = self.ends.len();
        let nodes = m + 2;
        let mut dist = vec![(i64::MAX, u32::MAX); nodes];
        let mut pred = vec![NONE; nodes];
        let mut queued = vec![false; nodes];
        let mut pushes = vec![0u32; nodes];
        let mut queue = VecDeque::new();
        for &x in &ex.sources {
            dist[x as usize] = (self.weight[x as usize], 0);
            queued[x as usize] = true;
            queue.push_back(x as usize);
        }
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            let (du, hu) = dist[u];
            self.for_each_arc(ex, u, |v, dh| {
                let cand = (du + self.node_length(v), hu + dh);
                if cand < dist[v] {
                    dist[v] = cand;
                    pred[v] = u as u32;
                    if !queued[v] {
                        queued[v] = true;
                        pushes[v] += 1;
                        queue.push_back(v);
                    }
                }
            });
            if pushes[u] as usize > nodes + 1 {
                return Err(Error::Contract(
                    "negative cycle in exchange graph".into(),
                ));
            }
        }
        let mut best: Option<usize> = None;
        for x in 0..m {
            if self.in_set[x] || self.owner[self.color[x] as usize] != NONE {
                continue;
            }
            if dist[x].0 == i64::MAX {
                continue;
            }
            if best.is_none_or(|b| dist[x] < dist[b]) {
                best = Some(x);
            }
        }
        let Some(mut v) = best else {
            return Ok(None);
        };
        let mut path = Vec::new();
        loop {
            if v < m {
                path.push(v as u32);
            }
            let p = pred[v];
            if p == NONE {
                break;
            }
            v = p as usize;
        }
        if !ex.is_source[v] {
            return Err(Error::Contract("augmenting path does not start at a source".into()));
        }
        path.reverse();
        Ok(Some(path))
    }

    fn augment(&mut self, path: &[u32]) -> Result<()> {
        let leaving: Vec<bool> = path.iter().map(|&e| self.in_set[e as usize]).collect();
        for (&e, &out) in path.iter().zip(&leaving) {
            if out {
                self.in_set[e as usize] = false;
                self.owner[self.color[e as usize] as usize] = NONE;
            }
        }
        for (&e, &out) in path.iter().zip(&leaving) {
            if !out {
                self.in_set[e as usize] = true;
                self.owner[self.color[e as usize] as usize] = e;
            }
        }
        self.members = (0..self.ends.len() as u32)
            .filter(|&e| self.in_set[e as usize])
            .collect();
        self.check_common_independent()
    }

    fn check_common_independent(&self) -> Result<()> {
        let mut dsu = DisjointSets::new(self.n);
        let mut seen = vec![false; self.owner.len()];
        for &y in &self.members {
            let [a, b] = self.ends[y as usize];
            if !dsu.union(a as usize, b as usize) {
                return Err(Error::Contract("augmentation created a cycle".into()));
            }
            let c = self.color[y as usize] as usize;
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::Contract("augmentation repeated a color".into()));
            }
        }
        Ok(())
    }

    /// Feasible node potentials of the exchange graph of the current set:
    /// `p(v) <= p(u) + len(v)` on every arc, hubs last.
    pub(crate) fn potentials(&mut self) -> Result<Vec<i64>> {
        self.root_forest();
        let ex = self.exchange();
        let m = self.ends.len();
        let nodes = m + 2;
        let mut p: Vec<i64> = (0..nodes).map(|v| self.node_length(v)).collect();
        let mut queued = vec![true; nodes];
        let mut pushes = vec![0u32; nodes];
        let mut queue: VecDeque<usize> = (0..nodes).collect();
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            let pu = p[u];
            self.for_each_arc(&ex, u, |v, _| {
                let cand = pu + self.node_length(v);
                if cand < p[v] {
                    p[v] = cand;
                    if !queued[v] {
                        queued[v] = true;
                        pushes[v] += 1;
                        queue.push_back(v);
                    }
                }
            });
            if pushes[u] as usize > nodes + 1 {
                return Err(Error::Contract("negative cycle in exchange graph".into()));
            }
        }
        Ok(p)
    }

    /// Minimum of `p` over the forest path between `a` and `b`.
    pub(crate) fn path_min(&self, p: &[i64], a: u32, b: u32) -> i64 {
        let mut best = i64::MAX;
        self.walk_path(a, b, |y| best = best.min(p[y as usize]));
        best
    }

    pub(crate) fn owner_of(&self, color: u32) -> Option<u32> {
        let o = self.owner[color as usize];
        (o != NONE).then_some(o)
    }

    pub(crate) fn weight(&self, e: u32) -> i64 {
        self.weight[e as usize]
    }
}
