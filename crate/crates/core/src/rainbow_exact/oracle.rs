//! Exhaustive enumerators for tiny instances. None of this shares code with
//! the intersection solver; the two are meant to check each other.

use super::RainbowTree;
use crate::baselines::Tour;
use crate::error::{Error, Result};
use crate::instance::{Coloring, EdgeId, Instance};

pub const BRUTE_TREE_MAX_N: usize = 8;
pub const BRUTE_TSP_MAX_N: usize = 10;
pub const BRUTE_MATCHING_MAX_N: usize = 12;

/// Perfect matching as a sorted edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub edges: Vec<EdgeId>,
    pub total_cost: f64,
}

fn all_distinct(colors: &mut Vec<u32>) -> bool {
    let len = colors.len();
    colors.sort_unstable();
    colors.dedup();
    colors.len() == len
}

/// Decodes a Pruefer sequence into the edges of its labeled tree.
fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf always exists");
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Calls `f` with every labeled tree on `n >= 2` vertices and its degrees.
fn for_each_tree(n: usize, mut f: impl FnMut(&[(usize, usize)], &[usize])) {
    let len = n - 2;
    let mut seq = vec![0usize; len];
    loop {
        let mut degree = vec![1usize; n];
        for &v in &seq {
            degree[v] += 1;
        }
        f(&prufer_edges(&seq, n), &degree);
        // odometer increment
        let mut i = 0;
        while i < len {
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return;
        }
    }
}

fn brute_tree(
    instance: &Instance,
    coloring: &Coloring,
    max_degree: usize,
) -> Result<Option<RainbowTree>> {
    let n = instance.n();
    if !(1..=BRUTE_TREE_MAX_N).contains(&n) {
        return Err(Error::Size {
            what: "Pruefer enumeration",
            n,
            min: 1,
            max: BRUTE_TREE_MAX_N,
        });
    }
    coloring.check_covers(n)?;
    if n == 1 {
        return Ok(Some(RainbowTree {
            edges: vec![],
            colors_used: vec![],
            total_cost: 0.0,
        }));
    }
    let mut best: Option<(f64, Vec<EdgeId>)> = None;
    for_each_tree(n, |edges, degree| {
        if degree.iter().any(|&d| d > max_degree) {
            return;
        }
        let mut ids: Vec<EdgeId> = edges.iter().map(|&(a, b)| EdgeId::new(a, b)).collect();
        let mut colors: Vec<u32> = ids.iter().map(|&e| coloring.color(e)).collect();
        if !all_distinct(&mut colors) {
            return;
        }
        ids.sort_unstable();
        let cost: f64 = ids.iter().map(|&e| instance.edge_cost(e)).sum();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, ids));
        }
    });
    Ok(best.map(|(total_cost, edges)| {
        let mut colors_used: Vec<u32> = edges.iter().map(|&e| coloring.color(e)).collect();
        colors_used.sort_unstable();
        RainbowTree {
            edges,
            colors_used,
            total_cost,
        }
    }))
}

/// Cheapest rainbow spanning tree over all `n^(n-2)` labeled trees.
pub fn brute_rainbow_spanning_tree(
    instance: &Instance,
    coloring: &Coloring,
) -> Result<Option<RainbowTree>> {
    brute_tree(instance, coloring, usize::MAX)
}

/// Cheapest rainbow spanning tree with every degree at most `max_degree`.
/// A vertex's degree is its multiplicity in the Pruefer sequence plus one.
pub fn brute_rainbow_degree_bounded_mst(
    instance: &Instance,
    coloring: &Coloring,
    max_degree: usize,
) -> Result<Option<RainbowTree>> {
    brute_tree(instance, coloring, max_degree)
}

/// Cheapest rainbow Hamilton cycle, enumerating each of the `(n-1)!/2`
/// cycles once (vertex 0 first, second vertex below the last).
pub fn brute_rainbow_tsp(instance: &Instance, coloring: &Coloring) -> Result<Option<Tour>> {
    let n = instance.n();
    if !(3..=BRUTE_TSP_MAX_N).contains(&n) {
        return Err(Error::Size {
            what: "rainbow tour enumeration",
            n,
            min: 3,
            max: BRUTE_TSP_MAX_N,
        });
    }
    coloring.check_covers(n)?;

    struct Search<'a> {
        instance: &'a Instance,
        coloring: &'a Coloring,
        n: usize,
        path: Vec<usize>,
        used: Vec<bool>,
        colors: Vec<u32>,
        best: Option<(f64, Vec<usize>)>,
    }

    impl Search<'_> {
        fn color_free(&self, c: u32) -> bool {
            !self.colors.contains(&c)
        }

        fn go(&mut self) {
            let last = *self.path.last().unwrap();
            if self.path.len() == self.n {
                if self.path[1] > last {
                    return;
                }
                let c = self.coloring.color_of(last, 0);
                if !self.color_free(c) {
                    return;
                }
                let order = self.path.clone();
                let cost: f64 = (0..self.n)
                    .map(|i| self.instance.cost(order[i], order[(i + 1) % self.n]))
                    .sum();
                if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                    self.best = Some((cost, order));
                }
                return;
            }
            for v in 1..self.n {
                if self.used[v] {
                    continue;
                }
                let c = self.coloring.color_of(last, v);
                if !self.color_free(c) {
                    continue;
                }
                self.used[v] = true;
                self.path.push(v);
                self.colors.push(c);
                self.go();
                self.colors.pop();
                self.path.pop();
                self.used[v] = false;
            }
        }
    }

    let mut s = Search {
        instance,
        coloring,
        n,
        path: vec![0],
        used: vec![false; n],
        colors: Vec::new(),
        best: None,
    };
    s.used[0] = true;
    s.go();
    Ok(s.best.map(|(total_cost, order)| Tour { order, total_cost }))
}

/// Cheapest perfect matching over all `(n-1)!!` matchings, keeping only
/// rainbow ones when `rainbow` is set.
pub fn brute_rainbow_perfect_matching(
    instance: &Instance,
    coloring: &Coloring,
    rainbow: bool,
) -> Result<Option<Matching>> {
    let n = instance.n();
    if n % 2 == 1 {
        return Err(Error::Parity(n));
    }
    if !(2..=BRUTE_MATCHING_MAX_N).contains(&n) {
        return Err(Error::Size {
            what: "perfect matching enumeration",
            n,
            min: 2,
            max: BRUTE_MATCHING_MAX_N,
        });
    }
    coloring.check_covers(n)?;

    fn go(
        instance: &Instance,
        coloring: &Coloring,
        rainbow: bool,
        free: &mut Vec<usize>,
        chosen: &mut Vec<EdgeId>,
        best: &mut Option<(f64, Vec<EdgeId>)>,
    ) {
        if free.is_empty() {
            let mut colors: Vec<u32> = chosen.iter().map(|&e| coloring.color(e)).collect();
            if rainbow && !all_distinct(&mut colors) {
                return;
            }
            let mut ids = chosen.clone();
            ids.sort_unstable();
            let cost: f64 = ids.iter().map(|&e| instance.edge_cost(e)).sum();
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                *best = Some((cost, ids));
            }
            return;
        }
        // the lowest free vertex is matched first
        let a = free.remove(0);
        for k in 0..free.len() {
            let b = free.remove(k);
            chosen.push(EdgeId::new(a, b));
            go(instance, coloring, rainbow, free, chosen, best);
            chosen.pop();
            free.insert(k, b);
        }
        free.insert(0, a);
    }

    let mut best = None;
    go(
        instance,
        coloring,
        rainbow,
        &mut (0..n).collect(),
        &mut Vec::new(),
        &mut best,
    );
    Ok(best.map(|(total_cost, edges)| Matching { edges, total_cost }))
}
