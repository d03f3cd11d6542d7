//! Hopcroft-Karp maximum bipartite matching.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Maximum matching of a bipartite graph given as left adjacency lists of
/// right-side indices. Returns, for each left vertex, the position in its
/// adjacency list of the matched arc.
///
/// Lists are scanned in order, so earlier (for example cheaper) arcs are
/// preferred whenever the search has a choice.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut mate_left = vec![FREE; left];
    let mut arc_left = vec![FREE; left];
    let mut mate_right = vec![FREE; right];

    // greedy start
    for x in 0..left {
        if let Some(k) = adj[x].iter().position(|&c| mate_right[c] == FREE) {
            mate_left[x] = adj[x][k];
            arc_left[x] = k;
            mate_right[adj[x][k]] = x;
        }
    }

    let mut dist = vec![0usize; left];
    let mut next_arc = vec![0usize; left];
    loop {
        // layer free left vertices
        let mut queue = VecDeque::new();
        for x in 0..left {
            if mate_left[x] == FREE {
                dist[x] = 0;
                queue.push_back(x);
            } else {
                dist[x] = FREE;
            }
        }
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            for &c in &adj[x] {
                let y = mate_right[c];
                if y == FREE {
                    found = true;
                } else if dist[y] == FREE {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if !found {
            break;
        }
        next_arc.fill(0);
        let mut augmented = false;
        for x in 0..left {
            if mate_left[x] == FREE
                && augment(adj, x, &mut dist, &mut next_arc, &mut mate_left, &mut arc_left, &mut mate_right)
            {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    arc_left
        .into_iter()
        .map(|k| (k != FREE).then_some(k))
        .collect()
}

fn augment(
    adj: &[Vec<usize>],
    x: usize,
    dist: &mut [usize],
    next_arc: &mut [usize],
    mate_left: &mut [usize],
    arc_left: &mut [usize],
    mate_right: &mut [usize],
) -> bool {
    while next_arc[x] < adj[x].len() {
        let k = next_arc[x];
        next_arc[x] += 1;
        let c = adj[x][k];
        let y = mate_right[c];
        let ok = y == FREE
            || (dist[y] == dist[x].wrapping_add(1)
                && augment(adj, y, dist, next_arc, mate_left, arc_left, mate_right));
        if ok {
            mate_left[x] = c;
            arc_left[x] = k;
            mate_right[c] = x;
            return true;
        }
    }
    dist[x] = FREE;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_max(adj: &[Vec<usize>], right: usize) -> usize {
        fn go(adj: &[Vec<usize>], x: usize, used: &mut Vec<bool>) -> usize {
            if x == adj.len() {
                return 0;
            }
            let mut best = go(adj, x + 1, used);
            for &c in &adj[x] {
                if !used[c] {
                    used[c] = true;
                    best = best.max(1 + go(adj, x + 1, used));
                    used[c] = false;
                }
            }
            best
        }
        go(adj, 0, &mut vec![false; right])
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        let mut state = 12345u64;
        for _ in 0..300 {
            state = crate::instance::splitmix64(state);
            let left = 1 + (state % 7) as usize;
            let right = 1 + ((state >> 8) % 7) as usize;
            let adj: Vec<Vec<usize>> = (0..left)
                .map(|x| {
                    (0..right)
                        .filter(|&c| crate::instance::splitmix64(state ^ (x * 31 + c) as u64) % 3 == 0)
                        .collect()
                })
                .collect();
            let m = hopcroft_karp(&adj, right);
            let size = m.iter().flatten().count();
            assert_eq!(size, brute_max(&adj, right));
            let mut seen = vec![false; right];
            for (x, k) in m.iter().enumerate() {
                if let Some(k) = k {
                    assert!(!std::mem::replace(&mut seen[adj[x][*k]], true));
                }
            }
        }
    }

    #[test]
    fn one_shared_color_matches_once() {
        let adj = vec![vec![0, 0], vec![0], vec![0]];
        assert_eq!(hopcroft_karp(&adj, 1).iter().flatten().count(), 1);
    }
}
