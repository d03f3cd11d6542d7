use std::collections::HashSet;

use proptest::prelude::*;
use rainbow_core::baselines::{cycle_cost, tsp_exact};
use rainbow_core::instance::{color_edges, edge_count, gen_euclidean, Coloring, EdgeId, Instance, SeedSpec};
use rainbow_core::rainbow_exact::brute_rainbow_tsp;
use rainbow_core::tour_greedy::{
    build_completion, find_cycle, greedy_paths, palette_size, rainbow_tour, select_reserve, CompletionEdge,
    CompletionGraph, EdgeStream, HamiltonBudget, TourParams,
};
use rainbow_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn instance(n: usize, eps: f64, seed: u64) -> (Instance, Coloring) {
    let s = SeedSpec::new(seed);
    let inst = gen_euclidean(n, 1.0, s).into();
    (inst, color_edges(edge_count(n), palette_size(n, eps), s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_paths_keep_their_invariants(n in 20usize..300, seed in any::<u64>(), banded in any::<bool>()) {
        let (inst, col) = instance(n, 0.2, seed);
        let (reserve, rest) = select_reserve(n, 1.5).unwrap();
        let k0 = n - 2 * reserve.len();
        let stream = if banded { EdgeStream::Banded } else { EdgeStream::FullSort };
        let (paths, stats) = match greedy_paths(&inst, &col, &rest, k0, 1.5, stream) {
            Ok(v) => v,
            Err(Error::GreedyStalled { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert_eq!(stats.accepted, k0);
        prop_assert_eq!(paths.edges.len(), k0);
        prop_assert_eq!(paths.components(), rest.len() - k0);
        prop_assert!(paths.check(&col));
        prop_assert!(paths.degree.iter().all(|&d| d <= 2));
        let reserved: HashSet<usize> = reserve.iter().copied().collect();
        for e in &paths.edges {
            let (a, b) = e.endpoints();
            prop_assert!(!reserved.contains(&a) && !reserved.contains(&b));
        }
    }

    #[test]
    fn fresh_color_filter_counts(n in 30usize..200, seed in any::<u64>()) {
        let (inst, col) = instance(n, 0.2, seed);
        let (reserve, rest) = select_reserve(n, 1.5).unwrap();
        let k0 = n - 2 * reserve.len();
        let Ok((paths, _)) = greedy_paths(&inst, &col, &rest, k0, 1.5, EdgeStream::FullSort) else {
            return Ok(());
        };
        let (graph, filter) = build_completion(&paths, &reserve, &inst, &col);
        prop_assert_eq!(graph.r(), reserve.len());
        prop_assert_eq!(graph.nodes.len(), reserve.len());
        for &i in &filter.gamma1 {
            prop_assert!(!paths.color_used(graph.edges[i].color));
        }
        let mut seen = HashSet::new();
        for &i in &filter.gamma2 {
            prop_assert_eq!(filter.usage[&graph.edges[i].color], 1);
            prop_assert!(seen.insert(graph.edges[i].color));
        }
        prop_assert_eq!(filter.gamma2.len(), filter.c2);
        let twice = filter.at_most_twice_one_each(&graph);
        let colors: HashSet<u32> = twice.iter().map(|&i| graph.edges[i].color).collect();
        prop_assert_eq!(colors.len(), twice.len());
    }

    #[test]
    fn tours_are_rainbow_hamilton_cycles(n in 13usize..120, seed in any::<u64>()) {
        let (inst, col) = instance(n, 0.2, seed);
        let (tour, d) = match rainbow_tour(&inst, &col, &TourParams::default()) {
            Ok(v) => v,
            Err(Error::CompletionFailed { .. } | Error::GreedyStalled { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert!(tour.is_valid(n, &col));
        let mut order = tour.order.clone();
        order.sort_unstable();
        prop_assert_eq!(order, (0..n).collect::<Vec<_>>());
        let colors: HashSet<u32> = tour.colors.iter().copied().collect();
        prop_assert_eq!(colors.len(), n);
        let resum = cycle_cost(&inst, &tour.order);
        prop_assert!((resum - tour.total_cost).abs() <= 1e-9 * resum);
        prop_assert!(d.total_cost <= d.unpolished_cost + 1e-9);
    }
}

#[test]
fn rainbow_tours_cost_at_least_the_rainbow_optimum() {
    let params = TourParams {
        c_param: 1.0,
        ..TourParams::default()
    };
    let mut checked = 0;
    for seed in 0..12 {
        for n in [9, 10] {
            let (inst, col) = instance(n, 0.2, seed);
            let plain = tsp_exact(&inst).unwrap().total_cost;
            let Some(best) = brute_rainbow_tsp(&inst, &col).unwrap() else {
                continue;
            };
            assert!(best.total_cost >= plain - 1e-12);
            if let Ok((t, _)) = rainbow_tour(&inst, &col, &params) {
                assert!(t.total_cost >= best.total_cost - 1e-12);
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

/// Two isolated vertices against a reserve of two: the only cycle is the
/// 4-cycle on all four edges.
fn four_cycle(colors: [u32; 4]) -> CompletionGraph {
    let ports = vec![2, 3];
    let reserve = vec![0, 1];
    let mut edges = Vec::new();
    for (port, &v) in ports.iter().enumerate() {
        for (slot, &y) in reserve.iter().enumerate() {
            edges.push(CompletionEdge {
                port,
                slot,
                edge: EdgeId::new(v, y),
                color: colors[port * 2 + slot],
                cost: 1.0,
            });
        }
    }
    CompletionGraph {
        reserve,
        ports,
        nodes: vec![[0, 0], [1, 1]],
        paths: 0,
        edges,
    }
}

#[test]
fn four_cycle_needs_four_colors() {
    let budget = HamiltonBudget::for_n(4);
    let rng = |i: usize| ChaCha20Rng::seed_from_u64(i as u64);
    let g = four_cycle([0, 1, 2, 3]);
    let c = find_cycle(&g, &[0, 1, 2, 3], 4, budget, rng).unwrap();
    assert_eq!(c.edges.len(), 4);
    let g = four_cycle([0, 1, 2, 0]);
    assert!(find_cycle(&g, &[0, 1, 2, 3], 4, budget, rng).is_none());
}

#[test]
fn reserve_must_stay_small() {
    assert!(select_reserve(12, 1.5).is_err());
    let (r, rest) = select_reserve(100, 1.5).unwrap();
    assert_eq!(r.len(), 15);
    assert_eq!(rest.len(), 85);
}

#[test]
fn small_instances_fail_only_by_search() {
    // retries must not grow the reserve past n/2
    for n in 13..40 {
        for seed in 0..20 {
            let (inst, col) = instance(n, 0.2, seed);
            match rainbow_tour(&inst, &col, &TourParams::default()) {
                Ok((t, _)) => assert!(t.is_valid(n, &col)),
                Err(Error::CompletionFailed { .. } | Error::GreedyStalled { .. }) => {}
                Err(e) => panic!("n = {n}, seed = {seed}: {e}"),
            }
        }
    }
}
