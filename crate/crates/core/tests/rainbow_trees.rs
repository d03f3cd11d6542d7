use proptest::prelude::*;
use rainbow_core::baselines::kruskal_mst;
use rainbow_core::instance::{color_edges, edge_count, gen_euclidean, gen_uniform_costs, Coloring, Instance, SeedSpec};
use rainbow_core::rainbow_exact::{
    brute_rainbow_spanning_tree, is_rainbow_spanning_tree, min_rainbow_spanning_tree, rainbow_feasible, RainbowMst,
};
use rainbow_core::tree_construct::{construct_tree, DEFAULT_B, DEFAULT_K};

fn instance(n: usize, q: usize, seed: u64, uniform: bool) -> (Instance, Coloring) {
    let s = SeedSpec::new(seed);
    let inst = if uniform {
        gen_uniform_costs(n, s).into()
    } else {
        gen_euclidean(n, 1.0, s).into()
    };
    (inst, color_edges(edge_count(n), q, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_matches_enumeration(n in 2usize..=7, qsel in 0usize..3, seed in any::<u64>(), uniform in any::<bool>()) {
        let q = [n - 1, n, 2 * n][qsel].max(1);
        let (inst, col) = instance(n, q, seed, uniform);
        let fast = min_rainbow_spanning_tree(&inst, &col).unwrap();
        let brute = brute_rainbow_spanning_tree(&inst, &col).unwrap();
        match (&fast, &brute) {
            (RainbowMst::Tree(t), Some(b)) => {
                prop_assert!(t.is_valid(n, &col));
                prop_assert!((t.total_cost - b.total_cost).abs() <= 1e-12 * b.total_cost.max(1.0));
            }
            (RainbowMst::Infeasible { max_rank }, None) => prop_assert!(*max_rank < n - 1),
            _ => prop_assert!(false, "verdicts differ: {:?} vs {:?}", fast, brute),
        }
        prop_assert_eq!(rainbow_feasible(&col, n).unwrap().feasible, brute.is_some());
    }

    #[test]
    fn rainbow_tree_costs_at_least_mst(n in 3usize..40, seed in any::<u64>(), uniform in any::<bool>()) {
        let (inst, col) = instance(n, n - 1, seed, uniform);
        let plain = kruskal_mst(&inst).unwrap().total_cost;
        if let RainbowMst::Tree(t) = min_rainbow_spanning_tree(&inst, &col).unwrap() {
            prop_assert!(t.total_cost >= plain - 1e-12);
            prop_assert!(is_rainbow_spanning_tree(n, &col, &t.edges));
        }
    }

    #[test]
    fn huge_palette_rarely_changes_the_tree(n in 3usize..30, seed in any::<u64>()) {
        // with q = n^3 colors the MST is usually already rainbow
        let (inst, col) = instance(n, n * n * n, seed, true);
        let plain = kruskal_mst(&inst).unwrap();
        let t = min_rainbow_spanning_tree(&inst, &col).unwrap();
        let tree = t.tree().unwrap();
        let mut colors: Vec<u32> = plain.edges.iter().map(|&e| col.color(e)).collect();
        colors.sort_unstable();
        colors.dedup();
        if colors.len() == n - 1 {
            prop_assert!((tree.total_cost - plain.total_cost).abs() <= 1e-12);
        }
    }

    #[test]
    fn construction_output_is_rainbow(n in 20usize..200, seed in any::<u64>()) {
        let (inst, col) = instance(n, n - 1, seed, false);
        let c = construct_tree(&inst, &col, DEFAULT_K, DEFAULT_B).unwrap();
        prop_assert_eq!(c.diagnostics.needed, n - 1);
        if let Some(t) = c.tree {
            prop_assert!(t.is_valid(n, &col));
            let exact = min_rainbow_spanning_tree(&inst, &col).unwrap().cost().unwrap();
            prop_assert!(t.total_cost >= exact - 1e-9);
        } else {
            prop_assert!(c.diagnostics.matching_size < n - 1);
        }
    }
}

#[test]
fn too_few_colors_is_infeasible() {
    let (inst, col) = instance(6, 3, 1, true);
    match min_rainbow_spanning_tree(&inst, &col).unwrap() {
        RainbowMst::Infeasible { max_rank } => assert!(max_rank <= 3),
        t => panic!("expected infeasible, got {t:?}"),
    }
}

#[test]
fn uniform_rainbow_mst_is_order_one() {
    let mean = |n: usize| {
        (0..20)
            .map(|r| {
                let (inst, col) = instance(n, n - 1, SeedSpec::for_cell(5, n, r).master, true);
                min_rainbow_spanning_tree(&inst, &col).unwrap().cost().unwrap()
            })
            .sum::<f64>()
            / 20.0
    };
    let (small, large) = (mean(50), mean(200));
    assert!((1.0..4.0).contains(&small), "{small}");
    assert!((1.0..4.0).contains(&large), "{large}");
}

#[test]
fn construction_rejects_uniform_costs() {
    let (inst, col) = instance(10, 9, 1, true);
    assert!(construct_tree(&inst, &col, DEFAULT_K, DEFAULT_B).is_err());
}
