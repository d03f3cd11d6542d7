use proptest::prelude::*;
use rainbow_core::baselines::kruskal_mst;
use rainbow_core::colorstats::{
    empirical_repeat_count, expected_repeat_count, find_pair_copies, mst_gap_experiment, scaled_points,
};
use rainbow_core::instance::{color_edges, edge_count, gen_euclidean, Instance, SeedSpec};
use rainbow_core::rainbow_exact::min_rainbow_spanning_tree;

proptest! {
    #[test]
    fn repeat_count_grows_with_items(alpha in 0u64..5000, beta in 1u64..5000) {
        let a = expected_repeat_count(alpha, beta);
        let b = expected_repeat_count(alpha + 1, beta);
        prop_assert!(b >= a - 1e-9);
        prop_assert!(a >= 0.0 && a <= (alpha / 2) as f64 + 1e-9 && a <= beta as f64 + 1e-9);
    }

    #[test]
    fn copies_pass_the_brute_force_check(n in 10usize..2000, seed in any::<u64>()) {
        let pts = scaled_points(&gen_euclidean(n, 1.0, SeedSpec::new(seed)));
        let set = find_pair_copies(&pts, 0.25, 4.0).unwrap();
        prop_assert!(set.verify(&pts));
    }

    #[test]
    fn planted_pairs_are_found(k in 1usize..10, seed in any::<u64>()) {
        // pairs far apart on a line, each at a distance in the window
        let len = 0.6 + (seed % 80) as f64 / 100.0;
        let pts: Vec<[f64; 2]> = (0..k)
            .flat_map(|i| {
                let x = 20.0 * i as f64;
                [[x, 0.0], [x + len, 0.0]]
            })
            .collect();
        let set = find_pair_copies(&pts, 0.25, 4.0).unwrap();
        prop_assert_eq!(set.kappa(), k);
        prop_assert!(set.verify(&pts));
    }
}

#[test]
fn repeat_fraction_within_five_sigma() {
    let (alpha, beta) = (10_000u64, 10_000u64);
    let expected = expected_repeat_count(alpha, beta);
    let zs: Vec<f64> = (0..20)
        .map(|s| empirical_repeat_count(alpha, beta, SeedSpec::new(s)).empirical as f64)
        .collect();
    let mean = zs.iter().sum::<f64>() / zs.len() as f64;
    let sd = (zs.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (zs.len() - 1) as f64).sqrt();
    assert!((mean - expected).abs() <= 5.0 * sd / (zs.len() as f64).sqrt(), "{mean} vs {expected}");
    assert!((expected / beta as f64 - (1.0 - 2.0 / std::f64::consts::E)).abs() < 1e-4);
}

#[test]
fn mst_gaps_are_nonnegative() {
    let r = mst_gap_experiment(&[20, 40, 80], 5, 11).unwrap();
    assert_eq!(r.basis, "exact");
    for row in &r.rows {
        assert!(row.samples.iter().all(|s| s.gap >= -1e-12));
        assert_eq!(row.samples.len() + row.excluded.len(), 5);
    }
}

#[test]
fn cubic_palette_closes_the_gap() {
    let n = 100;
    let mut total = 0.0;
    for seed in 0..10 {
        let s = SeedSpec::new(seed);
        let inst: Instance = gen_euclidean(n, 1.0, s).into();
        let col = color_edges(edge_count(n), n * n * n, s).unwrap();
        let plain = kruskal_mst(&inst).unwrap().total_cost;
        let rainbow = min_rainbow_spanning_tree(&inst, &col).unwrap().cost().unwrap();
        total += (rainbow - plain) / plain;
    }
    assert!(total / 10.0 < 1e-3, "{}", total / 10.0);
}
