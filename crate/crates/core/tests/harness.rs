use rainbow_core::harness::{read_csv, rerun_row, run_experiment_with_threads, ExperimentConfig, ExperimentKind};

fn small(kind: ExperimentKind) -> ExperimentConfig {
    let grid = match kind {
        ExperimentKind::Tour | ExperimentKind::TspGap => vec![40, 60, 80],
        ExperimentKind::Repeat | ExperimentKind::Copies => vec![500, 1000, 2000],
        _ => vec![20, 30, 40],
    };
    ExperimentConfig::new(kind, grid, 3, 77)
}

#[test]
fn every_kind_is_thread_count_independent() {
    for kind in ExperimentKind::ALL {
        let cfg = small(kind);
        let one = run_experiment_with_threads(&cfg, 1).unwrap().to_csv().unwrap();
        let many = run_experiment_with_threads(&cfg, 3).unwrap().to_csv().unwrap();
        assert_eq!(one, many, "{}", kind.as_str());
        assert!(!one.contains(",error,"), "{}", kind.as_str());
    }
}

#[test]
fn every_row_reruns_bit_for_bit() {
    for kind in ExperimentKind::ALL {
        let csv = run_experiment_with_threads(&small(kind), 2).unwrap().to_csv().unwrap();
        for row in read_csv(&csv).unwrap() {
            let again = rerun_row(&row).unwrap();
            assert_eq!(again.success, row.success);
            assert_eq!(again.cost.to_bits(), row.cost.to_bits(), "{} n={} seed={}", kind.as_str(), row.n, row.seed);
        }
    }
}

#[test]
fn footer_has_fits_for_three_point_grids() {
    let out = run_experiment_with_threads(&small(ExperimentKind::MstGap), 2).unwrap();
    assert!(out.fits.contains_key("kruskal"));
    assert!(out.to_csv().unwrap().contains("# fit solver=rainbow-exact:gap"));
}

#[test]
fn unknown_config_fields_are_rejected() {
    assert!(ExperimentConfig::from_json(r#"{"kind":"tour","n_grid":[50],"colour":3}"#).is_err());
    assert!(ExperimentConfig::from_json(r#"{"kind":"tour","n_grid":[1]}"#).is_err());
    let cfg = ExperimentConfig::from_json(r#"{"kind":"tsp-gap","n_grid":[50,60],"seeds":2,"eps":0.3}"#).unwrap();
    assert_eq!(cfg.q(50), 65);
}
