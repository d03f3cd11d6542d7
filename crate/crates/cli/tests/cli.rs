use std::process::Command;

fn opt(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow-opt")).args(args).output().unwrap()
}

#[test]
fn generate_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    let inst = inst.to_str().unwrap();
    assert!(opt(&["gen", "--n", "7", "--seed", "3", "--out", inst]).status.success());
    let out = opt(&["rainbow-mst", "--input", inst, "--oracle"]);
    let code = out.status.code().unwrap();
    // 2 means no rainbow tree exists, which the oracle must confirm
    assert!(code == 0 || code == 2, "{}", String::from_utf8_lossy(&out.stderr));
    let plain: f64 = String::from_utf8(opt(&["mst", "--input", inst]).stdout).unwrap().trim().parse().unwrap();
    if code == 0 {
        let text = String::from_utf8(out.stdout).unwrap();
        let rainbow: f64 = text.lines().last().unwrap().parse().unwrap();
        assert!(rainbow >= plain - 1e-12);
    }
}

#[test]
fn tour_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    let diag = dir.path().join("d.json");
    let inst = inst.to_str().unwrap();
    assert!(opt(&["gen", "--n", "200", "--q", "240", "--seed", "5", "--out", inst]).status.success());
    let out = opt(&["tour-greedy", "--input", inst, "--diag", diag.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let d: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&diag).unwrap()).unwrap();
    assert_eq!(d["n"], 200);
}

#[test]
fn experiment_then_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let csv = csv.to_str().unwrap();
    let out = opt(&["experiment", "--kind", "mst-gap", "--n-grid", "20,30,40", "--seeds", "2", "--out", csv]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("# fit solver="));
    assert!(opt(&["rerun", "--csv", csv, "--row", "3"]).status.success());
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(opt(&["experiment", "--kind", "nope", "--out", "/dev/null"]).status.code(), Some(1));
    assert_eq!(opt(&["mst", "--input", "/nonexistent"]).status.code(), Some(1));
}
