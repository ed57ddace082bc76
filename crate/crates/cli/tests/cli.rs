//! End-to-end runs of the compiled binary: artifact layout, determinism,
//! exit codes, and the generate → decompose → reconstruct → evaluate loop.

use std::path::Path;
use std::process::{Command, Output};

fn ldg(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldg"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn generate_writes_model_and_assumption_report_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let out = ldg(
        &["generate", "-n", "14", "--hidden", "1", "--seed", "7", "--out", "a"],
        dir.path(),
    );
    assert_ok(&out);
    let model_a = std::fs::read(dir.path().join("a/model.json")).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a/assumptions.json")).unwrap())
            .unwrap();
    assert!(report["hidden_child"]["holds"].as_bool().unwrap());

    let out = ldg(
        &["generate", "-n", "14", "--hidden", "1", "--seed", "7", "--out", "b"],
        dir.path(),
    );
    assert_ok(&out);
    let model_b = std::fs::read(dir.path().join("b/model.json")).unwrap();
    assert_eq!(model_a, model_b, "same seed must give byte-identical model files");
}

#[test]
fn infeasible_generation_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = ldg(&["generate", "-n", "6", "--hidden", "3", "--out", "."], dir.path());
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_arguments_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = ldg(&["estimate"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = ldg(&["simulate"], dir.path());
    assert_eq!(out.status.code(), Some(1), "simulate without model is a usage error");
    let out = ldg(&["evaluate", "--topology", "nope.json", "--ground-truth", "nope.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = ldg(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for cmd in ["generate", "simulate", "estimate", "decompose", "reconstruct", "evaluate", "bounds"] {
        assert!(text.contains(cmd), "help misses {cmd}");
    }
}

#[test]
fn exact_pipeline_recovers_generated_topology() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&ldg(
        &["generate", "-n", "14", "--hidden", "1", "--seed", "3", "--out", "."],
        dir.path(),
    ));
    assert_ok(&ldg(
        &[
            "decompose",
            "--model",
            "model.json",
            "--epsilon",
            "0.05",
            "--ground-truth",
            "--out",
            ".",
        ],
        dir.path(),
    ));
    for artifact in ["sweep.csv", "sweep_summary.json", "s_hat.csv", "l_hat.csv", "decomposition.json"]
    {
        assert!(dir.path().join(artifact).exists(), "missing {artifact}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("decomposition.json")).unwrap())
            .unwrap();
    assert!(summary["selected_t"].is_number(), "no t selected: {summary}");
    assert!(summary["converged"].as_bool().unwrap());

    assert_ok(&ldg(
        &["reconstruct", "--s-hat", "s_hat.csv", "--l-hat", "l_hat.csv", "--out", "topology.json"],
        dir.path(),
    ));
    let out = ldg(
        &["evaluate", "--topology", "topology.json", "--ground-truth", "model.json"],
        dir.path(),
    );
    assert_ok(&out);
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("metrics.json")).unwrap())
            .unwrap();
    assert!(
        metrics["exact_match"].as_bool().unwrap(),
        "pipeline did not reproduce the topology: {metrics}"
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("exact match"));
}

#[test]
fn simulate_and_estimate_produce_loadable_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&ldg(
        &["generate", "-n", "12", "--hidden", "1", "--seed", "1", "--out", "."],
        dir.path(),
    ));
    assert_ok(&ldg(
        &["simulate", "--model", "model.json", "-N", "3000", "--seed", "5", "--out", "series.csv"],
        dir.path(),
    ));
    let first = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert_eq!(first.lines().count(), 3000);
    assert_ok(&ldg(
        &[
            "estimate",
            "--series",
            "series.csv",
            "-p",
            "6",
            "--freq",
            "1.1780972450961724",
            "--out",
            "estimate.json",
        ],
        dir.path(),
    ));
    let bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("estimate.json")).unwrap())
            .unwrap();
    assert_eq!(bundle["p"], 6);
    assert_eq!(bundle["N"], 3000);
    assert_eq!(bundle["psdm"].as_array().unwrap().len(), 1);
    // simulation is seeded: rerunning gives the same file
    assert_ok(&ldg(
        &["simulate", "--model", "model.json", "-N", "3000", "--seed", "5", "--out", "series2.csv"],
        dir.path(),
    ));
    assert_eq!(
        std::fs::read(dir.path().join("series.csv")).unwrap(),
        std::fs::read(dir.path().join("series2.csv")).unwrap()
    );
}

#[test]
fn bounds_reports_textbook_truncation_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = ldg(
        &["bounds", "--rho", "0.5", "--c1", "1.0", "--epsilon", "0.1", "-n", "4"],
        dir.path(),
    );
    assert_ok(&out);
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(report["truncation_order_at_eps"], 5);
    // the budget reserves half of epsilon for estimation noise, so its
    // truncation order is one step deeper
    assert_eq!(report["budget"]["p_min"], 6);
    assert!(report["budget"]["n_min"].as_u64().unwrap() > 6);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("pipeline.json"),
        r#"{"generator": {"n": 14, "n_h": 1}, "seed": 7, "out": "run"}"#,
    )
    .unwrap();
    assert_ok(&ldg(&["generate", "--config", "pipeline.json"], dir.path()));
    assert!(dir.path().join("run/model.json").exists());
    // flag overrides the config seed: different model
    assert_ok(&ldg(
        &["generate", "--config", "pipeline.json", "--seed", "8", "--out", "run2"],
        dir.path(),
    ));
    assert_ne!(
        std::fs::read(dir.path().join("run/model.json")).unwrap(),
        std::fs::read(dir.path().join("run2/model.json")).unwrap()
    );
    let out = ldg(&["generate", "--config", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
