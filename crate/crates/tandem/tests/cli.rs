//! End-to-end runs of the `tandem` binary: exit codes, JSON output shapes,
//! report files, and the output-directory environment variable.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tandem"))
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn stderr_error_code(out: &Output) -> i64 {
    let v: Value = serde_json::from_slice(&out.stderr).unwrap_or_else(|e| {
        panic!(
            "stderr is not a JSON error record ({e}): {}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    v["error"]["code"].as_i64().unwrap()
}

#[test]
fn validate_reports_instance_shape() {
    let out = bin().args(["validate", &data("toy2x2.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["components"], 5);
    assert_eq!(v["devices"], 2);
}

#[test]
fn missing_file_and_junk_get_distinct_exit_codes() {
    let out = bin().args(["validate", "no_such_file.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_error_code(&out), 3);

    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    let out = bin().args(["validate", junk.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_error_code(&out), 4);
}

#[test]
fn eval_prints_the_full_breakdown() {
    let out = bin()
        .args([
            "eval",
            &data("toy2x2.json"),
            "--mapping",
            &data("toy2x2_split_mapping.json"),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let total = v["total"].as_f64().unwrap();
    assert!((total - 9.75).abs() < 1e-9, "split mapping total: {total}");
    assert!(v["hw"]["pair_latencies"].as_array().unwrap().len() == 4);
}

#[test]
fn eval_selects_space_variants_by_alpha() {
    let out = bin()
        .args([
            "eval",
            &data("demo_space.json"),
            "--mapping",
            &data("toy2x2_split_mapping.json"),
            "--alpha",
            "hard",
        ])
        .output()
        .unwrap();
    // The split-mapping file names toy2x2 components, not variant components.
    assert_eq!(out.status.code(), Some(5));

    let out = bin()
        .args([
            "eval",
            &data("demo_space.json"),
            "--mapping",
            &data("toy2x2_split_mapping.json"),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5), "space eval requires --alpha");
}

#[test]
fn optimize_writes_the_report_quartet() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "optimize",
            &data("toy2x2.json"),
            "--method",
            "brute",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["objective"].as_f64().unwrap() - 7.05).abs() < 1e-9);
    assert_eq!(v["report_dir"].as_str().unwrap(), dir.path().to_str().unwrap());
    for name in ["solution.json", "trajectory.csv", "pairs.csv", "devices.csv"] {
        assert!(dir.path().join(name).is_file(), "missing {name}");
    }
    let solution: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("solution.json")).unwrap())
            .unwrap();
    assert_eq!(solution["result"]["method"], "brute");
}

#[test]
fn the_environment_variable_names_the_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["optimize", &data("toy2x2.json"), "--method", "anneal", "--seed", "3"])
        .env("TANDEM_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("solution.json").is_file());
}

#[test]
fn cosearch_picks_a_variant_and_respects_the_cap() {
    let out = bin()
        .args(["cosearch", &data("demo_space.json"), "--mode", "enumerate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["alpha_labels"].as_array().unwrap().len() == 1);

    let out = bin()
        .args(["cosearch", &data("demo_space.json"), "--cap", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(6));

    let out = bin().args(["cosearch", &data("toy2x2.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(6), "fixed problems have no space");
}

#[test]
fn sweep_emits_a_grid_and_rejects_negative_weights() {
    let out = bin()
        .args(["sweep", &data("toy2x2.json"), "--method", "brute", "--gamma1", "0,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("gamma1,gamma2,objective"), "{text}");
    assert_eq!(text.trim_end().lines().count(), 3, "header plus two rows");

    let out = bin()
        .args(["sweep", &data("toy2x2.json"), "--gamma1", "-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn bench_runs_all_requested_methods() {
    let dir = tempfile::tempdir().unwrap();
    let genspec = dir.path().join("small.json");
    std::fs::write(&genspec, r#"{"components": 5, "devices": 2}"#).unwrap();
    let out = bin()
        .args([
            "bench",
            "--genspec",
            genspec.to_str().unwrap(),
            "--count",
            "2",
            "--methods",
            "brute,anneal",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("instance,seed,method,objective"), "{text}");
    assert_eq!(text.trim_end().lines().count(), 5, "header plus 2x2 rows");
    assert!(dir.path().join("bench.csv").is_file());
    assert!(Path::new(&data("toy2x2.json")).is_file());
}

#[test]
fn usage_errors_exit_with_the_clap_code() {
    let out = bin().args(["eval", &data("toy2x2.json"), "--mapping"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["optimize"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
