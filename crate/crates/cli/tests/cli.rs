use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const PI: &str = "3.141592653589793";

fn arcsum(args: &[&str]) -> Output {
    arcsum_env(args, &[])
}

fn arcsum_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_arcsum"));
    cmd.args(args).env_remove("ARC_SUM_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"))
}

/// Parses stdout and validates it against the shipped schema.
fn json_output(out: &Output, schema: &str) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path(schema)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
    value
}

fn value(v: &Value) -> f64 {
    v["value"].as_f64().unwrap_or_else(|| panic!("not applicable: {v}"))
}

#[test]
fn bounds_report_main_value() {
    let out = arcsum(&["bounds", "--n", "2", "--N", "3", "--delta", "0.2", "--phi", PI]);
    assert_eq!(code(&out), 0);
    let v = json_output(&out, "bounds");
    assert!((value(&v["main"]) - 1.0).abs() < 1e-9);
    assert_eq!(v["manifest"]["subcommand"], "bounds");
    assert_eq!(v["manifest"]["params"]["N"], 3);
}

#[test]
fn bounds_flag_inapplicable_entries() {
    let out = arcsum(&["bounds", "--n", "3", "--N", "7", "--delta", "0.1", "--phi", PI]);
    assert_eq!(code(&out), 0);
    let v = json_output(&out, "bounds");
    assert!(v["freiman"]["inapplicable"].is_string());
}

#[test]
fn bounds_exit_two_when_nothing_applies() {
    // δ beyond π is outside every bound's domain
    let out = arcsum(&["bounds", "--n", "1", "--N", "7", "--delta", "4.0", "--phi", "0.5"]);
    assert_eq!(code(&out), 2);
    json_output(&out, "bounds");
}

#[test]
fn sweep_emits_csv_curve() {
    let out = arcsum(&["bounds", "--n", "2", "--N", "3", "--phi", PI, "--sweep-delta", "0.01:0.5:0.01"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,N,delta,phi,bound_name,value"));
    let main: Vec<f64> = lines
        .filter(|l| l.split(',').nth(4) == Some("main"))
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert_eq!(main.len(), 50);
    // the bound decreases as the separation grows
    assert!(main.windows(2).all(|w| w[1] <= w[0] + 1e-15));
}

#[test]
fn sweep_json_validates() {
    let out = arcsum(&["bounds", "--format", "json", "--n", "1", "--N", "2", "--phi", "2", "--sweep-delta", "0.1:0.3:0.1"]);
    assert_eq!(code(&out), 0);
    let v = json_output(&out, "bounds-sweep");
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn degrees_match_radians() {
    let rad = arcsum(&["bounds", "--n", "2", "--N", "3", "--delta", "0.2", "--phi", PI]);
    let deg = arcsum(&["bounds", "--degrees", "--n", "2", "--N", "3", "--delta", &0.2f64.to_degrees().to_string(), "--phi", "180"]);
    let (rad, deg) = (json_output(&rad, "bounds"), json_output(&deg, "bounds"));
    assert!((value(&rad["main"]) - value(&deg["main"])).abs() < 1e-12);
    assert_eq!(deg["manifest"]["degrees"], true);
}

#[test]
fn extremal_then_check_has_zero_main_margin() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    let config = config.to_str().unwrap();
    let out = arcsum(&["extremal", "--n", "1", "--N", "2", "--delta", "0.5", "--phi", "2.0", "--out", config]);
    assert_eq!(code(&out), 0);
    let v = json_output(&out, "extremal");
    assert!((v["sum_magnitude"].as_f64().unwrap() - v["main_bound"].as_f64().unwrap()).abs() < 1e-12);
    assert!(dir.path().join("config.spec.json").exists());

    let out = arcsum(&["check", config, "--n", "1", "--delta", "0.5", "--phi", "2.0"]);
    assert_eq!(code(&out), 0);
    let v = json_output(&out, "check");
    assert_eq!(v["admissible"], true);
    assert_eq!(v["conformant"], true);
    let result = &v["results"][0];
    let margins = |part: &str| -> Vec<(String, f64)> {
        result[part]["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["name"].as_str().unwrap().to_string(), c["margin"].as_f64().unwrap()))
            .collect()
    };
    for (name, margin) in margins("stated").into_iter().chain(margins("derived")) {
        assert!(margin >= -1e-9, "{name}: {margin}");
    }
    let main = margins("stated").into_iter().find(|(n, _)| n == "main").unwrap().1;
    assert!(main.abs() < 1e-12);
}

#[test]
fn extremal_inapplicable_exits_two() {
    let out = arcsum(&["extremal", "--n", "2", "--N", "3", "--delta", "0.6", "--phi", "1.0"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn check_inadmissible_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(&config, r#"{"angles":[0.0,0.1]}"#).unwrap();
    let out = arcsum(&["check", config.to_str().unwrap(), "--n", "1", "--delta", "0.5", "--phi", "2.0"]);
    assert_eq!(code(&out), 2);
    let v = json_output(&out, "check");
    assert_eq!(v["admissible"], false);
    assert!(v["results"][0]["admissibility"]["witness_ii"].is_object());
}

#[test]
fn random_check_is_deterministic_per_seed() {
    let args = ["check", "--n", "2", "--delta", "0.3", "--phi", "1.5", "--N", "5", "--samples", "200", "--seed", "42"];
    let a = arcsum(&args);
    let b = arcsum(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json_output(&a, "check");
    assert_eq!(v["checked"], 200);
    assert_eq!(v["conformant"], true);
}

#[test]
fn optimize_is_deterministic_and_within_bound() {
    let args = ["optimize", "--n", "2", "--delta", "0.3", "--phi", "1.5", "--N", "5", "--seed", "7", "--iters", "200"];
    let a = arcsum(&args);
    let b = arcsum(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json_output(&a, "optimize");
    assert_eq!(v["admissible"], true);
    let start = v["start"]["sum_magnitude"].as_f64().unwrap();
    let end = v["result"]["sum_magnitude"].as_f64().unwrap();
    assert!(end >= start);
    assert!(v["margin"].as_f64().unwrap() >= -1e-9);

    let other = arcsum(&["optimize", "--n", "2", "--delta", "0.3", "--phi", "1.5", "--N", "5", "--seed", "8", "--iters", "200"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn oracle_reports_sqrt_two() {
    let out = arcsum(&["oracle", "--n", "1", "--N", "2", "--delta", "0.7853981633974483", "--phi", "1.5707963267948966", "--grid", "8"]);
    assert_eq!(code(&out), 0);
    let v = json_output(&out, "oracle");
    assert!((v["max_abs_sum"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn oracle_output_ignores_worker_count() {
    let args = ["oracle", "--n", "2", "--N", "5", "--delta", "0.4", "--phi", "1.6", "--grid", "16"];
    let one = arcsum_env(&args, &[("ARC_SUM_WORKERS", "1")]);
    let four = arcsum_env(&args, &[("ARC_SUM_WORKERS", "4")]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let bad = arcsum_env(&args, &[("ARC_SUM_WORKERS", "zero")]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn oracle_budget_exceeded_exits_two() {
    let out = arcsum(&["oracle", "--n", "3", "--N", "6", "--delta", "0.1", "--phi", "1.0", "--grid", "30", "--budget", "100"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn analyze_worked_case() {
    let out = arcsum(&["analyze", "--m", "4", "--set", "0,1", "--k", "2"]);
    assert_eq!(code(&out), 0);
    let v = json_output(&out, "analyze");
    assert_eq!(v["n0"], 2);
    assert_eq!(v["best_count"], 2);
}

#[test]
fn analyze_reads_json_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.json");
    std::fs::write(&input, r#"{"m": 10, "elements": [0, 2, 4, 6, 8]}"#).unwrap();
    let out = arcsum(&["analyze", "--input", input.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code(&out), 0);
    let v = json_output(&out, "analyze");
    assert_eq!((v["n0"].as_u64(), v["best_count"].as_u64()), (Some(3), Some(3)));
}

#[test]
fn analyze_csv_fields() {
    let out = arcsum(&["analyze", "--format", "csv", "--m", "4", "--set", "0,1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("field,value\n"));
    assert!(text.contains("\nn0,2\n"));
}

#[test]
fn replayed_manifest_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("run.json");
    let manifest = manifest.to_str().unwrap();
    let first = arcsum(&[
        "optimize", "--n", "3", "--delta", "0.15", "--phi", "1.2", "--N", "7", "--seed", "99", "--manifest-out", manifest,
    ]);
    assert_eq!(code(&first), 0);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(manifest).unwrap()).unwrap();
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path("manifest")).unwrap()).unwrap();
    assert!(jsonschema::is_valid(&schema, &m));
    assert_eq!(m["seed"], 99);
    let replay = arcsum(&["replay", manifest]);
    assert_eq!(code(&replay), 0);
    assert_eq!(first.stdout, replay.stdout);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&arcsum(&["bounds", "--n", "2"])), 1);
    assert_eq!(code(&arcsum(&["bounds", "--n", "2", "--N", "3", "--delta", "nan", "--phi", "1"])), 1);
    assert_eq!(code(&arcsum(&["frobnicate"])), 1);
    assert_eq!(code(&arcsum(&["check", "/nonexistent/config.json", "--n", "1", "--delta", "0.1", "--phi", "1"])), 1);
    assert_eq!(code(&arcsum(&["--help"])), 0);
}

#[test]
fn parameters_outside_domain_exit_two() {
    assert_eq!(code(&arcsum(&["check", "--n", "1", "--delta", "0.1", "--phi", "4", "--N", "2"])), 2);
    assert_eq!(code(&arcsum(&["analyze", "--m", "4", "--set", "0", "--k", "1"])), 2);
}
