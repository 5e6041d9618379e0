use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn framekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framekit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let p = path(dir, name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--output", &p]);
    let out = framekit(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn generate_mercedes_benz_reports_bounds() {
    let out = framekit(&["generate", "harmonic", "--dim", "2", "--count", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["vectors"].as_array().unwrap().len(), 3);
    let err = stderr(&out);
    let fields: Vec<&str> = err.split_whitespace().collect();
    assert_eq!(fields[0], "bounds");
    let lower: f64 = fields[1].parse().unwrap();
    let upper: f64 = fields[2].parse().unwrap();
    assert!((lower - 1.5).abs() < 1e-10 && (upper - 1.5).abs() < 1e-10, "{err}");
}

#[test]
fn generate_random_tight_is_tight_and_reproducible() {
    let args = ["generate", "random-tight", "--dim", "4", "--count", "12", "--seed", "1"];
    let a = framekit(&args);
    let b = framekit(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let err = stderr(&a);
    let ratio: f64 = err.split_whitespace().last().unwrap().parse().unwrap();
    assert!(ratio <= 1.0 + 1e-8, "{err}");
}

#[test]
fn random_tight_without_seed_is_a_usage_error() {
    let out = framekit(&["generate", "random-tight", "--dim", "4", "--count", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rip_of_orthonormal_and_mercedes_benz() {
    let dir = TempDir::new().unwrap();
    let ortho = generate(&dir, "ortho.json", &["orthonormal", "--dim", "5"]);
    let v = json(&framekit(&["rip", "--frame", &ortho, "-s", "3"]));
    assert_eq!(v["report"]["epsilon_hat"].as_f64().unwrap(), 0.0);

    let mb = generate(&dir, "mb.json", &["harmonic", "--dim", "2", "--count", "3"]);
    let v = json(&framekit(&["rip", "--frame", &mb, "-s", "2"]));
    let eps = v["report"]["epsilon_hat"].as_f64().unwrap();
    assert!((eps - 1.0).abs() < 1e-10, "{eps}");
    assert_eq!(v["report"]["outside_hypothesis"], true);
    assert_eq!(v["report"]["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn randomized_full_coverage_matches_exhaustive() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "h.json", &["harmonic", "--dim", "6", "--count", "10"]);
    let ex = json(&framekit(&["rip", "--frame", &f, "-s", "3"]));
    let rnd = json(&framekit(&["rip", "--frame", &f, "-s", "3", "--method", "randomized", "--samples", "1000", "--seed", "9"]));
    let (a, b) = (&ex["report"], &rnd["report"]);
    assert_eq!(a["epsilon_hat"].as_f64().unwrap().to_bits(), b["epsilon_hat"].as_f64().unwrap().to_bits());
    assert_eq!(a["witness"], b["witness"]);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "h.json", &["harmonic", "--dim", "8", "--count", "12"]);
    let args = ["rip", "--frame", f.as_str(), "-s", "3"];
    let a = framekit(&args);
    let b = framekit(&args);
    assert_eq!(a.stdout, b.stdout);
    let one = Command::new(env!("CARGO_BIN_EXE_framekit")).args(args).env("FRAMEKIT_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_framekit")).args(args).env("FRAMEKIT_THREADS", "4").output().unwrap();
    let (x, y) = (json(&one), json(&four));
    assert_eq!(x["report"], y["report"]);
    assert_eq!(x["report"], json(&a)["report"]);
    assert_eq!(x["config"]["threads"], "1");
}

#[test]
fn rejects_bad_thread_count() {
    let out = Command::new(env!("CARGO_BIN_EXE_framekit"))
        .args(["generate", "orthonormal", "--dim", "2"])
        .env("FRAMEKIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fusion_pipeline_with_saved_rip_report() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "h.json", &["harmonic", "--dim", "8", "--count", "10"]);
    let rip = path(&dir, "rip.json");
    let out = framekit(&["rip", "--frame", &f, "-s", "2", "--output", &rip]);
    assert_eq!(out.status.code(), Some(0));
    let out = framekit(&["fusion", "--frame", &f, "--block-size", "2", "--rip", &rip]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["report"]["holds"], true);
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn fusion_rejects_blocks_larger_than_s() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "h.json", &["harmonic", "--dim", "8", "--count", "10"]);
    let out = framekit(&["fusion", "--frame", &f, "--blocks", "0,1,2;3,4,5,6,7,8,9", "-s", "2"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn csv_output_has_header_and_rows() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "h.json", &["harmonic", "--dim", "8", "--count", "10"]);
    let out = framekit(&["fusion", "--frame", &f, "--block-size", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("block,indices"), "{text}");
    assert_eq!(lines.len(), 6);
}

#[test]
fn angles_from_partition() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "h.json", &["harmonic", "--dim", "12", "--count", "14"]);
    let out = framekit(&["angles", "--frame", &f, "--block-size", "2", "-s", "4"]);
    assert!(matches!(out.status.code(), Some(0 | 1)), "{}", stderr(&out));
    let v = json(&out);
    assert!(v["report"]["max_correlation"].as_f64().unwrap() <= v["report"]["correlation_bound"].as_f64().unwrap() + 1e-10);
}

#[test]
fn replace_writes_frame_with_orthonormal_blocks() {
    let dir = TempDir::new().unwrap();
    let f = generate(&dir, "ortho.json", &["orthonormal", "--dim", "6"]);
    let out_frame = path(&dir, "replaced.json");
    let out = framekit(&["replace", "--frame", &f, "--block-size", "2", "--k1", "2", "-s", "2", "--frame-out", &out_frame]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(Path::new(&out_frame).exists());
    let v = json(&out);
    assert_eq!(v["report"]["holds"], true);
}

#[test]
fn verify_all_default_passes() {
    let out = framekit(&["verify-all"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["report"]["passed"], true);
}

#[test]
fn verify_all_forced_epsilon_names_failing_clause() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "cfg.json");
    std::fs::write(&cfg, r#"{"force_epsilon": 0.9, "instances": 5, "blocks": 5, "round_trips": 5}"#).unwrap();
    let out = framekit(&["verify-all", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("failing clauses: replacement-bracket"), "{err}");
    assert_eq!(json(&out)["report"]["failing"], serde_json::json!(["replacement-bracket"]));
}

#[test]
fn verify_all_empty_config_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "cfg.json");
    std::fs::write(&cfg, "  \n").unwrap();
    let out = framekit(&["verify-all", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Usage"));
}

#[test]
fn missing_file_and_unknown_flag_are_usage_errors() {
    assert_eq!(framekit(&["rip", "--frame", "/nonexistent.json", "-s", "2"]).status.code(), Some(2));
    assert_eq!(framekit(&["rip", "--bogus"]).status.code(), Some(2));
}
