//! End-to-end tests of the `spectral-count` binary: exit-code contract,
//! output determinism, config round-trips, and the verify reporting paths.

use std::path::Path;
use std::process::{Command, Output};

use spectral_count::config::WegnerConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectral-count"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

const COUNT_CONFIG: &str = r#"{
  "matrix": { "dim": 3, "re": [[0.1, 0, 0], [0, 0.5, 0], [0, 0, 3.0]] },
  "eps": [0.2, 1.0, 4.0]
}"#;

const WEGNER_CONFIG: &str = r#"{
  "model": {
    "family": "anderson",
    "graph": { "vertices": 6, "edges": [[1,2],[2,3],[3,4],[4,5],[5,6]] },
    "block_size": 1,
    "coupling": 1.0,
    "energy": 0.0,
    "site_dist": { "kind": { "type": "uniform_interval" }, "regularity_alpha": 1.0,
                   "regularity_K": 0.5, "support_bound": 1.0 },
    "hopping": { "kind": "default" }
  },
  "eps": [0.5, 0.3],
  "m": [1],
  "trials": 300,
  "seed": 11
}"#;

#[test]
fn count_reports_window_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "count.json", COUNT_CONFIG);
    let out = bin().args(["count", "--config", &cfg]).output().unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["dim"], 3);
    let counts: Vec<u64> = summary["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [1, 2, 3]);
}

#[test]
fn count_writes_csv_and_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "count.json", COUNT_CONFIG);
    let out_path = dir.path().join("report.csv");
    let out = bin()
        .args(["count", "--config", &cfg, "--out", out_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv, "eps,count\n0.2,1\n1,2\n4,3\n");
    let json = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(serde_json::from_str::<serde_json::Value>(&json).is_ok());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();

    // nonexistent config file
    let out = bin()
        .args(["count", "--config", "/nonexistent/nope.json"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("/nonexistent/nope.json"));

    // invalid grid value
    let bad_eps = COUNT_CONFIG.replace("[0.2, 1.0, 4.0]", "[0.2, -1.0]");
    let cfg = write(dir.path(), "bad_eps.json", &bad_eps);
    let out = bin().args(["count", "--config", &cfg]).output().unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("eps"));

    // unknown key, reported with position info
    let unknown = COUNT_CONFIG.replace("\"eps\"", "\"epsilon\"");
    let cfg = write(dir.path(), "unknown.json", &unknown);
    let out = bin().args(["count", "--config", &cfg]).output().unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("epsilon"), "stderr: {}", stderr(&out));

    // matrix and matrix_path together
    let both = COUNT_CONFIG.replace(
        "\"matrix\":",
        "\"matrix_path\": \"x.json\", \"matrix\":",
    );
    let cfg = write(dir.path(), "both.json", &both);
    let out = bin().args(["count", "--config", &cfg]).output().unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("mutually exclusive"));
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().args(["count", "--no-such-flag"]).output().unwrap();
    assert_eq!(exit_code(&out), 2);
    let out = bin().args(["no-such-command"]).output().unwrap();
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn wegner_outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "wegner.json", WEGNER_CONFIG);
    for run in ["a", "b"] {
        let out_path = dir.path().join(run).join("sweep.json");
        std::fs::create_dir_all(out_path.parent().unwrap()).unwrap();
        let out = bin()
            .args(["wegner", "--config", &cfg, "--out", out_path.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    }
    for file in ["sweep.csv", "sweep.json"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
}

#[test]
fn seed_override_changes_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "wegner.json", WEGNER_CONFIG);
    let base = bin().args(["wegner", "--config", &cfg]).output().unwrap();
    let other = bin()
        .args(["wegner", "--config", &cfg, "--seed", "12"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&base), 0);
    assert_eq!(exit_code(&other), 0);
    assert_ne!(stdout(&base), stdout(&other));
}

#[test]
fn dump_config_round_trips_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "wegner.json", WEGNER_CONFIG);
    let out = bin()
        .args([
            "wegner", "--config", &cfg, "--seed", "99", "--trials", "123", "--dump-config",
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let dumped = stdout(&out);
    let parsed: WegnerConfig = serde_json::from_str(&dumped).unwrap();
    assert_eq!(parsed.seed, 99);
    assert_eq!(parsed.trials, 123);

    // feeding the dump back re-dumps identically
    let cfg2 = write(dir.path(), "dumped.json", &dumped);
    let out2 = bin()
        .args(["wegner", "--config", &cfg2, "--dump-config"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out2), 0);
    assert_eq!(stdout(&out2), dumped);
}

#[test]
fn witness_certificate_for_two_planted_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "witness.json",
        r#"{
          "matrix": { "dim": 4, "re": [[0.05,0,0,0],[0,0.05,0,0],[0,0,10,0],[0,0,0,10]] },
          "eps": 0.1,
          "m": 2
        }"#,
    );
    let out = bin().args(["witness", "--config", &cfg]).output().unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["alpha"], serde_json::json!([1, 2]));
    assert_eq!(cert["beta"], serde_json::json!([1, 2]));
    assert!((cert["K"].as_f64().unwrap() - 0.0625).abs() < 1e-15);
    // margin = (2/eps)^2 - (K/eps)^2 for the planted diagonal
    assert!((cert["margin"].as_f64().unwrap() - 399.609375).abs() < 1e-9);
}

#[test]
fn bogus_jobs_env_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "count.json", COUNT_CONFIG);
    let out = bin()
        .args(["count", "--config", &cfg])
        .env("SPECTRAL_COUNT_JOBS", "banana")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("SPECTRAL_COUNT_JOBS"));
}

#[test]
fn verify_small_run_passes_and_reports() {
    let out = bin()
        .args(["verify", "--trials", "4", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("properties passed"), "stdout: {text}");
    assert!(text.contains("seed 7"));
}

#[test]
fn fixture_failure_exits_1_with_replay_instructions() {
    let out = bin()
        .args(["verify", "--trials", "3", "--seed", "5", "--fixture-fail"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("fixture_forced_failure"), "stderr: {err}");
    assert!(err.contains("--seed 5"), "stderr: {err}");
}

#[test]
fn deterministic_model_yields_degenerate_rates() {
    // coupling 0: the sweep sees the same fixed matrix every trial, so every
    // cell's rate is exactly 0 or 1
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "det_model.json",
        &WEGNER_CONFIG
            .replace("\"coupling\": 1.0", "\"coupling\": 0.0")
            .replace("[0.5, 0.3]", "[3.0, 2.5, 2.0, 1e-6]")
            .replace("\"trials\": 300", "\"trials\": 50"),
    );
    let out = bin().args(["wegner", "--config", &cfg]).output().unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let p_hats: Vec<f64> = summary["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["p_hat"].as_f64().unwrap())
        .collect();
    assert_eq!(p_hats, [1.0, 1.0, 1.0, 0.0]);
}
