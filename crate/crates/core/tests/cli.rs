//! The `dinls` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL: &str = r#"
[grid]
R = 20.0
n = 64

[time]
T = 1.0
dt = 0.01
sample_stride = 5
snapshot_stride = 20

[groundstate]
R = 20.0
n = 400
"#;

fn dinls(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dinls"))
        .current_dir(dir)
        .env_remove("DINLS_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn workspace(config: &str) -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("run.toml"), config).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn simulate_writes_three_artifacts() {
    let dir = workspace(SMALL);
    let out = dinls(dir.path(), &["--config", "run.toml", "--out", "res", "simulate"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for name in ["trajectory.csv", "summary.json", "identities.json"] {
        assert!(dir.path().join("res").join(name).is_file(), "missing {name}");
    }
    let csv = fs::read_to_string(dir.path().join("res/trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,mass,quadform,potential,energy,action_I,A_t"));
    assert_eq!(lines.count(), 21);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("res/summary.json")).unwrap()).unwrap();
    assert!(summary.get("verdict").is_some());
    assert_eq!(summary["config"]["grid"]["n"], 64);
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = workspace(SMALL);
    let out = Command::new(env!("CARGO_BIN_EXE_dinls"))
        .current_dir(dir.path())
        .env("DINLS_OUT_DIR", "from_env")
        .args(["--config", "run.toml", "simulate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.path().join("from_env/trajectory.csv").is_file());
}

#[test]
fn invalid_parameters_are_reported_by_field() {
    let dir = workspace("[model]\nb = 2.5\nlambda = -0.5\n");
    let out = dinls(dir.path(), &["--config", "run.toml", "simulate"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("model.b"), "{err}");
    assert!(err.contains("model.lambda"), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = workspace("[grid]\ncells = 10\n");
    let out = dinls(dir.path(), &["--config", "run.toml", "simulate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cells"));
}

#[test]
fn groundstate_is_deterministic() {
    let dir = workspace(SMALL);
    let a = dinls(dir.path(), &["--config", "run.toml", "--out", "a", "groundstate"]);
    let b = dinls(
        dir.path(),
        &["--config", "run.toml", "--out", "b", "--workers", "1", "groundstate"],
    );
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(b.status.code(), Some(0), "{}", stderr(&b));
    for name in ["groundstate.json", "groundstate.csv"] {
        let x = fs::read(dir.path().join("a").join(name)).unwrap();
        let y = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between runs");
    }
}

#[test]
fn groundstate_refuses_powers_outside_the_inequality_range() {
    let dir = workspace("[model]\np = 6.0\n");
    let out = dinls(dir.path(), &["--config", "run.toml", "groundstate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Gagliardo-Nirenberg"), "{}", stderr(&out));
}

#[test]
fn verify_hardy_passes_and_is_seeded() {
    let dir = workspace(&format!("{SMALL}\n[verify]\nhardy_samples = 10\nhardy_n = 1024\n"));
    let a = dinls(
        dir.path(),
        &[
            "--config", "run.toml", "--out", "a", "--seed", "3", "verify", "--suite", "hardy",
        ],
    );
    let b = dinls(
        dir.path(),
        &[
            "--config", "run.toml", "--out", "b", "--seed", "3", "verify", "--suite", "hardy",
        ],
    );
    assert_eq!(a.status.code(), Some(0), "{}{}", stdout(&a), stderr(&a));
    assert_eq!(b.status.code(), Some(0));
    assert!(stdout(&a).lines().all(|l| l.starts_with("PASS")), "{}", stdout(&a));
    assert_eq!(
        fs::read(dir.path().join("a/verify.json")).unwrap(),
        fs::read(dir.path().join("b/verify.json")).unwrap()
    );
}

#[test]
fn broken_time_step_fails_with_an_order_report() {
    let dir = workspace("[time]\ndt = 0.5\n");
    let out = dinls(dir.path(), &["--config", "run.toml", "verify", "--suite", "identities"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    let detail = &report["checks"][0]["detail"];
    assert_eq!(detail["dts"].as_array().unwrap().len(), 3);
    assert!(detail["energy_order"]["order"].as_f64().is_some(), "{detail}");
}

#[test]
fn dispersive_scan_writes_csv_and_json() {
    let dir = workspace("[verify]\ndispersive_R = 200.0\ndispersive_n = 512\ndispersive_window = [2.0, 10.0]\n\n[scan]\nr_values = [3.0, 4.0]\n");
    let out = dinls(
        dir.path(),
        &["--config", "run.toml", "scan", "--kind", "dispersive-exponents"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("out/scan_dispersive_exponents.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(dir.path().join("out/scan_dispersive_exponents.json").is_file());
}

#[test]
fn unknown_scan_kind_is_a_usage_error() {
    let dir = workspace(SMALL);
    let out = dinls(dir.path(), &["scan", "--kind", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}
