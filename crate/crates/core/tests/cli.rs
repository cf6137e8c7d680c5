//! End-to-end runs of the `dce` binary.

mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::scenario;
use serde_json::Value;

fn dce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dce")).args(args).output().expect("binary runs")
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    dce(&args)
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let idx = reader.headers().unwrap().iter().position(|h| h == name).unwrap();
    reader.records().map(|r| r.unwrap()[idx].parse().unwrap()).collect()
}

#[test]
fn static_boundary_writes_an_all_zero_spectrum() {
    let out = tempfile::tempdir().unwrap();
    let o = run("spectrum", &scenario("static_boundary"), out.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = out.path().join("spectrum.csv");
    let totals = column(&csv, "N_total");
    assert!(!totals.is_empty());
    for name in ["N_squeeze", "N_accel", "N_total"] {
        assert!(column(&csv, name).iter().all(|v| *v == 0.0));
    }
    assert!(column(&csv, "transverse_p").iter().all(|p| *p >= 1.0));
}

#[test]
fn resonant_summary_reports_the_closed_form() {
    let out = tempfile::tempdir().unwrap();
    let o = run("spectrum", &scenario("resonant_cavity"), out.path(), &["--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!out.path().join("spectrum.csv").exists());
    let summary = json(out.path().join("spectrum.json"));
    let resonant = &summary["validity"]["resonant"];
    let n1 = resonant["n1_spectral"].as_f64().unwrap();
    assert!((n1 - 2.5e-3).abs() / 2.5e-3 < 0.05, "N1 = {n1}");
    assert_eq!(resonant["weak_drive"], Value::Bool(true));
    assert_eq!(summary["validity"]["perturbative"], Value::Bool(true));
}

#[test]
fn format_flag_selects_files() {
    let out = tempfile::tempdir().unwrap();
    let o = run("statics", &scenario("casimir_statics"), out.path(), &["--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.path().join("statics.csv").exists());
    assert!(!out.path().join("statics.json").exists());
    assert_eq!(column(&out.path().join("statics.csv"), "length"), vec![0.5, 1.0, 2.0]);
}

#[test]
fn radiate_reports_both_energy_routes() {
    let out = tempfile::tempdir().unwrap();
    let o = run("radiate", &scenario("gaussian_mirror"), out.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = json(out.path().join("radiate.json"));
    let spectral = summary["energy_spectral"].as_f64().unwrap();
    let direct = summary["energy_time_domain"].as_f64().unwrap();
    assert!((spectral - direct).abs() / direct < 0.01);
    let two = summary["energy_two_sided"].as_f64().unwrap();
    assert!((two - 2.0 * direct).abs() / two < 0.01);
}

#[test]
fn outputs_are_deterministic_and_thread_independent() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run("spectrum", &scenario("gaussian_mirror"), a.path(), &[]).status.code(), Some(0));
    let o = run("spectrum", &scenario("gaussian_mirror"), b.path(), &["--threads", "1", "--seedless"]);
    assert_eq!(o.status.code(), Some(0));
    for f in ["spectrum.csv", "spectrum.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn summary_round_trips_as_a_config() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run("spectrum", &scenario("resonant_cavity"), a.path(), &[]).status.code(), Some(0));
    let summary = a.path().join("spectrum.json");
    assert_eq!(run("spectrum", &summary, b.path(), &[]).status.code(), Some(0));
    for f in ["spectrum.csv", "spectrum.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
}

fn write_config(dir: &Path, trajectory: Value) -> PathBuf {
    let config = serde_json::json!({
        "name": "probe",
        "geometry": { "kind": "interval_1d", "l0": 1.0 },
        "trajectory": trajectory,
        "computation": { "omega_max": 7.0, "modes": 4 }
    });
    let path = dir.join("probe.json");
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

#[test]
fn malformed_trajectory_file_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("motion.csv"), "t,eta,l\n0,0,1\n0.1,0,1\n0.25,0,1\n0.3,0,1\n0.4,0,1\n").unwrap();
    let config = write_config(dir.path(), serde_json::json!({ "csv": "motion.csv" }));
    let o = run("spectrum", &config, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 4"));
}

#[test]
fn unknown_fields_and_missing_files_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), serde_json::json!({ "csv": "absent.csv" }));
    assert_eq!(run("spectrum", &config, dir.path(), &[]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"name": "x", "geometry": {"kind": "interval_1d", "l0": 1.0}, "computation": {"modez": 3}}"#)
        .unwrap();
    assert_eq!(run("statics", &bad, dir.path(), &[]).status.code(), Some(2));
}

#[test]
fn coarse_grid_exits_with_guard_code() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        serde_json::json!({
            "profile": "harmonic_length", "epsilon": 1e-3, "omega1": std::f64::consts::PI,
            "duration": 10.0, "steps": 100
        }),
    );
    let o = run("spectrum", &config, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("minimal compliant grid"));
    assert!(!dir.path().join("spectrum.csv").exists());
}
