// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml")
}

fn digista(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digista"))
        .args(args)
        .arg("--config")
        .arg(config_path())
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn digista")
}

#[test]
fn reference_run_writes_deterministic_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["h2-ground-ref", "--set", "h2_reference.steps=[2]"];
    for dir in [&a, &b] {
        let out = digista(&args, dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let csv = fs::read_to_string(a.path().join("h2-ground-ref_M2.csv")).unwrap();
    assert!(csv.starts_with("m,F,E\n"));
    assert_eq!(csv, fs::read_to_string(b.path().join("h2-ground-ref_M2.csv")).unwrap());
    assert_eq!(csv.lines().count(), 4);

    let json_text = fs::read_to_string(a.path().join("h2-ground-ref_M2.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&json_text).unwrap();
    assert_eq!(json["steps"], 2);
    // Both files carry the shortest round-trip representation of the same f64.
    let last_e = csv.lines().last().unwrap().split(',').nth(2).unwrap();
    assert!(json_text.contains(&format!("\"final_energy\": {last_e},")));
    let e: f64 = last_e.parse().unwrap();
    assert!((json["final_energy"].as_f64().unwrap() - e).abs() <= 1e-12 * e.abs());

    let circuit = fs::read_to_string(a.path().join("h2-ground-ref_M2.circuit.txt")).unwrap();
    assert!(circuit.contains("CNOT A B"));
    assert!(a.path().join("h2-ground-ref_summary.json").exists());
}

#[test]
fn plot_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    fs::write(&csv, "M,F_final\n1,0.4\n2,0.8\n3,0.9\n").unwrap();
    let render = |name: &str| {
        let svg = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_digista"))
            .args(["plot", "--kind", "fidelity-vs-step", "--out"])
            .arg(&svg)
            .arg(&csv)
            .status()
            .unwrap();
        assert!(status.success());
        fs::read_to_string(svg).unwrap()
    };
    let first = render("a.svg");
    assert!(first.starts_with("<svg"));
    assert_eq!(first, render("b.svg"));
}

#[test]
fn missing_table_row_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = digista(&["h2-ground-ref", "--set", "h2_reference.r=0.123"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn bad_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = digista(&["bhz-ref", "--set", "bhz.grid_points=0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = digista(&["bhz-ref", "--set", "bhz.unknown=1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn convergence_csv_has_one_row_per_step_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = digista(
        &["sta-convergence", "--set", "sta_convergence.steps_max=5", "--set", "sta_convergence.full_time=0"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("sta-convergence.csv")).unwrap();
    assert!(csv.starts_with("M,F_final\n"));
    assert_eq!(csv.lines().count(), 6);
    assert!(!dir.path().join("sta-convergence_full.csv").exists());
}
