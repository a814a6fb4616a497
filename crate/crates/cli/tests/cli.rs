use std::f64::consts::PI;
use std::process::{Command, Output};

use finiteqm::io::{parse_convergence_csv, parse_spectrum_csv, parse_wavefunction_csv};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finiteqm"))
        .args(args)
        .env_remove("FINITEQM_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn two_site_segment_spectrum_matches() {
    let v = json(&[
        "spectrum", "--boundary", "nonperiodic", "--d", "2", "--check", "--format", "json",
    ]);
    let entries = v["data"]["spectrum"]["entries"].as_array().unwrap();
    let e: Vec<f64> = entries.iter().map(|e| e["energy"].as_f64().unwrap()).collect();
    assert_eq!(e.len(), 2);
    assert!((e[0] - PI * PI / 8.0).abs() < 1e-12);
    assert!((e[1] - 3.0 * PI * PI / 8.0).abs() < 1e-12);
    assert_eq!(v["data"]["check"]["pass"], Value::Bool(true));
    assert_eq!(v["data"]["numeric"]["entries"].as_array().unwrap().len(), 2);
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn ring_of_five_multiplicities() {
    let v = json(&["spectrum", "--boundary", "periodic", "--d", "5", "--format", "json"]);
    assert_eq!(v["meta"]["multiplicities"], serde_json::json!([1, 2, 2]));
}

#[test]
fn ring_of_six_check_passes_in_table_form() {
    let s = stdout(&["spectrum", "--boundary", "periodic", "--d", "6", "--check"]);
    assert!(s.contains("check: ok"), "{s}");
}

#[test]
fn single_site_is_usage_error() {
    let out = run(&["spectrum", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d must be at least 2"));
}

#[test]
fn a_and_length_conflict() {
    assert_eq!(run(&["spectrum", "--d", "4", "--a", "0.1", "--L", "2"]).status.code(), Some(2));
}

#[test]
fn spacing_from_length_follows_boundary() {
    let seg = json(&["spectrum", "--d", "5", "--L", "2", "--format", "json"]);
    assert_eq!(seg["meta"]["lattice"]["a"].as_f64().unwrap(), 0.5);
    let ring = json(&["spectrum", "--d", "5", "--L", "2", "--boundary", "periodic", "--format", "json"]);
    assert_eq!(ring["meta"]["lattice"]["a"].as_f64().unwrap(), 0.4);
}

#[test]
fn ring_ground_state_is_flat() {
    let s = stdout(&[
        "wavefunction", "--boundary", "periodic", "--d", "7", "--m", "0", "--format", "csv",
    ]);
    let samples = parse_wavefunction_csv(&s).unwrap();
    assert_eq!(samples.len(), 7);
    let a = 1.0f64 / 7.0;
    let want = (1.0 / (7.0 * a)).sqrt();
    for s in &samples {
        assert!((s.psi - want).abs() < 1e-14);
    }
}

#[test]
fn segment_wavefunction_values() {
    let s = stdout(&[
        "wavefunction", "--boundary", "nonperiodic", "--d", "3", "--a", "1", "--m", "1", "--format", "csv",
        "--no-header",
    ]);
    let samples = parse_wavefunction_csv(&s).unwrap();
    for (n, s) in samples.iter().enumerate() {
        let want = 0.5f64.sqrt() * ((1.0 + n as f64) * PI / 4.0).sin();
        assert!((s.psi - want).abs() < 1e-14);
    }
}

#[test]
fn wavefunction_out_of_range_and_missing_parity() {
    assert_eq!(run(&["wavefunction", "--d", "3", "--m", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["wavefunction", "--boundary", "periodic", "--d", "5", "--m", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["wavefunction", "--d", "5", "--m", "1", "--parity", "odd"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_all_on_segment_passes() {
    let s = stdout(&["verify", "--boundary", "nonperiodic", "--d", "8", "--suite", "all"]);
    assert!(!s.contains("FAIL"));
    assert!(s.contains("projection_lattice"));
}

#[test]
fn verify_weyl_at_two_sites() {
    let v = json(&[
        "verify", "--boundary", "periodic", "--d", "2", "--suite", "weyl", "--format", "json",
    ]);
    let checks = v["data"][0]["checks"].as_array().unwrap();
    let weyl = checks.iter().find(|c| c["name"] == "weyl_commutation").unwrap();
    assert_eq!(weyl["pass"], Value::Bool(true));
}

#[test]
fn verify_pauli_needs_two_sites() {
    assert_eq!(
        run(&["verify", "--boundary", "nonperiodic", "--d", "3", "--suite", "pauli"]).status.code(),
        Some(2)
    );
    let s = stdout(&["verify", "--d", "2", "--suite", "pauli", "--format", "csv"]);
    assert!(s.contains("product_table"));
    assert!(!s.contains(",false"));
}

#[test]
fn verify_suite_boundary_mismatch_is_usage_error() {
    assert_eq!(run(&["verify", "--d", "4", "--suite", "weyl"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--d", "4", "--boundary", "periodic", "--suite", "projections"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn impossible_tolerance_fails_verification() {
    // q = e^{2πi/5} is not exactly representable, so a zero tolerance must fail.
    let out = Command::new(env!("CARGO_BIN_EXE_finiteqm"))
        .args(["verify", "--boundary", "periodic", "--d", "5", "--suite", "weyl"])
        .env("FINITEQM_TOL", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let bad = Command::new(env!("CARGO_BIN_EXE_finiteqm"))
        .args(["verify", "--d", "5"])
        .env("FINITEQM_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn converge_segment_fit_near_one() {
    let s = stdout(&[
        "converge", "--boundary", "nonperiodic", "--m", "1", "--dsweep", "64,128,256,512,1024",
        "--format", "csv",
    ]);
    let c = parse_convergence_csv(&s).unwrap();
    assert_eq!(c.rows.len(), 5);
    let p: f64 = c.fit.parse().unwrap();
    assert!((0.9..1.1).contains(&p), "{p}");
}

#[test]
fn converge_ring_ground_state_is_exact() {
    let s = stdout(&[
        "converge", "--boundary", "periodic", "--m", "0", "--dsweep", "8,16,32,64", "--format",
        "csv",
    ]);
    let c = parse_convergence_csv(&s).unwrap();
    assert!(c.rows.iter().all(|r| r.4 == 0.0));
    assert_eq!(c.fit, "exact");
}

#[test]
fn converge_expansion_ratio_near_four() {
    let v = json(&[
        "converge", "--expansion", "--mode", "3", "--dsweep", "99,199,399,799", "--format", "json",
    ]);
    for r in v["data"]["ratios"].as_array().unwrap() {
        let r = r.as_f64().unwrap();
        assert!((r - 4.0).abs() < 0.8, "{r}");
    }
}

#[test]
fn converge_needs_four_points_to_fit() {
    assert_eq!(run(&["converge", "--m", "1", "--dsweep", "8,16,32"]).status.code(), Some(2));
    assert_eq!(
        run(&["converge", "--m", "1", "--dsweep", "8,16,32", "--no-fit"]).status.code(),
        Some(0)
    );
    assert_eq!(run(&["converge", "--m", "1", "--dsweep", "16,8,32,64"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["spectrum", "--boundary", "periodic", "--d", "9", "--check", "--vectors", "--format", "json"][..],
        &["spectrum", "--d", "9", "--vectors", "--format", "csv"][..],
        &["wavefunction", "--d", "12", "--m", "3"][..],
        &["verify", "--d", "6", "--format", "csv"][..],
        &["converge", "--boundary", "periodic", "--m", "2", "--dsweep", "8,16,32,64"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn no_header_drops_metadata() {
    let with = stdout(&["spectrum", "--d", "3", "--format", "csv"]);
    let without = stdout(&["spectrum", "--d", "3", "--format", "csv", "--no-header"]);
    assert!(with.starts_with('#'));
    assert!(without.starts_with("m,"));
    assert!(with.ends_with(&without));
    let v = json(&["spectrum", "--d", "3", "--format", "json", "--no-header"]);
    assert!(v.get("meta").is_none());
}

#[test]
fn csv_round_trip_preserves_energies() {
    let v = json(&["spectrum", "--boundary", "periodic", "--d", "11", "--format", "json"]);
    let s = stdout(&["spectrum", "--boundary", "periodic", "--d", "11", "--format", "csv"]);
    let rows = parse_spectrum_csv(&s).unwrap();
    let entries = v["data"]["spectrum"]["entries"].as_array().unwrap();
    assert_eq!(rows.len(), entries.len());
    for (r, e) in rows.iter().zip(entries) {
        assert_eq!(r.energy.to_bits(), e["energy"].as_f64().unwrap().to_bits());
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.csv");
    let args = ["spectrum", "--d", "7", "--format", "csv"];
    let direct = stdout(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert!(stdout(&with_file).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn operator_export_projection() {
    let v = json(&["operator", "--d", "3", "--name", "projection", "--n", "1"]);
    assert_eq!(v["dim"], 3);
    let diag: Vec<f64> = (0..3)
        .map(|i| v["entries"][i * 3 + i][0].as_f64().unwrap())
        .collect();
    assert_eq!(diag, vec![0.0, 1.0, 1.0]);
    let op = finiteqm::Operator::from_json(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(op.dim(), 3);
}

#[test]
fn operator_export_ring_hamiltonian() {
    let v = json(&["operator", "--d", "4", "--a", "1", "--boundary", "periodic", "--name", "hamiltonian"]);
    let h00 = v["entries"][0][0].as_f64().unwrap();
    assert!((h00 - PI * PI / 8.0).abs() < 1e-12);
    assert_eq!(
        run(&["operator", "--d", "4", "--name", "clock"]).status.code(),
        Some(2)
    );
}
