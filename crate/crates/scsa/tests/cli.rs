//! End-to-end checks of the binary: exit codes, output files, CSV ingestion.

use std::path::Path;
use std::process::{Command, Output};

fn scsa(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scsa"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

#[test]
fn spectrum_writes_expected_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = scsa(
        &[
            "spectrum", "--signal", "sech2", "--h", "0.1", "--lambda", "-0.5", "--M", "256",
            "--out", "run",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let spectrum = std::fs::read_to_string(dir.path().join("run/spectrum.csv")).unwrap();
    assert!(spectrum.starts_with("h,n,lambda_hn\n"));
    // h = 0.1 has ten bound states
    assert_eq!(spectrum.lines().count(), 11);
    let counts = std::fs::read_to_string(dir.path().join("run/counts.csv")).unwrap();
    let row = counts.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[2], "10");
    assert_eq!(fields[3], "3"); // N_{0.1, -0.5}
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"M": 257}"#).unwrap();
    let out = scsa(&["spectrum", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));

    std::fs::write(dir.path().join("unknown.json"), r#"{"mm": 256}"#).unwrap();
    let out = scsa(&["spectrum", "--config", "unknown.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_csv_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "x,y\n0.0,1.0\n0.1,oops\n").unwrap();
    let out = scsa(&["spectrum", "--input", "bad.csv", "--M", "64"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn csv_input_reconstructs_without_truth_columns() {
    let dir = tempfile::tempdir().unwrap();
    // write a sampled positive pulse, then analyze it back from disk
    let m = 64;
    let mut csv = String::from("x,y\n");
    for j in 0..m {
        let x = j as f64 * (10.0 / m as f64);
        let s = 1.0 / (x - 5.0f64).cosh();
        csv.push_str(&format!("{x},{}\n", s * s));
    }
    std::fs::write(dir.path().join("pulse.csv"), csv).unwrap();
    let out = scsa(
        &[
            "reconstruct", "--input", "pulse.csv", "--h", "0.5", "--lambda", "-0.2", "--M", "64",
            "--out", "run",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rec = std::fs::read_to_string(dir.path().join("run/recon_h0.5_lam-0.2_gam0.5.csv")).unwrap();
    // measured data: no ground-truth or error columns
    assert!(rec.starts_with("x,y_rec,in_window\n"));
    let summary = std::fs::read_to_string(dir.path().join("run/summary.csv")).unwrap();
    let row = summary.lines().nth(1).unwrap();
    assert!(row.ends_with(",,"), "no error stats expected, got {row}");
}

#[test]
fn sweep_needs_two_h_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = scsa(
        &["sweep", "--signal", "sech2", "--h", "0.1", "--M", "64"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_passes_on_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let out = scsa(
        &["validate", "--signal", "sech2", "--h", "0.2", "--M", "128"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn demo_emits_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = scsa(&["demo", "beat", "--out", "demo"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let entries: Vec<_> = std::fs::read_dir(dir.path().join("demo"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert!(entries.iter().any(|n| n.ends_with(".svg")), "{entries:?}");
    assert!(entries.iter().any(|n| n.ends_with(".csv")), "{entries:?}");
}
