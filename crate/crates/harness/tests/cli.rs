use std::path::Path;
use std::process::{Command, Output};

use contraharmonic::io::{read_matrix, write_matrix};
use contraharmonic::ComplexMatrix;

fn cmean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmean")).args(args).output().expect("cmean runs")
}

fn write(dir: &Path, name: &str, rows: &[Vec<f64>]) -> String {
    let path = dir.join(name);
    write_matrix(&path, &ComplexMatrix::from_real_rows(rows).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn compute_scalar_contraharmonic() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &[vec![1.0]]);
    let b = write(dir.path(), "b.json", &[vec![3.0]]);
    let out = dir.path().join("c.json");
    let status = cmean(&["compute", "--nu", "0.5", "--a", &a, "--b", &b, "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    let c = read_matrix(&out).unwrap().unwrap();
    assert!((c[(0, 0)].re - 2.5).abs() < 1e-12);

    let stdout = cmean(&["compute", "--mean", "harmonic", "--nu", "0.5", "--a", &a, "--b", &b]);
    assert_eq!(stdout.status.code(), Some(0));
    let h = contraharmonic::io::parse_matrix(&String::from_utf8(stdout.stdout).unwrap()).unwrap();
    assert!((h[(0, 0)].re - 1.5).abs() < 1e-12);
}

#[test]
fn compute_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &[vec![1.0, 2.0], vec![0.0, 1.0]]);
    let b = write(dir.path(), "b.json", &[vec![1.0, 0.0], vec![0.0, 1.0]]);
    assert_eq!(cmean(&["compute", "--nu", "0.5", "--a", &a, "--b", &b]).status.code(), Some(2));
    assert_eq!(cmean(&["compute", "--nu", "1.5", "--a", &b, "--b", &b]).status.code(), Some(2));
    let missing = dir.path().join("nope.json");
    assert_eq!(
        cmean(&["compute", "--nu", "0.5", "--a", missing.to_str().unwrap(), "--b", &b]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_reports_every_property() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &[vec![2.0, 0.5], vec![0.5, 1.0]]);
    let b = write(dir.path(), "b.json", &[vec![3.0, -1.0], vec![-1.0, 4.0]]);
    let z = write(dir.path(), "z.json", &[vec![1.0, 2.0], vec![0.0, 1.0]]);
    let out = cmean(&["verify", "--all", "--nu", "0.3", "--a", &a, "--b", &b, "--z", &z]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().count(), 17);
    assert!(text.lines().any(|l| l.starts_with("CONVEXITY_MIX") && l.ends_with("SKIP (missing input)")));
    assert!(text.lines().any(|l| l.starts_with("CONGRUENCE") && l.ends_with("PASS")));
    assert_eq!(text.matches("PASS").count(), 16);
}

#[test]
fn fuzz_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for (i, format) in ["csv", "csv", "json"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.{format}"));
        let out = cmean(&[
            "fuzz", "--dims", "1..3", "--trials", "5", "--seed", "7", "--format", format, "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        reports.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let csv = String::from_utf8(reports[0].clone()).unwrap();
    assert_eq!(csv.lines().next(), Some("trial,dim,property,nu,mu,lambda,margin,pass"));
    assert_eq!(csv.lines().count(), 1 + 3 * 5 * 17);
    let json: serde_json::Value = serde_json::from_slice(&reports[2]).unwrap();
    assert_eq!(json["summary"]["trials"], 3 * 5 * 17);
}

#[test]
fn fuzz_and_usage_exit_codes() {
    assert_eq!(cmean(&["fuzz", "--dims", "0..2"]).status.code(), Some(2));
    assert_eq!(cmean(&["fuzz", "--dims", "1..17"]).status.code(), Some(2));
    assert_eq!(cmean(&["bogus"]).status.code(), Some(2));
    assert_eq!(cmean(&["--help"]).status.code(), Some(0));
    // An impossible tolerance turns rounding noise into violations.
    let out = cmean(&["fuzz", "--dims", "2..2", "--trials", "3", "--property", "SYMMETRY", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let out = cmean(&["selftest", "--pairs", "200"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
}
