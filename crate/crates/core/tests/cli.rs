use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvmass")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

#[test]
fn polarized_mass_of_de_sitter_vanishes() {
    let o = run(&["polarized", "--lambda", "3", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["total"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn one_harmonic_recovers_sds_parameter() {
    let o = run(&["one-harmonic", "--profile", "sds", "--m", "0.1", "--lambda", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((json(&o)["mass"].as_f64().unwrap() - 0.1).abs() < 1e-9);
}

#[test]
fn coefficient_csv_is_scientific() {
    let o = run(&["coeffs", "--lambda", "0.3", "--p", "1.5", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,t,alpha,mu,lambda,exp_lambda"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').all(|f| f.contains('e'))));
}

#[test]
fn config_file_errors_are_collected() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "lambda = abc\nsamples = 1\nwhatever = 2").unwrap();
    let o = run(&["mass", "--config", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    for needle in ["lambda", "samples", "whatever"] {
        assert!(err.contains(needle), "missing {needle} in {err}");
    }
}

#[test]
fn verify_single_check_and_unknown_id() {
    let ok = run(&["verify", "--check", "hawking-anchors"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("hawking-anchors"));
    let bad = run(&["verify", "--check", "no-such-check"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8(bad.stderr).unwrap().contains("flux-identity"));
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.svg");
    let o = run(&["plot", "--kind", "mass", "--lambda", "0.3", "--p", "2", "--profile", "constant-curvature", "--a", "0.2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(path).unwrap().starts_with("<svg"));
}
