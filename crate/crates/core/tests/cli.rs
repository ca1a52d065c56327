use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use quadmap::cli::Report;
use quadmap::ClassLabel;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quadmap"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Report {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    Report::from_json(&String::from_utf8(out.stdout.clone()).unwrap()).unwrap()
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/normal_forms")
}

#[test]
fn shipped_normal_forms_classify_to_themselves() {
    let mut labels = BTreeSet::new();
    for l in ClassLabel::ALL {
        let path = data_dir().join(format!("{l}.json"));
        let r = report(&run(&["classify", path.to_str().unwrap()]));
        assert_eq!(r.label, l);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.hint_matches, Some(true));
        labels.insert(r.label);
    }
    assert_eq!(labels.len(), 18);
}

#[test]
fn deltoid_map_is_e1() {
    let r = report(&run(&["classify", "--coeffs", "1,0,-1,2,0,0,0,2,0,0,-2,0"]));
    assert_eq!(r.label, ClassLabel::E1);
    assert_eq!(r.j1_description, "3-cusped curve");
}

#[test]
fn dp1_report_has_inverse() {
    let r = report(&run_stdin(&["classify"], r#"{"a20": 1, "a01": 1, "b10": 1}"#));
    assert_eq!(r.label, ClassLabel::DP1);
    // (x² + y, x)⁻¹ = (y, x − y²)
    let inv = r.inverse.expect("inverse").to_array();
    assert_eq!(inv, [0., 0., 0., 0., 1., 0., 0., 0., -1., 1., 0., 0.]);
}

#[test]
fn exact_mode_accepts_fractions() {
    let spec = r#"{"a20": 1, "a02": 1, "a10": 1, "b11": 1, "b10": "-1/2", "mode": "exact"}"#;
    let r = report(&run_stdin(&["classify"], spec));
    assert_eq!(r.label, ClassLabel::H2);
    let r = report(&run(&["--exact", "classify", "--coeffs", "1,0,1,1,0,0,0,1,0,1/3,0,0"]));
    assert_eq!(r.label, ClassLabel::H1);
}

#[test]
fn exit_codes_and_diagnostics() {
    let out = run_stdin(&["classify"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    let diag: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "parse");

    let out = run(&["classify", "--coeffs", "0,0,0,1,0,0,0,0,0,0,1,0"]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&["classify", "--coeffs", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["classify", "/nonexistent/map.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_agree_across_seeds() {
    let path = data_dir().join("H3.json");
    let reports: Vec<Report> =
        ["0", "1", "2"].iter().map(|s| report(&run(&["--seed", s, "classify", path.to_str().unwrap()]))).collect();
    for r in &reports[1..] {
        assert_eq!(r.label, reports[0].label);
        assert_eq!(r.profile, reports[0].profile);
        assert_ne!(r.seed, reports[0].seed);
    }
    let again = report(&run(&["--seed", "1", "classify", path.to_str().unwrap()]));
    assert_eq!(again, reports[1]);
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let e1 = dir.path().join("e1.svg");
    let out = run(&["plot", "--coeffs", "1,0,-1,1,0,0,0,1,0,0,0,0", "-o", e1.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&e1).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"stroke="red""#));

    let dp1 = dir.path().join("dp1.svg");
    let out = run(&["plot", "--coeffs", "1,0,0,0,1,0,0,0,0,1,0,0", "-o", dp1.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(!std::fs::read_to_string(&dp1).unwrap().contains("red"));

    let e2 = dir.path().join("e2.svg");
    let out = run(&[
        "plot", "--coeffs", "1,0,-1,0,0,0,0,1,0,0,0,0", "--center", "0.3,0.2", "-o", e2.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = run(&["plot", "--coeffs", "1,0,-1,1,0,0,0,1,0,0,0,0", "-o", "/nonexistent/dir/x.svg"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["plot", "--coeffs", "1,0,-1,1,0,0,0,1,0,0,0,0", "--radius", "0", "-o", e1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

fn scan_csv(threads: &str, extra: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let svg = dir.path().join("scan.svg");
    let mut args = vec!["scan", "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = bin().args(&args).env("RAYON_NUM_THREADS", threads).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<rect"));
    std::fs::read_to_string(&csv).unwrap()
}

#[test]
fn scan_is_deterministic_across_thread_counts() {
    let args = ["--coeffs", "1,0,1,0,0,0,0,1,0,0,0,0", "--dir1", "a10=1", "--dir2", "b10=1", "--resolution", "9"];
    let one = scan_csv("1", &args);
    assert_eq!(one, scan_csv("4", &args));
    let rows: Vec<&str> = one.lines().collect();
    assert_eq!(rows.len(), 10);
    // the origin cell is the base map
    assert_eq!(rows[5].split(',').nth(5), Some("H3"));
    assert!(one.contains("H1") && one.contains("H2"));
}

#[test]
fn scan_single_cell_and_zero_direction() {
    let csv = scan_csv("2", &["--coeffs", "1,0,-1,1,0,0,0,1,0,0,0,0", "--dir1", "a10=1", "--dir2", "b10=1", "--resolution", "1"]);
    assert_eq!(csv.lines().nth(1), Some("0,E1"));
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z.csv");
    let out = run(&[
        "scan", "--coeffs", "1,0,-1,1,0,0,0,1,0,0,0,0", "--dir1", "0,0,0,0,0,0,0,0,0,0,0,0", "--dir2", "b10=1",
        "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn selftest_single_criterion() {
    let out = run(&["selftest", "--criterion", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("criterion 1 PASS"));
}
