use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const ONE_MINUS_X: &str = r#"{"ring":"laurent","ranks":[1,1],"diffs":[[["1 - x"]]]}"#;
const TIMES_X: &str = r#"{"ring":"laurent","ranks":[1,1],"diffs":[[["x"]]]}"#;
const D0: &str = r#"{"ring":"laurent","ranks":[2,3,1],"diffs":[[["1","0","2"],["0","1","3"]],[["2"],["3"],["-1"]]]}"#;

fn findom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_findom"))
        .args(args)
        .env_remove("FINDOM_COEFF")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn khat_is_strongly_graded() {
    let o = findom(&["check-strongly-graded", "--ring", "khat"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("strongly graded"), "{s}");
    assert!(s.contains("type (1,0)"));
}

#[test]
fn polycone_is_not() {
    let o = findom(&["check-strongly-graded", "--ring", "polycone"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cech_kernel_at_k1() {
    let o = findom(&["cech-exactness", "--k", "1", "--window", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kernel dimension 9"));
}

#[test]
fn four_fold_example_has_eight_certificates() {
    let o = findom(&["example-paper-s2", "--cutoff", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches(" ok ").count(), 8);
}

#[test]
fn one_minus_x_is_rejected() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "c.json", ONE_MINUS_X);
    let o = findom(&["--json", "dominate", "--complex", &p, "--window", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "not finitely dominated (heuristic)");
    assert_eq!(v["all_certified"], false);
}

#[test]
fn multiplication_by_x_is_dominated() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "c.json", TIMES_X);
    let o = findom(&["dominate", "--complex", &p, "--window", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: finitely dominated"));
}

#[test]
fn verify_single_region() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "c.json", ONE_MINUS_X);
    let o = findom(&["verify-novikov", "--complex", &p, "--region", "nov-x,nov-xinv"]);
    assert_eq!(o.status.code(), Some(0));
    let o = findom(&["verify-novikov", "--complex", &p, "--region", "nov-y"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("degree (9,0)"));
}

#[test]
fn malformed_json_reports_location() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "bad.json", "{\"ring\": \"laurent\",\n \"ranks\": [1,}");
    let o = findom(&["dominate", "--complex", &p]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn missing_file_is_an_error() {
    let o = findom(&["homology", "--complex", "/nonexistent/c.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_arguments_are_usage_errors() {
    let o = findom(&["cech-exactness", "--k", "-1"]);
    assert_ne!(o.status.code(), Some(0));
    let o = findom(&["check-strongly-graded", "--ring", "nonsense"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn coefficient_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_findom"))
        .args(["--json", "check-strongly-graded", "--ring", "laurent"])
        .env("FINDOM_COEFF", "q")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(serde_json::from_str::<serde_json::Value>(&s).is_ok());
    let o = Command::new(env!("CARGO_BIN_EXE_findom"))
        .args(["check-strongly-graded", "--ring", "laurent"])
        .env("FINDOM_COEFF", "zp:4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "c.json", ONE_MINUS_X);
    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    findom(&["--report", r1.to_str().unwrap(), "dominate", "--complex", &p, "--window", "3"]);
    findom(&["--sequential", "--report", r2.to_str().unwrap(), "dominate", "--complex", &p, "--window", "3"]);
    let a = fs::read(&r1).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, fs::read(&r2).unwrap());
}

#[test]
fn homology_of_d0_vanishes() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "d0.json", D0);
    let o = findom(&["--json", "homology", "--complex", &p, "--window", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object() || v.is_array());
}

#[test]
fn degree_zero_torus_certificates() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "d0.json", D0);
    let o = findom(&["build-torus", "--complex", &p, "--cutoff", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches(" ok ").count(), 8);
}

#[test]
fn xi_for_one_face() {
    let o = findom(&["xi-check", "--face", "e_l", "--window", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("e_l: exact"));
}
