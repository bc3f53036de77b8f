use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const EX21: &str = r#"{"spec_version":1,"schur":{"kind":"constant","value":[1.0,0.0]},"jumps":[{"at":[0.0,0.0],"value":[0.0,0.0]}]}"#;
const DOUBLE_POLE: &str = r#"{"spec_version":1,"schur":{"kind":"constant","value":[1.0,0.0]},"blaschke":[{"zero":[0.5,0.0],"mult":2}],"undefined_poles":[[0.5,0.0]]}"#;
const SCHUR: &str = r#"{"spec_version":1,"schur":{"kind":"poly","coeffs":[[0.2,0.0],[0.0,0.5]]}}"#;

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_skappa"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("RAYON_NUM_THREADS", t);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn profile_jump_example() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "f.json", EX21);
    let out = run(&["--spec", spec.to_str().unwrap(), "--command", "profile", "--n-max", "5", "--seed", "7"], None);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    assert!(csv.starts_with("n,best_count,samples_used,witness\n"));
    assert!(!csv.contains('\r'));
    assert_eq!(column(&csv, "best_count"), ["0", "1", "1", "1", "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("plateau 1"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "f.json", DOUBLE_POLE);
    let args = ["--spec", spec.to_str().unwrap(), "--command", "profile", "--n-max", "4", "--seed", "11", "--budget", "60,5"];
    let one = run(&args, Some("1"));
    let many = run(&args, Some("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn classify_schur_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "s.json", SCHUR);
    let out_path = dir.path().join("report.csv");
    let out = run(
        &["--spec", spec.to_str().unwrap(), "--command", "classify", "--seed", "1", "--budget", "50,5", "--out", out_path.to_str().unwrap()],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_path).unwrap();
    assert_eq!(column(&csv, "kappa_hat"), ["0"]);
    assert_eq!(column(&csv, "n_hat"), ["0"]);
    assert_eq!(column(&csv, "n_min"), ["0"]);
}

#[test]
fn classify_structured() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "f.json", EX21);
    let out = run(&["--spec", spec.to_str().unwrap(), "--command", "classify", "--seed", "3", "--format", "structured"], None);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classification"]["kappa_hat"], 1);
    assert_eq!(v["n_min"]["n_hat"], 2);
    assert_eq!(v["n_min"]["exact"], false);
}

#[test]
fn verify_blaschke_passes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "b.json", DOUBLE_POLE);
    let out = run(&["--spec", spec.to_str().unwrap(), "--command", "verify-blaschke", "--seed", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(column(&stdout(&out), "pass"), ["true", "true", "true"]);
}

#[test]
fn verify_theta_on_schur_function() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "s.json", SCHUR);
    let out = run(&["--spec", spec.to_str().unwrap(), "--command", "verify-theta", "--n-max", "4", "--seed", "2"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(column(&stdout(&out), "pass"), ["true", "true", "true"]);
}

#[test]
fn witness_and_hindmarsh() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "f.json", EX21);
    let out = run(&["--spec", spec.to_str().unwrap(), "--command", "witness", "--seed", "5"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(column(&stdout(&out), "negative"), ["1"]);
    let out = run(&["--spec", spec.to_str().unwrap(), "--command", "hindmarsh", "--seed", "5", "--triples", "1000"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(column(&stdout(&out), "verdict"), ["violation"]);
}

#[test]
fn invalid_spec_names_clause() {
    let dir = tempfile::tempdir().unwrap();
    let bad = r#"{"spec_version":1,"schur":{"kind":"constant","value":[1.0,0.0]},"blaschke":[{"zero":[0.5,0.0],"mult":1}]}"#;
    let spec = write_spec(dir.path(), "bad.json", bad);
    let out = run(&["--spec", spec.to_str().unwrap(), "--command", "profile", "--seed", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("clause 2"));
}

#[test]
fn seed_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "f.json", EX21);
    let out = run(&["--spec", spec.to_str().unwrap(), "--command", "profile"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_region_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "f.json", EX21);
    let out = run(&["--spec", spec.to_str().unwrap(), "--command", "profile", "--seed", "1", "--region", "disk,0,0"], None);
    assert_eq!(out.status.code(), Some(2));
}
