use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use amou_ktheory::kernel::ComplexMatrix;
use amou_ktheory::{AlgebraSpec, Element};
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amou-k")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn write(dir: &TempDir, name: &str, e: &Element) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, e.to_json()).unwrap();
    path
}

fn m2(rows: &[&[f64]]) -> Element {
    let alg = AlgebraSpec::fd(&[2]).unwrap();
    Element::new(alg, 1, 1, vec![ComplexMatrix::from_real_rows(rows)]).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn identical_runs_give_identical_reports() {
    let args = ["check-axioms", "--algebra", "fd:1,2", "--trials", "10", "--seed", "42"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let other = run(&["check-axioms", "--algebra", "fd:1,2", "--trials", "10", "--seed", "43"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn malformed_input_exits_with_input_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["classify", "--element", s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["check-axioms", "--algebra", "fd:0"]).status.code(), Some(2));
    assert_eq!(run(&["check-axioms", "--algebra", "circle:1:3"]).status.code(), Some(2));
    assert_eq!(run(&["kgroup", "--which", "k7"]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["classify", "--element", s(&missing)]).status.code(), Some(2));
}

#[test]
fn shape_mismatch_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e.json", &m2(&[&[1.0, 0.0], &[0.0, 1.0]]));
    assert_eq!(run(&["classify", "--algebra", "fd:3", "--element", s(&e)]).status.code(), Some(2));
}

#[test]
fn classify_matrix_unit() {
    let dir = TempDir::new().unwrap();
    let e12 = write(&dir, "e12.json", &m2(&[&[0.0, 1.0], &[0.0, 0.0]]));
    let out = run(&["classify", "--element", s(&e12)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for flag in ["is_partial_isometry", "is_unitary", "is_order_projection"] {
        assert!(text.contains(flag), "{flag} missing from {text}");
    }
    let report = json(&out);
    let class = find(&report, "is_partial_isometry").unwrap();
    assert_eq!(class, &Value::Bool(true));
    assert_eq!(find(&report, "is_unitary").unwrap(), &Value::Bool(false));
}

#[test]
fn kgroup_reports_rank_and_order_unit() {
    let out = run(&["kgroup", "--algebra", "fd:2,3", "--which", "k0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(find(&report, "rank").unwrap(), &serde_json::json!(2));
    assert_eq!(find(&report, "order_unit").unwrap(), &serde_json::json!([2, 3]));
    let k1 = json(&run(&["kgroup", "--algebra", "circle:1:32", "--which", "k1"]));
    assert_eq!(find(&k1, "rank").unwrap(), &serde_json::json!(1));
    let trivial = json(&run(&["kgroup", "--algebra", "fd:5", "--which", "k1"]));
    assert_eq!(find(&trivial, "rank").unwrap(), &serde_json::json!(0));
}

#[test]
fn equiv_emits_certificates_and_decisions() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", &m2(&[&[1.0, 0.0], &[0.0, 0.0]]));
    let q = write(&dir, "q.json", &m2(&[&[0.0, 0.0], &[0.0, 1.0]]));
    let e = write(&dir, "e.json", &m2(&[&[1.0, 0.0], &[0.0, 1.0]]));
    let yes = run(&["equiv", "--relation", "mvn", "--u", s(&p), "--v", s(&q)]);
    assert_eq!(yes.status.code(), Some(0));
    let report = json(&yes);
    assert_eq!(find(&report, "equivalent").unwrap(), &Value::Bool(true));
    assert!(find(&report, "evidence").unwrap().get("v").is_some());
    let no = json(&run(&["equiv", "--relation", "mvn", "--u", s(&p), "--v", s(&e)]));
    assert_eq!(find(&no, "equivalent").unwrap(), &Value::Bool(false));
    let h = json(&run(&["equiv", "--relation", "h", "--u", s(&e), "--v", s(&e)]));
    assert_eq!(find(&h, "equivalent").unwrap(), &Value::Bool(true));
    // A projection that is not unitary is rejected by the unitary relations.
    assert_eq!(run(&["equiv", "--relation", "sim1", "--u", s(&p), "--v", s(&e)]).status.code(), Some(2));
}

#[test]
fn circle_windings_are_reported() {
    let dir = TempDir::new().unwrap();
    let alg = AlgebraSpec::circle(1, 32).unwrap();
    let power = |k: i32| {
        let parts = (0..32).map(|j| ComplexMatrix::from_complex_diag(&[alg.sample_point(j).unwrap().powi(k)])).collect();
        Element::new(alg.clone(), 1, 1, parts).unwrap()
    };
    let (z, one) = (write(&dir, "z.json", &power(1)), write(&dir, "one.json", &power(0)));
    let out = json(&run(&["equiv", "--algebra", "circle:1:32", "--relation", "sim1", "--u", s(&z), "--v", s(&one)]));
    assert_eq!(find(&out, "equivalent").unwrap(), &Value::Bool(false));
    assert_eq!(find(&out, "invariants").unwrap(), &serde_json::json!({"u": [1], "v": [0]}));
}

#[test]
fn theta_splits_a_projection_class() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("x.json");
    let e11 = m2(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let zero = m2(&[&[0.0, 0.0], &[0.0, 0.0]]);
    std::fs::write(&path, format!("{{\"plus\": {}, \"minus\": {}}}", e11.to_json(), zero.to_json())).unwrap();
    let out = run(&["theta", "--x", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(find(&report, "k0").unwrap()["normal_form"], serde_json::json!([1]));
    let k1 = &find(&report, "k1").unwrap()["normal_form"];
    assert!(k1.as_array().unwrap().iter().all(|x| x == 0), "{k1}");
}

#[test]
fn report_can_be_written_to_a_file_as_text() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.txt");
    let status = run(&["check-axioms", "--algebra", "fd:1", "--trials", "5", "--format", "text", "--out", s(&out)]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("check-axioms on fd:1: PASS"));
}

/// First value stored under `key` anywhere in the report.
fn find<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    match v {
        Value::Object(m) => m.get(key).or_else(|| m.values().find_map(|x| find(x, key))),
        Value::Array(xs) => xs.iter().find_map(|x| find(x, key)),
        _ => None,
    }
}
