use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn supergal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supergal"))
        .args(args)
        .output()
        .unwrap()
}

fn write_input(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const EXAMPLE1: &str = r#"{"p": 7, "n": 6, "roots": ["0","49","7","56","14","63","1","8","15"]}"#;

#[test]
fn analyze_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "ex1.json", EXAMPLE1);
    let out = |f: &str| dir.path().join(f).to_str().unwrap().to_string();
    let status = supergal(&[
        "analyze",
        &input,
        "--oracle",
        "--latex",
        &out("c.tex"),
        "--dot",
        &out("g.dot"),
        "--json",
        &out("r.json"),
    ]);
    assert_eq!(
        status.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );

    let report: Value = serde_json::from_str(&fs::read_to_string(out("r.json")).unwrap()).unwrap();
    assert_eq!(report["checks"]["conservation"], "PASS");
    assert_eq!(report["checks"]["rank_formula"], "PASS");
    assert_eq!(report["checks"]["oracle"], "PASS");
    assert_eq!(report["galois"]["curve_genus"], 19);
    assert_eq!(report["galois"]["toric_rank"], 7);
    assert_eq!(report["galois"]["abelian_genus_sum"], 12);
    assert_eq!(report["galois"]["inertia_K2_blocks"], 7);
    assert_eq!(report["input"]["leading_coefficient"], "1");
    assert_eq!(report["clusters"].as_array().unwrap().len(), 6);
    assert_eq!(report["dual_graph"]["num_edges"], 15);
    assert!(
        report["galois"]["twist_characters"]
            .as_array()
            .unwrap()
            .len()
            == 8
    );

    let tex = fs::read_to_string(out("c.tex")).unwrap();
    assert!(tex.starts_with("\\clusterpicture"));
    let dot = fs::read_to_string(out("g.dot")).unwrap();
    assert!(dot.contains("s1:1 g=1"));
    let orbits = fs::read_to_string(out("g.frobenius.dot")).unwrap();
    assert!(orbits.contains("fillcolor"));
}

#[test]
fn report_goes_to_stdout_without_json_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "ex1.json", EXAMPLE1);
    let out = supergal(&["analyze", &input]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["checks"]["oracle"], "SKIPPED");
}

#[test]
fn precondition_violations_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"p": 7, "n": 4, "roots": ["0","1","2"]}"#,
        r#"{"p": 7, "n": 6, "roots": ["0","1","1"]}"#,
        r#"{"p": 7, "n": 2, "roots": ["0","1"]}"#,
        r#"{"p": 7, "n": 6, "leading_coefficient": "0", "roots": ["0","1","2"]}"#,
        r#"{"p": 7, "n": 6, "roots": ["0","1/0","2"]}"#,
        r#"not json"#,
    ];
    for (k, body) in cases.iter().enumerate() {
        let input = write_input(dir.path(), &format!("bad{k}.json"), body);
        let out = supergal(&["analyze", &input]);
        assert_eq!(
            out.status.code(),
            Some(2),
            "case {k}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let out = supergal(&["analyze", "/nonexistent/input.json"]);
    assert_eq!(out.status.code(), Some(2));

    let input = write_input(dir.path(), "ex1.json", EXAMPLE1);
    let out = supergal(&["analyze", &input, "--max-roots", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rational_roots_and_leading_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let body =
        r#"{"p": 13, "n": 3, "leading_coefficient": "13/2", "roots": ["1/13","2/13","0","1"]}"#;
    let input = write_input(dir.path(), "q.json", body);
    let out = supergal(&["analyze", &input, "--oracle"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["checks"]["conservation"], "PASS");
    assert_eq!(report["galois"]["curve_genus"], 3);
}
