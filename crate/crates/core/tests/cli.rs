use std::fs;
use std::process::Command;

use grbetti::catalog::grassmannian;
use grbetti::dsl;
use grbetti::pipelines::{evaluate, Compactification, Mode, ModuliKey, S_PLANE_CUBICS};
use grbetti::IntPoly;
use serde_json::Value;

fn grbetti(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_grbetti"))
        .args(args)
        .output()
        .expect("spawn grbetti")
}

#[test]
fn table_json_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.json");
    let out = grbetti(&[
        "table",
        "--d",
        "3",
        "--compactification",
        "S",
        "--k",
        "2",
        "--n",
        "4..6",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let rows: Vec<Value> = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 3);
    for (row, n) in rows.iter().zip(4..) {
        let key = ModuliKey::new(2, n, 3, Compactification::S).unwrap();
        let p = evaluate(&key, Mode::Closed).unwrap();
        let expect: Vec<String> = p.poly().coeffs().iter().map(|c| c.to_string()).collect();
        let got: Vec<String> = row["q_coefficients"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(got, expect, "n = {n}");
        assert_eq!(row["dim"], Value::from(key.dim_expected()));
    }
}

#[test]
fn verify_writes_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = grbetti(&[
        "verify",
        "--suite",
        "duality,symmetry",
        "--grid",
        "k=1..2,n=k+1..6",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["failed"], Value::from(0));
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(report["passed"], Value::from(checks.len()));
    assert!(checks
        .iter()
        .all(|c| c["suite"] == "duality" || c["suite"] == "symmetry"));
}

#[test]
fn betti_trace_ends_at_result() {
    let out = grbetti(&[
        "betti",
        "--k",
        "2",
        "--n",
        "5",
        "--d",
        "3",
        "--compactification",
        "H",
        "--format",
        "json",
        "--trace",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let trace = v["trace"].as_array().unwrap();
    let labels: Vec<&str> = trace.iter().map(|t| t["label"].as_str().unwrap()).collect();
    assert_eq!(labels.len(), 8, "{labels:?}");
    assert_eq!(trace.last().unwrap()["cumulative"], v["q_coefficients"]);
}

#[test]
fn dsl_moduli_agree_with_pipelines() {
    for (text, key) in [
        ("S(Gr(2,5),3)", ModuliKey::new(2, 5, 3, Compactification::S)),
        ("H(Gr(3,5),3)", ModuliKey::new(3, 5, 3, Compactification::H)),
        ("M(Gr(1,6),2)", ModuliKey::new(1, 6, 2, Compactification::M)),
    ] {
        let key = key.unwrap();
        assert_eq!(
            dsl::eval_str(text).unwrap(),
            evaluate(&key, Mode::Pipeline).unwrap(),
            "{text}"
        );
    }
}

#[test]
fn hilbert_minus_simpson_for_p4() {
    // plane cubics over the planes of P^4, times the reduced P^1 fiber
    let diff = dsl::eval_str("H(Gr(1,5),3) - S(Gr(1,5),3)").unwrap();
    let expect =
        IntPoly::from_i64s(&S_PLANE_CUBICS) * grassmannian(3, 5).poly() * IntPoly::q_pow(1);
    assert_eq!(diff.poly(), &expect);
    assert_eq!(diff.dim(), Some(15));
}
