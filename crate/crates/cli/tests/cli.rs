use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn secant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secant"))
        .args(args)
        .output()
        .expect("spawn secant")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad stdout ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn witness(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["witness", "--out", path.to_str().unwrap()];
    all.extend_from_slice(args);
    let out = secant(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn matmul_bound() {
    let dir = TempDir::new().unwrap();
    let mm = witness(dir.path(), "mm.json", &["--kind", "matmul", "--matmul", "2,2,2"]);
    let out = secant(&["bound", "--tensor", mm.to_str().unwrap(), "--method", "strassen"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!(cert["lower_bound"], 6);
    assert_eq!(cert["rank"], 4);
    assert_eq!(cert["b"], 4);
    let out = secant(&["bound", "--tensor", mm.to_str().unwrap(), "--expect", "7"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kfold_perm_is_one_based() {
    let dir = TempDir::new().unwrap();
    let mm = witness(dir.path(), "mm.json", &["--kind", "matmul", "--matmul", "2,2,2"]);
    let t = mm.to_str().unwrap();
    let out = secant(&[
        "bound", "--tensor", t, "--method", "kfold", "--k", "3", "--perm", "2,3,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["perm"], serde_json::json!([2, 3, 1]));
    let out = secant(&[
        "bound", "--tensor", t, "--method", "kfold", "--k", "3", "--perm", "1,2,3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = secant(&[
        "bound", "--tensor", t, "--method", "kfold", "--k", "3", "--perm", "0,1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn membership_exit_codes() {
    let dir = TempDir::new().unwrap();
    let r3 = witness(
        dir.path(),
        "r3.json",
        &["--dims", "4,4,4", "--rank", "3", "--seed", "2"],
    );
    let g = witness(dir.path(), "g.json", &["--dims", "3,3,3", "--rank", "8", "--seed", "2"]);
    let out = secant(&["membership", "--target", "sigma3", "--tensor", r3.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outcome"], "member");
    let out = secant(&["membership", "--target", "sigma3", "--tensor", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["outcome"], "not-member");
    let out = secant(&[
        "membership",
        "--target",
        "comm",
        "--r",
        "3",
        "--tensor",
        r3.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outcome"], "consistent");
    let out = secant(&["membership", "--target", "comm", "--tensor", r3.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sigma4_scope() {
    let dir = TempDir::new().unwrap();
    let w = witness(dir.path(), "w.json", &["--dims", "4,4,4", "--rank", "4", "--seed", "1"]);
    let out = secant(&["membership", "--target", "sigma4", "--tensor", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outcome"], "consistent");
    assert!(v["reasons"].as_array().unwrap().iter().any(|r| r["test"] == "scope"));
}

#[test]
fn coercive_on_rational_tensor() {
    let dir = TempDir::new().unwrap();
    let w = witness(
        dir.path(),
        "w.json",
        &["--dims", "3,4,4", "--rank", "4", "--field", "Q"],
    );
    let g = witness(
        dir.path(),
        "g.json",
        &["--dims", "3,4,4", "--rank", "9", "--field", "Q"],
    );
    let out = secant(&[
        "coercive",
        "--tensor",
        w.to_str().unwrap(),
        "--r",
        "4",
        "--s",
        "1",
        "--trials",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        (v["verdict"].as_str(), v["field"].as_str()),
        (Some("consistent"), Some("Q"))
    );
    let out = secant(&[
        "coercive",
        "--tensor",
        g.to_str().unwrap(),
        "--r",
        "4",
        "--s",
        "1",
        "--trials",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["false_accept_bound"], "0");
}

#[test]
fn template_check_variants() {
    let out = secant(&["template-check", "--builtin", "strassen", "--r", "4", "--s", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["coercive"], true);
    let out = secant(&[
        "template-check",
        "--sizes",
        "1,1,1",
        "--groups",
        "12,23",
        "--pair",
        "1,3",
        "--r",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["counterexample"].is_array());
    let out = secant(&["template-check", "--builtin", "sextuple", "--r", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = secant(&["verify", "--suite", "t-table", "--smax", "5", "--tmax", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["table"].as_array().unwrap().len(), 3 * 4);
    assert_eq!(v["boundary_1_1"], "0");
    let out = secant(&["verify", "--suite", "decomp", "--pmax", "3", "--nmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = secant(&[
        "verify",
        "--suite",
        "strassen-poly-oracle",
        "--trials",
        "3",
        "--field",
        "Q",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["sign"], 1);
}

#[test]
fn theta_oracle_reports_disagreement() {
    let out = secant(&["verify", "--suite", "theta-oracle"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let rows = v["comparison"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["theta"], "0");
    assert_eq!(rows[1]["oracle"], "4");
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\"format\": \"tensor3/v1\", \"field\": \"Q\", \"dims\": [2,2,2], \"entries\": [[0,0,5,1]]}",
    )
    .unwrap();
    let out = secant(&["bound", "--tensor", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("entries[0]"));
    assert_eq!(secant(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        secant(&["witness", "--dims", "3,3", "--rank", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        secant(&["witness", "--rank", "2", "--dims", "3,3,3", "--modulus", "12"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn replay_detects_tampering() {
    let dir = TempDir::new().unwrap();
    let g = witness(dir.path(), "g.json", &["--dims", "3,3,3", "--rank", "9", "--seed", "4"]);
    let cert = dir.path().join("v.json");
    let out = secant(&[
        "membership",
        "--target",
        "sigma4",
        "--tensor",
        g.to_str().unwrap(),
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = secant(&[
        "replay",
        "--certificate",
        cert.to_str().unwrap(),
        "--tensor",
        g.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["evidence"][0]["value"] = "12345".into();
    std::fs::write(&cert, v.to_string()).unwrap();
    let out = secant(&[
        "replay",
        "--certificate",
        cert.to_str().unwrap(),
        "--tensor",
        g.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["matches"], false);
}
