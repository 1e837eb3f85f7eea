use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_salemforge"))
        .args(args)
        .env_remove("SALEMFORGE_CACHE")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn ratio(s: &str) -> (i128, i128) {
    match s.split_once('/') {
        Some((n, d)) => (n.parse().unwrap(), d.parse().unwrap()),
        None => (s.parse().unwrap(), 1),
    }
}

#[test]
fn poly_example() {
    let v = json(&["poly", "--d", "4", "--tuple", "2"]);
    assert_eq!(
        v,
        serde_json::json!({"coeffs": ["-1", "-2", "0", "-3", "1"]})
    );
    let csv = run(&["poly", "--d", "4", "--tuple", "2", "--format", "csv"]);
    assert_eq!(
        String::from_utf8(csv.stdout).unwrap(),
        "degree,coeff\n0,-1\n1,-2\n2,0\n3,-3\n4,1\n"
    );
}

#[test]
fn lambda_straddles_closed_form() {
    let v = json(&["lambda", "--d", "4", "--tuple", "", "--width", "1e-9"]);
    let (a, b) = ratio(v["lo"].as_str().unwrap());
    let (c, e) = ratio(v["hi"].as_str().unwrap());
    // (2x - 3)^2 < 13 at lo and > 13 at hi
    assert!((2 * a - 3 * b).pow(2) < 13 * b * b);
    assert!((2 * c - 3 * e).pow(2) > 13 * e * e);
    assert!(c * b - a * e <= b * e / 1_000_000_000);
    assert!(v["decimal"].as_str().unwrap().starts_with("3.302775637"));
}

#[test]
fn realize_passes() {
    let v = json(&["realize", "--d", "4", "--tuple", "2,3,4,5,6,7"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["groups"].as_array().unwrap().len(), 4);
    assert_eq!(v["kind"], "arithmetic reductions of geometric steps");
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        &["lambda", "--d", "3"][..],
        &["poly", "--d", "4", "--tuple", "2,x"],
        &["realize", "--d", "4", "--tuple", "2,3"],
        &["lambda", "--d", "4", "--width", "-1"],
        &[
            "spectrum", "--d", "4", "--m", "2", "--limit", "5", "--bound", "4",
        ],
        &["poly"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn spectrum_is_ordered_and_deterministic() {
    let args = ["spectrum", "--d", "4", "--m", "2", "--limit", "5"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let rows: Value = serde_json::from_slice(&first.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for w in rows.windows(2) {
        let (a, b) = ratio(w[0]["hi"].as_str().unwrap());
        let (c, d) = ratio(w[1]["lo"].as_str().unwrap());
        assert!(a * d < c * b, "intervals overlap");
    }
    let csv = run(&[
        "spectrum", "--d", "4", "--m", "2", "--limit", "5", "--format", "csv",
    ]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("d,tuple,lo,hi,inside,on,outside,label")
    );
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn alternate_reading_is_empty_above_level_two() {
    let out = run(&[
        "spectrum",
        "--d",
        "4",
        "--m",
        "3",
        "--limit",
        "1",
        "--bound",
        "10",
        "--reading",
        "decrement-last",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.jsonl");
    let p = path.to_str().unwrap();
    let classified = json(&["classify", "--d", "4", "--tuple", "2,3", "--cache", p]);
    assert_eq!(classified["label"], "pisot_like");
    json(&[
        "spectrum", "--d", "4", "--m", "2", "--limit", "3", "--cache", p,
    ]);

    // the environment variable names the same store
    let got = Command::new(env!("CARGO_BIN_EXE_salemforge"))
        .args(["cache", "get", "--d", "4", "--tuple", "2,3"])
        .env("SALEMFORGE_CACHE", p)
        .output()
        .unwrap();
    assert!(got.status.success());
    let row: Value = serde_json::from_slice(&got.stdout).unwrap();
    assert_eq!(row[0]["lo"], classified["lo"]);

    std::fs::write(
        &path,
        std::fs::read_to_string(&path).unwrap() + "{\"schema\":1,\"d\":4,",
    )
    .unwrap();
    let all = json(&["cache", "list", "--cache", p]);
    assert_eq!(all.as_array().unwrap().len(), 4);

    let missing = run(&["cache", "get", "--d", "5", "--tuple", "", "--cache", p]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn matrix_and_charpoly() {
    let m = json(&["matrix", "--d", "4", "--tuple", "2"]);
    assert_eq!(
        m["labels"],
        serde_json::json!(["L", "E(q1^0)", "E(q1^1)", "E(q2^0)", "E(q2^1)"])
    );
    assert_eq!(
        m["entries"][0],
        serde_json::json!(["4", "0", "3", "0", "1"])
    );
    let c = json(&["charpoly", "--d", "4", "--tuple", "2"]);
    // (X - 1)(X^4 - 3X^3 - 2X - 1)
    assert_eq!(
        c["coeffs"],
        serde_json::json!(["1", "1", "-2", "3", "-4", "1"])
    );
    assert_eq!(c["structure"]["char_poly_factors"], true);
    let w = json(&["weyl", "--d", "4", "--tuple", "2,3,4,5,6,7"]);
    assert_eq!(w["member"], true);
    assert_eq!(w["quadratic_steps"], 3);
    let census = json(&["census", "--d", "4", "--tuple", ""]);
    assert_eq!(
        census,
        serde_json::json!({"inside": 1, "on": 0, "outside": 1})
    );
}
