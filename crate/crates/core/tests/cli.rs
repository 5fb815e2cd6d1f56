use std::fs;

use mimwave::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("mimwave").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn validate_bundled_specs() {
    for spec in ["@golden", "@cantor3"] {
        let (code, out, _) = call(&["validate", spec]);
        assert_eq!(code, 0, "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "ok");
        assert_eq!(v["spec_digest"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn malformed_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"N": 2, "A": [[1,1],[1,0]]}"#).unwrap();
    let (code, _, err) = call(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, _, _) = call(&["validate", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _, _) = call(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn invalid_measure_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    fs::write(
        &path,
        r#"{"N": 2, "A": [[1,1],[1,0]], "measure": {"p": [0.5, 0.5], "Pi": [[0.5, 0.6], [1, 0]]}}"#,
    )
    .unwrap();
    let (code, out, _) = call(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["status"], "fail");
}

#[test]
fn exported_basis_reproduces_transform() {
    let dir = tempfile::tempdir().unwrap();
    let basis = dir.path().join("basis.json");
    let func = dir.path().join("f.json");
    fs::write(
        &func,
        r#"{"atoms": [{"translate": 0, "word": [0, 1], "coeff": 1.5}, {"translate": -1, "word": [1], "coeff": -0.25}]}"#,
    )
    .unwrap();
    let common = ["--scale", "2", "--translates", "1"];
    let mut args = vec!["--out", basis.to_str().unwrap(), "basis", "@golden"];
    args.extend(common);
    assert_eq!(call(&args).0, 0);

    let mut fresh = vec!["transform", "@golden", "--function", func.to_str().unwrap()];
    fresh.extend(common);
    let (c1, a, _) = call(&fresh);
    let (c2, b, _) = call(&["transform", "@golden", "--function", func.to_str().unwrap(), "--basis", basis.to_str().unwrap()]);
    assert_eq!((c1, c2), (0, 0));
    let a: Value = serde_json::from_str(&a).unwrap();
    let b: Value = serde_json::from_str(&b).unwrap();
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["filters", "@golden", "--trials", "5", "--seed", "3"],
        vec!["basis", "@cantor3", "--sided", "one", "--gram"],
        vec!["basis", "@golden", "--sided", "two", "--format", "csv"],
        vec!["plot", "@golden", "--function", "frac", "--operator", "U:2", "--samples", "50"],
    ] {
        let (c1, a, _) = call(&args);
        let (c2, b, _) = call(&args);
        assert_eq!(c1, 0, "{args:?}");
        assert_eq!(c2, 0);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn plot_csv_shape() {
    let (code, out, _) = call(&["plot", "@golden", "--function", "id", "--operator", "U:1", "--samples", "10"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,y");
    assert_eq!(lines.len(), 11);
}

#[test]
fn markov_check_reports_bundled_measure() {
    let (code, out, _) = call(&["markov-check", "@golden", "--depth", "3"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn paper_convention_reports_factor() {
    let (code, out, _) = call(&["filters", "@golden", "--convention", "paper", "--trials", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let c = v["results"]["lowpass_factor"].as_f64().unwrap();
    assert!((c - 2.0).abs() < 1e-10, "{c}");
}
