use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn skewps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewps")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn skew(p: u64, k: u32, eps: &str) -> Value {
    json!({"kind": "skew_data", "p": p, "K": k, "mode": "integral", "epsilon": eps})
}

/// (1 + Y)(Y - 3) = Y^2 - 2Y - 3 over Z_3[[X]] with eps = 4 and K = 6.
fn product_doc() -> Value {
    json!({
        "kind": "skew_series",
        "skew": skew(3, 6, "4"),
        "rows": [["726"], ["241"], ["1"]],
    })
}

#[test]
fn prepare_splits_off_the_unit() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", &product_doc());
    let v = stdout_json(&skewps(&["prepare", "--in", &f]));
    assert_eq!(v["kind"], "preparation");
    assert_eq!(v["F"]["s"], 1);
    assert_eq!(v["F"]["lower"][0][0], "726");
    assert!(v["F"]["lower"][0].as_array().unwrap()[1..].iter().all(|c| c == "0"));
    let rows = v["eps"]["rows"].as_array().unwrap();
    assert_eq!(rows[0][0], "1");
    assert_eq!(rows[1][0], "1");
    let rest_zero = |r: &Value| r.as_array().unwrap().iter().all(|c| c == "0");
    assert!(rest_zero(&json!(rows[0].as_array().unwrap()[1..])));
    assert!(rows[2..].iter().all(rest_zero));
    assert_eq!(v["seed"], 42);
}

#[test]
fn xi_one_at_two() {
    let v = stdout_json(&skewps(&["xi", "--p", "2", "--K", "8", "--n", "1"]));
    assert_eq!(v["kind"], "coeff_series");
    let want: Vec<&str> = vec!["2", "1", "0", "0", "0", "0", "0", "0"];
    assert_eq!(v["coeffs"], json!(want));
}

#[test]
fn omega_zero_is_x() {
    let v = stdout_json(&skewps(&["omega", "--p", "5", "--K", "4", "--n", "0"]));
    assert_eq!(v["coeffs"], json!(["0", "1", "0", "0"]));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", &product_doc());
    let a = skewps(&["prepare", "--in", &f, "--seed", "7"]);
    let b = skewps(&["prepare", "--in", &f, "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let a = skewps(&["axioms", "--p", "3", "--K", "5", "--epsilon", "4", "--samples", "10"]);
    let b = skewps(&["axioms", "--p", "3", "--K", "5", "--epsilon", "4", "--samples", "10"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("xi.json");
    let to_file = skewps(&["xi", "--p", "3", "--K", "6", "--n", "2", "--out", out.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let direct = skewps(&["xi", "--p", "3", "--K", "6", "--n", "2"]);
    assert_eq!(std::fs::read(&out).unwrap(), direct.stdout);
}

#[test]
fn divide_reconstructs() {
    let dir = tempfile::tempdir().unwrap();
    let g = json!({"kind": "skew_series", "skew": skew(3, 4, "4"), "rows": [["5", "1"], ["2"], ["0"], ["1"]]});
    let f = json!({"kind": "skew_series", "skew": skew(3, 4, "4"), "rows": [["3"], ["1"]]});
    let (g, f) = (write(dir.path(), "g.json", &g), write(dir.path(), "f.json", &f));
    let v = stdout_json(&skewps(&["divide", "--in", &g, "--in", &f]));
    assert_eq!(v["kind"], "division");
    // remainder of degree below 1
    let rows = v["rem"]["rows"].as_array().unwrap();
    assert!(rows[1..].iter().all(|r| r.as_array().unwrap().iter().all(|c| c == "0")));
}

#[test]
fn schema_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut bad = product_doc();
    bad["rows"][0][0] = json!("-3");
    let f = write(dir.path(), "bad.json", &bad);
    assert_eq!(skewps(&["prepare", "--in", &f]).status.code(), Some(3));

    let mut extra = product_doc();
    extra["colour"] = json!("red");
    let f = write(dir.path(), "extra.json", &extra);
    assert_eq!(skewps(&["prepare", "--in", &f]).status.code(), Some(3));

    let missing = dir.path().join("nope.json");
    assert_eq!(skewps(&["prepare", "--in", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn normalize_accepts_signed_residues() {
    let dir = tempfile::tempdir().unwrap();
    let mut signed = product_doc();
    signed["rows"] = json!([["-3"], ["-2"], ["1"]]);
    let f = write(dir.path(), "signed.json", &signed);
    assert_eq!(skewps(&["prepare", "--in", &f]).status.code(), Some(3));
    let canonical = write(dir.path(), "f.json", &product_doc());
    let a = skewps(&["prepare", "--in", &f, "--normalize"]);
    let b = skewps(&["prepare", "--in", &canonical]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn math_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", &product_doc());
    let out = skewps(&["invert", "--in", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(skewps(&["axioms", "--epsilon", "2"]).status.code(), Some(1));
    assert_eq!(skewps(&["xi", "--p", "4"]).status.code(), Some(1));
    assert_eq!(skewps(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn precision_errors_exit_two() {
    // a series in G_K has nothing to prepare
    let dir = tempfile::tempdir().unwrap();
    let zero = json!({"kind": "skew_series", "skew": skew(3, 4, "4"), "rows": [["0"]]});
    let f = write(dir.path(), "zero.json", &zero);
    assert_eq!(skewps(&["prepare", "--in", &f]).status.code(), Some(2));
}

#[test]
fn rankgrowth_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let spec = json!({"kind": "module_spec", "p": 3, "d": 1, "torsion": [], "p_power_ranks": []});
    let spec = write(dir.path(), "m.json", &spec);
    let csv = dir.path().join("r.csv");
    let summary = dir.path().join("s.json");
    let out = skewps(&[
        "rankgrowth",
        "--in",
        &spec,
        "--n-max",
        "3",
        "--K",
        "20",
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,lambda_n,flag");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[1], "0,1,false");
    assert_eq!(lines[4], "3,27,false");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["d"], 1);
    assert_eq!(s["c"], 0);

    // too little precision for the torsion part
    let tight = json!({"kind": "module_spec", "p": 3, "d": 0, "torsion": [["3"]], "p_power_ranks": []});
    let tight = write(dir.path(), "t.json", &tight);
    let out = skewps(&["rankgrowth", "--in", &tight, "--n-max", "3", "--K", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selfcheck_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = skewps(&["selfcheck", "--seed", "42", "--samples", "8", "--out", out.to_str().unwrap()]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 42);
}
