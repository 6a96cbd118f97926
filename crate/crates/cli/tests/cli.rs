use std::process::{Command, Output};

use serde_json::{json, Value};

fn wzw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wzw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("wzw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn genus_two_dimension() {
    let out = wzw(&["dim", "--algebra", "A1", "--level", "1", "--genus", "2"]);
    assert!(out.status.success());
    assert_eq!(json_of(&out), json!({ "dimension": 4 }));
    let out = wzw(&["dim", "--algebra", "A1", "--level", "1", "--genus", "2", "--labels", ""]);
    assert_eq!(json_of(&out), json!({ "dimension": 4 }));
}

#[test]
fn dehn_twist_at_level_one() {
    let out = wzw(&["dehn", "--algebra", "A1", "--level", "1", "--label", "1"]);
    assert!(out.status.success());
    assert_eq!(
        json_of(&out),
        json!({ "exponent": "1/2", "eigenvalue": "exp(-i*pi/2)" })
    );
}

#[test]
fn fusion_table_schema() {
    let out = wzw(&["fusion-table", "--algebra", "A1", "--level", "2", "--format", "json"]);
    let v = json_of(&out);
    assert_eq!(v["algebra"], "A1");
    assert_eq!(v["labels"], json!([[0], [1], [2]]));
    let coeffs = v["coeffs"].as_array().unwrap();
    assert!(coeffs.contains(&json!({ "labels": [1, 1, 2], "n": 1 })));
    assert!(!coeffs.iter().any(|c| c["labels"] == json!([1, 1, 1])));
    let tsv = wzw(&["fusion-table", "--level", "2", "--format", "tsv"]);
    let text = String::from_utf8(tsv.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("i\tj\tk\tn"));
    assert_eq!(text.lines().count(), coeffs.len() + 1);
}

#[test]
fn surface_file_with_graph() {
    let p = temp_file(
        "theta.json",
        r#"{"algebra":"A1","level":1,"genus":2,"boundary":[],
            "graph":{"vertices":2,"edges":[[0,1],[0,1],[0,1]],"legs":[]}}"#,
    );
    let out = wzw(&["dim", "--surface", p.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out), json!({ "dimension": 4 }));
    // a graph of the wrong topology is rejected as a user error
    let bad = temp_file(
        "bad.json",
        r#"{"algebra":"A1","level":1,"genus":3,"boundary":[],
            "graph":{"vertices":2,"edges":[[0,1],[0,1],[0,1]],"legs":[]}}"#,
    );
    assert_eq!(wzw(&["dim", "--surface", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn oracle_subcommands() {
    let out = wzw(&["oracle", "three-point", "--level", "1", "--labels", "1,1,0"]);
    assert_eq!(json_of(&out), json!({ "rank": 1, "classical_rank": 1 }));
    let out = wzw(&["oracle", "three-point", "--level", "1", "--labels", "1,1,2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = wzw(&[
        "oracle",
        "npoint",
        "--level",
        "1",
        "--labels",
        "1,1,1,1",
        "--points",
        "3,1,-1,-3",
    ]);
    assert_eq!(json_of(&out)["rank"], 1);
    let out = wzw(&[
        "oracle", "npoint", "--level", "1", "--labels", "1,1", "--points", "2/3,2/3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kz_matrices_are_rational_strings() {
    let out = wzw(&[
        "kz",
        "matrices",
        "--algebra",
        "A1",
        "--level",
        "2",
        "--labels",
        "1,1,2",
        "--format",
        "json",
    ]);
    let v = json_of(&out);
    assert_eq!(v["rank"], 1);
    let mats = v["matrices"].as_array().unwrap();
    assert_eq!(mats.len(), 3);
    assert_eq!(mats[0], json!({ "pair": [0, 1], "matrix": [["-1/8"]] }));
}

#[test]
fn kz_transport_from_path_file() {
    // z_0 runs once around z_1 = 1, other points fixed
    let mut points = Vec::new();
    for s in 0..12 {
        let a = 2.0 * std::f64::consts::PI * s as f64 / 12.0;
        points.push(json!([[1.0 + 0.5 * a.cos(), 0.5 * a.sin()], [1.0, 0.0], [-1.0, 0.0]]));
    }
    let p = temp_file("loop.json", &json!({ "points": points, "closed": true }).to_string());
    let out = wzw(&[
        "kz",
        "transport",
        "--path",
        p.to_str().unwrap(),
        "--steps",
        "4000",
        "--level",
        "2",
        "--labels",
        "1,1,2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    let z = &v["matrix"][0][0];
    let (re, im) = (z[0].as_f64().unwrap(), z[1].as_f64().unwrap());
    // exp(2πi · (−1/8)) for the single block
    let t = -std::f64::consts::PI / 4.0;
    assert!((re - t.cos()).abs() < 1e-8 && (im - t.sin()).abs() < 1e-8, "{re} {im}");
    assert_eq!(v["converged"], true);
}

#[test]
fn verify_reports() {
    let out = wzw(&["verify", "virasoro", "--kmax", "2", "--degree", "6"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 25);
    assert!(checks
        .iter()
        .all(|c| c["residual_norm"] == "0" && c["status"] == "pass"));
    let out = wzw(&[
        "verify",
        "sugawara",
        "--algebra",
        "A1",
        "--level",
        "1",
        "--label",
        "1",
        "--degree",
        "3",
    ]);
    assert!(out.status.success());
    assert!(json_of(&out)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["residual_norm"] == "0"));
    let out = wzw(&["verify", "criterion", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["oracle", "npoint", "--level", "2", "--labels", "1,1,2,2", "--seed", "9"];
    assert_eq!(wzw(&args).stdout, wzw(&args).stdout);
    let args = ["fusion-table", "--algebra", "A2", "--level", "2"];
    assert_eq!(wzw(&args).stdout, wzw(&args).stdout);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(wzw(&["dim", "--level", "1", "--bogus"]).status.code(), Some(1));
    assert_eq!(wzw(&["nonsense"]).status.code(), Some(1));
    assert_eq!(
        wzw(&["dehn", "--algebra", "Z9", "--level", "1", "--label", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(wzw(&["dehn", "--level", "1", "--label", "3"]).status.code(), Some(1));
    assert!(wzw(&["--help"]).status.success());
}

#[test]
fn verify_all_flags_only_the_stated_twist_bound() {
    let out = wzw(&["verify", "all"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    let checks = v["checks"].as_array().unwrap();
    let mut seen: Vec<u64> = checks.iter().map(|c| c["criterion"].as_u64().unwrap()).collect();
    seen.dedup();
    assert_eq!(seen, (1..=11).collect::<Vec<_>>());
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| c["status"] != "pass")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["3(l+h)r integral"]);
}
