use std::process::{Command, Output};

use serde_json::Value;

fn slitwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slitwalk"))
        .args(args)
        .env_remove("SLITWALK_GUARD_N")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn endpoint_square_one_zero() {
    let v = json(&slitwalk(&["endpoint", "--model", "square", "--i", "1", "--j", "0", "--order", "9"]));
    let coeffs: Vec<&str> = v["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["0/1", "1/1", "0/1", "5/1", "0/1", "42/1", "0/1", "429/1", "0/1", "4862/1"]);
}

#[test]
fn hitting_point_exact_half() {
    let v = json(&slitwalk(&["hitting", "--point", "0", "1"]));
    assert_eq!(v["exact"], "1/2");
}

#[test]
fn hitting_negative_point() {
    let v = json(&slitwalk(&["hitting", "--point", "-1", "1"]));
    assert_eq!(v["exact"], "-1/2 + 1/2*sqrt(2)");
}

#[test]
fn transience_exact_values() {
    let v = json(&slitwalk(&["transience", "--kmax", "2"]));
    assert_eq!(v["rows"][1]["p"], "95/34 - 55/34*sqrt(2)");
    assert_eq!(v["rows"][0]["v"], "-16/1 + 12/1*sqrt(2)");
}

#[test]
fn count_csv_matches_gf() {
    let count = slitwalk(&["count", "--nmax", "4", "--format", "csv"]);
    let gf = slitwalk(&["gf", "--order", "4", "--format", "csv"]);
    assert!(count.status.success() && gf.status.success());
    let rows = |o: &Output, skip_zero: bool| -> Vec<String> {
        let mut r: Vec<String> = String::from_utf8_lossy(&o.stdout)
            .lines()
            .skip(1)
            .filter(|l| !(skip_zero && l.ends_with(",0/1")))
            .map(String::from)
            .collect();
        r.sort();
        r
    };
    assert_eq!(rows(&count, true), rows(&gf, true));
}

#[test]
fn verify_square_passes() {
    let out = slitwalk(&["verify", "--model", "square", "--order", "12", "--model-only"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("PASS model:square"));
}

#[test]
fn verify_single_check() {
    let out = slitwalk(&["verify", "--only", "hitting_values", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_deterministic() {
    let a = slitwalk(&["gf", "--model", "diagonal", "--order", "6"]);
    let b = slitwalk(&["gf", "--model", "diagonal", "--order", "6"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(slitwalk(&["endpoint", "--i", "1"]).status.code(), Some(2));
    assert_eq!(slitwalk(&["gf", "--model", "hexagonal"]).status.code(), Some(2));
    assert_eq!(slitwalk(&["closedform", "--id", "nope"]).status.code(), Some(2));
    assert_eq!(slitwalk(&["hitting", "--point", "-2", "0"]).status.code(), Some(2));
    assert_eq!(slitwalk(&["verify", "--only", "nope"]).status.code(), Some(2));
}

#[test]
fn guard_exceeded_exits_3() {
    let out = slitwalk(&["count", "--nmax", "100000"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("slitwalk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.csv");
    let out = slitwalk(&["closedform", "--id", "catalan", "--order", "4", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n,c\n0,1/1\n1,1/1\n2,2/1\n3,5/1\n4,14/1\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn shifted_start_slices() {
    let v = json(&slitwalk(&["shifted", "--order", "3", "--zorder", "2"]));
    assert_eq!(v["zorder"], 2);
    // the empty walk from (−k,0) ends at x^(−k)
    let constants: Vec<(i64, i64)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|t| t["n"] == 0)
        .map(|t| (t["k"].as_i64().unwrap(), t["i"].as_i64().unwrap()))
        .collect();
    assert_eq!(constants, [(0, 0), (1, -1), (2, -2)]);
}
