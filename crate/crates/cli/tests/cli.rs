use std::process::{Command, Output};

use serde_json::Value;

fn kepler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kepler")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn field(v: &Value, key: &str) -> f64 {
    v["rows"][0][key].to_string().parse().unwrap_or_else(|_| panic!("{key} missing in {v}"))
}

#[test]
fn spin_factor_manifold_dimension() {
    let out = kepler(&["invariants", "--type", "spin:8", "--ell", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(field(&v, "d_ell"), 7.0);
    assert_eq!(field(&v, "p"), 8.0);
}

#[test]
fn full_rank_peirce_volume_is_one() {
    let out = kepler(&["invariants", "--r", "2", "--a", "2", "--b", "0", "--ell", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((field(&v, "peirce_volume_reduced") - 1.0).abs() < 1e-14);
    assert_eq!(field(&v, "dsecond_ell"), 0.0);
}

#[test]
fn sym3_rank_two_row() {
    let out = kepler(&["invariants", "--type", "sym:3", "--ell", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let get = |k: &str| row[header.iter().position(|h| *h == k).unwrap()].parse::<f64>().unwrap();
    // d' = ell(1 + a(ell-1)/2), d'' = ell(a(r-ell) + b)
    assert_eq!(get("dprime_ell"), 3.0);
    assert_eq!(get("dsecond_ell"), 2.0);
    assert_eq!(get("d_ell"), 5.0);
    assert!(lines.next().is_none());
}

#[test]
fn unclassified_type_warns() {
    let out = kepler(&["invariants", "--r", "3", "--a", "3", "--b", "0"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a classified"));
    assert_eq!(json(&out)["classified"], false);
}

#[test]
fn bounded_kernel_routes_agree() {
    let out = kepler(&["kernel", "--type", "spin:5", "--ell", "1", "--nu", "10", "--t", "0.3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(field(&v, "relative_gap") < 1e-10);
    assert_eq!(v["rows"][0]["converged"], true);
    assert_eq!(v["nu_threshold"].to_string().parse::<f64>().unwrap(), 4.0);
}

#[test]
fn flat_kernel_routes_agree() {
    let out = kepler(&["kernel", "--type", "full:2,2", "--ell", "2", "--lambda", "1", "--nu", "2.5", "--t", "0.4,0.2"]);
    assert!(out.status.success());
    assert!(field(&json(&out), "relative_gap") < 1e-10);
}

#[test]
fn truncated_kernel_is_flagged_not_fatal() {
    let out = kepler(&["kernel", "--type", "sym:2", "--ell", "2", "--lambda", "1", "--nu", "3", "--t", "5,4", "--max-degree", "5"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["rows"][0]["converged"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not settle"));
}

#[test]
fn usage_and_domain_errors_exit_2() {
    for args in [
        vec!["kernel", "--type", "spin:5", "--ell", "1", "--nu", "10", "--t", "1.3"],
        vec!["kernel", "--type", "spin:5", "--ell", "1", "--nu", "2", "--t", "0.3"],
        vec!["kernel", "--type", "sym:2", "--ell", "1", "--lambda", "1", "--nu", "2", "--t", "0.3,0.2"],
        vec!["invariants", "--type", "spin:x"],
        vec!["invariants", "--type", "sym:2", "--ell", "3"],
        vec!["invariants"],
        vec!["verify", "no-such-suite"],
        vec!["frobnicate"],
    ] {
        let out = kepler(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_single_suite() {
    let out = kepler(&["verify", "gamma-identities"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["passed"] == true));
    assert_eq!(kepler(&["verify", "11"]).status.code(), Some(0));
}

#[test]
fn verify_reports_failure_with_exit_1() {
    // the degree-20 truncation cannot reach 1e-8 at the rank-3 corners of the grid
    let out = kepler(&["verify", "fock", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains("trunc20") && l.ends_with(",false")));
}

#[test]
fn output_is_deterministic() {
    let args = ["kernel", "--type", "full:2,3", "--ell", "2", "--lambda", "1.5", "--nu", "2", "--t", "0.7,0.1"];
    let a = kepler(&args);
    let b = kepler(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn numbers_carry_seventeen_digits() {
    let v = json(&kepler(&["invariants", "--type", "spin:8", "--ell", "1"]));
    let s = v["rows"][0]["tripotent_volume"].to_string();
    let mantissa: String = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect();
    assert_eq!(mantissa.len(), 17, "{s}");
}

#[test]
fn types_lists_the_table() {
    let out = kepler(&["types", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("exc:27,3,8,0,27,18")));
}
