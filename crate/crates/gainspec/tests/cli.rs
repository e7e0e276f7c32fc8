//! End-to-end tests of the `gainspec` binary: flags, formats, exit
//! codes, and output schemas.

use std::process::{Command, Output};

fn gainspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gainspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn energy_both_routes_json() {
    let out = gainspec(&[
        "energy", "3", "3", "1", "--alpha", "0", "--beta", "0", "--method", "both",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let payload = &v["payload"];
    assert_eq!(payload["case"], "odd-odd");
    let eig = payload["energy_eig"].as_f64().unwrap();
    let cou = payload["energy_coulson"].as_f64().unwrap();
    assert!((eig - 7.924777).abs() < 1e-5);
    assert!((cou - 7.924777).abs() < 1e-5);
    assert!(payload["discrepancy"].as_f64().unwrap() < 1e-7);
}

#[test]
fn energy_reference_point_csv() {
    let out = gainspec(&[
        "energy", "3", "3", "1", "--alpha", "0.5", "--beta", "0.5", "--method", "coulson",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("7.841619"));
}

#[test]
fn energy_accepts_angle_parameterization() {
    let out = gainspec(&[
        "energy",
        "3",
        "3",
        "1",
        "--theta-r",
        "1.5707963267948966",
        "--theta-s",
        "1.5707963267948966",
        "--method",
        "coulson",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["payload"]["alpha"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn energy_rejects_small_cycle_with_exit_1() {
    let out = gainspec(&["energy", "2", "3", "1", "--alpha", "0", "--beta", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn energy_rejects_mixed_gain_flags() {
    let out = gainspec(&["energy", "3", "3", "1", "--alpha", "0", "--theta-s", "1.0"]);
    assert!(!out.status.success());
}

#[test]
fn charpoly_reports_canonical_swap() {
    let out = gainspec(&["charpoly", "3", "4", "1", "--a", "0.3", "--b", "-0.7"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let payload = &v["payload"];
    assert_eq!(payload["swapped"], true);
    assert_eq!(payload["canonical_r"], 4);
    assert_eq!(payload["canonical_s"], 3);
    assert_eq!(payload["tables"]["kind"], "mixed");
    // degree n = 7: eight coefficients, leading 1
    let coeffs = payload["coefficients_high_to_low"].as_array().unwrap();
    assert_eq!(coeffs.len(), 8);
    assert_eq!(coeffs[0].as_f64().unwrap(), 1.0);
}

#[test]
fn charpoly_zero_gains_match_matching_polynomial() {
    let out = gainspec(&["charpoly", "3", "3", "1", "--a", "0", "--b", "0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let coeffs: Vec<f64> = v["payload"]["coefficients_high_to_low"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_f64().unwrap())
        .collect();
    assert_eq!(coeffs, vec![1.0, 0.0, -7.0, 0.0, 11.0, 0.0, -1.0]);
}

#[test]
fn json_reports_round_trip() {
    let out = gainspec(&["table1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string(&v).unwrap();
    let v2: serde_json::Value = serde_json::from_str(&again).unwrap();
    assert_eq!(v, v2);
    assert_eq!(v["payload"]["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_small_mixed_sweep_passes() {
    let out = gainspec(&[
        "verify", "--case", "mixed", "--nmax", "10", "--rounds", "8", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("fail=0"), "{text}");
    assert!(!text.contains("Fail"), "{text}");
}

#[test]
fn verify_rejects_unknown_case() {
    let out = gainspec(&["verify", "--case", "bogus", "--nmax", "8"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scan_writes_csv_file_with_summary() {
    let dir = std::env::temp_dir().join("gainspec-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let out = gainspec(&[
        "scan",
        "--rset",
        "3",
        "--sset",
        "3,5",
        "--lset",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n'));
    assert!(text.contains("# total=2 counterexamples=2"), "{text}");
    // 6-decimal formatting mirrors the reference table
    assert!(text.contains("0.083158"), "{text}");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn scan_rejects_even_path_lengths_with_exit_1() {
    let out = gainspec(&["scan", "--rset", "3", "--sset", "3", "--lset", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_cap_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_gainspec"))
        .env("GAINSPEC_THREADS", "1")
        .args(["scan", "--rset", "3", "--sset", "3", "--lset", "1,3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("# total=2"));
}
