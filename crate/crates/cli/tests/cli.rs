use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn pnfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnfree")).args(args).output().expect("binary runs")
}

fn lines(out: &[u8]) -> Vec<Value> {
    String::from_utf8_lossy(out).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn count_pn_2_11() {
    let out = pnfree(&["count-pn", "--field", "2^1,11"]);
    assert!(out.status.success());
    assert_eq!(lines(&out.stdout)[0]["N"], 957);
}

#[test]
fn certify_23_22_with_linear_g() {
    let out = pnfree(&["certify", "--field", "23^1,22", "--m", "3,2", "--ell", "gcd210", "--g", "linear"]);
    assert!(out.status.success());
    let v = &lines(&out.stdout)[0];
    assert_eq!(v["status"], "ProvedInB");
    assert_eq!(v["rule"]["Sieve"]["g"], "Linear");
}

#[test]
fn threshold_table_rows() {
    let out = pnfree(&["reproduce", "threshold-table", "--t", "6.3,6.3,6.4,6.5,6.7,9"]);
    assert!(out.status.success());
    let rows = lines(&out.stdout);
    let want = [3.74e9, 3.90e7, 2.50e6, 394155.0, 9239.0, 23.0];
    assert_eq!(rows.len(), want.len());
    for (r, w) in rows.iter().zip(want) {
        let got = r["q_threshold"].as_f64().unwrap();
        assert!((got - w).abs() / w < 0.01, "{r}");
        assert_eq!(r["target"], "threshold-table");
    }
}

#[test]
fn replay_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let out = pnfree(&["certify", "--field", "2^1,5"]);
    assert!(out.status.success());
    fs::write(&report, &out.stdout).unwrap();
    let again = pnfree(&["certify", "--replay", report.to_str().unwrap()]);
    assert!(again.status.success(), "{}", String::from_utf8_lossy(&again.stderr));
    assert_eq!(lines(&again.stdout)[0]["replayed"], true);
}

#[test]
fn empty_scan_writes_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    let out = pnfree(&["scan", "--q", "10..10", "--n", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(fs::read(&path).unwrap().len(), 0);
}

#[test]
fn scan_is_byte_stable_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let jsonl = dir.path().join(format!("{name}.jsonl"));
        let csv = dir.path().join(format!("{name}.csv"));
        let out = pnfree(&[
            "--threads",
            threads,
            "scan",
            "--q",
            "9239..9400",
            "--n",
            "6,7",
            "--ell",
            "gcd210",
            "--g",
            "one",
            "--out",
            jsonl.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        (fs::read(jsonl).unwrap(), fs::read_to_string(csv).unwrap())
    };
    let (a, csv_a) = run("1", "a");
    let (b, csv_b) = run("4", "b");
    assert_eq!(a, b);
    assert_eq!(csv_a, csv_b);
    assert!(csv_a.starts_with("q,n,status,rule,delta,Delta,r,s,W_ell,Wq_g,millis\n"));
    assert!(!csv_a.contains("Unresolved"));
}

#[test]
fn bad_input_gives_json_error() {
    for args in [&["certify", "--bogus"][..], &["count-pn", "--field", "6,2"][..]] {
        let out = pnfree(args);
        assert_eq!(out.status.code(), Some(1));
        let err = &lines(&out.stderr)[0]["error"];
        assert_eq!(err["kind"], "usage");
    }
}

#[test]
fn counterexample_3_4() {
    let out = pnfree(&["counterexample", "--field", "3^1,4"]);
    assert!(out.status.success());
    assert_eq!(lines(&out.stdout)[0]["confirmed"], true);
}

#[test]
fn weil_and_indicator_checks() {
    let out = pnfree(&["weil-verify", "--field", "3^1,3", "--instances", "40"]);
    assert!(out.status.success());
    assert_eq!(lines(&out.stdout)[0]["violations"], 0);
    let out = pnfree(&["rho-kappa-verify", "--field", "3^1,2"]);
    assert_eq!(lines(&out.stdout)[0]["mismatches"], 0);
}

#[test]
fn cubic_escalation_matches_published_exceptions() {
    let out = pnfree(&["reproduce", "cubic", "--q-max", "400"]);
    assert!(out.status.success());
    let summary = lines(&out.stderr).into_iter().find(|v| v.get("remaining").is_some()).unwrap();
    let left: Vec<u64> = summary["remaining"].as_array().unwrap().iter().map(|p| p[0].as_u64().unwrap()).collect();
    assert_eq!(
        left,
        vec![
            2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 37, 43, 49, 61, 67, 71, 79, 81, 121, 151, 211,
            331
        ]
    );
}
