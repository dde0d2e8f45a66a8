use std::process::{Command, Output};

use serde_json::Value;

fn threshspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_threshspec"))
        .args(args)
        .env_remove("THRESHSPEC_CAP")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn diag_trace_for_triangle() {
    let out = threshspec(&["diag", "011", "--x", "0", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["final_diagonal"], serde_json::json!([1.0, -1.0, -2.0]));
    assert_eq!(v["sigma"], 0.0);
    assert_eq!(v["signs"], "+--");
    assert_eq!(v["subcases"][0]["case"], "1a");
}

#[test]
fn diag_counts_accept_run_length_and_negative_x() {
    let out = threshspec(&["diag", "0^2 1 0 1", "--x", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["seq"], "00101");
    assert_eq!(
        v["greater"].as_u64().unwrap() + v["equal"].as_u64().unwrap() + v["less"].as_u64().unwrap(),
        5
    );
}

#[test]
fn antiregular_inertia() {
    let v = json_of(&threshspec(&[
        "antiregular",
        "--n",
        "16",
        "--emit",
        "inertia",
    ]));
    assert_eq!(
        (
            v["n_plus"].as_u64(),
            v["n_zero"].as_u64(),
            v["n_minus"].as_u64()
        ),
        (Some(8), Some(0), Some(8))
    );
    let v = json_of(&threshspec(&["antiregular", "--n", "7"]));
    assert_eq!(v["sequence"], "0010101");
}

#[test]
fn verify_report_and_exit_code() {
    let out = threshspec(&["verify", "--n", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["total"], 1024);
    assert_eq!(v["verdict"], true);
    for key in [
        "n",
        "winner_plus",
        "winner_minus",
        "anti_regular",
        "margins",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn verify_is_identical_across_job_counts() {
    let serial = threshspec(&["verify", "--n", "10"]);
    let parallel = threshspec(&["verify", "--n", "10", "--jobs", "4"]);
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn verify_csv_rows() {
    let out = threshspec(&["verify", "--n", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "seq,lambda_plus,lambda_minus");
    assert_eq!(lines.len(), 1 + 8);
    // the complete graph has no eigenvalue below -1
    assert!(lines
        .iter()
        .any(|l| l.starts_with("01111,") && l.ends_with(',')));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.json");
    let out = threshspec(&["spectrum", "0001", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["lambda_minus"].as_f64().unwrap() + 3f64.sqrt()).abs() < 2e-9);
    assert!((v["lambda_plus"].as_f64().unwrap() - 3f64.sqrt()).abs() < 2e-9);
}

#[test]
fn twelve_significant_digits() {
    let text = String::from_utf8(threshspec(&["oracle", "0101"]).stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    for l in v["eigenvalues"].as_array().unwrap() {
        let digits = l
            .to_string()
            .trim_start_matches('-')
            .replace('.', "")
            .trim_start_matches('0')
            .len();
        assert!(digits <= 12, "{l}");
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["diag", "0x1"],
        vec!["verify", "--n", "5", "--trace"],
        vec!["spectrum", "0110"],
        vec!["verify", "--n", "5", "--tol", "-1"],
        vec!["verify", "--n", "2"],
        vec!["frobnicate"],
        vec!["antiregular", "--n", "8", "--emit", "colours"],
    ] {
        let out = threshspec(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = threshspec(&["verify", "--n", "5", "--jobs", "0"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--jobs"));
}

#[test]
fn cap_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_threshspec"))
        .args(["verify", "--n", "6"])
        .env("THRESHSPEC_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn failing_verdict_exits_one() {
    // the even-order sign template does not hold near λ⁻(A_4)
    let out = threshspec(&[
        "antiregular",
        "--n",
        "4",
        "--emit",
        "signs",
        "--samples",
        "40",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["verdict"], false);
    let out = threshspec(&["antiregular", "--n", "15", "--emit", "signs"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn chain_and_critical() {
    for n in ["8", "7"] {
        let out = threshspec(&["chain", "--n", n]);
        assert_eq!(out.status.code(), Some(0), "n = {n}");
        assert_eq!(json_of(&out)["verdict"], true);
    }
    let v = json_of(&threshspec(&["critical", "--n", "6"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["verdict"], true);
}

#[test]
fn inertia_reports_counting_disagreement() {
    let out = threshspec(&["inertia", "011"]);
    let v = json_of(&out);
    assert_eq!(
        (
            v["n_plus"].as_u64(),
            v["n_zero"].as_u64(),
            v["n_minus"].as_u64()
        ),
        (Some(1), Some(0), Some(2))
    );
    assert_eq!(v["n_minus_one"], 2);
    assert_eq!(v["counting_agrees"], false);
    assert!(!out.stderr.is_empty());
}

#[test]
fn help_for_every_verb() {
    for verb in [
        "diag",
        "spectrum",
        "inertia",
        "oracle",
        "verify",
        "critical",
        "antiregular",
        "chain",
    ] {
        let out = threshspec(&[verb, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{verb}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("--out"), "{verb}");
    }
}
