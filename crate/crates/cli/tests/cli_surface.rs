//! Exit-code and format contracts of the binary.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qekr"))
        .args(args)
        .env_remove("QEKR_PRECISION_BITS")
        .env_remove("QEKR_ENUM_CAP")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, err) = run(&["measure", "--q", "2", "--n", "3", "--sigma", "-1/2"]);
    assert_eq!(code, 2);
    assert!(err.contains("positive"), "stderr: {err}");
    let (code, _, _) = run(&["measure", "--q", "6", "--n", "3", "--sigma", "1/2"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["search", "--q", "2", "--n", "3", "--sigma", "zebra"]);
    assert_eq!(code, 2);
    // CSV is only a projection for tabular commands
    let (code, _, _) = run(&["measure", "--q", "2", "--n", "3", "--sigma", "1/8", "--format", "csv"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["measure", "--q", "2", "--n", "3", "--sigma", "1/8", "--t", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn cap_errors_exit_3() {
    let (code, _, _) = run(&["enumerate", "--q", "2", "--n", "9", "--enum-cap", "50"]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["search", "--q", "2", "--n", "4", "--sigma", "1/8", "--max-vertices", "5"]);
    assert_eq!(code, 3);
}

#[test]
fn happy_paths_exit_0_with_envelopes() {
    let (code, out, _) = run(&["counterexample"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).expect("json envelope");
    assert_eq!(v["config"]["command"], "counterexample");
    assert_eq!(v["result"]["subspace_pair"]["product"], "9");
    assert_eq!(v["result"]["subset_check"]["lhs"], "2210");

    let (code, out, _) = run(&["certify", "--q", "2", "--n", "4", "--sigma", "1/4"]);
    assert_eq!(code, 0, "sigma above the threshold is a valid query");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["condition"], false);
    assert_eq!(v["result"]["at_or_below_threshold"], false);

    // mode tags are present on every numeric claim
    let (_, out, _) = run(&["moments", "--theta", "0.3", "--q", "2", "--n", "7"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let closed = &v["result"]["mean_x"]["closed"];
    assert_eq!(closed["mode"], "real@256");
    assert_eq!(closed["precision_bits"], 256);
}

#[test]
fn csv_projection_has_versioned_header() {
    let (code, out, _) = run(&[
        "tails", "--claim", "lower", "--theta", "0.75", "--q", "2", "--n-max", "14", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# config {"));
    assert!(header.contains("\"version\""));
    assert_eq!(lines.next().unwrap(), "n,raw_tail,normalizer,normalized,mode");
    assert_eq!(out.lines().count(), 2 + 3); // n = 10, 12, 14
}
