use std::process::{Command, Output};

use serde_json::Value;

fn ngverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ngverify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = ngverify(&full);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), value)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn membership_rejects_shrinking_image() {
    let out = ngverify(&["membership", "[0,0,1]"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Im(f)≠Im(f²)"));

    let (code, v) = json(&["membership", "[0,0,1]"]);
    assert_eq!(code, 0);
    assert_eq!(v["can_be_member"], false);
    assert!(v["cyclic_group"].is_null());
}

#[test]
fn membership_reports_cyclic_group() {
    let (code, v) = json(&["membership", "[1,0,0]"]);
    assert_eq!(code, 0);
    assert_eq!(v["can_be_member"], true);
    assert_eq!(v["cyclic_group"]["order"], 2);
    assert_eq!(v["cyclic_group"]["identity"], "[0,1,1]");
}

#[test]
fn max_ng_matches_factorial() {
    let (code, v) = json(&["max-ng", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["n"], 4);
    assert_eq!(v["max_ng_order"], 6);
    assert_eq!(v["witness"]["order"], 6);
}

#[test]
fn radical_counterexample_report() {
    let (code, v) = json(&["thm33", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["radical_g_order"], 2);
    assert_eq!(v["radical_u_order"], 1);
    assert_eq!(v["radical_v_order"], 1);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "holds"));
}

#[test]
fn one_based_changes_rendering_only() {
    let (_, zero) = json(&["witness", "4"]);
    let (_, one) = json(&["--one-based", "witness", "4"]);
    assert_eq!(zero["group"]["order"], one["group"]["order"]);
    assert_eq!(zero["group"]["identity"], "[0,0,2,3]");
    assert_eq!(one["group"]["identity"], "[1,1,3,4]");
}

#[test]
fn json_output_is_deterministic() {
    let a = ngverify(&["--json", "scan", "3"]);
    let b = ngverify(&["--json", "--threads", "1", "scan", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn rho_on_a_non_group_is_a_precondition_failure() {
    let out = ngverify(&["rho", "[0,0,2]", "[0,0,1]"]);
    assert_eq!(out.status.code(), Some(5));
    let (code, v) = json(&["rho", "[1,0,2]", "[0,1,2]"]);
    assert_eq!(code, 0);
    assert_eq!(v["quotient"]["order"], 2);
}

#[test]
fn residual_round_trips_a_dump() {
    let dir = std::env::temp_dir().join(format!("ngverify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s4.json");
    let dump = ngverify(&["dump-group", "symmetric:4"]);
    assert_eq!(dump.status.code(), Some(0));
    std::fs::write(&path, &dump.stdout).unwrap();
    let p = path.to_str().unwrap();

    let (code, v) = json(&["residual", p, "--class", "p:2"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 12);
    let (code, v) = json(&["radical", p, "--class", "p:2"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 4);
    let (code, v) = json(&["residual", p, "--class", "nilpotent"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 12);

    let all: Vec<String> = (0..24).map(|i| i.to_string()).collect();
    let all = all.join(",");
    let (code, v) = json(&["check-thm32", p, &all, "0", "--class", "p:2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["status"], "holds");
    let (code, v) = json(&["check-thm32", p, "0", "0", "--class", "p:2"]);
    assert_eq!(code, 5);
    assert_eq!(v["status"], "precondition-failed");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes_are_distinct() {
    assert_eq!(ngverify(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(ngverify(&["membership", "[0,"]).status.code(), Some(3));
    assert_eq!(ngverify(&["max-ng", "9"]).status.code(), Some(4));
    assert_eq!(ngverify(&["semidirect", "4,3"]).status.code(), Some(5));
    assert_eq!(
        ngverify(&["residual", "/nonexistent.json", "--class", "p:2"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_all_small() {
    let out = ngverify(&["verify-all", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}
