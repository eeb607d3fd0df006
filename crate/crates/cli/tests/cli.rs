//! Binary-level checks: exit codes, report schema, determinism.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qlattice"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn passing_command_exits_zero_with_schema() {
    let (code, stdout, _) = run(&["serre", "--preset", "sl3", "--sites", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("valid JSON");
    assert_eq!(v["command"], "serre");
    assert!(v["config_digest"].as_str().unwrap().len() >= 8);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["name"].is_string());
        assert_eq!(c["verdict"], "pass");
        assert!(c["residual_term_count"].is_number());
        assert!(c.get("cut").is_some());
        assert!(c["details"].is_string());
    }
}

#[test]
fn failing_verification_exits_one() {
    let (code, stdout, _) = run(&["virasoro", "check", "--preset", "quad", "--depth", "4"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["checks"][0]["verdict"], "fail");
    assert!(v["checks"][0]["residual_term_count"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, stderr) = run(&["normalize", "--expr", "x1 ^^ 2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("syntax error"));
    let (code, _, _) = run(&["serre", "--preset", "nope", "--sites", "1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_byte_stable() {
    let (c1, s1, _) = run(&["volkov", "two-point", "--order", "6"]);
    let (c2, s2, _) = run(&["volkov", "two-point", "--order", "6"]);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(s1, s2);
}

#[test]
fn depth_env_var_is_honored() {
    let out = bin()
        .args(["virasoro", "check", "--preset", "delta-3"])
        .env("QLATTICE_DEPTH", "4")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let cut4 = v["checks"][0]["cut"].as_str().unwrap().to_owned();
    let out8 = bin()
        .args(["virasoro", "check", "--preset", "delta-3"])
        .env("QLATTICE_DEPTH", "6")
        .output()
        .unwrap();
    let v8: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out8.stdout)).unwrap();
    let cut8 = v8["checks"][0]["cut"].as_str().unwrap().to_owned();
    assert_ne!(cut4, cut8, "depth knob must move the cut");
}

#[test]
fn config_suite_runs_and_digest_is_semantic() {
    let dir = std::env::temp_dir();
    let p1 = dir.join("qlattice_suite_a.json");
    let p2 = dir.join("qlattice_suite_b.json");
    std::fs::write(
        &p1,
        r#"{"checks": [{"command": "serre", "preset": "sl3", "sites": 1},
                       {"command": "nilpotency", "modulus": 2, "sites": 2}]}"#,
    )
    .unwrap();
    // same semantics, different formatting
    std::fs::write(
        &p2,
        r#"{ "checks" : [ { "sites": 1, "command": "serre", "preset": "sl3" },
                          { "command": "nilpotency", "sites": 2, "modulus": 2 } ] }"#,
    )
    .unwrap();
    let (c1, s1, _) = run(&["--config", p1.to_str().unwrap()]);
    let (c2, s2, _) = run(&["--config", p2.to_str().unwrap()]);
    assert_eq!(c1, 0);
    assert_eq!(s1, s2, "equivalent configs give identical reports");
    let v: serde_json::Value = serde_json::from_str(&s1).unwrap();
    assert_eq!(v["command"], "suite");
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
    // unknown keys rejected at exit code 2
    let p3 = dir.join("qlattice_suite_c.json");
    std::fs::write(
        &p3,
        r#"{"checks": [{"command": "serre", "preset": "sl3", "sites": 1, "oops": true}]}"#,
    )
    .unwrap();
    let (c3, _, _) = run(&["--config", p3.to_str().unwrap()]);
    assert_eq!(c3, 2);
}
