//! Golden runs of the command-line interface: the exit-code contract,
//! certificate emission and re-checking, and byte-identical reports.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matchings"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn verify_group_suite_small() {
    let out = run(&["verify", "--suite", "group", "--max-p", "7"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("qr-witness"));
    assert!(stdout.contains("overall: PASS"));
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = run(&["verify", "--suite", "bogus"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_unwritable_out_path() {
    let out = run(&[
        "verify",
        "--suite",
        "group",
        "--max-p",
        "5",
        "--out",
        "/nonexistent-dir/report.json",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn witness_qr_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("qr11.json");
    let out = run(&["witness", "qr", "--p", "11", "--out", cert_path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&cert_path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["kind"], "qr");
    assert_eq!(parsed["carrier"], "z:11");
    let a: Vec<String> = parsed["A"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(a, ["1", "3", "4", "5", "9"]);
    // f is multiplication by 1 (the identity), g by 5
    let f = parsed["f"].as_array().unwrap();
    assert_eq!(f[0][0], f[0][1]);

    let check = run(&["check", cert_path.to_str().unwrap()]);
    assert_eq!(exit_code(&check), 0);
}

#[test]
fn witness_qr_rejects_p5() {
    let out = run(&["witness", "qr", "--p", "5"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn witness_cycle_odd_family() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("cycle.json");
    let out = run(&[
        "witness", "cycle", "--p", "11", "--k", "5", "--out", cert_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!(parsed["kind"], "cycle");
    assert_eq!(parsed["A"].as_array().unwrap().len(), 5);
    let check = run(&["check", cert_path.to_str().unwrap()]);
    assert_eq!(exit_code(&check), 0);
}

#[test]
fn witness_window_and_linear_kinds() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("window", vec!["witness", "window", "--group", "int", "--window", "60"]),
        ("dyadic", vec!["witness", "window", "--group", "dyadic", "--window", "60"]),
        ("pairing", vec!["witness", "pairing", "--p", "11", "--seed", "3"]),
        ("linear", vec!["witness", "linear", "--tower", "gf:5^3", "--m", "1"]),
        ("transcendental", vec!["witness", "transcendental", "--m", "2"]),
    ] {
        let cert_path = dir.path().join(format!("{name}.json"));
        let mut full = args.clone();
        full.push("--out");
        full.push(cert_path.to_str().unwrap());
        let out = run(&full.iter().map(|s| *s).collect::<Vec<_>>());
        assert_eq!(
            exit_code(&out),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let check = run(&["check", cert_path.to_str().unwrap()]);
        assert_eq!(exit_code(&check), 0, "{name} recheck");
    }
}

#[test]
fn check_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("qr7.json");
    run(&["witness", "qr", "--p", "7", "--out", cert_path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&cert_path).unwrap();
    // p = 7: f multiplies by 2, pairs [["1","2"],["2","4"],["4","1"]];
    // retarget 1 -> 4 to break the bijection
    let tampered = text.replace("[\n      \"1\",\n      \"2\"\n    ]", "[\n      \"1\",\n      \"4\"\n    ]");
    assert_ne!(tampered, text, "tamper substitution must apply");
    let tampered_path = dir.path().join("tampered.json");
    std::fs::write(&tampered_path, tampered).unwrap();
    let check = run(&["check", tampered_path.to_str().unwrap()]);
    assert_eq!(exit_code(&check), 1);
}

#[test]
fn check_rejects_truncated_file() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("qr13.json");
    run(&["witness", "qr", "--p", "13", "--out", cert_path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&cert_path).unwrap();
    let truncated_path = dir.path().join("truncated.json");
    std::fs::write(&truncated_path, &text[..text.len() / 2]).unwrap();
    let check = run(&["check", truncated_path.to_str().unwrap()]);
    assert_eq!(exit_code(&check), 2);
}

#[test]
fn search_fails_at_order_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("fail7.json");
    let found = run(&[
        "search", "fails-at-order", "--group", "z:7", "--order", "4",
        "--out", cert_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&found), 0);
    let check = run(&["check", cert_path.to_str().unwrap()]);
    assert_eq!(exit_code(&check), 0);

    let absent = run(&["search", "fails-at-order", "--group", "z:5", "--order", "3"]);
    assert_eq!(exit_code(&absent), 1);

    let unknown = run(&[
        "search", "fails-at-order", "--group", "z:997", "--order", "400", "--budget", "10",
    ]);
    assert_eq!(exit_code(&unknown), 3);

    let usage = run(&["search", "fails-at-order", "--group", "z:x", "--order", "3"]);
    assert_eq!(exit_code(&usage), 2);
}

#[test]
fn search_matching_property_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("unmatchable.json");
    let out = run(&[
        "search", "matching-property", "--group", "z:4", "--order", "2",
        "--out", cert_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!(parsed["kind"], "unmatchable");
    let check = run(&["check", cert_path.to_str().unwrap()]);
    assert_eq!(exit_code(&check), 0);

    // prime order: the property holds, search reports absence
    let pass = run(&["search", "matching-property", "--group", "z:5", "--order", "3"]);
    assert_eq!(exit_code(&pass), 1);
}

#[test]
fn search_lmp_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("lmp.json");
    let out = run(&[
        "search", "lmp-counterexample", "--tower", "gf:2^4",
        "--out", cert_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let check = run(&["check", cert_path.to_str().unwrap()]);
    assert_eq!(exit_code(&check), 0);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("r1.json");
    let second = dir.path().join("r2.json");
    for path in [&first, &second] {
        let out = run(&[
            "verify", "--suite", "all", "--seed", "42",
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b, "identical command and seed must give identical bytes");
    assert!(Path::new(&first).exists());
}

#[test]
fn certificates_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("c1.json");
    let second = dir.path().join("c2.json");
    for path in [&first, &second] {
        let out = run(&[
            "witness", "pairing", "--p", "13", "--seed", "9",
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0);
    }
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );
}
