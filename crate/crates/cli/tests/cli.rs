//! End-to-end tests of the compiled binary: printed values, the
//! exit-code contract, certificate round-trips, and suite determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_majonorm"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Writes `contents` to a per-test temp file and returns its path.
fn temp_instance(name: &str, contents: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    path.push(name);
    std::fs::write(&path, contents).expect("temp dir writable");
    path.to_str().expect("utf8 path").to_owned()
}

fn delta2() -> String {
    temp_instance(
        "delta2.json",
        r#"{"dimension":2,"cone":{"kind":"halfspace","matrix":[[1,0],[0,1]]},"M":[[1,0],[0,1]]}"#,
    )
}

#[test]
fn norm_delta_is_l1() {
    let file = delta2();
    let out = run(&["norm", &file, "--vector", r#"["1","-2"]"#]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "3\n");

    let out = run(&["norm", &file, "--vector", "[0,0]"]);
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn norm_outside_ideal_is_infinite() {
    let file = temp_instance(
        "single-gen.json",
        r#"{"dimension":2,"cone":{"kind":"halfspace","matrix":[[1,0],[0,1]]},"M":[[1,0]]}"#,
    );
    let out = run(&["norm", &file, "--vector", "[0,1]"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "infinite\n");
}

#[test]
fn norm_witness_and_json() {
    let file = delta2();
    let out = run(&[
        "norm", &file, "--vector", r#"["1","-2"]"#, "--witness", "--json",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(parsed["value"], "3");
    assert!(parsed["witness"].is_array());
}

#[test]
fn norm_lex_infimum_not_attained() {
    let out = run(&["gallery", "emit", "lex-point"]);
    let file = temp_instance("lex-point.json", &stdout(&out));
    let out = run(&["norm", &file, "--vector", "[0,1]"]);
    assert_eq!(stdout(&out), "0\ninfimum not attained\n");
    let out = run(&["norm", &file, "--vector", r#"["2","-5"]"#, "--json"]);
    assert_eq!(stdout(&out), "{\"value\":\"2\",\"attained\":true}\n");
}

#[test]
fn member_reports_ideal_membership() {
    let file = temp_instance(
        "single-gen-member.json",
        r#"{"dimension":2,"cone":{"kind":"halfspace","matrix":[[1,0],[0,1]]},"M":[[1,0]]}"#,
    );
    let out = run(&["member", &file, "--vector", r#"["-3",0]"#]);
    assert_eq!(stdout(&out), "true\n");
    let out = run(&["member", &file, "--vector", "[0,1]"]);
    assert_eq!(stdout(&out), "false\n");
}

#[test]
fn coherent_delta_exits_zero_with_unit_certificate() {
    let file = delta2();
    let out = run(&["coherent", &file]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "coherent\n");

    let out = run(&["coherent", &file, "--emit-certificate"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(parsed["verdict"], "coherent");
    assert_eq!(parsed["phi"], serde_json::json!(["1", "1"]));
}

#[test]
fn coherent_lex_pair_exits_three_with_witness() {
    let emitted = run(&["gallery", "emit", "lex-pair"]);
    let file = temp_instance("lex-pair.json", &stdout(&emitted));
    let out = run(&["coherent", &file, "--emit-certificate"]);
    assert_eq!(code(&out), 3);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(parsed["verdict"], "incoherent");
    assert!(parsed["witness"].is_array());
}

#[test]
fn coherent_free_group_ball_exits_three() {
    let emitted = run(&["gallery", "emit", "f2-ball-2"]);
    let file = temp_instance("f2-ball-2.json", &stdout(&emitted));
    let out = run(&["coherent", &file]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout(&out), "incoherent\n");
}

#[test]
fn opnorm_examples() {
    let file = delta2();
    for (psi, expected) in [
        (r#"["1","1"]"#, "1\n"),
        ("[0,0]", "0\n"),
        (r#"["2","3"]"#, "3\n"),
    ] {
        let out = run(&["opnorm", &file, "--functional", psi]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout(&out), expected, "psi = {psi}");
    }
}

#[test]
fn unitnorm_from_flag_and_file_section() {
    let file = delta2();
    let out = run(&[
        "unitnorm", &file, "--vector", r#"["1","-2"]"#, "--unit", "[1,1]",
    ]);
    assert_eq!(stdout(&out), "2\n");

    let with_section = temp_instance(
        "delta2-unit.json",
        r#"{"dimension":2,"cone":{"kind":"halfspace","matrix":[[1,0],[0,1]]},"M":[[1,0],[0,1]],"order_unit":[1,1]}"#,
    );
    let out = run(&["unitnorm", &with_section, "--vector", r#"["1","-2"]"#]);
    assert_eq!(stdout(&out), "2\n");

    // missing unit entirely is an input error
    let out = run(&["unitnorm", &file, "--vector", "[1,0]"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gallery_emits_round_trip_through_every_command() {
    let listed = run(&["gallery", "list"]);
    assert_eq!(code(&listed), 0);
    assert!(stdout(&listed).contains("delta-<n>"));

    for name in ["delta-3", "f2-ball-2", "lex-point", "lex-pair"] {
        let emitted = run(&["gallery", "emit", name]);
        assert_eq!(code(&emitted), 0, "emit {name}");
        let text = stdout(&emitted);
        // re-parse and re-emit: serialization round-trips exactly
        let spec: majonorm::majorize::InstanceSpec =
            serde_json::from_str(&text).expect("valid instance json");
        assert_eq!(serde_json::to_string(&spec).unwrap() + "\n", text);
        // the emitted instance is consumable by other commands
        let file = temp_instance(&format!("{name}.json"), &text);
        let out = run(&["coherent", &file]);
        assert!(code(&out) == 0 || code(&out) == 3, "coherent on {name}");
    }

    let out = run(&["gallery", "emit", "delta-0"]);
    assert_eq!(code(&out), 2);
    let out = run(&["gallery", "emit", "nope"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_input_exits_two() {
    let out = run(&["norm", "/nonexistent.json", "--vector", "[1]"]);
    assert_eq!(code(&out), 2);

    let bad = temp_instance("bad.json", "{ not json");
    let out = run(&["norm", &bad, "--vector", "[1,0]"]);
    assert_eq!(code(&out), 2);

    let file = delta2();
    let out = run(&["norm", &file, "--vector", "[1]"]);
    assert_eq!(code(&out), 2, "dimension mismatch");
    let out = run(&["norm", &file, "--vector", "oops"]);
    assert_eq!(code(&out), 2, "unparsable vector");
    let out = run(&["opnorm", &file, "--functional", r#"["1/0","1"]"#]);
    assert_eq!(code(&out), 2, "zero denominator");

    let zero_gen = temp_instance(
        "zero-gen.json",
        r#"{"dimension":2,"cone":{"kind":"halfspace","matrix":[[1,0],[0,1]]},"M":[[0,0]]}"#,
    );
    let out = run(&["coherent", &zero_gen]);
    assert_eq!(code(&out), 2, "invalid positive set");
}

#[test]
fn suite_is_deterministic_and_seed_sensitive() {
    let a = run(&["suite", "--seed", "7", "--json"]);
    let b = run(&["suite", "--seed", "7", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "same seed, byte-identical report");

    let parsed: serde_json::Value = serde_json::from_str(&stdout(&a)).expect("valid json");
    assert_eq!(parsed["seed"], 7);
    assert_eq!(parsed["failed"], 0);
    assert!(parsed["checks"].as_array().unwrap().len() >= 10);

    let c = run(&["suite", "--seed", "8", "--json"]);
    assert_eq!(code(&c), 0);
    let parsed_c: serde_json::Value = serde_json::from_str(&stdout(&c)).expect("valid json");
    assert_eq!(parsed_c["failed"], 0);
}
