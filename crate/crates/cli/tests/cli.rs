use ninefold_core::{library, schema};
use ninefold_simplicial::triangulations;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn ninefold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ninefold")).args(args).env_remove("NINEFOLD_CORPUS_DIR").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "structured"];
    all.extend_from_slice(args);
    let o = ninefold(&all);
    (code(&o), serde_json::from_str(&stdout(&o)).expect("report is JSON"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ninefold-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn decide_exit_codes_follow_the_verdict() {
    assert_eq!(code(&ninefold(&["decide", "lib:S9"])), 0);
    assert_eq!(code(&ninefold(&["decide", "lib:S1xHP2"])), 10);
    // Mixed inputs report the largest code.
    assert_eq!(code(&ninefold(&["decide", "lib:S9", "lib:M3_sum"])), 10);
    let o = ninefold(&["decide", "lib:Dold_5_2"]);
    assert!(stdout(&o).contains("NoContact(W3)"));
}

#[test]
fn structured_report_shape() {
    let (c, r) = structured(&["decide", "lib:M1_surgered"]);
    assert_eq!(c, 10);
    assert_eq!(r["exit_code"], 10);
    assert_eq!(r["tool"], "ninefold");
    assert_eq!(r["command"], "decide");
    assert_eq!(r["inputs"][0]["label"], "M1_surgered");
    assert_eq!(r["inputs"][0]["digest"].as_str().unwrap().len(), 64);
    assert_eq!(r["results"][0]["summary"], "NoContact(O9)");
    assert!(r.get("timing_ms").is_none());
    let (_, timed) = structured(&["--timing", "decide", "lib:S9"]);
    assert!(timed["timing_ms"].is_u64());
}

#[test]
fn structured_output_is_deterministic_across_threads() {
    let a = ninefold(&["--format", "structured", "--threads", "1", "corpus"]);
    let b = ninefold(&["--format", "structured", "--threads", "4", "corpus"]);
    let c = ninefold(&["--format", "structured", "--threads", "4", "corpus"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
    let s1 = ninefold(&["--format", "structured", "--threads", "1", "selftest", "--suite", "wu_formula"]);
    let s4 = ninefold(&["--format", "structured", "--threads", "4", "selftest", "--suite", "wu_formula"]);
    assert_eq!(s1.stdout, s4.stdout);
}

#[test]
fn library_corpus_matches_and_round_trips_through_a_directory() {
    let (c, r) = structured(&["corpus"]);
    assert_eq!(c, 0);
    assert_eq!(r["results"].as_array().unwrap().len(), library::NAMES.len());
    assert!(r["results"].as_array().unwrap().iter().all(|x| x["matches"] == true));

    let dir = scratch("corpus");
    assert_eq!(code(&ninefold(&["corpus", "--export", dir.to_str().unwrap()])), 0);
    assert_eq!(code(&ninefold(&["corpus", dir.to_str().unwrap()])), 0);

    // A wrong expectation is a corpus mismatch.
    std::fs::write(dir.join("expected.json"), r#"{"S9": "NoContact(O8)"}"#).unwrap();
    let (c, r) = structured(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(c, 14);
    let s9 = r["results"].as_array().unwrap().iter().find(|x| x["label"] == "S9").unwrap();
    assert_eq!(s9["matches"], false);
}

#[test]
fn corpus_directory_from_the_environment() {
    let dir = scratch("env");
    std::fs::write(dir.join("S9.json"), schema::to_json(&library::library("S9").unwrap())).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ninefold")).args(["--format", "structured", "corpus"]).env("NINEFOLD_CORPUS_DIR", &dir).output().unwrap();
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(r["results"].as_array().unwrap().len(), 1);
    assert_eq!(r["results"][0]["verdict"], "Contact");
    assert_eq!(r["results"][0]["matches"], Value::Null);
}

#[test]
fn selftest_passes_and_catches_faults() {
    assert_eq!(code(&ninefold(&["selftest"])), 0);
    let (c, r) = structured(&["selftest", "--suite", "exactness", "--fault", "zero-sq1"]);
    assert_eq!(c, 14);
    assert_eq!(r["results"][0]["counterexample"]["model"], "RP2");
    let (c, r) = structured(&["selftest", "--suite", "validate", "--fault", "drop-pairing-row"]);
    assert_eq!(c, 14);
    assert_eq!(r["results"][0]["counterexample"]["model"], "S1xCP4");
}

#[test]
fn parse_errors_name_field_and_position() {
    let dir = scratch("parse");
    let mut doc: Value = serde_json::from_str(&schema::to_json(&library::library("S9").unwrap())).unwrap();
    doc["graded"][0]["z_rnk"] = Value::from(1);
    let path = dir.join("bad.json");
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let o = ninefold(&["decide", path.to_str().unwrap()]);
    assert_eq!(code(&o), 13);
    let text = stdout(&o);
    assert!(text.contains("z_rnk") && text.contains("line"), "{text}");
    assert_eq!(code(&ninefold(&["decide", dir.join("missing.json").to_str().unwrap()])), 13);
    assert_eq!(code(&ninefold(&["decide", "lib:NoSuchModel"])), 13);
}

#[test]
fn invalid_model_exits_with_validation_code() {
    let dir = scratch("invalid");
    let mut doc: Value = serde_json::from_str(&schema::to_json(&library::library("S1xHP2").unwrap())).unwrap();
    // Break Poincaré duality: drop every degree-(1,8) product.
    for block in doc["cup2"].as_array_mut().unwrap() {
        if block["degrees"] == serde_json::json!([1, 8]) {
            block["products"] = Value::Array(vec![]);
        }
    }
    let path = dir.join("broken.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let (c, r) = structured(&["validate", path.to_str().unwrap()]);
    assert_eq!(c, 12);
    assert_eq!(r["results"][0]["valid"], false);
    assert_eq!(code(&ninefold(&["decide", path.to_str().unwrap()])), 12);
}

#[test]
fn triangulations_are_accepted_by_validate_and_classes() {
    let dir = scratch("complex");
    let path = dir.join("rp2.json");
    std::fs::write(&path, triangulations::rp2().to_json()).unwrap();
    assert_eq!(code(&ninefold(&["validate", path.to_str().unwrap()])), 0);
    let (c, r) = structured(&["classes", path.to_str().unwrap()]);
    assert_eq!(c, 0);
    // w1 of RP^2 is the generator.
    assert_ne!(r["results"][0]["stiefel_whitney"][1]["text"], "0");
    assert_eq!(code(&ninefold(&["decide", path.to_str().unwrap()])), 12);
}

#[test]
fn sum_matches_assembled_model() {
    let (c, r) = structured(&["sum", "lib:S9", "lib:S1xHP2"]);
    assert_eq!(c, 10);
    assert_eq!(r["results"][0]["summary"], "NoContact(W8)");
    let (c, r) = structured(&["sum", "lib:RP9", "lib:S1xHP2"]);
    assert_eq!(c, 10);
    assert_eq!(r["results"][0]["summary"], "NoContact(O8)");
}

#[test]
fn structured_report_round_trips() {
    let o = ninefold(&["--format", "structured", "classes", "lib:S1xCP4"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let again = serde_json::to_string_pretty(&v).unwrap();
    assert_eq!(again.trim_end(), stdout(&o).trim_end());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&ninefold(&["decide"])), 2);
    assert_eq!(code(&ninefold(&["selftest", "--suite", "nope"])), 2);
}
