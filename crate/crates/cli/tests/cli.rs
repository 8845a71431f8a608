//! End-to-end checks of the command-line interface: exit codes, certificate
//! shape, determinism, and the piping of construct output into the other
//! commands.

use std::process::{Command, Output};

fn demorgan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_demorgan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn classify_corpus_algebra() {
    let out = demorgan(&["--corpus", "classify", "C4"]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["tool"], "demorgan");
    assert_eq!(cert["verdict"]["simple"]["holds"], true);
    assert_eq!(cert["verdict"]["anti_idempotent"]["holds"], true);
    assert_eq!(cert["verdict"]["idempotent"]["holds"], false);
    assert_eq!(cert["inputs"][0]["source"], "corpus:C4");
}

#[test]
fn negcone_suite_fails_on_a3_with_exit_one() {
    let out = demorgan(&["--corpus", "check", "--suite", "negcone", "A3"]);
    assert_eq!(out.status.code(), Some(1));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["verdict"]["agree"], true);
    assert_eq!(cert["verdict"]["generation"], false);
    assert_eq!(cert["verdict"]["counterexample"]["x"], 2);
}

#[test]
fn epic_verdicts_and_exit_codes() {
    let out = demorgan(&[
        "--corpus", "epic", "--ambient", "S3o2", "--sub", "0,1,3", "--gens", "S3o2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["verdict"]["epic"], true);

    let out = demorgan(&[
        "--corpus", "epic", "--ambient", "S3o2", "--sub", "0,1,3", "--gens", "S3o2,S3o3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["verdict"]["epic"], false);
    assert_eq!(cert["witnesses"]["disagreesAt"], 2);
}

#[test]
fn construct_output_feeds_validate() {
    let dir = std::env::temp_dir().join("demorgan-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s6.json");
    let out = demorgan(&["construct", "sugihara", "6"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&path, out.stdout).unwrap();
    let out = demorgan(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["verdict"], "valid");
}

#[test]
fn invalid_document_exits_two() {
    let dir = std::env::temp_dir().join("demorgan-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    // A two-chain whose fusion has no neutral element.
    std::fs::write(
        &path,
        r#"{"size":2,"le":[[1,1],[0,1]],"fusion":[[1,1],[1,1]],"e":0,"neg":null}"#,
    )
    .unwrap();
    let out = demorgan(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_and_bad_usage_exit_two() {
    let out = demorgan(&["classify", "/nonexistent/algebra.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = demorgan(&["--corpus", "check", "A3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = demorgan(&["--corpus", "subalg", "A3", "--gens", "99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn equation_checks() {
    let out = demorgan(&["--corpus", "check", "--equation", "sigma", "S4"]);
    assert_eq!(out.status.code(), Some(0));
    let out = demorgan(&["--corpus", "check", "--equation", "sigma", "S3o2"]);
    assert_eq!(out.status.code(), Some(1));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["witnesses"]["assignment"]["x"], 2);
    // Plain equation text with a bounded exponent.
    let out = demorgan(&["--corpus", "check", "--equation", "x^2 = x * x", "C4"]);
    assert_eq!(out.status.code(), Some(0));
    let out = demorgan(&["--corpus", "check", "--equation", "x^9 = x", "C4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certificates_are_deterministic() {
    let args = ["--corpus", "homs", "S3o2", "S3o3"];
    let first = stdout(&demorgan(&args));
    let second = stdout(&demorgan(&args));
    assert_eq!(first, second);
    assert!(!first.is_empty());
}

#[test]
fn separate_emits_verified_pair() {
    let out = demorgan(&[
        "--corpus", "separate", "--ambient", "S3o2", "--sub", "0,1,3", "--element", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["witnesses"]["separatedAt"], 2);
    let g = cert["witnesses"]["g"]["map"].as_array().unwrap();
    let h = cert["witnesses"]["h"]["map"].as_array().unwrap();
    assert_ne!(g[2], h[2]);
    for i in [0, 1, 3] {
        assert_eq!(g[i], h[i]);
    }
}

#[test]
fn decompose_reflect_verdicts() {
    let out = demorgan(&["--corpus", "decompose", "--mode", "reflect", "C4"]);
    assert_eq!(out.status.code(), Some(0));
    let out = demorgan(&["--corpus", "decompose", "--mode", "reflect", "A3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = demorgan(&["--corpus", "decompose", "--mode", "dmm", "S5"]);
    assert_eq!(out.status.code(), Some(2)); // idempotent input is a usage error
}

#[test]
fn otimes_spec_document() {
    let dir = std::env::temp_dir().join("demorgan-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let base = stdout(&demorgan(&["construct", "sugihara", "3"]));
    let spec = format!(r#"{{"base":{},"sizes":[1,1,2]}}"#, base.trim());
    let path = dir.join("spec.json");
    std::fs::write(&path, spec).unwrap();
    let out = demorgan(&["construct", "otimes", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["size"], 4);
    assert_eq!(doc["neg"], serde_json::Value::Null);
}
