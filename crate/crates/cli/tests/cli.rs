use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn zigzag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zigzag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = zigzag(args);
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap())
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn tables_are_verified() {
    let (code, text) = run(&["tables"]);
    assert_eq!(code, 0, "{text}");
    assert_eq!(text.matches("VERIFIED").count(), 7);
    assert!(!text.contains("FAILED"));
    assert!(text.contains("(Q_U[3], 0, 0, 0, 0, 0)"));
    assert!(text.contains("(0, Q, Q, 0, id, 0)"));
    assert!(text.contains("(Q_U[3], Q, Q, 0, id, 0)"));
}

#[test]
fn corrupted_fixture_names_position() {
    let (code, text) = run(&["check", &path("corrupted.zzl")]);
    assert_eq!(code, 1);
    assert!(text.contains("not exact at A") || text.contains("not exact at B"), "{text}");
    assert!(text.contains(":2:"), "{text}");
}

#[test]
fn exit_code_contract() {
    for ok in ["table1.zzl", "three_nodes.zzl", "monodromy.zzl"] {
        assert_eq!(run(&["check", &path(ok)]).0, 0, "{ok}");
    }
    for failing in ["corrupted.zzl", "bad_semantic.zzl", "bad_gluing.zzl"] {
        assert_eq!(run(&["check", &path(failing)]).0, 1, "{failing}");
    }
    for malformed in ["bad_lexical.zzl", "bad_syntax.zzl"] {
        assert_eq!(run(&["check", &path(malformed)]).0, 2, "{malformed}");
    }
    assert_eq!(run(&["gluing", &path("bad_gluing.zzl"), "g"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["check"]).0, 2);
    assert_eq!(run(&["check", &path("missing.zzl")]).0, 2);
    assert_eq!(run(&["dual", &path("table1.zzl"), "nope"]).0, 2);
    assert_eq!(run(&["tables", "--format", "dot"]).0, 2);
}

#[test]
fn skeleton_matches_golden() {
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/three_nodes.dot")).unwrap();
    let (code, text) = run(&["skeleton", &path("three_nodes.zzl"), "--format", "dot"]);
    assert_eq!(code, 0);
    assert_eq!(text, golden);
    assert_eq!(text.matches(" -> ").count(), 6);
    let (_, again) = run(&["skeleton", &path("three_nodes.zzl")]);
    assert_eq!(again, text);
}

#[test]
fn json_is_stable_and_sorted() {
    for args in [
        vec!["skeleton", "three_nodes.zzl", "--format", "json"],
        vec!["assemble", "three_nodes.zzl", "--format", "json"],
        vec!["check", "table1.zzl", "--format", "json"],
        vec!["ext-class", "table1.zzl", "corr", "--format", "json"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| if a.ends_with(".zzl") { path(a) } else { a.to_string() })
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, first) = run(&args);
        assert_eq!(code, 0, "{first}");
        assert_eq!(run(&args).1, first);
        let v: serde_json::Value = serde_json::from_str(&first).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", first);
        let obj = v.as_object().unwrap();
        let keys: Vec<&String> = obj.keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}

#[test]
fn report_json_schema() {
    let (code, text) = run(&["gluing", &path("three_nodes.zzl"), "g", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "pass");
    assert!(v["per_check"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    assert!(v["notices"].as_array().unwrap().iter().any(|n| n == "filtrations: not checked"));
}

#[test]
fn monodromy_commands() {
    let (code, text) = run(&["wfilt", &path("monodromy.zzl"), "n", "--center", "0"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("Gr_-1: dim 1") && text.contains("Gr_1: dim 1"), "{text}");
    let (code, text) = run(&["wfilt", &path("monodromy.zzl"), "t", "--center", "-1"]);
    assert_eq!(code, 1, "{text}");
    let (code, text) = run(&["nlog", &path("monodromy.zzl"), "t"]);
    assert_eq!(code, 0);
    assert!(text.contains("[0, 1; 0, 0]"), "{text}");
    let (code, text) = run(&[
        "pl",
        &path("monodromy.zzl"),
        "--alpha",
        "alpha",
        "--delta",
        "delta",
        "--pairing",
        "q",
    ]);
    assert_eq!(code, 0);
    assert!(text.contains("T(alpha) = [1, 1]"), "{text}");
    assert!(text.contains("(T - I)^2 = 0: yes"), "{text}");
}

#[test]
fn dual_and_ext_class() {
    let (code, text) = run(&["dual", &path("table1.zzl"), "sky"]);
    assert_eq!(code, 0);
    assert!(text.contains("self-dual: yes"), "{text}");
    let (code, text) = run(&["ext-class", &path("table1.zzl"), "split"]);
    assert_eq!(code, 0);
    assert!(text.contains("split: yes"), "{text}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("k.dot");
    let out = zigzag(&[
        "skeleton",
        &path("three_nodes.zzl"),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&target).unwrap().starts_with("digraph skeleton {"));
}
