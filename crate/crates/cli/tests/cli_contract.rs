mod common;

use common::*;
use compomat_cli::document::to_json;
use compomat_cli::parse_document;

#[test]
fn golden_documents_and_reports() {
    let v = validator();
    for (fixture, stem) in GOLDEN_FIXTURES {
        let exported = run(&["export", fixture]);
        assert!(exported.status.success());
        let doc_text = stdout(&exported);
        check_golden(&format!("{stem}.document.json"), &doc_text).unwrap();

        let doc = parse_document(stem, &doc_text).unwrap();
        assert_eq!(to_json(&doc), doc_text, "{fixture} round-trips byte-identically");

        let path = golden_dir().join(format!("{stem}.document.json"));
        let classified = run(&["classify", path.to_str().unwrap(), "--format", "json"]);
        assert!(classified.status.success(), "{}", String::from_utf8_lossy(&classified.stderr));
        let report = stdout(&classified);
        validate(&v, &report).unwrap();
        check_golden(&format!("{stem}.classify.json"), &report).unwrap();
    }
}

#[test]
fn every_command_emits_schema_valid_json() {
    let v = validator();
    let partial = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(
        partial.path(),
        r#"{"bottom": {"src": "X", "dst": "X", "payload": "[[1,0,0],[0,1,0],[0,0,1]]"},
            "right": {"src": "X", "dst": "Y", "payload": "[[1,0,0],[0,1,0],[0,0,1]]"}}"#,
    )
    .unwrap();
    let p = partial.path().to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["axioms", "pair:3"],
        vec!["axioms", "crystalline:default"],
        vec!["classify", "random:7"],
        vec!["classify", "triclinic:search"],
        vec!["core", "crystalline:default"],
        vec!["intersect", "triclinic:default"],
        vec!["complete", "crystalline:default", "--partial", p],
        vec!["demo", "random", "--seed", "3", "--points", "2"],
    ];
    for args in runs {
        let mut full = args.clone();
        full.extend(["--format", "json"]);
        let o = run(&full);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        validate(&v, &stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn completion_of_identity_corner_lists_shared_arrows() {
    let partial = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(
        partial.path(),
        r#"{"bottom": {"src": "X", "dst": "X", "payload": "[[1,0,0],[0,1,0],[0,0,1]]"},
            "right": {"src": "X", "dst": "X", "payload": "[[1,0,0],[0,1,0],[0,0,1]]"}}"#,
    )
    .unwrap();
    let o = run(&["complete", "crystalline:default", "--partial", partial.path().to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // top = left, a shared arrow out of X: the identity transports to X, Y, Z
    assert_eq!(v["count"], 3);
}

#[test]
fn text_report_names_every_flag() {
    let text = stdout(&run(&["classify", "crystalline:default"]));
    for flag in [
        "uniform",
        "horizontally_transitive",
        "vertically_transitive",
        "weak_horizontally_transitive",
        "weak_vertically_transitive",
        "strongly_uniform",
        "weakly_uniform_corners",
        "weakly_uniform_midpoint",
        "filling_condition",
        "hom_conjugation_horizontal",
        "hom_conjugation_vertical",
        "isotropy_conjugate_horizontal",
        "isotropy_conjugate_vertical",
    ] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{flag}: "))), "{flag}");
    }
}

fn write_doc(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

pub const MISMATCHED: &str = r#"{
  "schema_version": "1",
  "objects": ["X", "Y"],
  "groupoids": [
    {"name": "a", "mode": "matrix", "arrows": [
      {"src": "X", "dst": "X", "payload": "[[1,0,0],[0,1,0],[0,0,1]]"},
      {"src": "Y", "dst": "Y", "payload": "[[1,0,0],[0,1,0],[0,0,1]]"}]},
    {"name": "b", "mode": "matrix", "objects": ["X"], "arrows": [
      {"src": "X", "dst": "X", "payload": "[[1,0,0],[0,1,0],[0,0,1]]"}]}
  ],
  "composite": {"omega1": {"groupoid": "a"}, "omega2": {"groupoid": "b"}, "require_transitive": false}
}"#;

pub const NOT_CLOSED: &str = r#"{
  "schema_version": "1",
  "objects": ["X"],
  "groupoids": [],
  "responses": [{"name": "W", "kind": "det"}],
  "composite": {
    "omega1": {"response": "W", "candidates": ["[[0,0,1],[1,0,0],[0,1,0]]"]},
    "omega2": {"response": "W"}
  }
}"#;

#[test]
fn exit_codes() {
    assert_eq!(run(&["axioms", "pair:3"]).status.code(), Some(0));

    let f = write_doc(MISMATCHED);
    let o = run(&["classify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("object_mismatch"));

    let f = write_doc(NOT_CLOSED);
    let o = run(&["classify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not_closed"));

    let f = write_doc(&MISMATCHED.replace("[[1,0,0],[0,1,0]", "[[1/0,0,0],[0,1,0]"));
    let o = run(&["axioms", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema_error"));

    let f = write_doc(&MISMATCHED.replace("\"groupoid\": \"b\"", "\"groupoid\": \"c\""));
    let o = run(&["classify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resolution_error"));

    assert_eq!(run(&["classify", "pair:x"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "pair:3", "--tol", "1/0"]).status.code(), Some(2));
}

#[test]
fn cap_from_environment() {
    let o = bin().args(["axioms", "pair:3"]).env("COMPOMAT_CAP", "4").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("size_cap"));
    // the flag wins over the environment
    let o = bin().args(["axioms", "pair:3", "--cap", "100"]).env("COMPOMAT_CAP", "4").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn emit_schema_prints_the_schema() {
    let o = run(&["--emit-schema"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), compomat_cli::REPORT_SCHEMA);
}

#[test]
fn output_is_independent_of_threads() {
    let one = run(&["--threads", "1", "classify", "random:11", "--format", "json"]);
    let eight = run(&["--threads", "8", "classify", "random:11", "--format", "json"]);
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn schema_rejects_malformed_reports() {
    let v = validator();
    let report: serde_json::Value = serde_json::from_str(&stdout(&run(&["classify", "pair:2", "--format", "json"]))).unwrap();
    let mut missing_flag = report.clone();
    missing_flag["flags"].as_object_mut().unwrap().shift_remove("strongly_uniform");
    assert!(validate(&v, &missing_flag.to_string()).is_err());
    let mut false_without_counterexample = report.clone();
    false_without_counterexample["flags"]["uniform"]["holds"] = serde_json::Value::Bool(false);
    assert!(validate(&v, &false_without_counterexample.to_string()).is_err());
    let mut unknown_command = report;
    unknown_command["command"] = "squares".into();
    assert!(validate(&v, &unknown_command.to_string()).is_err());
}
