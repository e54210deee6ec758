use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const SO4: &str = r#"{"group":{"family":"D","rank":2},"polynomial":{"4":[[0,"1"]],"2":[[1,"1"]],"0":[[2,"1"]]}}"#;

fn minred(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_minred"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn job_file(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn compute_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let input = job_file(dir.path(), "so4.json", SO4);
    let out = minred(&["compute", "-i", &input, "--verify"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["report"]["result"], serde_json::json!([3, 1]));
    assert_eq!(doc["verification"]["status"], "verified");
    assert!(String::from_utf8_lossy(&out.stderr).contains("[3,1]"));

    let piped = minred(&["compute", "-i", "-", "--verify"], Some(SO4));
    assert_eq!(piped.stdout, out.stdout);
}

#[test]
fn report_file_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = job_file(dir.path(), "so4.json", SO4);
    let mut docs = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let out = minred(&["compute", "-i", &input, "--oracle", "-o", path.to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        docs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(docs[0], docs[1]);
}

#[test]
fn exit_codes() {
    let not_self_dual = r#"{"group":{"family":"C","rank":2},"polynomial":{"4":[[0,"1"]],"3":[[1,"1"]],"0":[[2,"1"]]}}"#;
    let out = minred(&["compute", "-i", "-"], Some(not_self_dual));
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("not self-dual"));

    let long = r#"{"group":{"family":"A","rank":8},"polynomial":{"8":[[0,"1"]],"0":[[3,"1"]]}}"#;
    let out = minred(&["compute", "-i", "-", "--precision", "2"], Some(long));
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "precision");

    let out = minred(&["compute", "-i", "-"], Some("{\n  \"group\": nope\n}"));
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("line 2"));
}

#[test]
fn factor_command() {
    let two = r#"{"group":{"family":"C","rank":2},"polynomial":{"4":[[0,"1"]],"2":[[1,"1"]],"0":[[3,"1"]]}}"#;
    let out = minred(&["factor", "-i", "-"], Some(two));
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["factors"].as_array().unwrap().len(), 2);
    assert_eq!(doc["product_check"], true);

    let one = r#"{"group":{"family":"A","rank":2},"polynomial":{"2":[[0,"1"]],"0":[[1,"1"]]}}"#;
    let out = minred(&["factor", "-i", "-"], Some(one));
    assert_eq!(json(&out)["note"], "nothing to split");
}

#[test]
fn missing_input_is_a_validation_error() {
    let out = minred(&["compute", "-i", "/nonexistent/job.json"], None);
    assert_eq!(out.status.code(), Some(2));
}
