use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use guidetree_core::testing::{synthetic_study, write_dataset};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_guidetree"))
}

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn samplesize_reports_discrepancy() {
    let out = bin()
        .args(["samplesize", "--alpha", "0.05", "--power", "0.8", "--delta", "2", "--sd", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("63 case-solves per group"), "{text}");
    assert!(text.contains("states 60"));

    let out = bin()
        .args(["samplesize", "--delta", "2", "--sd", "8", "--json"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["per_group"], 252);
    assert!(v.get("note").is_none());
}

#[test]
fn validate_samples_and_broken_tree() {
    let trees = samples().join("trees");
    let out = bin()
        .arg("validate")
        .arg(trees.join("T1.tree.json"))
        .arg(trees.join("admission.tree.json"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stdout(&out));

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(trees.join("T1.tree.json")).unwrap();
    let broken = dir.path().join("broken.tree.json");
    std::fs::write(&broken, text.replace("\"to\": \"r2\"", "\"to\": \"r9\"")).unwrap();
    let out = bin().arg("validate").arg(&broken).output().unwrap();
    assert!(!out.status.success());
    assert!(stdout(&out).contains("UnknownTarget(r9"), "{}", stdout(&out));
}

#[test]
fn score_and_compare_synthetic_study() {
    let dir = tempfile::tempdir().unwrap();
    let (cases, transcripts) = synthetic_study([926, 925, 1021]);
    write_dataset(dir.path(), &cases, &transcripts).unwrap();

    let out = bin()
        .arg("score")
        .arg("--case")
        .arg(dir.path().join("cases/case-1.case.json"))
        .arg("--transcript")
        .arg(dir.path().join("transcripts/A00-case-1.json"))
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let points = v["points"].as_object().unwrap();
    assert_eq!(points.len(), 22);
    let sum: u64 = points.values().map(|p| p.as_u64().unwrap()).sum();
    assert_eq!(v["total"], sum);

    let report = dir.path().join("report.json");
    let tidy = dir.path().join("tidy.csv");
    let out = bin()
        .arg("compare")
        .arg("--dataset")
        .arg(dir.path())
        .args(["--pair", "A:B", "--pair", "AB:C", "--alpha", "0.05", "--bonferroni", "22"])
        .arg("--out")
        .arg(&report)
        .arg("--tidy")
        .arg(&tidy)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("AB vs C"));

    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let means: Vec<f64> = v["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["mean_total"].as_f64().unwrap())
        .collect();
    let rounded: Vec<String> = means.iter().map(|m| format!("{m:.2}")).collect();
    assert_eq!(rounded, ["15.43", "15.42", "17.02"]);
    assert_eq!(v["comparisons"].as_array().unwrap().len(), 2);
    assert!(v["comparisons"][0]["total"]["p"].as_f64().unwrap() > 0.9);
    assert!(v["comparisons"][1]["total"]["p"].as_f64().unwrap() < 0.0003);

    let rows = std::fs::read_to_string(&tidy).unwrap().lines().count();
    assert_eq!(rows, 1 + 180 * 22);
}

#[test]
fn bad_pair_is_a_usage_error() {
    let out = bin()
        .args(["compare", "--dataset", ".", "--pair", "AB:BC", "--out", "x.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn http(addr: &str, method: &str, path: &str, body: &str) -> (u16, Value) {
    let mut s = TcpStream::connect(addr).unwrap();
    write!(
        s,
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\n\
         Content-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut raw = String::new();
    s.read_to_string(&mut raw).unwrap();
    let status: u16 = raw[9..12].parse().unwrap();
    let (_, payload) = raw.split_once("\r\n\r\n").unwrap();
    (status, serde_json::from_str(payload).unwrap_or(Value::Null))
}

#[test]
fn serve_from_env_over_tcp() {
    let data = tempfile::tempdir().unwrap();
    let mut child = bin()
        .arg("serve")
        .env("GUIDETREE_TREES", samples().join("trees"))
        .env("GUIDETREE_DATA", data.path())
        .env("GUIDETREE_LISTEN", "127.0.0.1:0")
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().rsplit("http://").next().unwrap().to_owned();

    let result = std::panic::catch_unwind(|| {
        let (status, list) = http(&addr, "GET", "/api/trees", "");
        assert_eq!(status, 200);
        assert_eq!(list.as_array().unwrap().len(), 2);

        let (status, created) = http(&addr, "POST", "/api/sessions", r#"{"tree_id":"admission"}"#);
        assert_eq!(status, 201);
        let sid = created["session"].as_str().unwrap().to_owned();

        let patient = std::fs::read_to_string(samples().join("patients/elderly-stable.patient.json")).unwrap();
        let (status, body) = http(&addr, "POST", &format!("/api/sessions/{sid}/autonav"), &patient);
        assert_eq!(status, 200, "{body}");
        let answered: Vec<&str> = body["trace"]["steps"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["answer"].as_str().unwrap())
            .collect();
        assert_eq!(answered, ["No", "Yes"]);
        assert_eq!(body["trace"]["stop"], "multi_choice_stop");
        assert_eq!(body["state"]["frontier"], serde_json::json!(["q_risk"]));
    });
    child.kill().unwrap();
    child.wait().unwrap();
    result.unwrap();

    let log = std::fs::read_to_string(data.path().join("sessions.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 3);
    assert!(!log.contains("female") && !log.contains("SpO2"));
}
