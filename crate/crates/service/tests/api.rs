use std::collections::BTreeMap;
use std::sync::Arc;

use axum::http::StatusCode;
use guidetree_core::format::serialize_tree;
use guidetree_core::nav::Action;
use guidetree_core::predicate::{PatientRecord, PatientValue};
use guidetree_service::store::LOG_FILE;
use guidetree_service::testing::{crash_restart_check, privacy_leaks, race_once, triage_tree, Client};
use guidetree_service::AppState;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::json;

fn app(dir: &std::path::Path) -> Arc<AppState> {
    let trees = BTreeMap::from([("T1".to_owned(), Arc::new(triage_tree()))]);
    AppState::with_trees(trees, dir).unwrap()
}

fn spo2(v: f64) -> PatientRecord {
    PatientRecord::new().with("SpO2", PatientValue::number(v, Some("%")))
}

#[tokio::test]
async fn tree_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let client = Client::new(app(dir.path()));
    let (status, list) = client.get("/api/trees").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(list, json!([{"id": "T1", "title": "Severity triage"}]));

    let (status, doc) = client.get("/api/trees/T1").await;
    assert_eq!(status, StatusCode::OK);
    let canonical: serde_json::Value = serde_json::from_str(&serialize_tree(&triage_tree())).unwrap();
    assert_eq!(doc, canonical);

    let (status, err) = client.get("/api/trees/nope").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(err["error"], "UnknownTree");
}

#[tokio::test]
async fn fresh_session_then_answer() {
    let dir = tempfile::tempdir().unwrap();
    let client = Client::new(app(dir.path()));
    let (status, created) = client.create("T1").await;
    assert_eq!(status, StatusCode::CREATED);
    let sid = created["session"].as_str().unwrap().to_owned();
    assert_eq!(sid.len(), 32);

    let (_, state) = client.state(&sid).await;
    assert_eq!(state["frontier"], json!(["n0"]));
    assert_eq!(state["revision"], 0);
    for node in state["layout"]["nodes"].as_array().unwrap() {
        assert_eq!(node["scale"], 1.0);
    }

    let (status, _) = client.act(&sid, 0, &Action::answer("n0", &["severe"])).await;
    assert_eq!(status, StatusCode::OK);
    let (_, state) = client.state(&sid).await;
    assert_eq!(state["frontier"], json!(["n2"]));
    assert_eq!(state["revision"], 1);
    assert_eq!(state["selected"], json!([{"from": "n0", "answer": "severe", "to": "n2"}]));
}

#[tokio::test]
async fn error_responses() {
    let dir = tempfile::tempdir().unwrap();
    let client = Client::new(app(dir.path()));
    let (_, created) = client.create("T1").await;
    let sid = created["session"].as_str().unwrap().to_owned();

    let (status, err) = client.act(&sid, 0, &Action::answer("n0", &["moderate"])).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"], "InvalidAction");
    assert_eq!(err["detail"]["error"], "UnknownChoice");

    let (status, err) = client.act(&sid, 5, &Action::Reset).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(err["current"], 0);

    let (status, err) = client.state("0000").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(err["error"], "UnknownSession");

    let (status, err) = client.create("nope").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(err["error"], "UnknownTree");

    let (status, err) = client
        .send(axum::http::Method::POST, "/api/sessions", Some("{\"tree_id\":".into()))
        .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(err["error"], "MalformedBody");
    assert_eq!(err["line"], 1);

    let (status, err) = client.post("/api/sessions", &json!({"tree": "T1"})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"], "InvalidBody");

    let (status, err) = client.get(&format!("/api/sessions/{sid}/state?viewport=wide")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(err["error"], "BadViewport");

    let (status, state) = client.get(&format!("/api/sessions/{sid}/state?viewport=640x480")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["layout"]["viewport"]["width"], 640.0);
}

#[tokio::test]
async fn autonav_examples() {
    let dir = tempfile::tempdir().unwrap();
    let client = Client::new(app(dir.path()));
    let (_, created) = client.create("T1").await;
    let sid = created["session"].as_str().unwrap().to_owned();

    let (status, body) = client.autonav(&sid, &PatientRecord::new()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["trace"], json!({"steps": [], "stop": "missing_data"}));
    assert_eq!(body["state"]["revision"], 0);

    let (status, body) = client.autonav(&sid, &spo2(91.0)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["trace"]["steps"].as_array().unwrap().len(), 1);
    assert_eq!(body["state"]["frontier"], json!(["n2"]));
    assert_eq!(body["state"]["revision"], 1);

    let (status, body) = client.autonav(&sid, &spo2(91.0)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["trace"]["steps"], json!([]));
    assert_eq!(body["state"]["revision"], 1);

    let bad = PatientRecord::new().with("SpO2", PatientValue::Boolean(true));
    let (status, err) = client.autonav(&sid, &bad).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["detail"]["error"], "TypeMismatch");

    let (status, _) = client
        .post(&format!("/api/sessions/{sid}/autonav?revision=0"), &json!({"format_version": 1, "fields": {}}))
        .await;
    assert_eq!(status, StatusCode::CONFLICT);

    let log = std::fs::read_to_string(dir.path().join(LOG_FILE)).unwrap();
    assert_eq!(log.lines().count(), 2);
    assert!(!log.contains("SpO2") && !log.contains("91"));
}

#[tokio::test]
async fn restart_keeps_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let client = Client::new(app(dir.path()));
    let (_, created) = client.create("T1").await;
    let sid = created["session"].as_str().unwrap().to_owned();
    client.act(&sid, 0, &Action::answer("n0", &["mild"])).await;
    client.act(&sid, 1, &Action::answer("n1", &["diabetes", "obesity"])).await;
    let (_, before) = client.state(&sid).await;

    let client = Client::new(app(dir.path()));
    let (status, after) = client.state(&sid).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(after, before);
    assert_eq!(after["revision"], 2);
}

#[tokio::test]
async fn crash_restart_and_privacy() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    let run = crash_restart_check(&mut rng, dir.path(), 100).await.unwrap();
    assert!(run.autonav_calls > 100);
    assert!(!run.submitted.is_empty());
    assert_eq!(privacy_leaks(dir.path(), &run.submitted).unwrap(), Vec::<String>::new());
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn racing_actions_get_one_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let client = Client::new(app(dir.path()));
    for _ in 0..200 {
        let (a, b) = race_once(&client).await;
        let mut got = [a, b];
        got.sort();
        assert_eq!(got, [StatusCode::OK, StatusCode::CONFLICT]);
    }
}
