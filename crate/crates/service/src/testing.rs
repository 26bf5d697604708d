//! In-process client and randomized session drivers for tests.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use guidetree_core::autonav::auto_advance;
use guidetree_core::format::serialize_patient;
use guidetree_core::nav::{Action, NavState};
use guidetree_core::predicate::{
    Comparator, DataPredicate, FieldDef, FieldType, PatientRecord, PatientValue,
};
use guidetree_core::testing::{random_action, random_tree, TreeShape};
use guidetree_core::tree::{example_parts, Node, TreeDef};
use http_body_util::BodyExt;
use rand::seq::IndexedRandom;
use rand::Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

use crate::store::LOG_FILE;
use crate::{router, AppState};

/// The small triage tree with an SpO2 predicate on its root question.
pub fn triage_tree() -> TreeDef {
    let mut p = example_parts();
    p.fields.push(FieldDef::number("SpO2", Some("%")));
    p.nodes[0] = Node::single("n0", "Severity?")
        .with_predicate(DataPredicate::cmp("SpO2", Comparator::Lt, 94.0), Some("severe"));
    TreeDef::new(p).expect("triage tree is valid")
}

#[derive(Clone)]
pub struct Client {
    router: Router,
}

impl Client {
    pub fn new(app: Arc<AppState>) -> Self {
        Client {
            router: router(app, None),
        }
    }

    pub async fn send(&self, method: Method, uri: &str, body: Option<String>) -> (StatusCode, Value) {
        let req = Request::builder()
            .method(method)
            .uri(uri)
            .header("content-type", "application/json")
            .body(body.map_or_else(Body::empty, Body::from))
            .expect("request builds");
        let resp = self.router.clone().oneshot(req).await.expect("router is infallible");
        let status = resp.status();
        let bytes = resp.into_body().collect().await.expect("body reads").to_bytes();
        let value = if bytes.is_empty() {
            Value::Null
        } else {
            serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
        };
        (status, value)
    }

    pub async fn get(&self, uri: &str) -> (StatusCode, Value) {
        self.send(Method::GET, uri, None).await
    }

    pub async fn post(&self, uri: &str, body: &Value) -> (StatusCode, Value) {
        self.send(Method::POST, uri, Some(body.to_string())).await
    }

    pub async fn create(&self, tree: &str) -> (StatusCode, Value) {
        self.post("/api/sessions", &json!({ "tree_id": tree })).await
    }

    pub async fn act(&self, sid: &str, revision: u64, action: &Action) -> (StatusCode, Value) {
        self.post(
            &format!("/api/sessions/{sid}/actions"),
            &json!({ "revision": revision, "action": action }),
        )
        .await
    }

    pub async fn autonav(&self, sid: &str, record: &PatientRecord) -> (StatusCode, Value) {
        self.send(
            Method::POST,
            &format!("/api/sessions/{sid}/autonav"),
            Some(serialize_patient(record)),
        )
        .await
    }

    pub async fn state(&self, sid: &str) -> (StatusCode, Value) {
        self.get(&format!("/api/sessions/{sid}/state")).await
    }
}

/// Patient field names and values a record exposes, as they would appear
/// in text.
pub fn record_tokens(record: &PatientRecord) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (name, value) in record.iter() {
        out.insert(name.clone());
        match value {
            PatientValue::Number { value, .. } => {
                out.insert(value.to_string());
            }
            PatientValue::Enum(s) | PatientValue::Text(s) => {
                out.insert(s.clone());
            }
            PatientValue::Boolean(_) => {}
        }
    }
    out
}

/// A record for `fields`: most fields filled, some left out, and now and
/// then a wrongly typed value or an undeclared field. Numbers carry a
/// fractional part and text values a marker so a text scan can find them.
pub fn random_record(rng: &mut impl Rng, fields: &[FieldDef]) -> PatientRecord {
    let mut record = PatientRecord::new();
    for f in fields {
        if rng.random_bool(0.25) {
            continue;
        }
        let value = if rng.random_bool(0.03) {
            PatientValue::Text(format!("mistyped-{}", rng.random::<u32>()))
        } else {
            match f.kind {
                FieldType::Number => {
                    let whole: u32 = rng.random_range(20..100);
                    let frac: u32 = rng.random_range(1..1000);
                    PatientValue::number(f64::from(whole) + f64::from(frac) / 1000.0 + 0.0001, f.unit.as_deref())
                }
                FieldType::Boolean => PatientValue::Boolean(rng.random()),
                FieldType::Enum => PatientValue::Enum(f.values.choose(rng).cloned().unwrap_or_default()),
                FieldType::Text => PatientValue::Text(format!("note-{}", rng.random::<u32>())),
            }
        };
        record.insert(f.name.clone(), value);
    }
    if rng.random_bool(0.03) {
        record.insert(
            format!("surname{}", rng.random::<u16>()),
            PatientValue::Text(format!("Roe-{}", rng.random::<u32>())),
        );
    }
    record
}

/// Outcome of [`random_sessions`].
pub struct SessionRun {
    /// Final state response per session id, layout included.
    pub states: BTreeMap<String, Value>,
    /// Every field name and value submitted to autonav.
    pub submitted: BTreeSet<String>,
    pub autonav_calls: usize,
}

/// Drives `sessions` random sessions over HTTP, mixing manual actions and
/// autonav calls, and checks each response against a local mirror of the
/// navigation state.
pub async fn random_sessions(
    rng: &mut impl Rng,
    client: &Client,
    trees: &BTreeMap<String, Arc<TreeDef>>,
    sessions: usize,
) -> Result<SessionRun, String> {
    let ids: Vec<&String> = trees.keys().collect();
    let mut run = SessionRun {
        states: BTreeMap::new(),
        submitted: BTreeSet::new(),
        autonav_calls: 0,
    };
    for _ in 0..sessions {
        let tree_id = *ids.choose(rng).expect("at least one tree");
        let tree = &trees[tree_id];
        let (status, body) = client.create(tree_id).await;
        if status != StatusCode::CREATED {
            return Err(format!("create: {status} {body}"));
        }
        let sid = body["session"].as_str().ok_or("no session id")?.to_owned();
        let mut mirror = NavState::new(Arc::clone(tree));
        let mut last = body;
        for _ in 0..rng.random_range(0..25) {
            if rng.random_bool(0.3) {
                let record = random_record(rng, tree.fields());
                run.submitted.extend(record_tokens(&record));
                run.autonav_calls += 1;
                let (status, body) = client.autonav(&sid, &record).await;
                match auto_advance(&mirror, &record) {
                    Ok((next, trace)) => {
                        if status != StatusCode::OK {
                            return Err(format!("autonav: {status} {body}"));
                        }
                        if body["trace"] != serde_json::to_value(&trace).unwrap() {
                            return Err(format!("autonav trace differs: {}", body["trace"]));
                        }
                        mirror = next;
                        last = body["state"].clone();
                    }
                    Err(_) if status == StatusCode::UNPROCESSABLE_ENTITY => {}
                    Err(e) => return Err(format!("autonav accepted bad record ({e}): {status}")),
                }
            } else {
                let action = random_action(rng, &mirror);
                let revision = mirror.history().len() as u64;
                let (status, body) = client.act(&sid, revision, &action).await;
                match mirror.apply(&action) {
                    Ok(next) if status == StatusCode::OK => {
                        mirror = next;
                        last = body;
                    }
                    Err(_) if status == StatusCode::UNPROCESSABLE_ENTITY => {}
                    other => return Err(format!("{action:?}: local {:?}, served {status} {body}", other.err())),
                }
            }
            if last["history"] != serde_json::to_value(mirror.history()).unwrap() {
                return Err(format!("session {sid}: served history differs from mirror"));
            }
        }
        let (status, state) = client.state(&sid).await;
        if status != StatusCode::OK || state != last {
            return Err(format!("session {sid}: GET state differs from last response"));
        }
        run.states.insert(sid, state);
    }
    Ok(run)
}

/// Random trees with a field dictionary and predicates, keyed by id.
pub fn random_trees(rng: &mut impl Rng, count: usize) -> BTreeMap<String, Arc<TreeDef>> {
    let mut trees = BTreeMap::new();
    for i in 0..count {
        let shape = TreeShape {
            max_nodes: rng.random_range(3..30),
            predicates: true,
            ..TreeShape::default()
        };
        let mut parts = random_tree(rng, &shape).into_parts();
        parts.id = format!("R{i}");
        trees.insert(parts.id.clone(), Arc::new(TreeDef::new(parts).expect("renamed tree is valid")));
    }
    trees.insert("T1".into(), Arc::new(triage_tree()));
    trees
}

/// Runs `sessions` random sessions, simulates a crash that leaves a torn
/// line at the end of the log, restarts from the same directory and
/// compares every session's state with what was served before.
pub async fn crash_restart_check(rng: &mut impl Rng, data: &Path, sessions: usize) -> Result<SessionRun, String> {
    let trees = random_trees(rng, 8);
    let app = AppState::with_trees(trees.clone(), data).map_err(|e| e.to_string())?;
    let run = random_sessions(rng, &Client::new(app), &trees, sessions).await?;

    let log = data.join(LOG_FILE);
    let mut text = std::fs::read_to_string(&log).map_err(|e| e.to_string())?;
    text.push_str(r#"{"op":"action","session":"#);
    std::fs::write(&log, text).map_err(|e| e.to_string())?;

    let app = AppState::with_trees(trees, data).map_err(|e| format!("restart: {e}"))?;
    if app.session_count() != run.states.len() {
        return Err(format!("{} sessions after restart, {} before", app.session_count(), run.states.len()));
    }
    let client = Client::new(app);
    for (sid, before) in &run.states {
        let (status, after) = client.state(sid).await;
        if status != StatusCode::OK || &after != before {
            return Err(format!("session {sid} differs after restart"));
        }
    }
    Ok(run)
}

/// Submitted tokens that occur anywhere in the persisted log.
pub fn privacy_leaks(data: &Path, submitted: &BTreeSet<String>) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(data.join(LOG_FILE)).map_err(|e| e.to_string())?;
    Ok(submitted.iter().filter(|t| text.contains(t.as_str())).cloned().collect())
}

/// Posts two different answers to the root of a fresh session at the same
/// revision, concurrently. Returns both statuses.
pub async fn race_once(client: &Client) -> (StatusCode, StatusCode) {
    let (_, body) = client.create("T1").await;
    let sid = body["session"].as_str().expect("session id").to_owned();
    let a = {
        let client = client.clone();
        let sid = sid.clone();
        tokio::spawn(async move { client.act(&sid, 0, &Action::answer("n0", &["mild"])).await.0 })
    };
    let b = {
        let client = client.clone();
        tokio::spawn(async move { client.act(&sid, 0, &Action::answer("n0", &["severe"])).await.0 })
    };
    (a.await.expect("task a"), b.await.expect("task b"))
}
