use std::path::Path;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use guidetree_core::autonav::{auto_advance, AutoNavTrace};
use guidetree_core::format::{parse_document, parse_patient, serialize_tree, FormatError};
use guidetree_core::layout::{layout, Layout, LayoutParams, Viewport};
use guidetree_core::nav::{Action, NavError};
use guidetree_core::predicate::{PatientRecord, PredicateError};
use guidetree_core::tree::{NodeId, NodeKind};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::{AppState, CommitError, Committed, Session};

pub const DEFAULT_VIEWPORT: (f64, f64) = (1280.0, 800.0);

#[derive(Debug)]
enum ApiError {
    UnknownTree(String),
    UnknownSession(String),
    InvalidAction(NavError),
    InvalidRecord(PredicateError),
    Conflict { given: u64, current: u64 },
    Body(FormatError),
    BadViewport(String),
    Internal(String),
}

impl From<CommitError> for ApiError {
    fn from(err: CommitError) -> Self {
        match err {
            CommitError::Conflict { given, current } => ApiError::Conflict { given, current },
            CommitError::Nav(e) => ApiError::InvalidAction(e),
            CommitError::Predicate(e) => ApiError::InvalidRecord(e),
            CommitError::Store(e) => ApiError::Internal(e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::UnknownTree(tree) => (
                StatusCode::NOT_FOUND,
                json!({"error": "UnknownTree", "tree": tree}),
            ),
            ApiError::UnknownSession(session) => (
                StatusCode::NOT_FOUND,
                json!({"error": "UnknownSession", "session": session}),
            ),
            ApiError::InvalidAction(e) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({"error": "InvalidAction", "message": e.to_string(), "detail": e}),
            ),
            ApiError::InvalidRecord(e) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({"error": "InvalidRecord", "message": e.to_string(), "detail": e}),
            ),
            ApiError::Conflict { given, current } => (
                StatusCode::CONFLICT,
                json!({"error": "VersionConflict", "given": given, "current": current}),
            ),
            ApiError::Body(FormatError::Syntax {
                line,
                column,
                message,
            }) => (
                StatusCode::BAD_REQUEST,
                json!({"error": "MalformedBody", "line": line, "column": column, "message": message}),
            ),
            ApiError::Body(e) => {
                let (path, message) = match e {
                    FormatError::Schema { path, message } => (path, message),
                    other => (String::new(), other.to_string()),
                };
                (
                    StatusCode::UNPROCESSABLE_ENTITY,
                    json!({"error": "InvalidBody", "path": path, "message": message}),
                )
            }
            ApiError::BadViewport(v) => (
                StatusCode::BAD_REQUEST,
                json!({"error": "BadViewport", "viewport": v}),
            ),
            ApiError::Internal(message) => (
                StatusCode::INTERNAL_SERVER_ERROR,
                json!({"error": "Internal", "message": message}),
            ),
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn utf8(bytes: &Bytes) -> ApiResult<&str> {
    std::str::from_utf8(bytes).map_err(|_| {
        ApiError::Body(FormatError::Syntax {
            line: 1,
            column: 1,
            message: "body is not UTF-8".into(),
        })
    })
}

fn body<T: DeserializeOwned>(bytes: &Bytes) -> ApiResult<T> {
    parse_document(utf8(bytes)?).map_err(ApiError::Body)
}

#[derive(Debug, Deserialize)]
struct ViewQuery {
    viewport: Option<String>,
}

impl ViewQuery {
    fn viewport(&self) -> ApiResult<Viewport> {
        match &self.viewport {
            None => Ok(Viewport::new(DEFAULT_VIEWPORT.0, DEFAULT_VIEWPORT.1).expect("default viewport")),
            Some(v) => v.parse().map_err(|_| ApiError::BadViewport(v.clone())),
        }
    }
}

#[derive(Debug, Serialize)]
struct SelectedEdge<'a> {
    from: &'a NodeId,
    answer: &'a str,
    to: &'a NodeId,
}

/// Everything the client needs to draw a session.
#[derive(Debug, Serialize)]
struct StateView<'a> {
    session: &'a str,
    tree_id: &'a str,
    revision: u64,
    created: u64,
    updated: u64,
    frontier: Vec<&'a NodeId>,
    open_questions: Vec<&'a NodeId>,
    current_recommendations: Vec<&'a NodeId>,
    reachable_recommendations: Vec<&'a NodeId>,
    selected: Vec<SelectedEdge<'a>>,
    history: &'a [Action],
    layout: Layout,
}

fn state_view<'a>(session: &'a Session, c: &'a Committed, viewport: Viewport) -> StateView<'a> {
    let state = &c.state;
    let tree = state.tree();
    let node = |i: usize| &tree.node(i).id;
    StateView {
        session: &session.id,
        tree_id: &session.tree_id,
        revision: c.revision(),
        created: session.created,
        updated: c.updated,
        frontier: state.frontier(),
        open_questions: state.open_questions().map(node).collect(),
        current_recommendations: state
            .frontier_indices()
            .iter()
            .filter(|&i| tree.node(i).kind == NodeKind::Recommendation)
            .map(node)
            .collect(),
        reachable_recommendations: state.reachable_recommendations(),
        selected: state
            .selected_edges()
            .into_iter()
            .map(|e| SelectedEdge {
                from: &e.from,
                answer: &e.answer,
                to: &e.to,
            })
            .collect(),
        history: state.history(),
        layout: layout(tree, state, viewport, &LayoutParams::default()),
    }
}

fn find_session(app: &AppState, sid: &str) -> ApiResult<Arc<Session>> {
    app.session(sid)
        .ok_or_else(|| ApiError::UnknownSession(sid.to_owned()))
}

#[derive(Serialize)]
struct TreeSummary<'a> {
    id: &'a str,
    title: &'a str,
}

async fn list_trees(State(app): State<Arc<AppState>>) -> Json<Value> {
    let list: Vec<TreeSummary> = app
        .trees()
        .values()
        .map(|t| TreeSummary {
            id: t.id(),
            title: t.title(),
        })
        .collect();
    Json(serde_json::to_value(list).expect("summaries serialize"))
}

async fn get_tree(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<Response> {
    let tree = app.tree(&id).ok_or(ApiError::UnknownTree(id))?;
    Ok(([(header::CONTENT_TYPE, "application/json")], serialize_tree(tree)).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    tree_id: String,
}

async fn create_session(
    State(app): State<Arc<AppState>>,
    Query(q): Query<ViewQuery>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let req: CreateRequest = body(&bytes)?;
    let viewport = q.viewport()?;
    let session = app
        .create_session(&req.tree_id)
        .map_err(|e| ApiError::Internal(e.to_string()))?
        .ok_or(ApiError::UnknownTree(req.tree_id))?;
    let c = session.snapshot();
    Ok((StatusCode::CREATED, Json(state_view(&session, &c, viewport))).into_response())
}

async fn get_state(
    State(app): State<Arc<AppState>>,
    UrlPath(sid): UrlPath<String>,
    Query(q): Query<ViewQuery>,
) -> ApiResult<Response> {
    let session = find_session(&app, &sid)?;
    let viewport = q.viewport()?;
    let c = session.snapshot();
    Ok(Json(state_view(&session, &c, viewport)).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionRequest {
    revision: u64,
    action: Action,
}

async fn post_action(
    State(app): State<Arc<AppState>>,
    UrlPath(sid): UrlPath<String>,
    Query(q): Query<ViewQuery>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let session = find_session(&app, &sid)?;
    let req: ActionRequest = body(&bytes)?;
    let viewport = q.viewport()?;
    let c = app.apply(&session, req.revision, &req.action)?;
    Ok(Json(state_view(&session, &c, viewport)).into_response())
}

#[derive(Debug, Deserialize)]
struct AutonavQuery {
    viewport: Option<String>,
    revision: Option<u64>,
}

#[derive(Serialize)]
struct AutonavResponse<'a> {
    trace: AutoNavTrace,
    state: StateView<'a>,
}

async fn post_autonav(
    State(app): State<Arc<AppState>>,
    UrlPath(sid): UrlPath<String>,
    Query(q): Query<AutonavQuery>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let session = find_session(&app, &sid)?;
    let record: PatientRecord = utf8(&bytes).and_then(|t| parse_patient(t).map_err(ApiError::Body))?;
    let viewport = ViewQuery { viewport: q.viewport }.viewport()?;
    let (c, trace) = app.commit(&session, q.revision, |state| Ok(auto_advance(state, &record)?))?;
    drop(record);
    Ok(Json(AutonavResponse {
        trace,
        state: state_view(&session, &c, viewport),
    })
    .into_response())
}

/// Routes under `/api`, plus static files from `static_dir` for every
/// other path when given.
pub fn router(app: Arc<AppState>, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/trees", get(list_trees))
        .route("/api/trees/{id}", get(get_tree))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{sid}/actions", post(post_action))
        .route("/api/sessions/{sid}/state", get(get_state))
        .route("/api/sessions/{sid}/autonav", post(post_autonav))
        .with_state(app);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}
