//! JSON service over sessions.
//!
//! ```text
//! POST /session                         {build|quiver, track} -> 201 state
//! GET  /session/{id}                    state
//! GET  /session/{id}/quiver             quiver, signs, layout
//! GET  /session/{id}/history            applied entries
//! POST /session/{id}/mutate             {vertex}
//! POST /session/{id}/sequence           {name, params}
//! POST /session/{id}/undo | /redo
//! GET  /session/{id}/variable/{vertex}?kind=A|X|coeff
//! POST /build                           build spec -> quiver JSON
//! ```
//!
//! 404 unknown session, 409 frozen vertex or empty history, 422 malformed
//! request.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};

use super::session::{Action, CreateRequest, JournalEvent, Session, SessionError};
use super::spec::BuildSpec;
use crate::quiver::VertexId;

pub const PORT_ENV: &str = "CLUSTERWEYL_PORT";
pub const JOURNAL_ENV: &str = "CLUSTERWEYL_JOURNAL_DIR";

type Shared = Arc<Mutex<Session>>;

#[derive(Default)]
pub struct AppState {
    sessions: Mutex<HashMap<String, Shared>>,
    next: AtomicU64,
    journal: Option<PathBuf>,
}

impl AppState {
    pub fn new(journal: Option<PathBuf>) -> Self {
        AppState { journal, ..Default::default() }
    }

    /// Loads every `*.jsonl` journal in the directory.
    pub fn recover(journal: PathBuf) -> std::io::Result<Self> {
        let st = AppState::new(Some(journal.clone()));
        let mut max_id = 0;
        if journal.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&journal)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "jsonl")).collect();
            files.sort();
            for p in files {
                let lines: Vec<String> = std::io::BufReader::new(std::fs::File::open(&p)?).lines().collect::<Result<_, _>>()?;
                let events: Vec<JournalEvent> = match lines.iter().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l)).collect() {
                    Ok(e) => e,
                    Err(e) => {
                        eprintln!("warn[journal]: skipping {}: {e}", p.display());
                        continue;
                    }
                };
                match Session::from_journal(&events) {
                    Ok(s) => {
                        max_id = max_id.max(s.id.parse::<u64>().unwrap_or(0));
                        st.sessions.lock().expect("lock").insert(s.id.clone(), Arc::new(Mutex::new(s)));
                    }
                    Err(e) => eprintln!("warn[journal]: skipping {}: {e}", p.display()),
                }
            }
        }
        st.next.store(max_id, Ordering::SeqCst);
        Ok(st)
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().expect("lock").len()
    }

    fn get(&self, id: &str) -> Result<Shared, ApiError> {
        self.sessions.lock().expect("lock").get(id).cloned().ok_or_else(|| ApiError::from(SessionError::UnknownSession(id.into())))
    }

    fn log(&self, id: &str, ev: &JournalEvent) -> Result<(), ApiError> {
        let Some(dir) = &self.journal else { return Ok(()) };
        let io = |e: std::io::Error| ApiError(StatusCode::INTERNAL_SERVER_ERROR, "journal", e.to_string());
        std::fs::create_dir_all(dir).map_err(io)?;
        let mut f = OpenOptions::new().create(true).append(true).open(dir.join(format!("{id}.jsonl"))).map_err(io)?;
        writeln!(f, "{}", serde_json::to_string(ev).expect("event serializes")).map_err(io)
    }
}

pub struct ApiError(StatusCode, &'static str, String);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let (code, kind) = match &e {
            SessionError::UnknownSession(_) => (StatusCode::NOT_FOUND, "unknown_session"),
            SessionError::Frozen(_) => (StatusCode::CONFLICT, "frozen_vertex"),
            SessionError::EmptyHistory(_) => (StatusCode::CONFLICT, "empty_history"),
            SessionError::Spec(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_request"),
            SessionError::Seed(_) => (StatusCode::UNPROCESSABLE_ENTITY, "engine"),
        };
        ApiError(code, kind, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(StatusCode::UNPROCESSABLE_ENTITY, "invalid_request", e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1, "message": self.2 }))).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn ok(v: impl serde::Serialize) -> ApiResult {
    Ok(Json(v).into_response())
}

async fn create(State(st): State<Arc<AppState>>, body: Result<Json<CreateRequest>, JsonRejection>) -> ApiResult {
    let Json(req) = body?;
    let id = (st.next.fetch_add(1, Ordering::SeqCst) + 1).to_string();
    let s = Session::new(id.clone(), req.clone())?;
    st.log(&id, &JournalEvent::Create { id: id.clone(), request: req })?;
    let view = s.state();
    st.sessions.lock().expect("lock").insert(id, Arc::new(Mutex::new(s)));
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn state(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = st.get(&id)?;
    let view = s.lock().expect("lock").state();
    ok(view)
}

async fn quiver(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = st.get(&id)?;
    let view = s.lock().expect("lock").state().view;
    ok(view)
}

async fn history(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = st.get(&id)?;
    let g = s.lock().expect("lock");
    ok(json!({ "id": id, "entries": g.entries(), "redo": g.redo_len() }))
}

fn transition(st: &AppState, id: &str, ev: JournalEvent) -> ApiResult {
    let s = st.get(id)?;
    let mut g = s.lock().expect("lock");
    match &ev {
        JournalEvent::Apply { action } => g.apply(action.clone())?,
        JournalEvent::Undo => g.undo()?,
        JournalEvent::Redo => g.redo()?,
        JournalEvent::Create { .. } => unreachable!("create has its own route"),
    }
    st.log(id, &ev)?;
    ok(g.state())
}

#[derive(Deserialize)]
struct MutateBody {
    vertex: VertexId,
}

async fn mutate(State(st): State<Arc<AppState>>, Path(id): Path<String>, body: Result<Json<MutateBody>, JsonRejection>) -> ApiResult {
    st.get(&id)?;
    let Json(b) = body?;
    transition(&st, &id, JournalEvent::Apply { action: Action::Mutate { vertex: b.vertex } })
}

#[derive(Deserialize)]
struct SequenceBody {
    name: String,
    #[serde(default)]
    params: Value,
}

async fn sequence(State(st): State<Arc<AppState>>, Path(id): Path<String>, body: Result<Json<SequenceBody>, JsonRejection>) -> ApiResult {
    st.get(&id)?;
    let Json(b) = body?;
    let params = if b.params.is_null() { json!({}) } else { b.params };
    transition(&st, &id, JournalEvent::Apply { action: Action::Sequence { name: b.name, params } })
}

async fn undo(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    transition(&st, &id, JournalEvent::Undo)
}

async fn redo(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    transition(&st, &id, JournalEvent::Redo)
}

#[derive(Deserialize)]
struct KindQuery {
    kind: Option<String>,
}

async fn variable(State(st): State<Arc<AppState>>, Path((id, vertex)): Path<(String, String)>, Query(q): Query<KindQuery>) -> ApiResult {
    let s = st.get(&id)?;
    let v: VertexId = vertex.parse().map_err(|e| ApiError(StatusCode::UNPROCESSABLE_ENTITY, "invalid_request", format!("{e}")))?;
    let out = s.lock().expect("lock").variable(&v, q.kind.as_deref().unwrap_or("A"))?;
    ok(out)
}

/// Same bytes as `build … --out` writes.
async fn build(body: Result<Json<BuildSpec>, JsonRejection>) -> ApiResult {
    let Json(spec) = body?;
    let q = spec.build().map_err(|e| ApiError::from(SessionError::Spec(e)))?;
    Ok(([(header::CONTENT_TYPE, "application/json")], q.to_json_string()).into_response())
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(|| async { Json(json!({ "status": "ok" })) }))
        .route("/build", post(build))
        .route("/session", post(create))
        .route("/session/{id}", get(self::state))
        .route("/session/{id}/quiver", get(quiver))
        .route("/session/{id}/history", get(history))
        .route("/session/{id}/mutate", post(mutate))
        .route("/session/{id}/sequence", post(sequence))
        .route("/session/{id}/undo", post(undo))
        .route("/session/{id}/redo", post(redo))
        .route("/session/{id}/variable/{vertex}", get(variable))
        .with_state(state)
}

/// Serves until the process ends; the journal directory comes from the
/// environment and its sessions are restored first.
pub async fn serve(port: u16) -> std::io::Result<()> {
    let state = match std::env::var_os(JOURNAL_ENV) {
        Some(dir) => AppState::recover(PathBuf::from(dir))?,
        None => AppState::new(None),
    };
    let restored = state.session_count();
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("info[serve]: listening on {} ({restored} sessions restored)", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state))).await
}
