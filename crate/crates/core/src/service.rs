// SPDX-License-Identifier: Apache-2.0

//! HTTP maintenance service.
//!
//! Serves lookups and lexicon browsing, and applies entry edits so that the
//! lexicon file, the binary database and the flat dump stay consistent.
//! Readers work on an immutable [`Snapshot`]; each edit rewrites all three
//! files atomically and then swaps in a fresh snapshot. Edits are applied
//! one at a time.

use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tokio::sync::{Mutex, Semaphore};

use crate::analyzer::{generate, recognize, Analysis};
use crate::db::{self, Database, DbError};
use crate::lexicon::{parse_line, EntryError, Lexicon, LexiconEntry, LexiconError};
use crate::types::PartOfSpeech;

pub const PAGE_SIZE: usize = 50;
pub const DEFAULT_QUEUE: usize = 8;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Lexicon { path: PathBuf, source: LexiconError },
    #[error(transparent)]
    Db(#[from] DbError),
}

/// File locations for one lexicon/database pair.
#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub lexicon: PathBuf,
    pub database: PathBuf,
    pub flat: PathBuf,
    /// Edits that may wait for the writer before further ones get 503.
    pub queue_capacity: usize,
}

/// What readers see: a lexicon and the database compiled from it.
pub struct Snapshot {
    pub lexicon: Lexicon,
    pub database: Database,
}

pub struct AppState {
    config: ServiceConfig,
    snapshot: RwLock<Arc<Snapshot>>,
    writer: Mutex<()>,
    queue: Arc<Semaphore>,
}

fn read_text(path: &Path) -> Result<String, ServiceError> {
    std::fs::read_to_string(path).map_err(|source| ServiceError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Compiles `lexicon`, replaces the database and flat files, and opens the
/// new database.
fn publish(config: &ServiceConfig, lexicon: Lexicon) -> Result<Snapshot, ServiceError> {
    let bytes = db::compile(&lexicon)?;
    let io_err = |path: &Path| {
        let path = path.to_owned();
        move |source| ServiceError::Io { path, source }
    };
    db::write_atomic(&config.database, &bytes).map_err(io_err(&config.database))?;
    let database = Database::open(&config.database)?;
    let flat = db::dump_flat(&database)?;
    db::write_atomic(&config.flat, flat.as_bytes()).map_err(io_err(&config.flat))?;
    Ok(Snapshot { lexicon, database })
}

impl AppState {
    /// Loads the lexicon and rebuilds the database and flat file from it.
    pub fn load(config: ServiceConfig) -> Result<AppState, ServiceError> {
        let text = read_text(&config.lexicon)?;
        let lexicon = Lexicon::parse(&text).map_err(|source| ServiceError::Lexicon {
            path: config.lexicon.clone(),
            source,
        })?;
        let snapshot = publish(&config, lexicon)?;
        Ok(AppState {
            queue: Arc::new(Semaphore::new(config.queue_capacity.max(1))),
            config,
            snapshot: RwLock::new(Arc::new(snapshot)),
            writer: Mutex::new(()),
        })
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.snapshot
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .clone()
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AnalysisJson {
    pub lexical_form: String,
    pub pos: String,
    pub root: String,
    pub attrs: Vec<String>,
}

impl From<&Analysis> for AnalysisJson {
    fn from(a: &Analysis) -> Self {
        AnalysisJson {
            lexical_form: a.lexical_form.to_string(),
            pos: a.parse.pos.to_string(),
            root: a.parse.root.clone(),
            attrs: a.parse.attrs.iter().map(|t| t.to_string()).collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LookupResponse {
    pub word: String,
    pub analyses: Vec<AnalysisJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EntryJson {
    pub lexical: String,
    pub class: String,
    pub parse: String,
}

impl From<&LexiconEntry> for EntryJson {
    fn from(e: &LexiconEntry) -> Self {
        EntryJson {
            lexical: e.lexical.clone(),
            class: e.class.to_string(),
            parse: e.parse.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EntriesPage {
    pub page: usize,
    pub page_size: usize,
    pub total: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FormJson {
    pub surface: String,
    pub analyses: Vec<AnalysisJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MutationResponse {
    pub entry: EntryJson,
    /// Every surface form the entry generates, analysed after the edit.
    pub forms: Vec<FormJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorBody { error: self.1 })).into_response()
    }
}

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        tracing::error!("rebuild failed: {e}");
        ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
    }
}

fn analyses_json(word: &str, lexicon: &Lexicon) -> Vec<AnalysisJson> {
    recognize(word, lexicon)
        .iter()
        .map(AnalysisJson::from)
        .collect()
}

#[derive(Debug, Deserialize)]
struct LookupQuery {
    word: Option<String>,
}

async fn lookup(
    State(state): State<Arc<AppState>>,
    Query(q): Query<LookupQuery>,
) -> Result<Json<LookupResponse>, ApiError> {
    let word = q
        .word
        .filter(|w| !w.is_empty())
        .ok_or_else(|| ApiError(StatusCode::BAD_REQUEST, "missing `word`".into()))?;
    let snapshot = state.snapshot();
    let analyses = analyses_json(&word, &snapshot.lexicon);
    Ok(Json(LookupResponse { word, analyses }))
}

#[derive(Debug, Deserialize)]
struct EntriesQuery {
    #[serde(default)]
    prefix: String,
    pos: Option<String>,
    #[serde(default)]
    page: usize,
}

async fn list_entries(
    State(state): State<Arc<AppState>>,
    Query(q): Query<EntriesQuery>,
) -> Result<Json<EntriesPage>, ApiError> {
    let pos = match q.pos.as_deref() {
        None | Some("") => None,
        Some(p) => Some(
            p.parse::<PartOfSpeech>()
                .map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.to_string()))?,
        ),
    };
    let snapshot = state.snapshot();
    let mut matching: Vec<EntryJson> = snapshot
        .lexicon
        .entries()
        .iter()
        .filter(|e| e.lexical.starts_with(&q.prefix))
        .filter(|e| pos.is_none_or(|p| e.parse.pos == p))
        .map(EntryJson::from)
        .collect();
    matching
        .sort_by(|a, b| (&a.lexical, &a.class, &a.parse).cmp(&(&b.lexical, &b.class, &b.parse)));
    let total = matching.len();
    let entries = matching
        .into_iter()
        .skip(q.page.saturating_mul(PAGE_SIZE))
        .take(PAGE_SIZE)
        .collect();
    Ok(Json(EntriesPage {
        page: q.page,
        page_size: PAGE_SIZE,
        total,
        entries,
    }))
}

fn validate(body: &EntryJson) -> Result<LexiconEntry, ApiError> {
    LexiconEntry::from_fields(&body.lexical, &body.class, &body.parse)
        .map_err(|e: EntryError| ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Edit {
    Add,
    Remove,
}

/// New lexicon file text with `entry` appended or its first line removed.
/// Comments and layout of the other lines are kept.
fn edit_text(text: &str, entry: &LexiconEntry, edit: Edit) -> Option<String> {
    match edit {
        Edit::Add => {
            let mut out = text.to_owned();
            if !out.is_empty() && !out.ends_with('\n') {
                out.push('\n');
            }
            out.push_str(&entry.to_string());
            out.push('\n');
            Some(out)
        }
        Edit::Remove => {
            let mut out = String::with_capacity(text.len());
            let mut removed = false;
            for (i, line) in text.split_inclusive('\n').enumerate() {
                if !removed && matches!(parse_line(line, i + 1), Ok(Some(ref e)) if e == entry) {
                    removed = true;
                    continue;
                }
                out.push_str(line);
            }
            removed.then_some(out)
        }
    }
}

async fn mutate(
    state: Arc<AppState>,
    body: EntryJson,
    edit: Edit,
) -> Result<Json<MutationResponse>, ApiError> {
    let entry = validate(&body)?;
    let _permit = state
        .queue
        .clone()
        .try_acquire_owned()
        .map_err(|_| ApiError(StatusCode::SERVICE_UNAVAILABLE, "edit queue is full".into()))?;
    let _writer = state.writer.lock().await;

    let current = state.snapshot();
    match edit {
        Edit::Add if current.lexicon.contains(&entry) => {
            return Err(ApiError(
                StatusCode::UNPROCESSABLE_ENTITY,
                format!("duplicate entry `{entry}`"),
            ));
        }
        Edit::Remove if !current.lexicon.contains(&entry) => {
            return Err(ApiError(
                StatusCode::NOT_FOUND,
                format!("no entry `{entry}`"),
            ));
        }
        _ => {}
    }

    let task_state = state.clone();
    let task_entry = entry.clone();
    let snapshot = tokio::task::spawn_blocking(move || -> Result<Snapshot, ApiError> {
        let config = &task_state.config;
        let text = read_text(&config.lexicon)?;
        let new_text = edit_text(&text, &task_entry, edit).ok_or_else(|| {
            ApiError(
                StatusCode::CONFLICT,
                "lexicon file no longer contains the entry".into(),
            )
        })?;
        let lexicon = Lexicon::parse(&new_text)
            .map_err(|e| ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
        db::write_atomic(&config.lexicon, new_text.as_bytes()).map_err(|source| {
            ServiceError::Io {
                path: config.lexicon.clone(),
                source,
            }
        })?;
        Ok(publish(config, lexicon)?)
    })
    .await
    .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;

    let snapshot = Arc::new(snapshot);
    *state.snapshot.write().unwrap_or_else(|e| e.into_inner()) = snapshot.clone();

    let mut surfaces: Vec<String> = generate(&entry).into_iter().map(|(s, _)| s).collect();
    surfaces.dedup();
    let forms = surfaces
        .into_iter()
        .map(|surface| FormJson {
            analyses: analyses_json(&surface, &snapshot.lexicon),
            surface,
        })
        .collect();
    Ok(Json(MutationResponse {
        entry: EntryJson::from(&entry),
        forms,
    }))
}

async fn add_entry(
    State(state): State<Arc<AppState>>,
    Json(body): Json<EntryJson>,
) -> Result<Json<MutationResponse>, ApiError> {
    mutate(state, body, Edit::Add).await
}

async fn delete_entry(
    State(state): State<Arc<AppState>>,
    Json(body): Json<EntryJson>,
) -> Result<Json<MutationResponse>, ApiError> {
    mutate(state, body, Edit::Remove).await
}

async fn classes() -> Json<Vec<&'static str>> {
    Json(
        crate::types::ContinuationClass::ALL
            .iter()
            .map(|c| c.as_str())
            .collect(),
    )
}

const INDEX_HTML: &str = r#"<!doctype html>
<html><head><meta charset="utf-8"><title>engmorph</title></head>
<body>
<h1>engmorph maintenance service</h1>
<p>API: <code>GET /api/lookup?word=W</code>, <code>GET /api/entries?prefix=P&amp;pos=X&amp;page=N</code>,
<code>POST /api/entries</code>, <code>DELETE /api/entries</code>, <code>GET /api/classes</code>.</p>
<p>Start the server with <code>--static-dir</code> to serve the browser client here.</p>
</body></html>
"#;

/// Routes under `/api/`, plus the UI at `/` (a directory of built assets if
/// given, else a short index page).
pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/lookup", get(lookup))
        .route(
            "/api/entries",
            get(list_entries).post(add_entry).delete(delete_entry),
        )
        .route("/api/classes", get(classes))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(INDEX_HTML) })),
    }
}

pub async fn serve(
    addr: std::net::SocketAddr,
    state: Arc<AppState>,
    static_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state, static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
