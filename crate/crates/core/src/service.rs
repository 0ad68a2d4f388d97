//! HTTP API over the generation pipeline.
//!
//! | method | path                              | body                          |
//! |--------|-----------------------------------|-------------------------------|
//! | POST   | `/generate`                       | [`GenerateRequest`]           |
//! | GET    | `/procedures`                     |                               |
//! | GET    | `/procedures/{id}`                |                               |
//! | PUT    | `/procedures/{id}`                | [`ProcedureModel`]            |
//! | PUT    | `/procedures/{id}/warning-params` | [`WarningParamsUpdate`]       |
//!
//! Bodies are JSON. Malformed bodies and unsupported languages get 400,
//! unknown procedure ids 404, and requests the generator cannot honour
//! (ensure-mode warnings, lexicon gaps) 422. Error bodies are
//! `{"error": "..."}`.
//!
//! Procedures live as one `<id>.json` file each in the data directory.
//! Reads run concurrently; writes are serialized and the last one wins.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

use crate::coding::{Awareness, FormLabel, Intentionality, Safety};
use crate::network::{SystemNetwork, TraceStep};
use crate::planner::{
    plan_document, GenerationParams, ProcedureModel, ProcedureSummary, WarningMode,
};
use crate::realizer::{render_document, Lexicon};
use crate::{Error, Language, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub procedure: Option<ProcedureModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub procedure_id: Option<String>,
    pub language: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateResponse {
    pub text: String,
    /// One entry per warning, in document order.
    pub form_chosen: Vec<FormLabel>,
    /// Systems visited and choices made, over all warnings in order.
    pub trace: Vec<TraceStep>,
}

/// New generation parameters for one method's warning, or for every warning
/// when `method` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarningParamsUpdate {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub mode: WarningMode,
    pub safety: Safety,
    pub intentionality: Intentionality,
    pub awareness: Awareness,
}

impl WarningParamsUpdate {
    pub fn params(&self) -> GenerationParams {
        GenerationParams {
            mode: self.mode,
            safety: self.safety,
            intentionality: self.intentionality,
            awareness: self.awareness,
        }
    }
}

/// Plans and renders a procedure. Shared by the CLI and the HTTP API so both
/// produce the same text.
pub fn generate(
    procedure: &ProcedureModel,
    language: Language,
    network: &SystemNetwork,
    lexicon: &Lexicon,
) -> Result<GenerateResponse> {
    let plans = plan_document(procedure, language, network)?;
    let doc = render_document(&plans, lexicon)?;
    let mut form_chosen = Vec::new();
    let mut trace = Vec::new();
    for wf in plans.iter().filter_map(|p| p.form_directive.as_ref()) {
        form_chosen.push(wf.form);
        trace.extend(wf.trace.iter().cloned());
    }
    Ok(GenerateResponse {
        text: doc.text,
        form_chosen,
        trace,
    })
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

/// Flat-file procedure store.
#[derive(Debug)]
pub struct ProcedureStore {
    dir: PathBuf,
    lock: RwLock<()>,
}

impl ProcedureStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ProcedureStore {
            dir,
            lock: RwLock::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> Result<PathBuf> {
        if !valid_id(id) {
            return Err(Error::InvalidArgument(format!(
                "procedure id {id:?} must be letters, digits, '-' or '_'"
            )));
        }
        Ok(self.dir.join(format!("{id}.json")))
    }

    pub fn get(&self, id: &str) -> Result<Option<ProcedureModel>> {
        let path = self.path(id)?;
        let _guard = self.lock.read().expect("store lock");
        match fs::read_to_string(&path) {
            Ok(s) => {
                let mut model = ProcedureModel::from_json(&s)?;
                model.id = id.to_string();
                Ok(Some(model))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// All stored procedures ordered by id. Files that do not parse are
    /// skipped.
    pub fn list(&self) -> Result<Vec<ProcedureModel>> {
        let _guard = self.lock.read().expect("store lock");
        let mut out = Vec::new();
        let mut paths: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for p in paths {
            let Some(id) = p.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            if let Ok(mut model) = fs::read_to_string(&p)
                .map_err(Error::from)
                .and_then(|s| ProcedureModel::from_json(&s))
            {
                model.id = id.to_string();
                out.push(model);
            }
        }
        Ok(out)
    }

    /// Inserts or replaces; returns true when the id was new.
    pub fn put(&self, model: &ProcedureModel) -> Result<bool> {
        model.validate()?;
        let path = self.path(&model.id)?;
        let _guard = self.lock.write().expect("store lock");
        let created = !path.exists();
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, model.to_json())?;
        fs::rename(&tmp, &path)?;
        Ok(created)
    }

    /// Applies `update` to a stored procedure under the write lock.
    pub fn modify<F>(&self, id: &str, update: F) -> Result<Option<ProcedureModel>>
    where
        F: FnOnce(&mut ProcedureModel) -> Result<()>,
    {
        let path = self.path(id)?;
        let _guard = self.lock.write().expect("store lock");
        let mut model = match fs::read_to_string(&path) {
            Ok(s) => ProcedureModel::from_json(&s)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        model.id = id.to_string();
        update(&mut model)?;
        model.validate()?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, model.to_json())?;
        fs::rename(&tmp, &path)?;
        Ok(Some(model))
    }
}

/// Shared state behind the router.
#[derive(Debug, Clone)]
pub struct AppState {
    pub network: Arc<SystemNetwork>,
    pub lexicon: Arc<Lexicon>,
    pub store: Arc<ProcedureStore>,
}

impl AppState {
    pub fn new(network: SystemNetwork, lexicon: Lexicon, store: ProcedureStore) -> Self {
        AppState {
            network: Arc::new(network),
            lexicon: Arc::new(lexicon),
            store: Arc::new(store),
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn not_found(what: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no such {what}"))
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnsupportedMode
            | Error::LexiconMiss { .. }
            | Error::MissingFormSpec(_)
            | Error::MissingDirective { .. }
            | Error::DegenerateDistribution => StatusCode::UNPROCESSABLE_ENTITY,
            Error::UnsupportedLanguage(_)
            | Error::InvalidArgument(_)
            | Error::Parse { .. }
            | Error::DuplicateKey { .. }
            | Error::Json(_) => StatusCode::BAD_REQUEST,
            Error::Network(_) | Error::Tree(_) | Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| {
        ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("invalid request body: {e}"),
        )
    })
}

async fn generate_handler(
    State(state): State<AppState>,
    body: Bytes,
) -> ApiResult<Json<GenerateResponse>> {
    let req: GenerateRequest = parse_body(&body)?;
    let language: Language = req.language.parse()?;
    let procedure = match (req.procedure, req.procedure_id) {
        (Some(p), None) => {
            p.validate()?;
            p
        }
        (None, Some(id)) => state
            .store
            .get(&id)?
            .ok_or_else(|| ApiError::not_found("procedure"))?,
        _ => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "give exactly one of procedure or procedure_id",
            ))
        }
    };
    Ok(Json(generate(
        &procedure,
        language,
        &state.network,
        &state.lexicon,
    )?))
}

async fn list_handler(State(state): State<AppState>) -> ApiResult<Json<Vec<ProcedureSummary>>> {
    Ok(Json(
        state
            .store
            .list()?
            .iter()
            .map(ProcedureModel::summary)
            .collect(),
    ))
}

async fn get_handler(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Json<ProcedureModel>> {
    state
        .store
        .get(&id)?
        .map(Json)
        .ok_or_else(|| ApiError::not_found("procedure"))
}

async fn put_handler(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<ProcedureModel>)> {
    let mut model: ProcedureModel = parse_body(&body)?;
    if !model.id.is_empty() && model.id != id {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("body id {:?} does not match path id {id:?}", model.id),
        ));
    }
    model.id = id;
    let created = state.store.put(&model)?;
    let status = if created {
        StatusCode::CREATED
    } else {
        StatusCode::OK
    };
    Ok((status, Json(model)))
}

async fn warning_params_handler(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Json<ProcedureModel>> {
    let update: WarningParamsUpdate = parse_body(&body)?;
    let params = update.params();
    let mut missing_method = false;
    let result = state.store.modify(&id, |model| {
        let mut touched = 0;
        for method in &mut model.methods {
            if update.method.as_ref().is_some_and(|m| *m != method.name) {
                continue;
            }
            if let Some(w) = method.warning.as_mut() {
                w.params = params;
                touched += 1;
            }
        }
        if touched == 0 {
            missing_method = update.method.is_some();
            return Err(Error::InvalidArgument(match &update.method {
                Some(m) => format!("procedure has no method {m:?} with a warning"),
                None => "procedure has no warnings".into(),
            }));
        }
        Ok(())
    });
    match result {
        Ok(Some(model)) => Ok(Json(model)),
        Ok(None) => Err(ApiError::not_found("procedure")),
        Err(e) if missing_method => Err(ApiError::new(StatusCode::NOT_FOUND, e.to_string())),
        Err(e) => Err(e.into()),
    }
}

/// The API routes, plus static files from `ui_dir` when given.
pub fn router(state: AppState, ui_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/generate", post(generate_handler))
        .route("/procedures", get(list_handler))
        .route("/procedures/{id}", get(get_handler).put(put_handler))
        .route(
            "/procedures/{id}/warning-params",
            put(warning_params_handler),
        )
        .with_state(state);
    match ui_dir {
        Some(dir) if dir.is_dir() => api.fallback_service(ServeDir::new(dir)),
        _ => api,
    }
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub port: u16,
    pub data_dir: PathBuf,
    pub network: SystemNetwork,
    pub lexicon: Lexicon,
    pub ui_dir: Option<PathBuf>,
    /// Store the bundled procedures whose ids are not taken yet.
    pub preload: bool,
}

/// Binds `0.0.0.0:port` and serves until the process is stopped.
pub async fn serve(config: ServiceConfig, log: &mut dyn Write) -> Result<()> {
    let store = ProcedureStore::open(&config.data_dir)?;
    if config.preload {
        for p in crate::fixtures::procedures() {
            if store.get(&p.id)?.is_none() {
                store.put(&p)?;
            }
        }
    }
    let ui = config.ui_dir.as_deref().filter(|d| d.is_dir());
    let app = router(AppState::new(config.network, config.lexicon, store), ui);
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", config.port)).await?;
    writeln!(
        log,
        "listening on {} (procedures in {})",
        listener.local_addr()?,
        config.data_dir.display()
    )?;
    if let Some(dir) = ui {
        writeln!(log, "serving UI from {}", dir.display())?;
    }
    axum::serve(listener, app).await?;
    Ok(())
}
