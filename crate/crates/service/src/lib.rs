//! Session-oriented HTTP API for the interactive labeling loop.
//!
//! Each session holds one dataset, a label map and the result of the latest
//! synthesis. Label changes bump the session version; a selection is only
//! reported alongside the labels it was computed from.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use lattice_select::dataset::{resolve_clicks, ObjectRecord};
use lattice_select::dsl::{parse_action, Action, ProgramMetrics};
use lattice_select::synth::ClassStats;
use lattice_select::{
    build_specification, load_dataset, synthesize, Budget, Dataset, Error, LabelsFile, SynthesisMode,
    SynthesisOptions, SynthesisReport,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub snapshot_dir: Option<PathBuf>,
    /// How long a synthesize request waits before answering 202.
    pub wait: Duration,
    pub timeout: Duration,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            snapshot_dir: None,
            wait: Duration::from_secs(1),
            timeout: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthStats {
    pub mode: SynthesisMode,
    pub metrics: ProgramMetrics,
    pub classes: Vec<ClassStats>,
    /// Seconds.
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthResult {
    pub program: String,
    pub selected: Vec<String>,
    pub stats: SynthStats,
    /// Label version the result was computed from.
    pub version: u64,
}

impl SynthResult {
    fn new(report: SynthesisReport, version: u64) -> Self {
        SynthResult {
            program: report.program_text,
            selected: report.selected,
            stats: SynthStats {
                mode: report.mode,
                metrics: report.metrics,
                classes: report.classes,
                wall_time: report.wall_time.as_secs_f64(),
            },
            version,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum JobState {
    Idle,
    Running { job: u64 },
    Done { job: u64, result: SynthResult },
    Failed { job: u64, error: String },
    Cancelled { job: u64 },
}

struct Job {
    id: u64,
    cancel: Arc<AtomicBool>,
    state: JobState,
}

struct SessionState {
    labels: BTreeMap<String, Polarity>,
    version: u64,
    last: Option<SynthResult>,
    job: Option<Job>,
    next_job: u64,
}

pub struct Session {
    id: String,
    dataset: Arc<Dataset>,
    background_image: Option<String>,
    state: Mutex<SessionState>,
}

impl Session {
    fn new(id: String, dataset: Dataset, background_image: Option<String>) -> Self {
        Session {
            id,
            dataset: Arc::new(dataset),
            background_image,
            state: Mutex::new(SessionState {
                labels: BTreeMap::new(),
                version: 0,
                last: None,
                job: None,
                next_job: 1,
            }),
        }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, SessionState> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn snapshot(&self) -> Value {
        let st = self.lock();
        let selection = st.last.as_ref().filter(|r| r.version == st.version);
        json!({
            "id": self.id,
            "version": st.version,
            "background_image": self.background_image,
            "objects": self.dataset.objects,
            "labels": st.labels,
            "selection": selection.map(|r| &r.selected),
            "program": selection.map(|r| &r.program),
        })
    }

    fn labels_file(&self, labels: &BTreeMap<String, Polarity>) -> LabelsFile {
        let pick = |p: Polarity| -> Vec<String> {
            // Dataset order, so the specification matches the CLI on the same labels.
            self.dataset
                .objects
                .iter()
                .filter(|o| labels.get(&o.id) == Some(&p))
                .map(|o| o.id.clone())
                .collect()
        };
        LabelsFile {
            positive: pick(Polarity::Positive),
            negative: pick(Polarity::Negative),
            ..Default::default()
        }
    }
}

pub struct AppState {
    config: Config,
    sessions: RwLock<HashMap<String, Arc<Session>>>,
}

impl AppState {
    pub fn new(config: Config) -> Arc<Self> {
        let state = Arc::new(AppState {
            config,
            sessions: RwLock::new(HashMap::new()),
        });
        state.restore();
        state
    }

    fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("unknown session `{id}`")))
    }

    fn save(&self, session: &Session) {
        let Some(dir) = &self.config.snapshot_dir else { return };
        let snapshot = {
            let st = session.lock();
            json!({
                "id": session.id,
                "dataset": serde_json::from_str::<Value>(&session.dataset.to_json()).unwrap_or(Value::Null),
                "background_image": session.background_image,
                "labels": st.labels,
                "version": st.version,
                "last": st.last,
            })
        };
        let path = dir.join(format!("{}.json", session.id));
        if let Err(e) = fs::create_dir_all(dir).and_then(|_| fs::write(&path, snapshot.to_string())) {
            eprintln!("warning: cannot write snapshot {}: {e}", path.display());
        }
    }

    /// Reloads every snapshot in the snapshot directory.
    fn restore(&self) {
        let Some(dir) = &self.config.snapshot_dir else { return };
        let Ok(entries) = fs::read_dir(dir) else { return };
        let mut sessions = self.sessions.write().unwrap_or_else(|e| e.into_inner());
        for path in entries.filter_map(|e| e.ok().map(|e| e.path())) {
            if path.extension().is_some_and(|x| x == "json") {
                match restore_session(&path) {
                    Ok(s) => {
                        sessions.insert(s.id.clone(), Arc::new(s));
                    }
                    Err(e) => eprintln!("warning: skipping snapshot {}: {e}", path.display()),
                }
            }
        }
    }
}

fn restore_session(path: &std::path::Path) -> anyhow::Result<Session> {
    #[derive(Deserialize)]
    struct Snapshot {
        id: String,
        dataset: Value,
        background_image: Option<String>,
        labels: BTreeMap<String, Polarity>,
        version: u64,
        last: Option<SynthResult>,
    }
    let snap: Snapshot = serde_json::from_slice(&fs::read(path)?)?;
    let dataset = load_dataset(snap.dataset.to_string().as_bytes())?;
    let session = Session::new(snap.id, dataset, snap.background_image);
    {
        let mut st = session.lock();
        st.labels = snap.labels;
        st.version = snap.version;
        st.last = snap.last;
    }
    Ok(session)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: json!({ "error": message.into() }),
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, message)
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }

    /// Label problems: empty positives, overlaps, unknown labels.
    fn specification(e: &Error) -> Self {
        let mut err = Self::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string());
        let violations = match e {
            Error::EmptyPositives => json!([{ "kind": "empty_positives" }]),
            Error::LabelOverlap(ids) => json!([{ "kind": "overlap", "objects": ids }]),
            _ => json!([{ "kind": "invalid", "message": e.to_string() }]),
        };
        err.body["violations"] = violations;
        err
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        Self::bad_request(r.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T = Response> = Result<T, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}/objects", get(get_objects))
        .route("/api/sessions/{id}/labels", put(set_label))
        .route("/api/sessions/{id}/synthesize", post(synthesize_session))
        .route("/api/sessions/{id}/synthesize/status", get(synthesis_status))
        .with_state(state)
}

async fn create_session(State(app): State<Arc<AppState>>, body: axum::body::Bytes) -> ApiResult {
    let dataset = load_dataset(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let background_image = serde_json::from_slice::<Value>(&body)
        .ok()
        .and_then(|v| v.get("background_image").and_then(Value::as_str).map(String::from));
    let id = uuid::Uuid::new_v4().simple().to_string();
    let session = Arc::new(Session::new(id.clone(), dataset, background_image));
    app.sessions
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(id.clone(), session.clone());
    app.save(&session);
    let objects: &[ObjectRecord] = &session.dataset.objects;
    Ok(Json(json!({ "id": id, "objects": objects })).into_response())
}

async fn get_objects(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    Ok(Json(app.session(&id)?.snapshot()).into_response())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelRequest {
    #[serde(default)]
    pub object: Option<String>,
    #[serde(default)]
    pub click: Option<[f64; 2]>,
    /// `null` clears the label.
    pub polarity: Option<Polarity>,
}

async fn set_label(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<LabelRequest>, JsonRejection>,
) -> ApiResult {
    let Json(req) = body?;
    let session = app.session(&id)?;
    let object = match (&req.object, req.click) {
        (Some(o), None) => {
            if session.dataset.object(o).is_none() {
                return Err(ApiError::not_found(format!("unknown object `{o}`")));
            }
            o.clone()
        }
        (None, Some([x, y])) => match resolve_clicks(&session.dataset, &[(x, y)])[0] {
            Some(i) => session.dataset.objects[i].id.clone(),
            None => return Err(ApiError::not_found(format!("no object at ({x}, {y})"))),
        },
        _ => return Err(ApiError::bad_request("give exactly one of `object` and `click`")),
    };
    let response = {
        let mut st = session.lock();
        let changed = match req.polarity {
            Some(p) => st.labels.insert(object.clone(), p) != Some(p),
            None => st.labels.remove(&object).is_some(),
        };
        if changed {
            st.version += 1;
        }
        json!({ "object": object, "version": st.version, "labels": st.labels })
    };
    app.save(&session);
    Ok(Json(response).into_response())
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ActionBody {
    Text(String),
    Json(Action),
}

#[derive(Debug, Deserialize)]
pub struct SynthesizeRequest {
    pub action: ActionBody,
    #[serde(default)]
    pub mode: Option<String>,
}

async fn synthesize_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<SynthesizeRequest>, JsonRejection>,
) -> ApiResult {
    let Json(req) = body?;
    let session = app.session(&id)?;
    let action = match req.action {
        ActionBody::Text(t) => parse_action(&t).map_err(|e| ApiError::bad_request(e.to_string()))?,
        ActionBody::Json(a) => a,
    };
    action.validate().map_err(|e| ApiError::bad_request(e.to_string()))?;
    let mode: SynthesisMode = match &req.mode {
        Some(m) => m.parse().map_err(ApiError::bad_request)?,
        None => SynthesisMode::Full,
    };

    let (labels, version, job_id, cancel) = {
        let mut st = session.lock();
        let labels = session.labels_file(&st.labels);
        let edit = labels.clone().into_edit(action.clone());
        build_specification(&session.dataset, &edit).map_err(|e| ApiError::specification(&e))?;
        if let Some(old) = &st.job {
            old.cancel.store(true, Ordering::Relaxed);
        }
        let job_id = st.next_job;
        st.next_job += 1;
        let cancel = Arc::new(AtomicBool::new(false));
        st.job = Some(Job {
            id: job_id,
            cancel: cancel.clone(),
            state: JobState::Running { job: job_id },
        });
        (labels, st.version, job_id, cancel)
    };

    let options = SynthesisOptions {
        budget: Budget::with_timeout(app.config.timeout).cancel_flag(cancel),
        ..SynthesisOptions::with_mode(mode)
    };
    let dataset = session.dataset.clone();
    let mut handle = tokio::task::spawn_blocking(move || {
        synthesize(&dataset, &labels.into_edit(action), &options)
    });

    match tokio::time::timeout(app.config.wait, &mut handle).await {
        Ok(joined) => {
            let outcome = joined.map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
            let state = finish(&app, &session, job_id, version, outcome);
            Ok(job_response(state))
        }
        Err(_) => {
            let app = app.clone();
            let session = session.clone();
            tokio::spawn(async move {
                let outcome = match handle.await {
                    Ok(o) => o,
                    Err(e) => Err(Error::Action(format!("synthesis task failed: {e}"))),
                };
                finish(&app, &session, job_id, version, outcome);
            });
            Ok((StatusCode::ACCEPTED, Json(JobState::Running { job: job_id })).into_response())
        }
    }
}

/// Records a finished job unless a newer one replaced it.
fn finish(
    app: &AppState,
    session: &Session,
    job_id: u64,
    version: u64,
    outcome: lattice_select::Result<SynthesisReport>,
) -> JobState {
    let state = match outcome {
        Ok(report) => JobState::Done {
            job: job_id,
            result: SynthResult::new(report, version),
        },
        Err(Error::Cancelled) => JobState::Cancelled { job: job_id },
        Err(e) => JobState::Failed {
            job: job_id,
            error: e.to_string(),
        },
    };
    {
        let mut st = session.lock();
        if st.job.as_ref().is_some_and(|j| j.id == job_id) {
            if let JobState::Done { result, .. } = &state {
                st.last = Some(result.clone());
            }
            st.job.as_mut().expect("checked above").state = state.clone();
        }
    }
    app.save(session);
    state
}

fn job_response(state: JobState) -> Response {
    match state {
        JobState::Done { result, .. } => Json(result).into_response(),
        JobState::Cancelled { job } => (
            StatusCode::CONFLICT,
            Json(json!({ "error": "superseded by a newer synthesis request", "job": job })),
        )
            .into_response(),
        JobState::Failed { job, error } => (
            StatusCode::SERVICE_UNAVAILABLE,
            Json(json!({ "error": error, "job": job })),
        )
            .into_response(),
        other => (StatusCode::ACCEPTED, Json(other)).into_response(),
    }
}

async fn synthesis_status(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let session = app.session(&id)?;
    let state = session
        .lock()
        .job
        .as_ref()
        .map_or(JobState::Idle, |j| j.state.clone());
    Ok(Json(state).into_response())
}
