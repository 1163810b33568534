//! JSON HTTP API over the validation, repair, generation and blueprint
//! operations of `qgen-core`.
//!
//! Every endpoint except bank and course mutation is pure with respect to the
//! stores. Errors come back as `{"error": code, "detail": text}`.

mod store;

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::Utc;
use qgen_core::blueprint::{BackendFiller, BlueprintRequirement, CourseSpec, Filler};
use qgen_core::formats::{parse_course, parse_question, ReportFile};
use qgen_core::generator::Backend;
use qgen_core::{
    assemble, suggest_repair, validate_bank, validate_question, Error, GenerationRequest, Question, SubpointId,
    Taxonomy,
};
use serde::Deserialize;
use serde_json::{json, Map, Value};

pub use store::{BankStore, CourseStore};

pub struct AppState {
    pub taxonomy: Arc<Taxonomy>,
    pub banks: BankStore,
    pub courses: CourseStore,
    pub backend: Backend,
}

impl AppState {
    pub fn new(taxonomy: Taxonomy, backend: Backend) -> Self {
        AppState {
            taxonomy: Arc::new(taxonomy),
            banks: BankStore::in_memory(),
            courses: CourseStore::in_memory(),
            backend,
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    detail: String,
}

impl ApiError {
    fn not_found(detail: impl Into<String>) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, code: "NotFound", detail: detail.into() }
    }

    fn schema(detail: impl Into<String>) -> Self {
        Error::Schema(detail.into()).into()
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let status = match &err {
            Error::NoVerbFound => StatusCode::UNPROCESSABLE_ENTITY,
            Error::ClientFailure(_) => StatusCode::BAD_GATEWAY,
            Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError { status, code: err.code(), detail: err.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"error": self.code, "detail": self.detail}))).into_response()
    }
}

type ApiResult<T = Json<Value>> = Result<T, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/taxonomy", get(taxonomy))
        .route("/api/validate", axum::routing::post(validate))
        .route("/api/repair", axum::routing::post(repair))
        .route("/api/generate", axum::routing::post(generate))
        .route("/api/banks", get(list_banks))
        .route("/api/banks/{id}", get(get_bank).post(append_bank))
        .route("/api/courses", get(list_courses).post(put_course))
        .route("/api/courses/{code}", get(get_course))
        .route("/api/blueprint", axum::routing::post(blueprint))
        .route("/api/report", get(report))
        .with_state(state)
}

/// Binds `port` on all interfaces and serves until the process exits.
pub async fn serve(port: u16, state: Arc<AppState>) -> std::io::Result<()> {
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}

fn parse_body(body: &Bytes) -> ApiResult<Map<String, Value>> {
    match serde_json::from_slice(body) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(ApiError::schema("request body must be a JSON object")),
        Err(e) => Err(ApiError::schema(format!("invalid JSON: {e}"))),
    }
}

fn required_str<'a>(body: &'a Map<String, Value>, field: &str) -> ApiResult<&'a str> {
    match body.get(field) {
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err(ApiError::schema(format!("field `{field}` must be a string"))),
        None => Err(ApiError::schema(format!("missing field `{field}`"))),
    }
}

fn optional_str<'a>(body: &'a Map<String, Value>, field: &str) -> ApiResult<Option<&'a str>> {
    match body.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(_) => Err(ApiError::schema(format!("field `{field}` must be a string"))),
    }
}

/// Builds an ad-hoc question from `{text, subpoint, id?, targets?}`.
fn adhoc_question(body: &Map<String, Value>) -> ApiResult<(Question, SubpointId)> {
    let text = required_str(body, "text")?;
    let subpoint = SubpointId::parse(required_str(body, "subpoint")?)?;
    let id = optional_str(body, "id")?.unwrap_or("adhoc");
    let targets = match body.get("targets") {
        None | Some(Value::Null) => vec![subpoint],
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => SubpointId::parse(s).map_err(ApiError::from),
                _ => Err(ApiError::schema("targets must be strings")),
            })
            .collect::<ApiResult<Vec<_>>>()?,
        Some(_) => return Err(ApiError::schema("targets must be an array")),
    };
    let mut question = Question::new(id, text, targets);
    if let Some(topic) = optional_str(body, "topic")? {
        question.topic = Some(topic.to_string());
    }
    Ok((question, subpoint))
}

async fn taxonomy(State(state): State<Arc<AppState>>) -> Json<Value> {
    let tax = &state.taxonomy;
    let levels: Vec<Value> = qgen_core::BloomLevel::ALL
        .iter()
        .map(|l| json!({"name": l.name(), "ordinal": l.ordinal(), "domain": tax.ncaaa_domain_for_level(*l)}))
        .collect();
    Json(json!({
        "levels": levels,
        "domains": qgen_core::NcaaaDomain::ALL,
        "outcomes": tax.tables().so_rows,
        "subpoints": tax.subpoints(),
        "verbs": tax.registry().entries().collect::<Vec<_>>(),
    }))
}

async fn validate(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let body = parse_body(&body)?;
    let (question, subpoint) = adhoc_question(&body)?;
    let report = validate_question(&question, subpoint, &state.taxonomy)?;
    Ok(Json(serde_json::to_value(report).expect("report serializes")))
}

async fn repair(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let body = parse_body(&body)?;
    let (question, subpoint) = adhoc_question(&body)?;
    let repaired = suggest_repair(&question, subpoint, &state.taxonomy)?;
    let report = validate_question(&repaired, subpoint, &state.taxonomy)?;
    Ok(Json(json!({
        "original": question.text,
        "text": repaired.text,
        "changed": repaired.text != question.text,
        "source": repaired.source,
        "report": report,
    })))
}

async fn generate(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let mut body = parse_body(&body)?;
    SubpointId::parse(required_str(&body, "subpoint")?)?;
    let seed = match body.remove("seed") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| ApiError::schema("seed must be a non-negative integer"))?),
    };
    let req: GenerationRequest =
        serde_json::from_value(Value::Object(body)).map_err(|e| ApiError::schema(e.to_string()))?;
    req.check()?;
    let backend = match (&state.backend, seed) {
        (Backend::Offline { .. }, Some(seed)) => Backend::Offline { seed },
        (backend, _) => backend.clone(),
    };
    let taxonomy = Arc::clone(&state.taxonomy);
    let result = tokio::task::spawn_blocking(move || backend.generate(&req, &taxonomy))
        .await
        .map_err(|e| Error::ClientFailure(e.to_string()))??;
    Ok(Json(serde_json::to_value(result).expect("result serializes")))
}

async fn list_banks(State(state): State<Arc<AppState>>) -> Json<Value> {
    Json(json!({"banks": state.banks.ids().await}))
}

async fn get_bank(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let questions = state.banks.get(&id).await.ok_or_else(|| ApiError::not_found(format!("bank `{id}`")))?;
    Ok(Json(json!({"id": id, "questions": questions})))
}

/// Accepts a single `bank.v1` record or an array of them. `created_at`
/// defaults to now and `source` to `human`.
async fn append_bank(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let value: Value = serde_json::from_slice(&body).map_err(|e| ApiError::schema(format!("invalid JSON: {e}")))?;
    let records = match value {
        Value::Array(items) => items,
        Value::Object(_) => vec![value],
        _ => return Err(ApiError::schema("expected a question object or an array of them")),
    };
    let now = Utc::now();
    let questions = records
        .into_iter()
        .map(|record| {
            let Value::Object(mut map) = record else {
                return Err(ApiError::schema("each question must be a JSON object"));
            };
            map.entry("created_at").or_insert_with(|| json!(now));
            map.entry("source").or_insert_with(|| json!("human"));
            Ok(parse_question(&Value::Object(map).to_string())?)
        })
        .collect::<ApiResult<Vec<_>>>()?;
    let appended = questions.len();
    let total = state.banks.append(&id, questions).await?;
    Ok(Json(json!({"id": id, "appended": appended, "total": total})))
}

async fn list_courses(State(state): State<Arc<AppState>>) -> Json<Value> {
    Json(json!({"courses": state.courses.codes().await}))
}

async fn get_course(State(state): State<Arc<AppState>>, Path(code): Path<String>) -> ApiResult {
    let course = state.courses.get(&code).await.ok_or_else(|| ApiError::not_found(format!("course `{code}`")))?;
    Ok(Json(serde_json::to_value(course).expect("course serializes")))
}

async fn put_course(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::schema(e.to_string()))?;
    let course = parse_course(text)?;
    state.courses.put(course.clone()).await?;
    Ok(Json(serde_json::to_value(course).expect("course serializes")))
}

async fn course_from(state: &AppState, body: &Map<String, Value>) -> ApiResult<CourseSpec> {
    match (body.get("course"), body.get("course_code")) {
        (Some(doc @ Value::Object(_)), _) => Ok(parse_course(&doc.to_string())?),
        (Some(Value::String(code)), _) | (None, Some(Value::String(code))) => {
            state.courses.get(code).await.ok_or_else(|| ApiError::not_found(format!("course `{code}`")))
        }
        _ => Err(ApiError::schema("missing field `course`")),
    }
}

async fn blueprint(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let body = parse_body(&body)?;
    let course = course_from(&state, &body).await?;

    let bank = match (body.get("bank"), body.get("questions")) {
        (Some(Value::String(id)), _) => {
            state.banks.get(id).await.ok_or_else(|| ApiError::not_found(format!("bank `{id}`")))?
        }
        (_, Some(Value::Array(items))) => items
            .iter()
            .map(|item| parse_question(&item.to_string()).map_err(ApiError::from))
            .collect::<ApiResult<Vec<_>>>()?,
        (None, None) => Vec::new(),
        _ => return Err(ApiError::schema("`bank` must be a bank id or `questions` an array")),
    };

    let requirement = match (body.get("per_subpoint"), body.get("requirement")) {
        (Some(n), _) => {
            let n = n.as_u64().ok_or_else(|| ApiError::schema("per_subpoint must be a positive integer"))?;
            BlueprintRequirement::uniform(&course, n as usize)?
        }
        (None, Some(counts)) => {
            let counts: BTreeMap<SubpointId, usize> =
                serde_json::from_value(counts.clone()).map_err(|e| ApiError::schema(e.to_string()))?;
            BlueprintRequirement::new(&course, counts)?
        }
        (None, None) => BlueprintRequirement::uniform(&course, 1)?,
    };

    let backend = match optional_str(&body, "fill")?.unwrap_or("none") {
        "none" => None,
        "offline" => {
            let seed = body.get("seed").and_then(Value::as_u64).unwrap_or(0);
            Some(Backend::Offline { seed })
        }
        "client" | "http" => Some(state.backend.clone()),
        other => return Err(ApiError::schema(format!("unknown fill mode `{other}`"))),
    };

    let taxonomy = Arc::clone(&state.taxonomy);
    let exam = tokio::task::spawn_blocking(move || {
        let filler = backend.as_ref().map(|backend| BackendFiller { taxonomy: &taxonomy, course: &course, backend });
        assemble(&course, &requirement, &bank, filler.as_ref().map(|f| f as &dyn Filler), &taxonomy)
    })
    .await
    .map_err(|e| Error::Io(e.to_string()))?;
    Ok(Json(serde_json::to_value(exam).expect("exam serializes")))
}

#[derive(Deserialize)]
struct ReportQuery {
    bank: Option<String>,
    course: Option<String>,
}

async fn report(State(state): State<Arc<AppState>>, Query(query): Query<ReportQuery>) -> ApiResult {
    let bank_id = query.bank.ok_or_else(|| ApiError::schema("missing query parameter `bank`"))?;
    let code = query.course.ok_or_else(|| ApiError::schema("missing query parameter `course`"))?;
    let bank = state.banks.get(&bank_id).await.ok_or_else(|| ApiError::not_found(format!("bank `{bank_id}`")))?;
    let course = state.courses.get(&code).await.ok_or_else(|| ApiError::not_found(format!("course `{code}`")))?;
    let reports = validate_bank(&bank, &state.taxonomy).reports;
    let file = ReportFile::new(course, reports, Utc::now());
    Ok(Json(serde_json::to_value(file).expect("report serializes")))
}
