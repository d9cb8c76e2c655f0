use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{NaiveDate, Utc};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::journal::{Command, Service};
use crate::study::Condition;
use crate::ServiceError;

/// Shared handle; one lock serializes every mutation.
pub type SharedService = Arc<Mutex<Service>>;

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Duplicate(_) | ServiceError::Conflict(_) | ServiceError::StateViolation(_) => {
                StatusCode::CONFLICT
            }
            ServiceError::Range(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::InvalidRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(json!({ "error": { "code": self.code(), "message": self.to_string() } }))).into_response()
    }
}

type ApiResult = Result<(StatusCode, Json<Value>), ServiceError>;

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ServiceError> {
    payload.map(|Json(v)| v).map_err(|e| ServiceError::InvalidRequest(e.body_text()))
}

fn execute(service: &SharedService, status: StatusCode, command: Command) -> ApiResult {
    let mut guard = service.lock().map_err(|_| ServiceError::Internal("service lock poisoned".into()))?;
    Ok((status, Json(guard.apply(command)?)))
}

fn today() -> NaiveDate {
    Utc::now().date_naive()
}

#[derive(Deserialize)]
struct CreateParticipant {
    condition: Condition,
    enrollment_date: Option<NaiveDate>,
}

#[derive(Deserialize)]
struct IngestSteps {
    date: NaiveDate,
    steps: i64,
}

#[derive(Deserialize)]
struct StartSession {
    date: Option<NaiveDate>,
}

#[derive(Deserialize)]
struct Value1to5 {
    value: i64,
}

#[derive(Deserialize)]
struct Select {
    index: i64,
}

async fn create_participant(
    State(s): State<SharedService>,
    payload: Result<Json<CreateParticipant>, JsonRejection>,
) -> ApiResult {
    let req = body(payload)?;
    let enrollment_date = req.enrollment_date.unwrap_or_else(today);
    execute(&s, StatusCode::CREATED, Command::ParticipantCreated { condition: req.condition, enrollment_date })
}

async fn ingest_steps(
    State(s): State<SharedService>,
    Path(participant_id): Path<String>,
    payload: Result<Json<IngestSteps>, JsonRejection>,
) -> ApiResult {
    let req = body(payload)?;
    execute(&s, StatusCode::OK, Command::StepsIngested { participant_id, date: req.date, steps: req.steps })
}

async fn start_session(
    State(s): State<SharedService>,
    Path(participant_id): Path<String>,
    payload: Result<Json<StartSession>, JsonRejection>,
) -> ApiResult {
    let date = body(payload)?.date.unwrap_or_else(today);
    execute(&s, StatusCode::CREATED, Command::SessionStarted { participant_id, date })
}

async fn pre_motivation(
    State(s): State<SharedService>,
    Path(session_id): Path<String>,
    payload: Result<Json<Value1to5>, JsonRejection>,
) -> ApiResult {
    let value = body(payload)?.value;
    execute(&s, StatusCode::OK, Command::PreMotivationRecorded { session_id, value })
}

async fn select(
    State(s): State<SharedService>,
    Path(session_id): Path<String>,
    payload: Result<Json<Select>, JsonRejection>,
) -> ApiResult {
    let index = body(payload)?.index;
    execute(&s, StatusCode::OK, Command::ProfileSelected { session_id, index })
}

async fn post_motivation(
    State(s): State<SharedService>,
    Path(session_id): Path<String>,
    payload: Result<Json<Value1to5>, JsonRejection>,
) -> ApiResult {
    let value = body(payload)?.value;
    execute(&s, StatusCode::OK, Command::PostMotivationRecorded { session_id, value })
}

async fn history(State(s): State<SharedService>, Path(participant_id): Path<String>) -> ApiResult {
    let guard = s.lock().map_err(|_| ServiceError::Internal("service lock poisoned".into()))?;
    let view = guard.history(&participant_id)?;
    Ok((StatusCode::OK, Json(serde_json::to_value(view).expect("history serializes"))))
}

/// The study API.
pub fn router(service: SharedService) -> Router {
    Router::new()
        .route("/participants", post(create_participant))
        .route("/participants/{id}/steps", post(ingest_steps))
        .route("/participants/{id}/sessions", post(start_session))
        .route("/participants/{id}/history", get(history))
        .route("/sessions/{id}/pre-motivation", post(pre_motivation))
        .route("/sessions/{id}/select", post(select))
        .route("/sessions/{id}/post-motivation", post(post_motivation))
        .with_state(service)
}

/// Serves the API on `addr` until the process is stopped.
pub async fn serve(service: Service, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(Mutex::new(service)))).await
}
