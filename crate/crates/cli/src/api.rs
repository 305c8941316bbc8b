//! HTTP API. Positions cross the wire as notation strings; all bodies are
//! JSON with snake_case fields.
//!
//! | method | path                    | body                                      |
//! |--------|-------------------------|-------------------------------------------|
//! | GET    | `/health`               |                                           |
//! | POST   | `/evaluate`             | `{position, advantage?}`                  |
//! | POST   | `/best-move`            | `{position}`                              |
//! | POST   | `/sessions`             | `{position, advantage?, human_role?}`     |
//! | GET    | `/sessions/{id}`        |                                           |
//! | POST   | `/sessions/{id}/actions`| `{action, version?}`                      |
//!
//! Errors are `{"error": message}` with 400 for malformed input, 404 for an
//! unknown session and 409 for an action the session cannot take right now.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use dnb_core::strategy::{controller_decision, value_given_open, OpenerRationale};
use dnb_core::{
    endgame_outcome, measures, opener_move, value_explicit, Action, ActionRecord, Component,
    ControllerDecision, Error, MeasureSet, Oracle, Player, Position, Role,
};

use crate::session::{Session, SessionError, SessionStore};

#[derive(Debug, Default)]
pub struct AppState {
    pub oracle: Oracle,
    pub sessions: SessionStore,
}

impl AppState {
    pub fn new(sessions: SessionStore) -> Self {
        AppState { oracle: Oracle::new(), sessions }
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/evaluate", post(evaluate))
        .route("/best-move", post(best_move))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/actions", post(session_action))
        .with_state(state)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl ToString) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, message: message.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match &e {
            SessionError::NotFound(_) => StatusCode::NOT_FOUND,
            SessionError::Game(Error::EmptyPosition) => StatusCode::BAD_REQUEST,
            SessionError::Stale { .. } | SessionError::NotYourTurn | SessionError::Game(_) => {
                StatusCode::CONFLICT
            }
        };
        ApiError { status, message: e.to_string() }
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(ApiError::bad_request)
}

/// A nonempty position from its notation.
fn parse_position(text: &str) -> ApiResult<Position> {
    let pos: Position = text.parse().map_err(ApiError::bad_request)?;
    if pos.is_empty() {
        return Err(ApiError::bad_request(Error::EmptyPosition));
    }
    Ok(pos)
}

async fn health() -> &'static str {
    "ok"
}

#[derive(Debug, Deserialize)]
struct PositionRequest {
    position: String,
    #[serde(default)]
    advantage: Option<i32>,
}

#[derive(Debug, Serialize)]
pub struct ComponentOption {
    pub component: Component,
    pub value_given_open: i32,
    pub controller_keeps: bool,
}

#[derive(Debug, Serialize)]
pub struct Evaluation {
    pub position: Position,
    pub measures: MeasureSet,
    pub value: i32,
    pub opener_move: OpenerRationale,
    pub per_component: Vec<ComponentOption>,
    /// `advantage - value`, present when an advantage was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<i32>,
}

pub fn evaluation(pos: &Position, advantage: Option<i32>) -> dnb_core::Result<Evaluation> {
    let per_component = pos
        .distinct()
        .map(|c| {
            Ok(ComponentOption {
                component: c,
                value_given_open: value_given_open(pos, c)?,
                controller_keeps: controller_decision(&pos.remove(c)?, c) == ControllerDecision::Keep,
            })
        })
        .collect::<dnb_core::Result<Vec<_>>>()?;
    Ok(Evaluation {
        position: pos.clone(),
        measures: measures(pos),
        value: value_explicit(pos)?,
        opener_move: opener_move(pos)?,
        per_component,
        outcome: advantage.map(|a| endgame_outcome(a, pos)),
    })
}

async fn evaluate(body: Bytes) -> ApiResult<Json<Evaluation>> {
    let req: PositionRequest = parse_body(&body)?;
    let pos = parse_position(&req.position)?;
    evaluation(&pos, req.advantage).map(Json).map_err(ApiError::bad_request)
}

async fn best_move(body: Bytes) -> ApiResult<Json<OpenerRationale>> {
    let req: PositionRequest = parse_body(&body)?;
    let pos = parse_position(&req.position)?;
    opener_move(&pos).map(Json).map_err(ApiError::bad_request)
}

#[derive(Debug, Deserialize)]
struct CreateSession {
    position: String,
    #[serde(default)]
    advantage: i32,
    #[serde(default = "default_role")]
    human_role: Role,
}

fn default_role() -> Role {
    Role::Opener
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    pub id: u64,
    pub version: u64,
    pub human: Player,
    pub state: dnb_core::GameState,
    pub legal_actions: Vec<Action>,
    pub terminal: bool,
    /// Endgame margin of the initial controller.
    pub margin: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine_reply: Option<Vec<ActionRecord>>,
}

impl SessionView {
    fn new(session: Session, engine_reply: Option<Vec<ActionRecord>>) -> Self {
        let terminal = session.state.is_terminal();
        SessionView {
            id: session.id,
            version: session.version,
            human: session.human,
            legal_actions: session.state.legal_actions().unwrap_or_default(),
            terminal,
            margin: session.state.margin(),
            state: session.state,
            engine_reply,
        }
    }
}

async fn create_session(
    State(app): State<Arc<AppState>>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<SessionView>)> {
    let req: CreateSession = parse_body(&body)?;
    let pos = parse_position(&req.position)?;
    let (session, reply) = app.sessions.create(pos, req.advantage, req.human_role, &app.oracle)?;
    Ok((StatusCode::CREATED, Json(SessionView::new(session, Some(reply)))))
}

async fn get_session(State(app): State<Arc<AppState>>, Path(id): Path<u64>) -> ApiResult<Json<SessionView>> {
    Ok(Json(SessionView::new(app.sessions.get(id)?, None)))
}

#[derive(Debug, Deserialize)]
struct ActionRequest {
    action: Action,
    #[serde(default)]
    version: Option<u64>,
}

async fn session_action(
    State(app): State<Arc<AppState>>,
    Path(id): Path<u64>,
    body: Bytes,
) -> ApiResult<Json<SessionView>> {
    // Unknown sessions are 404 even when the body is malformed.
    app.sessions.get(id)?;
    let req: ActionRequest = parse_body(&body)?;
    let (session, reply) = app.sessions.act(id, req.action, req.version, &app.oracle)?;
    Ok(Json(SessionView::new(session, Some(reply))))
}
