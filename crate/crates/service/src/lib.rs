//! Stateless JSON-over-HTTP front end for the trade-off solvers.
//!
//! Every handler parses its body, validates it into core model types and returns
//! the same report documents the CLI prints with `--json`. Shape errors answer
//! 400, domain errors 422; both carry `{code, message, path}`.

use std::io;

use axum::body::Bytes;
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use tradeoff_core::report::{
    chain_report, dynamic_report, enumeration_report, inference_report, sensitivity_report, shift_report,
    static_report, trace_report,
};
use tradeoff_core::scenario::{parse_json, ErrorBody, ScenarioError, FORMAT_VERSION};

pub mod requests;

pub use requests::RequestError;
use requests::{
    ChainRequest, DynamicRequest, EnumerateRequest, InferRequest, SensitivityRequest, ShiftRequest, StaticRequest,
    TraceRequest,
};

/// Comma-separated list of origins allowed by CORS; unset or `*` allows any.
pub const CORS_ORIGIN_ENV: &str = "TRADEOFF_CORS_ORIGIN";

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// `None` allows every origin.
    pub allowed_origins: Option<Vec<HeaderValue>>,
}

impl ServiceConfig {
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(CORS_ORIGIN_ENV) {
            Ok(v) => Self::with_origins(&v),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn with_origins(spec: &str) -> Result<Self, String> {
        let spec = spec.trim();
        if spec.is_empty() || spec == "*" {
            return Ok(Self::default());
        }
        let origins = spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| HeaderValue::from_str(s).map_err(|_| format!("invalid origin `{s}` in {CORS_ORIGIN_ENV}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { allowed_origins: Some(origins) })
    }

    fn cors(&self) -> CorsLayer {
        let origin = match &self.allowed_origins {
            None => AllowOrigin::from(Any),
            Some(list) => AllowOrigin::list(list.clone()),
        };
        CorsLayer::new()
            .allow_origin(origin)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([axum::http::header::CONTENT_TYPE])
    }
}

/// A refused request, rendered as an [`ErrorBody`].
#[derive(Debug, Clone, PartialEq)]
pub enum ApiError {
    Malformed(ScenarioError),
    Request(RequestError),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            Self::Malformed(e) if e.is_domain() => StatusCode::UNPROCESSABLE_ENTITY,
            Self::Malformed(_) => StatusCode::BAD_REQUEST,
            Self::Request(_) => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }

    pub fn body(&self) -> ErrorBody {
        match self {
            Self::Malformed(e) => e.body(),
            Self::Request(RequestError::Domain(e)) => ScenarioError::Domain(e.clone()).body(),
            Self::Request(RequestError::Field { path, error }) => ErrorBody {
                code: error.code().into(),
                message: format!("`{path}`: {error}"),
                path: Some(path.clone()),
            },
            Self::Request(RequestError::LimitExceeded { path, got, limit }) => ErrorBody {
                code: "LIMIT_EXCEEDED".into(),
                message: format!("`{path}` is {got}, above the service limit of {limit}"),
                path: Some(path.clone()),
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.body())).into_response()
    }
}

fn respond<Req, Out>(body: &[u8], f: fn(Req) -> Result<Out, RequestError>) -> Response
where
    Req: DeserializeOwned,
    Out: Serialize,
{
    let req = match parse_json::<Req>(body) {
        Ok(r) => r,
        Err(e) => return ApiError::Malformed(e).into_response(),
    };
    match f(req) {
        Ok(out) => Json(out).into_response(),
        Err(e) => ApiError::Request(e).into_response(),
    }
}

// Solver work is CPU-bound (the oracle sweep in particular), so keep it off the
// async workers.
async fn run<Req, Out>(body: Bytes, f: fn(Req) -> Result<Out, RequestError>) -> Response
where
    Req: DeserializeOwned + 'static,
    Out: Serialize + 'static,
{
    match tokio::task::spawn_blocking(move || respond(&body, f)).await {
        Ok(resp) => resp,
        Err(_) => (
            StatusCode::INTERNAL_SERVER_ERROR,
            Json(ErrorBody { code: "INTERNAL".into(), message: "handler panicked".into(), path: None }),
        )
            .into_response(),
    }
}

async fn solve_static(body: Bytes) -> Response {
    run(body, |r: StaticRequest| {
        let (scenario, oracle) = r.validate()?;
        Ok(static_report(&scenario, oracle)?)
    })
    .await
}

async fn solve_dynamic(body: Bytes) -> Response {
    run(body, |r: DynamicRequest| {
        let (scenario, oracle) = r.validate()?;
        Ok(dynamic_report(&scenario, oracle)?)
    })
    .await
}

async fn solve_chain(body: Bytes) -> Response {
    run(body, |r: ChainRequest| {
        let (chain, oracle) = r.validate()?;
        Ok(chain_report(&chain, oracle)?)
    })
    .await
}

async fn enumerate(body: Bytes) -> Response {
    run(body, |r: EnumerateRequest| {
        let (points, valuation, unit_scale) = r.validate()?;
        Ok(enumeration_report(&points, &valuation, unit_scale)?)
    })
    .await
}

async fn trace(body: Bytes) -> Response {
    run(body, |r: TraceRequest| {
        let (frontier, n) = r.validate()?;
        Ok(trace_report(&frontier, n)?)
    })
    .await
}

async fn sensitivity(body: Bytes) -> Response {
    run(body, |r: SensitivityRequest| {
        let (scenario, parameter, step) = r.validate()?;
        Ok(sensitivity_report(&scenario, parameter, step)?)
    })
    .await
}

async fn infer(body: Bytes) -> Response {
    run(body, |r: InferRequest| {
        let (frontier, observed, tolerance) = r.validate()?;
        inference_report(&frontier, &observed, tolerance)
            .map_err(|error| RequestError::Field { path: "observed".into(), error })
    })
    .await
}

async fn shift(body: Bytes) -> Response {
    run(body, |r: ShiftRequest| {
        let (frontier, shift, valuation) = r.validate()?;
        Ok(shift_report(&frontier, &shift, valuation.as_ref())?)
    })
    .await
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({
        "status": "ok",
        "name": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "format_version": FORMAT_VERSION,
    }))
}

async fn not_found() -> Response {
    let body = ErrorBody { code: "NOT_FOUND".into(), message: "no such endpoint".into(), path: None };
    (StatusCode::NOT_FOUND, Json(body)).into_response()
}

pub fn router(config: &ServiceConfig) -> Router {
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/solve/static", post(solve_static))
        .route("/v1/solve/dynamic", post(solve_dynamic))
        .route("/v1/solve/chain", post(solve_chain))
        .route("/v1/enumerate", post(enumerate))
        .route("/v1/trace", post(trace))
        .route("/v1/sensitivity", post(sensitivity))
        .route("/v1/infer", post(infer))
        .route("/v1/shift", post(shift))
        .fallback(not_found)
        .layer(config.cors())
}

/// Serves until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, config: &ServiceConfig) -> io::Result<()> {
    axum::serve(listener, router(config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
