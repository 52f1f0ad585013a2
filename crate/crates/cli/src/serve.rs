//! Read-only HTTP access to a precomputed run.
//!
//! The listener comes up immediately and answers 503 until the run file has
//! been loaded.

use std::collections::HashMap;
use std::io::Write;
use std::sync::{Arc, OnceLock};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use dsrec_core::query::Run;
use dsrec_core::trec::read_run;
use serde::{Deserialize, Serialize};

use crate::config::{require, PipelineConfig};
use crate::error::{CliError, CliResult};
use crate::ServeArgs;

/// Version of the JSON response schema.
pub const RESPONSE_SCHEMA: u32 = 1;
/// Most entries a recommendation response carries.
pub const MAX_RESULTS: usize = 6;

#[derive(Clone, Default)]
pub struct AppState {
    run: Arc<OnceLock<Run>>,
}

impl AppState {
    pub fn pending() -> Self {
        AppState::default()
    }

    pub fn loaded(run: Run) -> Self {
        let state = AppState::default();
        state.install(run);
        state
    }

    /// Has no effect once a run is installed.
    pub fn install(&self, run: Run) {
        let _ = self.run.set(run);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub rank: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub schema_version: u32,
    pub publication_id: String,
    pub known: bool,
    pub results: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub name: String,
    pub version: String,
    pub schema_version: u32,
    pub queries: Option<usize>,
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(serde_json::json!({ "error": message.into() }))).into_response()
}

async fn recommendation(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Response {
    let count = match params.get("count") {
        None => MAX_RESULTS,
        Some(raw) => match raw.parse::<usize>() {
            Ok(n) => n.min(MAX_RESULTS),
            Err(_) => {
                return error(
                    StatusCode::BAD_REQUEST,
                    format!("count must be a non-negative integer, got `{raw}`"),
                )
            }
        },
    };
    let Some(run) = state.run.get() else {
        return error(StatusCode::SERVICE_UNAVAILABLE, "recommendations not loaded yet");
    };
    let list = run.get(&id);
    let results = list
        .map(|l| {
            l.iter()
                .take(count)
                .enumerate()
                .map(|(i, d)| Entry {
                    id: d.id.clone(),
                    rank: i + 1,
                    score: d.score,
                })
                .collect()
        })
        .unwrap_or_default();
    Json(Recommendation {
        schema_version: RESPONSE_SCHEMA,
        publication_id: id,
        known: list.is_some(),
        results,
    })
    .into_response()
}

async fn health(State(state): State<AppState>) -> Json<Health> {
    let run = state.run.get();
    Json(Health {
        status: if run.is_some() { "ok" } else { "loading" }.into(),
        name: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema_version: RESPONSE_SCHEMA,
        queries: run.map(|r| r.lists.len()),
    })
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/recommendation/{id}", get(recommendation))
        .route("/health", get(health))
        .with_state(state)
}

pub fn serve(config: &PipelineConfig, args: &ServeArgs, out: &mut dyn Write) -> CliResult<()> {
    let path = match &args.run {
        Some(p) => p.clone(),
        None => require(&None, &config.paths.runs.first().cloned(), "run")?,
    };
    let internal = |e: std::io::Error| CliError::Internal(e.to_string());
    let rt = tokio::runtime::Runtime::new().map_err(internal)?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&args.addr)
            .await
            .map_err(|e| CliError::usage(format!("cannot bind {}: {e}", args.addr)))?;
        let addr = listener.local_addr().map_err(internal)?;
        let _ = writeln!(out, "listening on http://{addr}");
        let state = AppState::pending();
        let app = router(state.clone());
        let server = tokio::spawn(async move {
            axum::serve(listener, app)
                .with_graceful_shutdown(async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await
        });
        let loaded = tokio::task::spawn_blocking(move || read_run(&path))
            .await
            .map_err(|e| CliError::Internal(e.to_string()))??;
        let _ = writeln!(out, "loaded {} rankings", loaded.lists.len());
        let _ = out.flush();
        state.install(loaded);
        server
            .await
            .map_err(|e| CliError::Internal(e.to_string()))?
            .map_err(internal)
    })
}
