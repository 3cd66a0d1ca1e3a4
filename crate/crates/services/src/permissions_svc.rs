//! Permissions service: authorization checks plus the per-function
//! extraction plugin endpoint. Rules load from a tab-separated file at
//! startup; scenario tooling may add or remove rules at runtime.

use crate::util::ApiError;
use axum::extract::State;
use axum::http::StatusCode;
use axum::routing::post;
use axum::{Json, Router};
use fedfaas_core::permissions::{
    Effect, PermissionsError, PluginRegistry, PolicyRule, PolicyStore,
};
use serde::{Deserialize, Serialize};
use std::sync::{Arc, Mutex};

pub struct PermissionsState {
    pub store: Mutex<PolicyStore>,
    pub plugins: PluginRegistry,
}

#[derive(Deserialize)]
struct CheckRequest {
    groups: Vec<String>,
    namespace: String,
    function_uuid: String,
}

#[derive(Serialize)]
struct CheckResponse {
    decision: Effect,
    matched_rule: Option<PolicyRule>,
}

async fn post_check(
    State(state): State<Arc<PermissionsState>>,
    Json(req): Json<CheckRequest>,
) -> Json<CheckResponse> {
    let decision =
        state.store.lock().unwrap().check_authorization(&req.groups, &req.namespace, &req.function_uuid);
    Json(CheckResponse { decision: decision.effect, matched_rule: decision.matched_rule })
}

#[derive(Deserialize)]
struct ExtractRequest {
    route: String,
    /// Raw request body, passed through as a string.
    body: String,
}

#[derive(Serialize)]
struct ExtractResponse {
    namespace: String,
    ivoid: String,
}

async fn post_extract(
    State(state): State<Arc<PermissionsState>>,
    Json(req): Json<ExtractRequest>,
) -> Result<Json<ExtractResponse>, ApiError> {
    match state.plugins.extract_namespace(&req.route, req.body.as_bytes()) {
        Ok(ex) => Ok(Json(ExtractResponse { namespace: ex.namespace, ivoid: ex.ivoid.to_string() })),
        Err(e @ PermissionsError::NoPluginForRoute(_)) => {
            Err(ApiError::new(StatusCode::NOT_FOUND, "no_plugin_for_route", e))
        }
        Err(e) => Err(ApiError::new(StatusCode::BAD_REQUEST, "extraction_failed", e)),
    }
}

#[derive(Deserialize)]
struct RuleChange {
    action: RuleAction,
    rule: PolicyRule,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum RuleAction {
    Add,
    Remove,
}

async fn post_rules(
    State(state): State<Arc<PermissionsState>>,
    Json(req): Json<RuleChange>,
) -> StatusCode {
    let mut store = state.store.lock().unwrap();
    match req.action {
        RuleAction::Add => {
            store.add_rule(req.rule);
            StatusCode::CREATED
        }
        RuleAction::Remove => {
            if store.remove_rule(&req.rule) > 0 {
                StatusCode::OK
            } else {
                StatusCode::NOT_FOUND
            }
        }
    }
}

pub fn router(store: PolicyStore) -> Router {
    let state = Arc::new(PermissionsState {
        store: Mutex::new(store),
        plugins: PluginRegistry::with_gaussconv(),
    });
    Router::new()
        .route("/authz/check", post(post_check))
        .route("/authz/extract", post(post_extract))
        .route("/authz/rules", post(post_rules))
        .with_state(state)
}
