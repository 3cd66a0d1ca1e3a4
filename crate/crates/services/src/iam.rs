//! Mock IAM service: issues bearer tokens over HTTP.

use crate::util::{epoch_now, ApiError};
use axum::extract::State;
use axum::http::StatusCode;
use axum::routing::post;
use axum::{Json, Router};
use fedfaas_core::identity::{issue_token, serialize_token, IssuerKey};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Deserialize)]
struct TokenRequest {
    subject: String,
    #[serde(default)]
    groups: Vec<String>,
    ttl_seconds: u64,
}

#[derive(Serialize)]
struct TokenResponse {
    token: String,
}

async fn post_token(
    State(key): State<Arc<IssuerKey>>,
    Json(req): Json<TokenRequest>,
) -> Result<Json<TokenResponse>, ApiError> {
    let token = issue_token(&req.subject, &req.groups, req.ttl_seconds, &key, epoch_now())
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_token_request", e))?;
    Ok(Json(TokenResponse { token: serialize_token(&token) }))
}

pub fn router(key: IssuerKey) -> Router {
    Router::new().route("/token", post(post_token)).with_state(Arc::new(key))
}
