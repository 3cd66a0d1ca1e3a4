//! Per-site function runtime hosting the Gaussian convolution endpoint.
//! No authentication here: the gatekeeper is the perimeter and this service
//! listens on loopback only.

use crate::util::ApiError;
use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use fedfaas_core::fits::{read_fits, write_fits};
use fedfaas_core::gauss::{gaussconv, validate_sigma, GaussConvParams, SIGMA_MESSAGE};
use fedfaas_core::ivoid::{parse_ivoid, IvoId};
use fedfaas_core::permissions::quote_nonfinite;
use serde::Serialize;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct RuntimeConfig {
    pub abs_path: PathBuf,
    pub site_id: String,
}

#[derive(Debug, PartialEq, Eq)]
pub enum PathResolveError {
    PathTraversalRejected,
    DatasetNotFound(PathBuf),
}

/// Join the storage mount root with the identifier's storage path, rejecting
/// anything that would escape the mount.
pub fn resolve_local_path(config: &RuntimeConfig, ivoid: &IvoId) -> Result<PathBuf, PathResolveError> {
    let rel = Path::new(&ivoid.storage_path);
    for component in rel.components() {
        match component {
            Component::Normal(_) => {}
            _ => return Err(PathResolveError::PathTraversalRejected),
        }
    }
    let path = config.abs_path.join(rel);
    if !path.is_file() {
        return Err(PathResolveError::DatasetNotFound(path));
    }
    Ok(path)
}

struct ParsedRequest {
    ivo: String,
    sigma: f64,
}

fn parse_request(body: &[u8]) -> Result<ParsedRequest, ApiError> {
    let bad_request = |msg: String| ApiError::new(StatusCode::BAD_REQUEST, "malformed_body", msg);
    let doc: serde_json::Value = serde_json::from_slice(&quote_nonfinite(body))
        .map_err(|e| bad_request(format!("body is not valid JSON: {e}")))?;
    let ivo = doc
        .get("ivo")
        .and_then(|v| v.as_str())
        .ok_or_else(|| bad_request("missing required field 'ivo'".into()))?
        .to_string();
    let sigma = match doc.get("sigma") {
        Some(v) if v.is_number() => v.as_f64().unwrap(),
        Some(v) if v.as_str() == Some("NaN") => f64::NAN,
        Some(v) if v.as_str() == Some("Infinity") => f64::INFINITY,
        Some(v) if v.as_str() == Some("-Infinity") => f64::NEG_INFINITY,
        Some(_) => return Err(bad_request("field 'sigma' must be a number".into())),
        None => return Err(bad_request("missing required field 'sigma'".into())),
    };
    Ok(ParsedRequest { ivo, sigma })
}

async fn handle_gaussconv(
    State(config): State<Arc<RuntimeConfig>>,
    body: Bytes,
) -> Result<impl IntoResponse, ApiError> {
    let req = parse_request(&body)?;
    validate_sigma(req.sigma).map_err(|_| {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "sigma_out_of_range", SIGMA_MESSAGE)
    })?;
    let ivoid = parse_ivoid(&req.ivo)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_ivoid", e))?;
    let path = resolve_local_path(&config, &ivoid).map_err(|e| match e {
        PathResolveError::PathTraversalRejected => ApiError::new(
            StatusCode::BAD_REQUEST,
            "path_traversal_rejected",
            "storage path escapes the storage mount",
        ),
        PathResolveError::DatasetNotFound(p) => ApiError::new(
            StatusCode::NOT_FOUND,
            "dataset_not_found",
            format!("no local replica at {}", p.display()),
        ),
    })?;
    let bytes = std::fs::read(&path)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "read_failed", e))?;
    let image = read_fits(&bytes)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "invalid_fits", e))?;
    let params = GaussConvParams { ivo: ivoid, sigma: req.sigma };
    let out = gaussconv(&image, &params).map_err(|_| {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "sigma_out_of_range", SIGMA_MESSAGE)
    })?;
    let out_bytes = write_fits(&out)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "invalid_fits", e))?;
    Ok(([(header::CONTENT_TYPE, "image/fits")], out_bytes))
}

#[derive(Serialize)]
struct Health {
    status: &'static str,
    site_id: String,
    function: &'static str,
    version: &'static str,
}

async fn health(State(config): State<Arc<RuntimeConfig>>) -> Json<Health> {
    Json(Health {
        status: "ok",
        site_id: config.site_id.clone(),
        function: "gaussconv",
        version: env!("CARGO_PKG_VERSION"),
    })
}

pub fn router(config: RuntimeConfig) -> Router {
    Router::new()
        .route("/gaussconv_fitsimg/", post(handle_gaussconv))
        .route("/health", get(health))
        .with_state(Arc::new(config))
}
