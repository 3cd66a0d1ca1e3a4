//! Site-capabilities service: sites and their function descriptors,
//! persisted as an append-only JSON-lines log replayed at startup.

use crate::util::ApiError;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use fedfaas_core::sitecaps::{FunctionDescriptor, RegistryError, SiteRecord, SiteRegistry};
use serde::Deserialize;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

pub struct SitecapsState {
    pub registry: Mutex<SiteRegistry>,
    pub log_path: Option<PathBuf>,
}

fn persist(state: &SitecapsState, reg: &SiteRegistry) {
    if let Some(path) = &state.log_path {
        if let Err(e) = std::fs::write(path, reg.log()) {
            tracing::error!(?path, error = %e, "registry log write failed");
        }
    }
}

fn registry_error(e: RegistryError) -> ApiError {
    let (status, code) = match &e {
        RegistryError::UnknownSite(_) => (StatusCode::NOT_FOUND, "unknown_site"),
        RegistryError::SiteExists(_) => (StatusCode::CONFLICT, "site_exists"),
        RegistryError::Conflict { .. } => (StatusCode::CONFLICT, "conflict"),
        RegistryError::NameVersionTaken { .. } => (StatusCode::CONFLICT, "name_version_taken"),
        RegistryError::BadLog { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "bad_log"),
    };
    ApiError::new(status, code, e)
}

#[derive(Deserialize)]
struct SiteRequest {
    site_id: String,
    gatekeeper_url: String,
}

async fn post_site(
    State(state): State<Arc<SitecapsState>>,
    Json(req): Json<SiteRequest>,
) -> Result<StatusCode, ApiError> {
    let mut reg = state.registry.lock().unwrap();
    reg.register_site(&req.site_id, &req.gatekeeper_url).map_err(registry_error)?;
    persist(&state, &reg);
    Ok(StatusCode::CREATED)
}

async fn post_service(
    State(state): State<Arc<SitecapsState>>,
    Path(site_id): Path<String>,
    Json(descriptor): Json<FunctionDescriptor>,
) -> Result<StatusCode, ApiError> {
    let mut reg = state.registry.lock().unwrap();
    reg.register_service(&site_id, descriptor).map_err(registry_error)?;
    persist(&state, &reg);
    Ok(StatusCode::CREATED)
}

async fn get_site_services(
    State(state): State<Arc<SitecapsState>>,
    Path(site_id): Path<String>,
) -> Result<Json<SiteRecord>, ApiError> {
    let reg = state.registry.lock().unwrap();
    let rec = reg.list_site_services(&site_id).map_err(registry_error)?;
    Ok(Json(rec.clone()))
}

#[derive(Deserialize)]
struct FindQuery {
    name: Option<String>,
    version: Option<String>,
    tag: Option<String>,
}

#[derive(serde::Serialize)]
struct Found {
    site_id: String,
    descriptor: FunctionDescriptor,
}

async fn get_services(
    State(state): State<Arc<SitecapsState>>,
    Query(q): Query<FindQuery>,
) -> Result<Json<Vec<Found>>, ApiError> {
    let name = q.name.ok_or_else(|| {
        ApiError::new(StatusCode::BAD_REQUEST, "missing_query", "expected ?name=")
    })?;
    let tags: Option<Vec<String>> = q.tag.map(|t| vec![t]);
    let reg = state.registry.lock().unwrap();
    let found = reg
        .find_function(&name, q.version.as_deref(), tags.as_deref())
        .into_iter()
        .map(|(site_id, d)| Found { site_id: site_id.to_string(), descriptor: d.clone() })
        .collect();
    Ok(Json(found))
}

async fn get_sites(State(state): State<Arc<SitecapsState>>) -> Json<Vec<SiteRecord>> {
    Json(state.registry.lock().unwrap().sites().to_vec())
}

pub fn router(log_path: Option<PathBuf>) -> Router {
    let registry = match &log_path {
        Some(p) if p.exists() => {
            let text = std::fs::read_to_string(p).unwrap_or_default();
            SiteRegistry::replay(&text).unwrap_or_else(|e| {
                tracing::warn!(error = %e, "registry log unreadable, starting empty");
                SiteRegistry::new()
            })
        }
        _ => SiteRegistry::new(),
    };
    let state = Arc::new(SitecapsState { registry: Mutex::new(registry), log_path });
    Router::new()
        .route("/sites", post(post_site))
        .route("/sites", get(get_sites))
        .route("/sites/:site_id/services", post(post_service))
        .route("/sites/:site_id/services", get(get_site_services))
        .route("/services", get(get_services))
        .with_state(state)
}
