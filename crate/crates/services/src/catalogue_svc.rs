//! Replica catalogue service: register and resolve dataset replicas, with
//! an optional tab-separated snapshot file kept in sync after mutations.

use crate::util::ApiError;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use fedfaas_core::catalogue::{ReplicaCatalogue, ReplicaRecord};
use fedfaas_core::ivoid::parse_ivoid;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

pub struct CatalogueState {
    pub catalogue: Mutex<ReplicaCatalogue>,
    pub snapshot_path: Option<PathBuf>,
}

#[derive(Deserialize)]
struct RegisterRequest {
    ivo: String,
    site_id: String,
    #[serde(default)]
    relative_path: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ReplicaView {
    pub ivo: String,
    pub site_id: String,
    pub relative_path: String,
}

impl From<&ReplicaRecord> for ReplicaView {
    fn from(r: &ReplicaRecord) -> Self {
        Self {
            ivo: r.ivoid.to_string(),
            site_id: r.site_id.clone(),
            relative_path: r.relative_path.clone(),
        }
    }
}

fn persist(state: &CatalogueState, cat: &ReplicaCatalogue) {
    if let Some(path) = &state.snapshot_path {
        if let Err(e) = std::fs::write(path, cat.snapshot()) {
            tracing::error!(?path, error = %e, "snapshot write failed");
        }
    }
}

async fn post_replica(
    State(state): State<Arc<CatalogueState>>,
    Json(req): Json<RegisterRequest>,
) -> Result<StatusCode, ApiError> {
    let ivoid = parse_ivoid(&req.ivo)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_ivoid", e))?;
    let mut record = ReplicaRecord::new(ivoid, req.site_id);
    if let Some(rel) = req.relative_path {
        record.relative_path = rel;
    }
    let mut cat = state.catalogue.lock().unwrap();
    cat.register_replica(record)
        .map_err(|e| ApiError::new(StatusCode::CONFLICT, "already_exists", e))?;
    persist(&state, &cat);
    Ok(StatusCode::CREATED)
}

#[derive(Deserialize)]
struct ResolveQuery {
    ivo: Option<String>,
    namespace: Option<String>,
    name: Option<String>,
}

async fn get_replicas(
    State(state): State<Arc<CatalogueState>>,
    Query(q): Query<ResolveQuery>,
) -> Result<Json<Vec<ReplicaView>>, ApiError> {
    let cat = state.catalogue.lock().unwrap();
    let records: Vec<ReplicaView> = match (&q.ivo, &q.namespace, &q.name) {
        (Some(ivo), _, _) => {
            let ivoid = parse_ivoid(ivo)
                .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_ivoid", e))?;
            cat.resolve_replicas(&ivoid).into_iter().map(ReplicaView::from).collect()
        }
        (None, Some(ns), Some(name)) => cat
            .find_by_namespace_name(ns, name)
            .into_iter()
            .map(ReplicaView::from)
            .collect(),
        _ => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "missing_query",
                "expected ?ivo= or ?namespace=&name=",
            ))
        }
    };
    Ok(Json(records))
}

pub fn router(snapshot_path: Option<PathBuf>) -> Router {
    let catalogue = match &snapshot_path {
        Some(p) if p.exists() => {
            let text = std::fs::read_to_string(p).unwrap_or_default();
            ReplicaCatalogue::load_snapshot(&text).unwrap_or_else(|e| {
                tracing::warn!(error = %e, "snapshot unreadable, starting empty");
                ReplicaCatalogue::new()
            })
        }
        _ => ReplicaCatalogue::new(),
    };
    let state = Arc::new(CatalogueState { catalogue: Mutex::new(catalogue), snapshot_path });
    Router::new()
        .route("/replicas", post(post_replica))
        .route("/replicas", get(get_replicas))
        .with_state(state)
}
