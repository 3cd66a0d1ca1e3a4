//! DataLink service: answers `GET /links?ID=<ivoid>` with a VOTable joining
//! replica locations and registered functions. Registry and catalogue state
//! is fetched from their services per request.

use crate::catalogue_svc::ReplicaView;
use crate::util::ApiError;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use fedfaas_core::catalogue::{ReplicaCatalogue, ReplicaRecord};
use fedfaas_core::datalink::{links_for, render_votable};
use fedfaas_core::ivoid::parse_ivoid;
use fedfaas_core::sitecaps::{SiteRecord, SiteRegistry};
use serde::Deserialize;
use std::sync::Arc;

pub struct DatalinkState {
    pub catalogue_url: String,
    pub sitecaps_url: String,
    pub http: reqwest::Client,
}

#[derive(Deserialize)]
struct LinksQuery {
    #[serde(rename = "ID")]
    id: String,
}

async fn fetch_registry(state: &DatalinkState) -> Result<SiteRegistry, ApiError> {
    let sites: Vec<SiteRecord> = state
        .http
        .get(format!("{}/sites", state.sitecaps_url))
        .send()
        .await
        .and_then(|r| r.error_for_status())
        .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "sitecaps_unreachable", e))?
        .json()
        .await
        .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "sitecaps_bad_response", e))?;
    let mut reg = SiteRegistry::new();
    for site in sites {
        reg.register_site(&site.site_id, &site.gatekeeper_url)
            .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "sitecaps_bad_response", e))?;
        for f in site.functions {
            reg.register_service(&site.site_id, f)
                .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "sitecaps_bad_response", e))?;
        }
    }
    Ok(reg)
}

async fn get_links(
    State(state): State<Arc<DatalinkState>>,
    Query(q): Query<LinksQuery>,
) -> Result<impl IntoResponse, ApiError> {
    let ivoid = parse_ivoid(&q.id)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_ivoid", e))?;
    let replicas: Vec<ReplicaView> = state
        .http
        .get(format!("{}/replicas", state.catalogue_url))
        .query(&[("ivo", &q.id)])
        .send()
        .await
        .and_then(|r| r.error_for_status())
        .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "catalogue_unreachable", e))?
        .json()
        .await
        .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "catalogue_bad_response", e))?;
    let mut cat = ReplicaCatalogue::new();
    for r in &replicas {
        let id = parse_ivoid(&r.ivo)
            .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "catalogue_bad_response", e))?;
        let mut rec = ReplicaRecord::new(id, r.site_id.clone());
        rec.relative_path = r.relative_path.clone();
        cat.register_replica(rec)
            .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "catalogue_bad_response", e))?;
    }
    let registry = fetch_registry(&state).await?;
    let links = links_for(&registry, &cat, &ivoid);
    let body = render_votable(&ivoid, &links);
    Ok(([(header::CONTENT_TYPE, "application/x-votable+xml")], body))
}

pub fn router(catalogue_url: String, sitecaps_url: String) -> Router {
    let state = Arc::new(DatalinkState {
        catalogue_url: catalogue_url.trim_end_matches('/').to_string(),
        sitecaps_url: sitecaps_url.trim_end_matches('/').to_string(),
        http: reqwest::Client::new(),
    });
    Router::new().route("/links", get(get_links)).with_state(state)
}
