//! Gatekeeper: the single external entry point per site. Pipeline order is
//! fixed: route match, token verification, namespace extraction, policy
//! check, then forward. No body reaches an upstream unless all checks pass.

use crate::util::{epoch_now, ApiError};
use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderMap, HeaderValue, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Router;
use fedfaas_core::gatekeeper::{load_config, rewrite_path, GatekeeperConfig, RouteEntry};
use fedfaas_core::identity::{verify_token, AccessToken, IssuerKey, TokenError};
use serde::Deserialize;
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};
use std::time::Duration;

pub struct GatekeeperState {
    /// Immutable snapshot, swapped atomically on reload; in-flight requests
    /// keep the Arc they started with.
    pub config: RwLock<Arc<GatekeeperConfig>>,
    pub config_path: Option<PathBuf>,
    pub key: IssuerKey,
    pub permissions_url: String,
    pub sitecaps_url: Option<String>,
    /// route -> internal path, overriding site-capabilities lookup.
    pub rewrite_overrides: HashMap<String, String>,
    /// "namespace/service_name" -> host:port, overriding the default
    /// loopback resolution.
    pub resolve_overrides: HashMap<String, String>,
    pub upstream_timeout: Duration,
    pub http: reqwest::Client,
    rewrite_cache: Mutex<HashMap<String, String>>,
}

impl GatekeeperState {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        config: GatekeeperConfig,
        config_path: Option<PathBuf>,
        key: IssuerKey,
        permissions_url: String,
        sitecaps_url: Option<String>,
        rewrite_overrides: HashMap<String, String>,
        resolve_overrides: HashMap<String, String>,
        upstream_timeout: Duration,
    ) -> Self {
        Self {
            config: RwLock::new(Arc::new(config)),
            config_path,
            key,
            permissions_url: permissions_url.trim_end_matches('/').to_string(),
            sitecaps_url: sitecaps_url.map(|u| u.trim_end_matches('/').to_string()),
            rewrite_overrides,
            resolve_overrides,
            upstream_timeout,
            http: reqwest::Client::new(),
            rewrite_cache: Mutex::new(HashMap::new()),
        }
    }
}

const CORRELATION_HEADER: &str = "x-correlation-id";

fn reject(
    status: StatusCode,
    error_code: &str,
    message: impl ToString,
    correlation_id: &str,
    subject: Option<&str>,
    route: &str,
) -> Response {
    tracing::warn!(
        correlation_id,
        subject = subject.unwrap_or("anon"),
        route,
        error_code,
        "request rejected"
    );
    let mut resp = ApiError::new(status, error_code, message).into_response();
    if let Ok(v) = HeaderValue::from_str(correlation_id) {
        resp.headers_mut().insert(CORRELATION_HEADER, v);
    }
    resp
}

fn bearer_token(headers: &HeaderMap) -> Option<&str> {
    headers
        .get(header::AUTHORIZATION)
        .and_then(|h| h.to_str().ok())
        .and_then(|h| h.strip_prefix("Bearer "))
}

#[derive(Deserialize)]
struct ExtractResponse {
    namespace: String,
}

#[derive(Deserialize)]
struct CheckResponse {
    decision: String,
}

async fn internal_path_for(state: &GatekeeperState, entry: &RouteEntry) -> Option<String> {
    if let Some(p) = state.rewrite_overrides.get(&entry.route) {
        return Some(p.clone());
    }
    if let Some(p) = state.rewrite_cache.lock().unwrap().get(&entry.uuid) {
        return Some(p.clone());
    }
    let sitecaps = state.sitecaps_url.as_ref()?;
    #[derive(Deserialize)]
    struct SiteRecordView {
        functions: Vec<FunctionView>,
    }
    #[derive(Deserialize)]
    struct FunctionView {
        uuid: String,
        internal_path: String,
    }
    let sites: Vec<SiteRecordView> = state
        .http
        .get(format!("{sitecaps}/sites"))
        .send()
        .await
        .ok()?
        .json()
        .await
        .ok()?;
    for site in sites {
        for f in site.functions {
            if f.uuid == entry.uuid {
                state
                    .rewrite_cache
                    .lock()
                    .unwrap()
                    .insert(entry.uuid.clone(), f.internal_path.clone());
                return Some(f.internal_path);
            }
        }
    }
    None
}

async fn handle(
    State(state): State<Arc<GatekeeperState>>,
    method: Method,
    uri: Uri,
    headers: HeaderMap,
    body: Bytes,
) -> Response {
    let correlation_id = uuid::Uuid::new_v4().to_string();
    let path = uri.path().to_string();
    let config = state.config.read().unwrap().clone();

    // 1. route match
    let Some(entry) = config.match_route(&path) else {
        return reject(StatusCode::NOT_FOUND, "route_not_found", format!("no route for {path}"),
            &correlation_id, None, &path);
    };

    // 2. bearer token, before any body parsing
    let token: AccessToken = match bearer_token(&headers) {
        None => {
            return reject(StatusCode::UNAUTHORIZED, "missing_token",
                "Authorization: Bearer header required", &correlation_id, None, &entry.route)
        }
        Some(raw) => match verify_token(raw, &state.key, epoch_now()) {
            Ok(t) => t,
            Err(e) => {
                let code = match e {
                    TokenError::Expired => "token_expired",
                    TokenError::InvalidSignature => "invalid_signature",
                    _ => "malformed_token",
                };
                return reject(StatusCode::UNAUTHORIZED, code, e, &correlation_id, None, &entry.route);
            }
        },
    };

    // 3. namespace extraction via the permissions plugin endpoint
    let body_str = match std::str::from_utf8(&body) {
        Ok(s) => s.to_string(),
        Err(_) => {
            return reject(StatusCode::BAD_REQUEST, "extraction_failed", "body is not UTF-8",
                &correlation_id, Some(&token.subject), &entry.route)
        }
    };
    let extract_resp = state
        .http
        .post(format!("{}/authz/extract", state.permissions_url))
        .json(&serde_json::json!({"route": entry.route, "body": body_str}))
        .send()
        .await;
    let namespace = match extract_resp {
        Ok(resp) if resp.status().is_success() => match resp.json::<ExtractResponse>().await {
            Ok(e) => e.namespace,
            Err(e) => {
                return reject(StatusCode::BAD_GATEWAY, "permissions_bad_response", e,
                    &correlation_id, Some(&token.subject), &entry.route)
            }
        },
        Ok(resp) => {
            let status = resp.status();
            let detail = resp.text().await.unwrap_or_default();
            let code = if status == StatusCode::NOT_FOUND { "no_plugin_for_route" } else { "extraction_failed" };
            return reject(StatusCode::BAD_REQUEST, code, detail, &correlation_id,
                Some(&token.subject), &entry.route);
        }
        Err(e) => {
            return reject(StatusCode::BAD_GATEWAY, "permissions_unreachable", e,
                &correlation_id, Some(&token.subject), &entry.route)
        }
    };

    // 4. authorization
    let check_resp = state
        .http
        .post(format!("{}/authz/check", state.permissions_url))
        .json(&serde_json::json!({
            "groups": token.groups,
            "namespace": namespace,
            "function_uuid": entry.uuid,
        }))
        .send()
        .await;
    match check_resp {
        Ok(resp) if resp.status().is_success() => match resp.json::<CheckResponse>().await {
            Ok(c) if c.decision == "Allow" => {}
            Ok(_) => {
                return reject(StatusCode::FORBIDDEN, "forbidden",
                    format!("subject {} denied for namespace {namespace}", token.subject),
                    &correlation_id, Some(&token.subject), &entry.route)
            }
            Err(e) => {
                return reject(StatusCode::BAD_GATEWAY, "permissions_bad_response", e,
                    &correlation_id, Some(&token.subject), &entry.route)
            }
        },
        Ok(resp) => {
            return reject(StatusCode::BAD_GATEWAY, "permissions_bad_response",
                format!("status {}", resp.status()), &correlation_id, Some(&token.subject), &entry.route)
        }
        Err(e) => {
            return reject(StatusCode::BAD_GATEWAY, "permissions_unreachable", e,
                &correlation_id, Some(&token.subject), &entry.route)
        }
    }

    // 5. rewrite and forward
    let internal_path = internal_path_for(&state, entry).await.unwrap_or_else(|| entry.route.clone());
    let rewritten = rewrite_path(&path, entry, &internal_path);
    let resolver_key = format!("{}/{}", entry.namespace, entry.service_name);
    let upstream_addr = state
        .resolve_overrides
        .get(&resolver_key)
        .cloned()
        .unwrap_or_else(|| format!("127.0.0.1:{}", entry.port));
    let url = format!("http://{upstream_addr}{rewritten}");

    let mut req = state
        .http
        .request(method, &url)
        .timeout(state.upstream_timeout)
        .header(CORRELATION_HEADER, &correlation_id)
        .body(body);
    if let Some(ct) = headers.get(header::CONTENT_TYPE) {
        req = req.header(header::CONTENT_TYPE, ct);
    }
    let upstream = match req.send().await {
        Ok(r) => r,
        Err(e) if e.is_timeout() => {
            return reject(StatusCode::GATEWAY_TIMEOUT, "upstream_timeout", e,
                &correlation_id, Some(&token.subject), &entry.route)
        }
        Err(e) => {
            return reject(StatusCode::BAD_GATEWAY, "upstream_unreachable", e,
                &correlation_id, Some(&token.subject), &entry.route)
        }
    };

    // relay status, content-type, and body bytes unmodified
    let status = StatusCode::from_u16(upstream.status().as_u16())
        .unwrap_or(StatusCode::BAD_GATEWAY);
    let content_type = upstream
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .map(|s| s.to_string());
    let bytes = match upstream.bytes().await {
        Ok(b) => b,
        Err(e) => {
            return reject(StatusCode::BAD_GATEWAY, "upstream_unreachable", e,
                &correlation_id, Some(&token.subject), &entry.route)
        }
    };
    tracing::info!(
        correlation_id,
        subject = token.subject,
        route = entry.route,
        status = status.as_u16(),
        "forwarded"
    );
    let mut resp = Response::builder().status(status);
    if let Some(ct) = content_type {
        resp = resp.header(header::CONTENT_TYPE, ct);
    }
    resp = resp.header(CORRELATION_HEADER, &correlation_id);
    resp.body(axum::body::Body::from(bytes)).unwrap()
}

async fn reload(State(state): State<Arc<GatekeeperState>>) -> Response {
    let Some(path) = &state.config_path else {
        return ApiError::new(StatusCode::BAD_REQUEST, "no_config_file", "started without --config")
            .into_response();
    };
    let doc = match std::fs::read(path) {
        Ok(d) => d,
        Err(e) => {
            return ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "config_read_failed", e)
                .into_response()
        }
    };
    match load_config(&doc) {
        Ok(cfg) => {
            *state.config.write().unwrap() = Arc::new(cfg);
            StatusCode::NO_CONTENT.into_response()
        }
        Err(e) => ApiError::new(StatusCode::BAD_REQUEST, "config_invalid", e).into_response(),
    }
}

pub fn router(state: GatekeeperState) -> Router {
    Router::new()
        .route("/admin/reload", axum::routing::post(reload))
        .fallback(handle)
        .with_state(Arc::new(state))
}
