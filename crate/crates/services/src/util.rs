//! Shared pieces: structured error bodies, issuer key files, and listener
//! setup with a parseable startup line for the harness.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use fedfaas_core::identity::IssuerKey;
use serde::Serialize;
use std::net::SocketAddr;
use std::path::Path;
use tokio::net::TcpListener;

/// Every error path answers with {error_code, message}.
#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error_code: String,
    pub message: String,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, error_code: &str, message: impl ToString) -> Self {
        Self {
            status,
            body: ErrorBody { error_code: error_code.to_string(), message: message.to_string() },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

/// Key file: one line, `key_id<TAB>hex_secret`.
pub fn load_key_file(path: &Path) -> Result<IssuerKey, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("read {path:?}: {e}"))?;
    let line = text.lines().next().ok_or("empty key file")?;
    let (key_id, hex_secret) = line.split_once('\t').ok_or("expected key_id<TAB>hex_secret")?;
    let secret = hex::decode(hex_secret.trim()).map_err(|e| format!("bad hex secret: {e}"))?;
    IssuerKey::new(key_id, secret).map_err(|e| e.to_string())
}

pub fn write_key_file(path: &Path, key_id: &str, secret: &[u8]) -> std::io::Result<()> {
    std::fs::write(path, format!("{key_id}\t{}\n", hex::encode(secret)))
}

/// Bind and announce. The harness scrapes the `LISTENING` line to learn the
/// port when 0 was requested.
pub async fn bind_and_announce(port: u16, component: &str) -> std::io::Result<TcpListener> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    println!("LISTENING {component} {}", local.port());
    tracing::info!(component, port = local.port(), "listening");
    Ok(listener)
}

pub fn epoch_now() -> i64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .expect("clock before epoch")
        .as_secs() as i64
}
