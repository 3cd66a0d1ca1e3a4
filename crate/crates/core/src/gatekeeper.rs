//! Declarative gatekeeper routing: config parsing with field-precise errors
//! and longest-prefix route matching. The HTTP pipeline itself lives in the
//! service layer; this module owns the route table.

use serde_yaml::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteEntry {
    pub route: String,
    pub namespace: String,
    pub service_name: String,
    pub ingress_host: Option<String>,
    pub port: u16,
    pub uuid: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GatekeeperConfig {
    pub services: Vec<RouteEntry>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("config root must be a mapping with a 'service' list")]
    NotAMapping,
    #[error("'service' must be a sequence")]
    NotASequence,
    #[error("service entry {index}: missing field '{field}'")]
    MissingField { index: usize, field: &'static str },
    #[error("service entry {index}: field '{field}' has the wrong type")]
    BadFieldType { index: usize, field: &'static str },
    #[error("service entry {index}: invalid port {port}")]
    BadPort { index: usize, port: i64 },
    #[error("service entry {index}: route must begin with '/'")]
    BadRoute { index: usize },
    #[error("service entry {index}: duplicate route '{route}'")]
    DuplicateRoute { index: usize, route: String },
    #[error("config is not valid YAML: {0}")]
    Syntax(String),
}

fn str_field(entry: &Value, index: usize, field: &'static str) -> Result<String, ConfigError> {
    let v = entry.get(field).ok_or(ConfigError::MissingField { index, field })?;
    v.as_str()
        .map(|s| s.to_string())
        .ok_or(ConfigError::BadFieldType { index, field })
}

/// Parse a routing document of the form:
///
/// ```yaml
/// service:
///   - route: "/gaussconv"
///     namespace: "gaussconv"
///     service_name: "gaussconv-srv"
///     ingress_host: ""
///     port: 8000
///     uuid: "..."
/// ```
pub fn load_config(document: &[u8]) -> Result<GatekeeperConfig, ConfigError> {
    let root: Value = serde_yaml::from_slice(document)
        .map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let services = root
        .as_mapping()
        .ok_or(ConfigError::NotAMapping)?
        .get(Value::from("service"))
        .ok_or(ConfigError::NotAMapping)?;
    let seq = services.as_sequence().ok_or(ConfigError::NotASequence)?;
    let mut out = Vec::with_capacity(seq.len());
    for (index, entry) in seq.iter().enumerate() {
        let route = str_field(entry, index, "route")?;
        if !route.starts_with('/') {
            return Err(ConfigError::BadRoute { index });
        }
        let namespace = str_field(entry, index, "namespace")?;
        let service_name = str_field(entry, index, "service_name")?;
        // ingress_host appears in configs with an empty value; parsed, stored, unused
        let ingress_host = match entry.get("ingress_host") {
            None => None,
            Some(v) => Some(
                v.as_str()
                    .map(|s| s.to_string())
                    .ok_or(ConfigError::BadFieldType { index, field: "ingress_host" })?,
            ),
        };
        let port_val = entry
            .get("port")
            .ok_or(ConfigError::MissingField { index, field: "port" })?;
        let port_i64 = port_val
            .as_i64()
            .ok_or(ConfigError::BadFieldType { index, field: "port" })?;
        if !(1..=65535).contains(&port_i64) {
            return Err(ConfigError::BadPort { index, port: port_i64 });
        }
        let uuid = str_field(entry, index, "uuid")?;
        if out.iter().any(|e: &RouteEntry| e.route == route) {
            return Err(ConfigError::DuplicateRoute { index, route });
        }
        out.push(RouteEntry {
            route,
            namespace,
            service_name,
            ingress_host,
            port: port_i64 as u16,
            uuid,
        });
    }
    Ok(GatekeeperConfig { services: out })
}

impl GatekeeperConfig {
    /// Longest-prefix match on path segments; "/gaussconv" matches
    /// "/gaussconv" and "/gaussconv/...", not "/gaussconvx".
    pub fn match_route(&self, path: &str) -> Option<&RouteEntry> {
        self.services
            .iter()
            .filter(|e| {
                path == e.route
                    || path.starts_with(&e.route)
                        && path.as_bytes().get(e.route.len()) == Some(&b'/')
            })
            .max_by_key(|e| e.route.len())
    }
}

/// Replace the matched external route prefix with the runtime's internal path.
pub fn rewrite_path(path: &str, entry: &RouteEntry, internal_path: &str) -> String {
    let suffix = path
        .strip_prefix(&entry.route)
        .unwrap_or("")
        .trim_start_matches('/');
    let base = internal_path.trim_end_matches('/');
    if suffix.is_empty() {
        format!("{base}/")
    } else {
        format!("{base}/{suffix}")
    }
}
