//! Federation-wide registry of sites and their function descriptors.
//! Persistence is an append-only log of JSON lines replayed at startup.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSpec {
    pub name: String,
    #[serde(rename = "type")]
    pub datatype: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDescriptor {
    pub uuid: String,
    pub name: String,
    pub version: String,
    pub route: String,
    pub internal_path: String,
    #[serde(default)]
    pub parameters: Vec<ParameterSpec>,
    #[serde(default)]
    pub hardware_tags: Vec<String>,
    #[serde(default)]
    pub storage_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub site_id: String,
    pub gatekeeper_url: String,
    pub functions: Vec<FunctionDescriptor>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown site {0}")]
    UnknownSite(String),
    #[error("site {0} already registered")]
    SiteExists(String),
    #[error("conflicting registration for uuid {uuid} at site {site_id}")]
    Conflict { site_id: String, uuid: String },
    #[error("descriptor with name {name} version {version} already exists at {site_id}")]
    NameVersionTaken { site_id: String, name: String, version: String },
    #[error("log line {line}: {message}")]
    BadLog { line: usize, message: String },
}

/// Replayable mutation log entry.
#[derive(Debug, Serialize, Deserialize)]
enum LogEntry {
    AddSite { site_id: String, gatekeeper_url: String },
    AddService { site_id: String, descriptor: FunctionDescriptor },
}

#[derive(Debug, Default, Clone)]
pub struct SiteRegistry {
    sites: Vec<SiteRecord>,
}

impl SiteRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_site(
        &mut self,
        site_id: &str,
        gatekeeper_url: &str,
    ) -> Result<(), RegistryError> {
        if self.sites.iter().any(|s| s.site_id == site_id) {
            return Err(RegistryError::SiteExists(site_id.to_string()));
        }
        self.sites.push(SiteRecord {
            site_id: site_id.to_string(),
            gatekeeper_url: gatekeeper_url.to_string(),
            functions: Vec::new(),
        });
        Ok(())
    }

    fn site_mut(&mut self, site_id: &str) -> Result<&mut SiteRecord, RegistryError> {
        self.sites
            .iter_mut()
            .find(|s| s.site_id == site_id)
            .ok_or_else(|| RegistryError::UnknownSite(site_id.to_string()))
    }

    /// Idempotent for identical content; conflicting content for the same
    /// uuid or (name, version) pair is rejected.
    pub fn register_service(
        &mut self,
        site_id: &str,
        descriptor: FunctionDescriptor,
    ) -> Result<(), RegistryError> {
        let site = self.site_mut(site_id)?;
        if let Some(existing) = site.functions.iter().find(|f| f.uuid == descriptor.uuid) {
            if *existing == descriptor {
                return Ok(());
            }
            return Err(RegistryError::Conflict {
                site_id: site_id.to_string(),
                uuid: descriptor.uuid,
            });
        }
        if site
            .functions
            .iter()
            .any(|f| f.name == descriptor.name && f.version == descriptor.version)
        {
            return Err(RegistryError::NameVersionTaken {
                site_id: site_id.to_string(),
                name: descriptor.name,
                version: descriptor.version,
            });
        }
        site.functions.push(descriptor);
        Ok(())
    }

    pub fn list_site_services(&self, site_id: &str) -> Result<&SiteRecord, RegistryError> {
        self.sites
            .iter()
            .find(|s| s.site_id == site_id)
            .ok_or_else(|| RegistryError::UnknownSite(site_id.to_string()))
    }

    pub fn sites(&self) -> &[SiteRecord] {
        &self.sites
    }

    /// Matching (site, descriptor) pairs, sorted by site_id ascending then
    /// version descending (semantic-version order).
    pub fn find_function(
        &self,
        name: &str,
        version_req: Option<&str>,
        hardware_tags: Option<&[String]>,
    ) -> Vec<(&str, &FunctionDescriptor)> {
        let mut out: Vec<(&str, &FunctionDescriptor)> = Vec::new();
        for site in &self.sites {
            for f in &site.functions {
                if f.name != name {
                    continue;
                }
                if let Some(v) = version_req {
                    if f.version != v {
                        continue;
                    }
                }
                if let Some(tags) = hardware_tags {
                    if !tags.iter().all(|t| f.hardware_tags.contains(t)) {
                        continue;
                    }
                }
                out.push((site.site_id.as_str(), f));
            }
        }
        out.sort_by(|a, b| {
            a.0.cmp(b.0)
                .then_with(|| semver_key(&b.1.version).cmp(&semver_key(&a.1.version)))
        });
        out
    }

    pub fn log(&self) -> String {
        let mut out = String::new();
        for site in &self.sites {
            let e = LogEntry::AddSite {
                site_id: site.site_id.clone(),
                gatekeeper_url: site.gatekeeper_url.clone(),
            };
            out.push_str(&serde_json::to_string(&e).unwrap());
            out.push('\n');
            for f in &site.functions {
                let e = LogEntry::AddService { site_id: site.site_id.clone(), descriptor: f.clone() };
                out.push_str(&serde_json::to_string(&e).unwrap());
                out.push('\n');
            }
        }
        out
    }

    pub fn replay(text: &str) -> Result<Self, RegistryError> {
        let mut reg = Self::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let entry: LogEntry = serde_json::from_str(line)
                .map_err(|e| RegistryError::BadLog { line: i + 1, message: e.to_string() })?;
            match entry {
                LogEntry::AddSite { site_id, gatekeeper_url } => {
                    reg.register_site(&site_id, &gatekeeper_url)?
                }
                LogEntry::AddService { site_id, descriptor } => {
                    reg.register_service(&site_id, descriptor)?
                }
            }
        }
        Ok(reg)
    }
}

fn semver_key(version: &str) -> (u64, u64, u64) {
    let mut parts = version.split('.').map(|p| p.parse::<u64>().unwrap_or(0));
    (
        parts.next().unwrap_or(0),
        parts.next().unwrap_or(0),
        parts.next().unwrap_or(0),
    )
}

pub fn gaussconv_descriptor(uuid: &str) -> FunctionDescriptor {
    FunctionDescriptor {
        uuid: uuid.to_string(),
        name: "gaussconv".to_string(),
        version: "1.0.0".to_string(),
        route: "/gaussconv".to_string(),
        internal_path: "/gaussconv_fitsimg/".to_string(),
        parameters: vec![ParameterSpec {
            name: "sigma".to_string(),
            datatype: "double".to_string(),
            min: Some(1.0),
            max: Some(10.0),
            default: Some(1.0),
        }],
        hardware_tags: vec![],
        storage_id: String::new(),
    }
}
