//! Multi-site test bed: global services plus per-site gatekeeper, runtime,
//! and storage directory, all spawned as loopback processes. Invocations go
//! through DataLink discovery and the gatekeeper, never to a runtime port
//! directly, and a transfer meter records data locality.

use crate::process::{spawn_service, ChildGuard, SpawnError};
use fedfaas_core::fits::{write_fits, FitsImage};
use fedfaas_core::ivoid::IvoId;
use fedfaas_core::permissions::PolicyRule;
use rand::RngCore;
use std::collections::HashMap;
use std::path::PathBuf;
use tempfile::TempDir;
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct SiteSpec {
    pub site_id: String,
    /// Function names to deploy; "gaussconv" gets a live runtime, anything
    /// else (e.g. "gaussconv-gpu") is registered as a descriptor only.
    pub functions: Vec<String>,
}

pub struct SiteHandle {
    pub site_id: String,
    pub storage_dir: PathBuf,
    pub gatekeeper_url: String,
    pub gatekeeper_port: u16,
    pub runtime_port: Option<u16>,
}

#[derive(Debug, Default, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SiteMeter {
    pub bytes_served_locally: u64,
    pub requests_forwarded_cross_site: u64,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Spawn(#[from] SpawnError),
    #[error("{0}")]
    Http(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("replica already seeded: {0}")]
    AlreadyExists(String),
    #[error("fits: {0}")]
    Fits(#[from] fedfaas_core::fits::FitsError),
}

fn http_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Http(e.to_string())
}

pub struct Federation {
    pub iam_url: String,
    pub catalogue_url: String,
    pub permissions_url: String,
    pub sitecaps_url: String,
    pub datalink_url: String,
    sites: Vec<SiteHandle>,
    meters: HashMap<String, SiteMeter>,
    http: reqwest::blocking::Client,
    root: TempDir,
    // children die on drop
    _children: Vec<ChildGuard>,
}

pub struct InvokeOutcome {
    pub status: u16,
    pub body: Vec<u8>,
    pub content_type: String,
    /// Site chosen by DataLink, when a link existed.
    pub target_site: Option<String>,
}

impl Federation {
    pub fn start(site_specs: &[SiteSpec], policies: &[PolicyRule]) -> Result<Self, HarnessError> {
        let root = TempDir::new()?;
        let mut children = Vec::new();
        let http = reqwest::blocking::Client::new();

        let key_file = root.path().join("iam.key");
        let mut secret = [0u8; 32];
        rand::thread_rng().fill_bytes(&mut secret);
        std::fs::write(&key_file, format!("harness\t{}\n", hex::encode(secret)))?;

        let iam = spawn_service(
            "iam",
            &["iam".into(), "--port".into(), "0".into(), "--key-file".into(), key_file.display().to_string()],
        )?;
        let iam_url = format!("http://127.0.0.1:{}", iam.port);
        children.push(iam);

        let catalogue = spawn_service("catalogue", &["catalogue".into(), "--port".into(), "0".into()])?;
        let catalogue_url = format!("http://127.0.0.1:{}", catalogue.port);
        children.push(catalogue);

        let rules_file = root.path().join("rules.tsv");
        let mut rules_text = String::new();
        for r in policies {
            rules_text.push_str(&format!(
                "{}\t{}\t{}\t{:?}\n",
                r.group, r.namespace, r.function_uuid, r.effect
            ));
        }
        std::fs::write(&rules_file, rules_text)?;
        let permissions = spawn_service(
            "permissions",
            &["permissions".into(), "--port".into(), "0".into(), "--rules".into(), rules_file.display().to_string()],
        )?;
        let permissions_url = format!("http://127.0.0.1:{}", permissions.port);
        children.push(permissions);

        let sitecaps = spawn_service("sitecaps", &["sitecaps".into(), "--port".into(), "0".into()])?;
        let sitecaps_url = format!("http://127.0.0.1:{}", sitecaps.port);
        children.push(sitecaps);

        let datalink = spawn_service(
            "datalink",
            &[
                "datalink".into(),
                "--port".into(),
                "0".into(),
                "--catalogue-url".into(),
                catalogue_url.clone(),
                "--sitecaps-url".into(),
                sitecaps_url.clone(),
            ],
        )?;
        let datalink_url = format!("http://127.0.0.1:{}", datalink.port);
        children.push(datalink);

        let mut sites = Vec::new();
        let mut meters = HashMap::new();
        for spec in site_specs {
            let storage_dir = root.path().join("sites").join(&spec.site_id).join("storage");
            std::fs::create_dir_all(&storage_dir)?;

            let runtime_port = if spec.functions.iter().any(|f| f == "gaussconv") {
                let runtime = spawn_service(
                    "runtime",
                    &[
                        "runtime".into(),
                        "--port".into(),
                        "0".into(),
                        "--abs-path".into(),
                        storage_dir.display().to_string(),
                        "--site-id".into(),
                        spec.site_id.clone(),
                    ],
                )?;
                let port = runtime.port;
                children.push(runtime);
                Some(port)
            } else {
                None
            };

            // one gatekeeper route per deployed function
            let mut config = String::from("service:\n");
            for f in &spec.functions {
                let port = if f == "gaussconv" { runtime_port.unwrap_or(1) } else { 1 };
                config.push_str(&format!(
                    "  - route: \"/{f}\"\n    namespace: \"gaussconv\"\n    service_name: \"{f}-srv\"\n    ingress_host: \"\"\n    port: {port}\n    uuid: \"{}\"\n",
                    function_uuid(f, &spec.site_id)
                ));
            }
            let config_file = root.path().join("sites").join(&spec.site_id).join("gatekeeper.yaml");
            std::fs::write(&config_file, config)?;

            let mut gk_args = vec![
                "gatekeeper".to_string(),
                "--port".into(),
                "0".into(),
                "--config".into(),
                config_file.display().to_string(),
                "--permissions-url".into(),
                permissions_url.clone(),
                "--key-file".into(),
                key_file.display().to_string(),
                "--sitecaps-url".into(),
                sitecaps_url.clone(),
            ];
            if let Some(port) = runtime_port {
                gk_args.push("--resolve".into());
                gk_args.push(format!("gaussconv/gaussconv-srv=127.0.0.1:{port}"));
            }
            let gatekeeper = spawn_service("gatekeeper", &gk_args)?;
            let gatekeeper_url = format!("http://127.0.0.1:{}", gatekeeper.port);
            let gatekeeper_port = gatekeeper.port;
            children.push(gatekeeper);

            // register the site and its descriptors
            http.post(format!("{sitecaps_url}/sites"))
                .json(&serde_json::json!({"site_id": spec.site_id, "gatekeeper_url": gatekeeper_url}))
                .send()
                .and_then(|r| r.error_for_status())
                .map_err(http_err)?;
            for f in &spec.functions {
                let mut descriptor =
                    fedfaas_core::sitecaps::gaussconv_descriptor(&function_uuid(f, &spec.site_id));
                if f != "gaussconv" {
                    descriptor.name = f.clone();
                    descriptor.route = format!("/{f}");
                    if f.ends_with("-gpu") {
                        descriptor.hardware_tags = vec!["gpu".into()];
                    }
                }
                http.post(format!("{sitecaps_url}/sites/{}/services", spec.site_id))
                    .json(&descriptor)
                    .send()
                    .and_then(|r| r.error_for_status())
                    .map_err(http_err)?;
            }

            meters.insert(spec.site_id.clone(), SiteMeter::default());
            sites.push(SiteHandle {
                site_id: spec.site_id.clone(),
                storage_dir,
                gatekeeper_url,
                gatekeeper_port,
                runtime_port,
            });
        }

        Ok(Self {
            iam_url,
            catalogue_url,
            permissions_url,
            sitecaps_url,
            datalink_url,
            sites,
            meters,
            http,
            root,
            _children: children,
        })
    }

    pub fn sites(&self) -> &[SiteHandle] {
        &self.sites
    }

    pub fn site(&self, site_id: &str) -> Option<&SiteHandle> {
        self.sites.iter().find(|s| s.site_id == site_id)
    }

    pub fn root_path(&self) -> &std::path::Path {
        self.root.path()
    }

    pub fn meter(&self, site_id: &str) -> SiteMeter {
        self.meters.get(site_id).cloned().unwrap_or_default()
    }

    pub fn total_cross_site_forwards(&self) -> u64 {
        self.meters.values().map(|m| m.requests_forwarded_cross_site).sum()
    }

    pub fn issue_token(&self, subject: &str, groups: &[String]) -> Result<String, HarnessError> {
        let resp: serde_json::Value = self
            .http
            .post(format!("{}/token", self.iam_url))
            .json(&serde_json::json!({"subject": subject, "groups": groups, "ttl_seconds": 3600}))
            .send()
            .and_then(|r| r.error_for_status())
            .map_err(http_err)?
            .json()
            .map_err(http_err)?;
        resp["token"]
            .as_str()
            .map(|s| s.to_string())
            .ok_or_else(|| HarnessError::Http("no token in IAM response".into()))
    }

    pub fn add_policy(&self, rule: &PolicyRule) -> Result<(), HarnessError> {
        self.change_policy("add", rule)
    }

    pub fn remove_policy(&self, rule: &PolicyRule) -> Result<(), HarnessError> {
        self.change_policy("remove", rule)
    }

    fn change_policy(&self, action: &str, rule: &PolicyRule) -> Result<(), HarnessError> {
        self.http
            .post(format!("{}/authz/rules", self.permissions_url))
            .json(&serde_json::json!({"action": action, "rule": rule}))
            .send()
            .and_then(|r| r.error_for_status())
            .map_err(http_err)?;
        Ok(())
    }

    /// Write the file under the site's storage mount and register the replica.
    pub fn seed_storage(
        &mut self,
        site_id: &str,
        ivoid: &IvoId,
        image: &FitsImage,
    ) -> Result<(), HarnessError> {
        let site = self
            .site(site_id)
            .ok_or_else(|| HarnessError::Http(format!("unknown site {site_id}")))?;
        let path = site.storage_dir.join(&ivoid.storage_path);
        std::fs::create_dir_all(path.parent().expect("storage path has a parent"))?;
        std::fs::write(&path, write_fits(image)?)?;
        let resp = self
            .http
            .post(format!("{}/replicas", self.catalogue_url))
            .json(&serde_json::json!({"ivo": ivoid.to_string(), "site_id": site_id}))
            .send()
            .map_err(http_err)?;
        if resp.status() == 409 {
            return Err(HarnessError::AlreadyExists(ivoid.to_string()));
        }
        resp.error_for_status().map_err(http_err)?;
        Ok(())
    }

    pub fn replica_sites(&self, ivoid: &IvoId) -> Result<Vec<String>, HarnessError> {
        let records: Vec<serde_json::Value> = self
            .http
            .get(format!("{}/replicas", self.catalogue_url))
            .query(&[("ivo", &ivoid.to_string())])
            .send()
            .and_then(|r| r.error_for_status())
            .map_err(http_err)?
            .json()
            .map_err(http_err)?;
        Ok(records
            .iter()
            .filter_map(|r| r["site_id"].as_str().map(|s| s.to_string()))
            .collect())
    }

    pub fn datalink_votable(&self, ivoid: &IvoId) -> Result<String, HarnessError> {
        self.http
            .get(format!("{}/links", self.datalink_url))
            .query(&[("ID", &ivoid.to_string())])
            .send()
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.text())
            .map_err(http_err)
    }

    fn gaussconv_access_url(&self, votable: &str) -> Option<String> {
        let start = votable.find("<RESOURCE type=\"meta\" ID=\"gaussconv\"")?;
        let block = &votable[start..votable[start..].find("</RESOURCE>")? + start];
        let needle = "name=\"accessURL\" datatype=\"char\" arraysize=\"";
        let p = block.find(needle)?;
        let after = &block[p..];
        let v = after.find("value=\"")? + "value=\"".len();
        let end = after[v..].find('"')? + v;
        Some(after[v..end].to_string())
    }

    fn site_for_url(&self, url: &str) -> Option<&SiteHandle> {
        self.sites.iter().find(|s| url.starts_with(&s.gatekeeper_url))
    }

    /// Discover the invocation URL via DataLink and POST through the
    /// gatekeeper; updates the transfer meter. `Ok(None)` means no eligible
    /// site advertised the function for this dataset.
    pub fn invoke_via_datalink(
        &mut self,
        token: &str,
        ivoid: &IvoId,
        sigma: f64,
    ) -> Result<Option<InvokeOutcome>, HarnessError> {
        let votable = self.datalink_votable(ivoid)?;
        let Some(access_url) = self.gaussconv_access_url(&votable) else {
            return Ok(None);
        };
        let target_site = self.site_for_url(&access_url).map(|s| s.site_id.to_string());
        let outcome = self.invoke_url(&access_url, token, ivoid, sigma, target_site.clone())?;

        if let Some(site) = &target_site {
            let replicas = self.replica_sites(ivoid)?;
            let meter = self.meters.entry(site.clone()).or_default();
            if replicas.contains(site) {
                meter.bytes_served_locally += outcome.body.len() as u64;
            } else {
                meter.requests_forwarded_cross_site += 1;
            }
        }
        Ok(Some(outcome))
    }

    /// POST straight to one site's gatekeeper (still through the perimeter).
    pub fn invoke_at_site(
        &self,
        site_id: &str,
        token: &str,
        ivoid: &IvoId,
        sigma: f64,
    ) -> Result<InvokeOutcome, HarnessError> {
        let site = self
            .site(site_id)
            .ok_or_else(|| HarnessError::Http(format!("unknown site {site_id}")))?;
        let url = format!("{}/gaussconv/", site.gatekeeper_url);
        self.invoke_url(&url, token, ivoid, sigma, Some(site_id.to_string()))
    }

    fn invoke_url(
        &self,
        url: &str,
        token: &str,
        ivoid: &IvoId,
        sigma: f64,
        target_site: Option<String>,
    ) -> Result<InvokeOutcome, HarnessError> {
        let resp = self
            .http
            .post(url)
            .bearer_auth(token)
            .json(&serde_json::json!({"ivo": ivoid.to_string(), "sigma": sigma}))
            .send()
            .map_err(http_err)?;
        let status = resp.status().as_u16();
        let content_type = resp
            .headers()
            .get("content-type")
            .and_then(|v| v.to_str().ok())
            .unwrap_or_default()
            .to_string();
        let body = resp.bytes().map_err(http_err)?.to_vec();
        Ok(InvokeOutcome { status, body, content_type, target_site })
    }
}

pub fn function_uuid(function: &str, site_id: &str) -> String {
    format!("uuid-{function}-{site_id}")
}
