//! Declarative scenarios: a YAML file describes sites, dataset placement,
//! access policy, and a step list; the runner brings the federation up,
//! replays the steps, and reports per-step pass/fail.

use crate::federation::{Federation, HarnessError, SiteSpec};
use crate::synth::synthetic_image;
use fedfaas_core::ivoid::parse_ivoid;
use fedfaas_core::permissions::PolicyRule;
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub seed: u64,
    pub sites: Vec<SiteEntry>,
    #[serde(default)]
    pub replicas: Vec<ReplicaEntry>,
    #[serde(default)]
    pub policies: Vec<PolicyRule>,
    pub token: TokenEntry,
    pub steps: Vec<Step>,
    #[serde(default)]
    pub expect: Option<FinalExpect>,
}

#[derive(Debug, Deserialize)]
pub struct SiteEntry {
    pub site_id: String,
    pub functions: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct ReplicaEntry {
    pub ivo: String,
    pub sites: Vec<String>,
    #[serde(default = "default_dim")]
    pub width: usize,
    #[serde(default = "default_dim")]
    pub height: usize,
}

fn default_dim() -> usize {
    16
}

#[derive(Debug, Deserialize)]
pub struct TokenEntry {
    pub subject: String,
    #[serde(default)]
    pub groups: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Invoke(InvokeStep),
    AddPolicy(PolicyRule),
    RemovePolicy(PolicyRule),
}

#[derive(Debug, Deserialize)]
pub struct InvokeStep {
    pub ivo: String,
    pub sigma: f64,
    pub expect_status: u16,
    /// When set, the invocation must land on a site that holds a replica
    /// (true) or must find no eligible site at all (false).
    #[serde(default)]
    pub expect_local: Option<bool>,
}

#[derive(Debug, Deserialize)]
pub struct FinalExpect {
    pub cross_site_forwards: u64,
}

#[derive(Debug, Serialize)]
pub struct StepResult {
    pub step: usize,
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct ScenarioReport {
    pub passed: bool,
    pub steps: Vec<StepResult>,
    pub cross_site_forwards: u64,
}

pub fn parse_scenario(text: &str) -> Result<ScenarioSpec, serde_yaml::Error> {
    // steps are written as single-key maps (`- invoke: ...`), not YAML tags
    let de = serde_yaml::Deserializer::from_str(text);
    serde_yaml::with::singleton_map_recursive::deserialize(de)
}

pub fn run_scenario(spec: &ScenarioSpec) -> Result<ScenarioReport, HarnessError> {
    let site_specs: Vec<SiteSpec> = spec
        .sites
        .iter()
        .map(|s| SiteSpec { site_id: s.site_id.clone(), functions: s.functions.clone() })
        .collect();
    let mut fed = Federation::start(&site_specs, &spec.policies)?;

    for (i, entry) in spec.replicas.iter().enumerate() {
        let ivoid = parse_ivoid(&entry.ivo)
            .map_err(|e| HarnessError::Http(format!("replica {i}: {e}")))?;
        let image = synthetic_image(entry.width, entry.height, spec.seed.wrapping_add(i as u64));
        for site in &entry.sites {
            fed.seed_storage(site, &ivoid, &image)?;
        }
    }

    let token = fed.issue_token(&spec.token.subject, &spec.token.groups)?;

    let mut results = Vec::new();
    for (i, step) in spec.steps.iter().enumerate() {
        let result = match step {
            Step::Invoke(inv) => run_invoke(&mut fed, &token, i, inv)?,
            Step::AddPolicy(rule) => {
                fed.add_policy(rule)?;
                StepResult {
                    step: i,
                    description: format!("add_policy {}/{}", rule.group, rule.function_uuid),
                    passed: true,
                    detail: "rule added".into(),
                }
            }
            Step::RemovePolicy(rule) => {
                fed.remove_policy(rule)?;
                StepResult {
                    step: i,
                    description: format!("remove_policy {}/{}", rule.group, rule.function_uuid),
                    passed: true,
                    detail: "rule removed".into(),
                }
            }
        };
        results.push(result);
    }

    let cross = fed.total_cross_site_forwards();
    let mut passed = results.iter().all(|r| r.passed);
    if let Some(expect) = &spec.expect {
        if cross != expect.cross_site_forwards {
            passed = false;
            results.push(StepResult {
                step: results.len(),
                description: "final cross-site forward count".into(),
                passed: false,
                detail: format!("expected {}, got {cross}", expect.cross_site_forwards),
            });
        }
    }

    Ok(ScenarioReport { passed, steps: results, cross_site_forwards: cross })
}

fn run_invoke(
    fed: &mut Federation,
    token: &str,
    index: usize,
    inv: &InvokeStep,
) -> Result<StepResult, HarnessError> {
    let ivoid = parse_ivoid(&inv.ivo)
        .map_err(|e| HarnessError::Http(format!("step {index}: {e}")))?;
    let description = format!("invoke {} sigma={}", inv.ivo, inv.sigma);
    let outcome = fed.invoke_via_datalink(token, &ivoid, inv.sigma)?;

    let (passed, detail) = match (&outcome, inv.expect_local) {
        (None, Some(false)) => (true, "no eligible site, as expected".to_string()),
        (None, _) => (false, "no eligible site".to_string()),
        (Some(_), Some(false)) => (false, "expected no eligible site, got a link".to_string()),
        (Some(out), _) => {
            if out.status != inv.expect_status {
                (false, format!("expected status {}, got {}", inv.expect_status, out.status))
            } else if inv.expect_local == Some(true) && out.target_site.is_none() {
                (false, "target site unknown".to_string())
            } else {
                let site = out.target_site.as_deref().unwrap_or("?");
                (true, format!("status {} from {site}", out.status))
            }
        }
    };
    Ok(StepResult { step: index, description, passed, detail })
}
