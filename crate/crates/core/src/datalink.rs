//! Discovery layer: joins the replica catalogue with the site registry,
//! picks a data-proximate site, and renders the service VOTable.

use crate::catalogue::ReplicaCatalogue;
use crate::ivoid::IvoId;
use crate::sitecaps::{FunctionDescriptor, SiteRegistry};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct InputParam {
    pub name: String,
    pub datatype: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceLink {
    pub function_name: String,
    pub site_id: String,
    pub resource_identifier: String,
    pub access_url: String,
    pub input_params: Vec<InputParam>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no eligible site")]
pub struct NoEligibleSite;

/// Deterministic tie-break: lexicographically smallest site id.
pub fn select_site(candidates: &[String]) -> Result<&str, NoEligibleSite> {
    candidates
        .iter()
        .min()
        .map(|s| s.as_str())
        .ok_or(NoEligibleSite)
}

fn fmt_default(v: f64) -> String {
    format!("{v:?}")
}

fn link_for(
    ivoid: &IvoId,
    site_id: &str,
    gatekeeper_url: &str,
    descriptor: &FunctionDescriptor,
) -> ServiceLink {
    let mut input_params = vec![InputParam {
        name: "ID".to_string(),
        datatype: "char".to_string(),
        value: ivoid.canonical_dataset_form(),
    }];
    for p in &descriptor.parameters {
        input_params.push(InputParam {
            name: p.name.to_uppercase(),
            datatype: p.datatype.clone(),
            value: p.default.map(fmt_default).unwrap_or_default(),
        });
    }
    ServiceLink {
        function_name: descriptor.name.clone(),
        site_id: site_id.to_string(),
        resource_identifier: format!("ivo://srcnet/{}/{}", site_id, descriptor.name),
        access_url: format!("{}{}/", gatekeeper_url.trim_end_matches('/'), descriptor.route),
        input_params,
    }
}

/// One link per function name, at the selected site among those that both
/// hold a replica and register the function. Strict join: a function with
/// no co-located replica produces no link.
pub fn links_for(
    registry: &SiteRegistry,
    catalogue: &ReplicaCatalogue,
    ivoid: &IvoId,
) -> Vec<ServiceLink> {
    let replica_sites: BTreeSet<&str> = catalogue
        .resolve_replicas(ivoid)
        .iter()
        .map(|r| r.site_id.as_str())
        .collect();
    let mut names: Vec<&str> = Vec::new();
    for site in registry.sites() {
        for f in &site.functions {
            if !names.contains(&f.name.as_str()) {
                names.push(f.name.as_str());
            }
        }
    }
    let mut links = Vec::new();
    for name in names {
        let candidates: Vec<String> = registry
            .find_function(name, None, None)
            .iter()
            .map(|(site, _)| site.to_string())
            .filter(|site| replica_sites.contains(site.as_str()))
            .collect();
        let Ok(chosen) = select_site(&candidates) else { continue };
        let site = registry.list_site_services(chosen).expect("candidate site exists");
        let descriptor = registry
            .find_function(name, None, None)
            .into_iter()
            .find(|(s, _)| *s == chosen)
            .map(|(_, d)| d.clone())
            .expect("candidate descriptor exists");
        links.push(link_for(ivoid, chosen, &site.gatekeeper_url, &descriptor));
    }
    links
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// The per-link RESOURCE fragment; arraysize mirrors the character length
/// of each char-typed value.
pub fn render_service_resource(link: &ServiceLink) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "<RESOURCE type=\"meta\" ID=\"{}\" utype=\"adhoc:service\">\n",
        xml_escape(&link.function_name)
    ));
    out.push_str(&format!(
        "  <PARAM name=\"resourceIdentifier\" datatype=\"char\" arraysize=\"{}\" value=\"{}\" />\n",
        link.resource_identifier.chars().count(),
        xml_escape(&link.resource_identifier)
    ));
    out.push_str(&format!(
        "  <PARAM name=\"accessURL\" datatype=\"char\" arraysize=\"{}\" value=\"{}\" />\n",
        link.access_url.chars().count(),
        xml_escape(&link.access_url)
    ));
    out.push_str("  <GROUP name=\"inputParams\">\n");
    for p in &link.input_params {
        if p.name == "ID" {
            out.push_str(&format!(
                "    <PARAM name=\"ID\" datatype=\"char\" arraysize=\"{}\" ucd=\"meta.id;meta.dataset\" value=\"{}\" />\n",
                p.value.chars().count(),
                xml_escape(&p.value)
            ));
        } else {
            out.push_str(&format!(
                "    <PARAM name=\"{}\" datatype=\"{}\" value=\"{}\" />\n",
                xml_escape(&p.name),
                xml_escape(&p.datatype),
                xml_escape(&p.value)
            ));
        }
    }
    out.push_str("  </GROUP>\n");
    out.push_str("</RESOURCE>\n");
    out
}

pub fn render_votable(ivoid: &IvoId, links: &[ServiceLink]) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<VOTABLE version=\"1.3\" xmlns=\"http://www.ivoa.net/xml/VOTable/v1.3\">\n");
    out.push_str(&format!("<!-- links for {} -->\n", xml_escape(&ivoid.to_string())));
    for link in links {
        out.push_str(&render_service_resource(link));
    }
    out.push_str("</VOTABLE>\n");
    out.into_bytes()
}
