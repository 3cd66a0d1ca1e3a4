//! Policy store and per-function extraction plugins: "may this user run
//! this function on this namespace?". Default-deny with Deny-overrides.

use crate::ivoid::{parse_ivoid, IvoId};
use std::collections::BTreeMap;
use thiserror::Error;

pub const WILDCARD: &str = "*";

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Effect {
    Allow,
    Deny,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PolicyRule {
    pub group: String,
    pub namespace: String,
    pub function_uuid: String,
    pub effect: Effect,
}

impl PolicyRule {
    fn matches(&self, groups: &[String], namespace: &str, function_uuid: &str) -> bool {
        let group_ok =
            self.group == WILDCARD || groups.iter().any(|g| g == &self.group);
        let ns_ok = self.namespace == WILDCARD || self.namespace == namespace;
        let fn_ok = self.function_uuid == WILDCARD || self.function_uuid == function_uuid;
        group_ok && ns_ok && fn_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub effect: Effect,
    pub matched_rule: Option<PolicyRule>,
}

#[derive(Debug, Error, PartialEq)]
pub enum PermissionsError {
    #[error("plugin already registered for route {0}")]
    AlreadyExists(String),
    #[error("no extraction plugin for route {0}")]
    NoPluginForRoute(String),
    #[error("extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("rules file line {line}: {message}")]
    BadRulesFile { line: usize, message: String },
}

#[derive(Debug, Default, Clone)]
pub struct PolicyStore {
    rules: Vec<PolicyRule>,
}

impl PolicyStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_rule(&mut self, rule: PolicyRule) {
        self.rules.push(rule);
    }

    /// Remove all rules equal to `rule`; returns how many were removed.
    pub fn remove_rule(&mut self, rule: &PolicyRule) -> usize {
        let before = self.rules.len();
        self.rules.retain(|r| r != rule);
        before - self.rules.len()
    }

    pub fn rules(&self) -> &[PolicyRule] {
        &self.rules
    }

    /// Deny-overrides over the rule set: any matching Deny wins, otherwise any
    /// matching Allow wins, otherwise default Deny. Order-independent.
    pub fn check_authorization(
        &self,
        groups: &[String],
        namespace: &str,
        function_uuid: &str,
    ) -> Decision {
        let mut allow: Option<&PolicyRule> = None;
        for rule in &self.rules {
            if !rule.matches(groups, namespace, function_uuid) {
                continue;
            }
            match rule.effect {
                Effect::Deny => {
                    return Decision { effect: Effect::Deny, matched_rule: Some(rule.clone()) }
                }
                Effect::Allow => allow = allow.or(Some(rule)),
            }
        }
        match allow {
            Some(rule) => Decision { effect: Effect::Allow, matched_rule: Some(rule.clone()) },
            None => Decision { effect: Effect::Deny, matched_rule: None },
        }
    }

    /// One rule per line: group, namespace, function_uuid, effect (tab-separated).
    pub fn load_rules(text: &str) -> Result<Self, PermissionsError> {
        let mut store = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(PermissionsError::BadRulesFile {
                    line: i + 1,
                    message: format!("expected 4 tab-separated fields, got {}", fields.len()),
                });
            }
            let effect = match fields[3] {
                "Allow" | "allow" => Effect::Allow,
                "Deny" | "deny" => Effect::Deny,
                other => {
                    return Err(PermissionsError::BadRulesFile {
                        line: i + 1,
                        message: format!("unknown effect '{other}'"),
                    })
                }
            };
            store.add_rule(PolicyRule {
                group: fields[0].to_string(),
                namespace: fields[1].to_string(),
                function_uuid: fields[2].to_string(),
                effect,
            });
        }
        Ok(store)
    }
}

#[derive(Debug)]
pub struct Extraction {
    pub namespace: String,
    pub ivoid: IvoId,
}

type Extractor = Box<dyn Fn(&[u8]) -> Result<Extraction, String> + Send + Sync>;

/// Compiled-in extraction plugins keyed by function route.
#[derive(Default)]
pub struct PluginRegistry {
    plugins: BTreeMap<String, Extractor>,
}

impl PluginRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_plugin(
        &mut self,
        route: &str,
        extractor: Extractor,
    ) -> Result<(), PermissionsError> {
        if self.plugins.contains_key(route) {
            return Err(PermissionsError::AlreadyExists(route.to_string()));
        }
        self.plugins.insert(route.to_string(), extractor);
        Ok(())
    }

    pub fn extract_namespace(
        &self,
        route: &str,
        body: &[u8],
    ) -> Result<Extraction, PermissionsError> {
        let plugin = self
            .plugins
            .get(route)
            .ok_or_else(|| PermissionsError::NoPluginForRoute(route.to_string()))?;
        plugin(body).map_err(PermissionsError::ExtractionFailed)
    }

    /// Registry with the gaussconv plugin installed: parses the body's `ivo`
    /// field and takes the namespace from the identifier.
    pub fn with_gaussconv() -> Self {
        let mut reg = Self::new();
        reg.register_plugin("/gaussconv", Box::new(gaussconv_extractor)).unwrap();
        reg
    }
}

/// Replace bare NaN/Infinity tokens outside strings with quoted markers so
/// they survive strict JSON parsing and fail validation instead of parsing.
pub fn quote_nonfinite(body: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(body.len());
    let mut in_string = false;
    let mut escaped = false;
    let mut i = 0;
    while i < body.len() {
        let b = body[i];
        if in_string {
            out.push(b);
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
            i += 1;
            continue;
        }
        if b == b'"' {
            in_string = true;
            out.push(b);
            i += 1;
            continue;
        }
        let rest = &body[i..];
        let token = [("NaN", "\"NaN\""), ("Infinity", "\"Infinity\""), ("-Infinity", "\"-Infinity\"")]
            .iter()
            .find(|(t, _)| rest.starts_with(t.as_bytes()));
        if let Some((t, quoted)) = token {
            out.extend_from_slice(quoted.as_bytes());
            i += t.len();
        } else {
            out.push(b);
            i += 1;
        }
    }
    out
}

fn gaussconv_extractor(body: &[u8]) -> Result<Extraction, String> {
    let doc: serde_json::Value = serde_json::from_slice(&quote_nonfinite(body))
        .map_err(|e| format!("body is not valid JSON: {e}"))?;
    let ivo = doc
        .get("ivo")
        .and_then(|v| v.as_str())
        .ok_or_else(|| "missing 'ivo' field".to_string())?;
    let ivoid = parse_ivoid(ivo).map_err(|e| e.to_string())?;
    Ok(Extraction { namespace: ivoid.namespace().to_string(), ivoid })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(g: &str, ns: &str, f: &str, effect: Effect) -> PolicyRule {
        PolicyRule {
            group: g.into(),
            namespace: ns.into(),
            function_uuid: f.into(),
            effect,
        }
    }

    #[test]
    fn direct_match_allows() {
        let mut store = PolicyStore::new();
        store.add_rule(rule("gaussconv-users", "testing", "uuid-1", Effect::Allow));
        let d = store.check_authorization(&["gaussconv-users".into()], "testing", "uuid-1");
        assert_eq!(d.effect, Effect::Allow);
        assert!(d.matched_rule.is_some());
    }

    #[test]
    fn empty_store_denies() {
        let store = PolicyStore::new();
        let d = store.check_authorization(&["any".into()], "testing", "uuid-1");
        assert_eq!(d.effect, Effect::Deny);
        assert_eq!(d.matched_rule, None);
    }

    #[test]
    fn deny_beats_allow_regardless_of_order() {
        let a = rule("*", "testing", "*", Effect::Allow);
        let d = rule("*", "testing", "uuid-1", Effect::Deny);
        for rules in [[a.clone(), d.clone()], [d.clone(), a.clone()]] {
            let mut store = PolicyStore::new();
            for r in rules {
                store.add_rule(r);
            }
            assert_eq!(
                store.check_authorization(&["g".into()], "testing", "uuid-1").effect,
                Effect::Deny
            );
            assert_eq!(
                store.check_authorization(&["g".into()], "testing", "uuid-2").effect,
                Effect::Allow
            );
        }
    }

    // decision depends only on the rule set: brute force over permutations
    #[test]
    fn rule_order_independence() {
        let rules = vec![
            rule("*", "testing", "*", Effect::Allow),
            rule("ops", "*", "*", Effect::Allow),
            rule("*", "testing", "uuid-1", Effect::Deny),
            rule("guests", "archive", "uuid-2", Effect::Allow),
            rule("banned", "*", "*", Effect::Deny),
        ];
        let queries: Vec<(Vec<String>, &str, &str)> = vec![
            (vec!["ops".into()], "testing", "uuid-1"),
            (vec!["ops".into()], "other", "uuid-9"),
            (vec!["guests".into()], "archive", "uuid-2"),
            (vec!["banned".into(), "ops".into()], "other", "uuid-2"),
            (vec!["nobody".into()], "nowhere", "uuid-0"),
        ];
        let baseline: Vec<Effect> = {
            let mut s = PolicyStore::new();
            rules.iter().for_each(|r| s.add_rule(r.clone()));
            queries.iter().map(|(g, n, f)| s.check_authorization(g, n, f).effect).collect()
        };
        permute(&rules, &mut |perm| {
            let mut s = PolicyStore::new();
            perm.iter().for_each(|r| s.add_rule((*r).clone()));
            for (q, expected) in queries.iter().zip(&baseline) {
                assert_eq!(s.check_authorization(&q.0, q.1, q.2).effect, *expected);
            }
        });
    }

    fn permute<'a, T>(items: &'a [T], f: &mut impl FnMut(&[&'a T])) {
        fn go<'a, T>(rest: Vec<&'a T>, acc: &mut Vec<&'a T>, f: &mut impl FnMut(&[&'a T])) {
            if rest.is_empty() {
                f(acc);
                return;
            }
            for i in 0..rest.len() {
                let mut next = rest.clone();
                let item = next.remove(i);
                acc.push(item);
                go(next, acc, f);
                acc.pop();
            }
        }
        go(items.iter().collect(), &mut Vec::new(), f);
    }

    // adding a matching Deny never flips a Deny decision to Allow
    #[test]
    fn deny_dominance() {
        let mut store = PolicyStore::new();
        store.add_rule(rule("g", "ns", "f", Effect::Allow));
        assert_eq!(store.check_authorization(&["x".into()], "ns", "f").effect, Effect::Deny);
        store.add_rule(rule("*", "*", "*", Effect::Deny));
        assert_eq!(store.check_authorization(&["x".into()], "ns", "f").effect, Effect::Deny);
        assert_eq!(store.check_authorization(&["g".into()], "ns", "f").effect, Effect::Deny);
    }

    #[test]
    fn rules_file_round_trip() {
        let text = "gaussconv-users\ttesting\tuuid-1\tAllow\n*\ttesting\tuuid-2\tDeny\n";
        let store = PolicyStore::load_rules(text).unwrap();
        assert_eq!(store.rules().len(), 2);
        assert_eq!(store.rules()[0].group, "gaussconv-users");
        assert_eq!(store.rules()[1].effect, Effect::Deny);
    }

    #[test]
    fn rules_file_errors_name_the_line() {
        let e = PolicyStore::load_rules("a\tb\tc\n").unwrap_err();
        assert_eq!(e, PermissionsError::BadRulesFile { line: 1, message: "expected 4 tab-separated fields, got 3".into() });
        let e = PolicyStore::load_rules("a\tb\tc\tMaybe\n").unwrap_err();
        assert!(matches!(e, PermissionsError::BadRulesFile { line: 1, .. }));
    }

    #[test]
    fn gaussconv_plugin_extracts_namespace() {
        let reg = PluginRegistry::with_gaussconv();
        let body = br#"{"ivo":"ivo://espsrc.iaa.csic.es/datasets/fits?testing/5b/f5/PTF10tce.fits","sigma":2.5}"#;
        let ex = reg.extract_namespace("/gaussconv", body).unwrap();
        assert_eq!(ex.namespace, "testing");
        assert_eq!(ex.ivoid.name(), "PTF10tce.fits");
    }

    #[test]
    fn plugin_errors() {
        let mut reg = PluginRegistry::with_gaussconv();
        assert_eq!(
            reg.register_plugin("/gaussconv", Box::new(gaussconv_extractor)).unwrap_err(),
            PermissionsError::AlreadyExists("/gaussconv".into())
        );
        assert!(matches!(
            reg.extract_namespace("/unknown", b"{}").unwrap_err(),
            PermissionsError::NoPluginForRoute(_)
        ));
        assert!(matches!(
            reg.extract_namespace("/gaussconv", br#"{"sigma":2.5}"#).unwrap_err(),
            PermissionsError::ExtractionFailed(_)
        ));
    }
}
