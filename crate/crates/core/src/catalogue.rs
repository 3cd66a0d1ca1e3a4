//! Replica catalogue: which sites hold which datasets and where each file
//! lives under the site's storage mount. In-memory with a tab-separated
//! snapshot format, one record per line.

use crate::ivoid::{parse_ivoid, IvoId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicaRecord {
    pub ivoid: IvoId,
    pub site_id: String,
    pub relative_path: String,
}

impl ReplicaRecord {
    /// relative_path defaults to the storage path; files resolve as
    /// mount root + storage path.
    pub fn new(ivoid: IvoId, site_id: impl Into<String>) -> Self {
        let relative_path = ivoid.storage_path.clone();
        Self { ivoid, site_id: site_id.into(), relative_path }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogueError {
    #[error("replica already registered for ({ivoid}, {site_id})")]
    AlreadyExists { ivoid: String, site_id: String },
    #[error("snapshot line {line}: {message}")]
    BadSnapshot { line: usize, message: String },
}

/// Insertion-ordered replica store.
#[derive(Debug, Default, Clone)]
pub struct ReplicaCatalogue {
    records: Vec<ReplicaRecord>,
}

impl ReplicaCatalogue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_replica(&mut self, record: ReplicaRecord) -> Result<(), CatalogueError> {
        if self
            .records
            .iter()
            .any(|r| r.ivoid == record.ivoid && r.site_id == record.site_id)
        {
            return Err(CatalogueError::AlreadyExists {
                ivoid: record.ivoid.to_string(),
                site_id: record.site_id,
            });
        }
        self.records.push(record);
        Ok(())
    }

    pub fn resolve_replicas(&self, ivoid: &IvoId) -> Vec<&ReplicaRecord> {
        self.records.iter().filter(|r| &r.ivoid == ivoid).collect()
    }

    /// All records whose storage path has the given namespace and name;
    /// used by the client to resolve (namespace, name) to an identifier.
    pub fn find_by_namespace_name(&self, namespace: &str, name: &str) -> Vec<&ReplicaRecord> {
        self.records
            .iter()
            .filter(|r| r.ivoid.namespace() == namespace && r.ivoid.name() == name)
            .collect()
    }

    pub fn records(&self) -> &[ReplicaRecord] {
        &self.records
    }

    pub fn snapshot(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{}\t{}\t{}\n", r.ivoid, r.site_id, r.relative_path));
        }
        out
    }

    pub fn load_snapshot(text: &str) -> Result<Self, CatalogueError> {
        let mut cat = Self::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let (ivo, site, rel) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => {
                    return Err(CatalogueError::BadSnapshot {
                        line: i + 1,
                        message: "expected 3 tab-separated fields".into(),
                    })
                }
            };
            let ivoid = parse_ivoid(ivo).map_err(|e| CatalogueError::BadSnapshot {
                line: i + 1,
                message: e.to_string(),
            })?;
            cat.register_replica(ReplicaRecord {
                ivoid,
                site_id: site.to_string(),
                relative_path: rel.to_string(),
            })?;
        }
        Ok(cat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> IvoId {
        parse_ivoid(s).unwrap()
    }

    #[test]
    fn register_then_resolve() {
        let mut cat = ReplicaCatalogue::new();
        let ivoid = id("ivo://a?n/f.fits");
        cat.register_replica(ReplicaRecord::new(ivoid.clone(), "espsrc")).unwrap();
        let found = cat.resolve_replicas(&ivoid);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].site_id, "espsrc");
        assert_eq!(found[0].relative_path, "n/f.fits");
    }

    #[test]
    fn duplicate_rejected() {
        let mut cat = ReplicaCatalogue::new();
        let ivoid = id("ivo://a?n/f.fits");
        cat.register_replica(ReplicaRecord::new(ivoid.clone(), "espsrc")).unwrap();
        let e = cat.register_replica(ReplicaRecord::new(ivoid, "espsrc")).unwrap_err();
        assert!(matches!(e, CatalogueError::AlreadyExists { .. }));
    }

    #[test]
    fn two_sites_insertion_order() {
        let mut cat = ReplicaCatalogue::new();
        let ivoid = id("ivo://a?n/f.fits");
        cat.register_replica(ReplicaRecord::new(ivoid.clone(), "uksrc")).unwrap();
        cat.register_replica(ReplicaRecord::new(ivoid.clone(), "espsrc")).unwrap();
        let sites: Vec<_> = cat.resolve_replicas(&ivoid).iter().map(|r| r.site_id.clone()).collect();
        assert_eq!(sites, vec!["uksrc", "espsrc"]);
    }

    #[test]
    fn unknown_resolves_empty() {
        let cat = ReplicaCatalogue::new();
        assert!(cat.resolve_replicas(&id("ivo://a?n/f.fits")).is_empty());
    }

    #[test]
    fn snapshot_round_trip() {
        let mut cat = ReplicaCatalogue::new();
        cat.register_replica(ReplicaRecord::new(id("ivo://a?n/f.fits"), "espsrc")).unwrap();
        cat.register_replica(ReplicaRecord::new(id("ivo://b/r?m/g.fits"), "uksrc")).unwrap();
        let snap = cat.snapshot();
        let back = ReplicaCatalogue::load_snapshot(&snap).unwrap();
        assert_eq!(back.records(), cat.records());
        assert_eq!(back.snapshot(), snap);
    }
}
