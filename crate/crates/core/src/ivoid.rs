//! IVOA dataset identifier parsing.
//!
//! Accepted textual form: `ivo://<authority>[<resource_path>]?<storage_path>`.
//! The namespace is the first `/`-segment of the storage path and the name
//! is the last segment.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IvoId {
    pub authority: String,
    pub resource_path: String,
    pub storage_path: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid ivo identifier at byte {offset}: {message}")]
pub struct IvoParseError {
    pub offset: usize,
    pub message: String,
}

fn err(offset: usize, message: &str) -> IvoParseError {
    IvoParseError { offset, message: message.to_string() }
}

const SCHEME: &str = "ivo://";

pub fn parse_ivoid(text: &str) -> Result<IvoId, IvoParseError> {
    if !text.starts_with(SCHEME) {
        return Err(err(0, "expected 'ivo://' scheme"));
    }
    let rest = &text[SCHEME.len()..];
    let q = rest
        .find('?')
        .ok_or_else(|| err(text.len(), "missing '?' separating storage path"))?;
    let (location, storage_path) = (&rest[..q], &rest[q + 1..]);
    if storage_path.is_empty() {
        return Err(err(text.len(), "empty storage path"));
    }
    let (authority, resource_path) = match location.find('/') {
        Some(i) => (&location[..i], &location[i..]),
        None => (location, ""),
    };
    if authority.is_empty() {
        return Err(err(SCHEME.len(), "empty authority"));
    }
    let id = IvoId {
        authority: authority.to_string(),
        resource_path: resource_path.to_string(),
        storage_path: storage_path.to_string(),
    };
    if id.namespace().is_empty() || id.name().is_empty() {
        return Err(err(
            SCHEME.len() + q + 1,
            "storage path must have non-empty namespace and name segments",
        ));
    }
    Ok(id)
}

impl IvoId {
    /// First `/`-segment of the storage path; the unit of authorization.
    pub fn namespace(&self) -> &str {
        self.storage_path.split('/').next().unwrap_or("")
    }

    /// Last `/`-segment of the storage path.
    pub fn name(&self) -> &str {
        self.storage_path.rsplit('/').next().unwrap_or("")
    }

    /// The identifier with any resource path dropped, as rendered in
    /// DataLink input params: `ivo://<authority>?<storage_path>`.
    pub fn canonical_dataset_form(&self) -> String {
        format!("ivo://{}?{}", self.authority, self.storage_path)
    }
}

impl fmt::Display for IvoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ivo://{}{}?{}", self.authority, self.resource_path, self.storage_path)
    }
}
