//! Mock identity provider: signed bearer tokens with subject, group and
//! expiry claims. Stands in for a full OIDC issuer; the token is an opaque
//! credential checked at the gatekeeper perimeter.

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use hmac::{Hmac, Mac};
use serde::{Deserialize, Serialize};
use sha2::Sha256;
use thiserror::Error;

type HmacSha256 = Hmac<Sha256>;

/// Signing key held by the issuer. The same key verifies tokens.
#[derive(Debug, Clone)]
pub struct IssuerKey {
    pub key_id: String,
    secret: Vec<u8>,
}

impl IssuerKey {
    pub fn new(key_id: impl Into<String>, secret: impl Into<Vec<u8>>) -> Result<Self, TokenError> {
        let secret = secret.into();
        if secret.len() < 32 {
            return Err(TokenError::KeyTooShort(secret.len()));
        }
        Ok(Self { key_id: key_id.into(), secret })
    }

    pub fn secret(&self) -> &[u8] {
        &self.secret
    }
}

/// Decoded bearer token claims plus the MAC over their canonical serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessToken {
    pub subject: String,
    pub groups: Vec<String>,
    pub issued_at: i64,
    pub expires_at: i64,
    pub signature: Vec<u8>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
struct Claims {
    subject: String,
    groups: Vec<String>,
    issued_at: i64,
    expires_at: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TokenError {
    #[error("subject must be non-empty")]
    EmptySubject,
    #[error("ttl must be at least 1 second")]
    InvalidTtl,
    #[error("issuer key secret too short: {0} bytes, need >= 32")]
    KeyTooShort(usize),
    #[error("malformed token encoding")]
    MalformedToken,
    #[error("token signature invalid")]
    InvalidSignature,
    #[error("token expired")]
    Expired,
}

fn mac(key: &IssuerKey, payload: &[u8]) -> Vec<u8> {
    let mut m = HmacSha256::new_from_slice(key.secret()).expect("hmac accepts any key length");
    m.update(payload);
    m.finalize().into_bytes().to_vec()
}

/// Issue a token valid for `ttl_seconds` starting at `now`.
pub fn issue_token(
    subject: &str,
    groups: &[String],
    ttl_seconds: u64,
    key: &IssuerKey,
    now: i64,
) -> Result<AccessToken, TokenError> {
    if subject.is_empty() {
        return Err(TokenError::EmptySubject);
    }
    if ttl_seconds == 0 {
        return Err(TokenError::InvalidTtl);
    }
    let claims = Claims {
        subject: subject.to_string(),
        groups: groups.to_vec(),
        issued_at: now,
        expires_at: now + ttl_seconds as i64,
    };
    let payload = serde_json::to_vec(&claims).expect("claims serialize");
    let signature = mac(key, &payload);
    Ok(AccessToken {
        subject: claims.subject,
        groups: claims.groups,
        issued_at: claims.issued_at,
        expires_at: claims.expires_at,
        signature,
    })
}

/// Wire form: base64url(payload).base64url(mac).
pub fn serialize_token(token: &AccessToken) -> String {
    let claims = Claims {
        subject: token.subject.clone(),
        groups: token.groups.clone(),
        issued_at: token.issued_at,
        expires_at: token.expires_at,
    };
    let payload = serde_json::to_vec(&claims).expect("claims serialize");
    format!(
        "{}.{}",
        URL_SAFE_NO_PAD.encode(&payload),
        URL_SAFE_NO_PAD.encode(&token.signature)
    )
}

/// Verify signature and expiry. Expiry is exclusive: `now >= expires_at` fails.
pub fn verify_token(raw: &str, key: &IssuerKey, now: i64) -> Result<AccessToken, TokenError> {
    let (payload_b64, sig_b64) = raw.split_once('.').ok_or(TokenError::MalformedToken)?;
    let payload = URL_SAFE_NO_PAD
        .decode(payload_b64)
        .map_err(|_| TokenError::MalformedToken)?;
    let signature = URL_SAFE_NO_PAD
        .decode(sig_b64)
        .map_err(|_| TokenError::MalformedToken)?;
    let expected = mac(key, &payload);
    if expected != signature {
        return Err(TokenError::InvalidSignature);
    }
    let claims: Claims = serde_json::from_slice(&payload).map_err(|_| TokenError::MalformedToken)?;
    if now >= claims.expires_at {
        return Err(TokenError::Expired);
    }
    Ok(AccessToken {
        subject: claims.subject,
        groups: claims.groups,
        issued_at: claims.issued_at,
        expires_at: claims.expires_at,
        signature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key() -> IssuerKey {
        IssuerKey::new("k1", vec![7u8; 32]).unwrap()
    }

    #[test]
    fn issue_and_verify_round_trip() {
        let k = key();
        let t = issue_token("alice", &["gaussconv-users".into()], 3600, &k, 1000).unwrap();
        assert_eq!(t.expires_at, t.issued_at + 3600);
        let back = verify_token(&serialize_token(&t), &k, 1001).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn empty_subject_rejected() {
        let err = issue_token("", &[], 3600, &key(), 0).unwrap_err();
        assert_eq!(err, TokenError::EmptySubject);
    }

    #[test]
    fn zero_ttl_rejected() {
        assert_eq!(issue_token("bob", &[], 0, &key(), 0).unwrap_err(), TokenError::InvalidTtl);
    }

    #[test]
    fn short_key_rejected() {
        assert_eq!(IssuerKey::new("k", vec![0u8; 31]).unwrap_err(), TokenError::KeyTooShort(31));
    }

    #[test]
    fn expiry_boundary_is_exclusive() {
        let k = key();
        let t = issue_token("bob", &[], 1, &k, 100).unwrap();
        let raw = serialize_token(&t);
        assert!(verify_token(&raw, &k, 100).is_ok());
        assert_eq!(verify_token(&raw, &k, 101).unwrap_err(), TokenError::Expired);
        assert_eq!(verify_token(&raw, &k, 500).unwrap_err(), TokenError::Expired);
    }

    #[test]
    fn wrong_key_rejected() {
        let t = issue_token("alice", &[], 60, &key(), 0).unwrap();
        let other = IssuerKey::new("k2", vec![8u8; 32]).unwrap();
        assert_eq!(
            verify_token(&serialize_token(&t), &other, 1).unwrap_err(),
            TokenError::InvalidSignature
        );
    }

    #[test]
    fn garbage_is_malformed() {
        assert_eq!(verify_token("not a token", &key(), 0).unwrap_err(), TokenError::MalformedToken);
        assert_eq!(verify_token("a.b.c!!", &key(), 0).unwrap_err(), TokenError::MalformedToken);
    }

    // Any single-byte mutation of the serialized token must fail verification.
    #[test]
    fn single_byte_mutations_all_fail() {
        use rand::{Rng, SeedableRng};
        let k = key();
        let t = issue_token("alice", &["g1".into(), "g2".into()], 3600, &k, 1000).unwrap();
        let raw = serialize_token(&t);
        let bytes = raw.as_bytes();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 1000 {
            let idx = rng.gen_range(0..bytes.len());
            let flip: u8 = rng.gen_range(1..=255);
            let mut mutated = bytes.to_vec();
            mutated[idx] ^= flip;
            let Ok(s) = std::str::from_utf8(&mutated) else { continue };
            checked += 1;
            assert!(verify_token(s, &k, 1001).is_err(), "mutation at {idx} accepted");
        }
    }
}
