use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{canonical_bytes, keys, strict_hex, AuditError, DeviceKey, Result};

pub const COMPONENT_NORMAL_WORLD_OS: &str = "normal-world-os";
pub const COMPONENT_MIDDLEWARE: &str = "middleware";
pub const COMPONENT_SECURITY_LAYER: &str = "security-layer";
pub const COMPONENT_SANITIZER_FE: &str = "sanitizer-fe";
pub const COMPONENT_APP_LAUNCHER: &str = "app-launcher";
pub const COMPONENT_LAUNCHED_APP: &str = "launched-app";

/// Every attestation report must measure exactly these components.
pub const REQUIRED_COMPONENTS: [&str; 6] = [
    COMPONENT_NORMAL_WORLD_OS,
    COMPONENT_MIDDLEWARE,
    COMPONENT_SECURITY_LAYER,
    COMPONENT_SANITIZER_FE,
    COMPONENT_APP_LAUNCHER,
    COMPONENT_LAUNCHED_APP,
];

/// An application's declared topic lists, bound to its identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub app_id: String,
    pub publishes: Vec<String>,
    pub subscribes: Vec<String>,
    pub cert_fingerprint: String,
}

impl Manifest {
    pub fn validate(&self) -> Result<()> {
        if self.app_id.is_empty() {
            return Err(AuditError::Malformed("empty app_id".into()));
        }
        for list in [&self.publishes, &self.subscribes] {
            let mut seen = std::collections::BTreeSet::new();
            for topic in list {
                if !seen.insert(topic) {
                    return Err(AuditError::Malformed(format!(
                        "duplicate topic '{topic}' in manifest of '{}'",
                        self.app_id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Measurements of the platform and the launched application, component
/// name to hash hex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttestationReport {
    pub components: BTreeMap<String, String>,
}

impl AttestationReport {
    pub fn validate(&self) -> Result<()> {
        for required in REQUIRED_COMPONENTS {
            let hash = self.components.get(required).ok_or_else(|| {
                AuditError::Malformed(format!("attestation misses component '{required}'"))
            })?;
            strict_hex("measurement", hash)?;
        }
        Ok(())
    }

    pub fn measurement(&self, component: &str) -> Option<&str> {
        self.components.get(component).map(String::as_str)
    }
}

/// One launch event: when, what manifest, which measurements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditEntry {
    pub timestamp_ms: u64,
    pub manifest: Manifest,
    pub attestation: AttestationReport,
}

/// A signed trail: the device public key, ordered entries, and a
/// signature over the canonical serialization of both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditTrail {
    pub device_pubkey: String,
    pub entries: Vec<AuditEntry>,
    pub signature: String,
}

#[derive(Serialize)]
struct TrailBody<'a> {
    device_pubkey: &'a str,
    entries: &'a [AuditEntry],
}

fn sign_body(device_pubkey: &str, entries: &[AuditEntry], key: &DeviceKey) -> Result<String> {
    let bytes = canonical_bytes(&TrailBody {
        device_pubkey,
        entries,
    })?;
    Ok(keys::sign(&bytes, key))
}

impl AuditTrail {
    /// A fresh empty trail signed by the device key.
    pub fn new(key: &DeviceKey) -> Result<Self> {
        let device_pubkey = key.pubkey_hex();
        let signature = sign_body(&device_pubkey, &[], key)?;
        Ok(Self {
            device_pubkey,
            entries: Vec::new(),
            signature,
        })
    }

    /// Structural validation: strict parse invariants, component coverage
    /// and non-decreasing timestamps.
    pub fn validate(&self) -> Result<()> {
        strict_hex("device_pubkey", &self.device_pubkey)?;
        strict_hex("signature", &self.signature)?;
        let mut last = 0u64;
        for entry in &self.entries {
            if entry.timestamp_ms < last {
                return Err(AuditError::Malformed(format!(
                    "timestamps regress at {}",
                    entry.timestamp_ms
                )));
            }
            last = entry.timestamp_ms;
            entry.manifest.validate()?;
            entry.attestation.validate()?;
        }
        Ok(())
    }

    /// Whether the signature verifies over the canonical body.
    pub fn signature_valid(&self) -> Result<bool> {
        let bytes = canonical_bytes(&TrailBody {
            device_pubkey: &self.device_pubkey,
            entries: &self.entries,
        })?;
        keys::verify_signature(&bytes, &self.signature, &self.device_pubkey)
    }

    /// The canonical file form.
    pub fn to_json_bytes(&self) -> Result<Vec<u8>> {
        canonical_bytes(self)
    }

    /// Strict parse plus structural validation. Signature checking is the
    /// verifier's first step, not part of parsing.
    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self> {
        let trail: AuditTrail =
            serde_json::from_slice(bytes).map_err(|e| AuditError::Malformed(e.to_string()))?;
        trail.validate()?;
        Ok(trail)
    }

    /// Entries within [t_start, t_end], order preserved, freshly signed.
    /// An empty snippet is valid and still signed.
    pub fn snapshot(&self, t_start: u64, t_end: u64, key: &DeviceKey) -> Result<AuditTrail> {
        if t_start > t_end {
            return Err(AuditError::InvertedRange {
                start: t_start,
                end: t_end,
            });
        }
        let entries: Vec<AuditEntry> = self
            .entries
            .iter()
            .filter(|e| (t_start..=t_end).contains(&e.timestamp_ms))
            .cloned()
            .collect();
        let device_pubkey = key.pubkey_hex();
        let signature = sign_body(&device_pubkey, &entries, key)?;
        Ok(AuditTrail {
            device_pubkey,
            entries,
            signature,
        })
    }
}

/// Append a launch event and re-sign. Timestamps must not regress.
pub fn record_launch(
    trail: &AuditTrail,
    manifest: Manifest,
    attestation: AttestationReport,
    timestamp_ms: u64,
    key: &DeviceKey,
) -> Result<AuditTrail> {
    manifest.validate()?;
    attestation.validate()?;
    if let Some(last) = trail.entries.last() {
        if timestamp_ms < last.timestamp_ms {
            return Err(AuditError::TimeRegression {
                new: timestamp_ms,
                last: last.timestamp_ms,
            });
        }
    }
    let mut entries = trail.entries.clone();
    entries.push(AuditEntry {
        timestamp_ms,
        manifest,
        attestation,
    });
    let device_pubkey = key.pubkey_hex();
    let signature = sign_body(&device_pubkey, &entries, key)?;
    Ok(AuditTrail {
        device_pubkey,
        entries,
        signature,
    })
}
