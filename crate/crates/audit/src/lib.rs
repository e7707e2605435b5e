//! Launch-time audit trails for camera-bearing robots, and the checks a
//! citizen runs against them.
//!
//! A device-held key (standing in for attestation hardware; there is no
//! real TEE here) signs an append-only trail of application launches. Each
//! entry carries the launched application's publish/subscribe manifest and
//! a measurement report of the platform components. The verifier replays
//! three checks over a trail: platform integrity, sanitizer and launcher
//! integrity, and the publish/subscribe pattern that keeps the raw video
//! topic confined to the sanitizer front-end.
//!
//! Signatures cover a canonical serialization (UTF-8 JSON, sorted keys, no
//! insignificant whitespace) so trail bytes are stable across writers.

mod canonical;
mod keys;
mod trail;
mod verify;

pub use canonical::canonical_bytes;
pub use keys::{keygen, pubkey_hex, sign, verify_signature, DeviceKey};
pub use trail::{
    record_launch, AttestationReport, AuditEntry, AuditTrail, Manifest, COMPONENT_APP_LAUNCHER,
    COMPONENT_LAUNCHED_APP, COMPONENT_MIDDLEWARE, COMPONENT_NORMAL_WORLD_OS,
    COMPONENT_SANITIZER_FE, COMPONENT_SECURITY_LAYER, REQUIRED_COMPONENTS,
};
pub use verify::{verify_trail, AuditPolicy, CheckResult, MeasurementDb, VerdictReport, Violation};

/// Errors of trail construction, parsing and signature handling.
#[derive(Debug, thiserror::Error)]
pub enum AuditError {
    #[error("timestamp {new} precedes the trail's last entry at {last}")]
    TimeRegression { new: u64, last: u64 },
    #[error("snapshot range is inverted: {start} > {end}")]
    InvertedRange { start: u64, end: u64 },
    #[error("malformed trail: {0}")]
    Malformed(String),
    #[error("bad key or signature length: expected {expected} bytes, got {got}")]
    KeyLength { expected: usize, got: usize },
    #[error("field '{field}' is not strict lowercase hex")]
    BadHex { field: &'static str },
    #[error("serialization failed: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, AuditError>;

/// Strict lowercase hex decode: uppercase digits are rejected so no two
/// distinct byte strings decode to the same value.
pub(crate) fn strict_hex(field: &'static str, s: &str) -> Result<Vec<u8>> {
    if s.bytes().any(|b| !matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
        return Err(AuditError::BadHex { field });
    }
    hex::decode(s).map_err(|_| AuditError::BadHex { field })
}
