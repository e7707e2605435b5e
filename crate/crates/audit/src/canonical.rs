use serde::Serialize;

use crate::{AuditError, Result};

/// Canonical bytes of any serializable value: UTF-8 JSON with
/// lexicographically sorted object keys and no insignificant whitespace.
///
/// Sorting comes from routing through `serde_json::Value`, whose object
/// map is ordered (the crate is used without its insertion-order feature).
pub fn canonical_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let value = serde_json::to_value(value).map_err(|e| AuditError::Serialize(e.to_string()))?;
    serde_json::to_vec(&value).map_err(|e| AuditError::Serialize(e.to_string()))
}
