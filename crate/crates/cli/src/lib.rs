//! Implementation of the `skyveil` command surface. `main` is a thin
//! dispatcher over this library so the bench and fixture paths stay
//! testable in-process.

pub mod args;
pub mod audit_cmd;
pub mod bench;
pub mod fleetgen;
pub mod oracle;
pub mod query;

/// Command failures mapped onto the process exit contract:
/// 1 IO/parse, 2 network/protocol, 3 audit verdict failure.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Network(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Network(_) => 2,
            CliError::Usage(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<skyveil_audit::AuditError> for CliError {
    fn from(e: skyveil_audit::AuditError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<skyveil_geometry::GeometryError> for CliError {
    fn from(e: skyveil_geometry::GeometryError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<skyveil_netlink::NetError> for CliError {
    fn from(e: skyveil_netlink::NetError) -> Self {
        use skyveil_netlink::NetError;
        match e {
            NetError::FleetParse { .. }
            | NetError::DuplicateId(_)
            | NetError::IdTooLong(_)
            | NetError::EmptyFleet => CliError::Parse(e.to_string()),
            other => CliError::Network(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
