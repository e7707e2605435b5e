//! Wire protocol and deployment shape: a fleet registry with a query
//! endpoint on the authority side, and a querying citizen client.
//!
//! Framing is length-prefixed binary (4-byte big-endian payload length,
//! one type byte) so every session's traffic is byte-exact accountable:
//! measured socket bytes equal the session transcript plus five bytes of
//! framing per frame, and for the oblivious variant the totals per
//! direction are a function of fleet size and protocol version alone.

mod client;
mod fleet;
mod frame;
mod server;
mod wire;

pub use client::{query_as_citizen, CitizenQuery, ClientSeeds, QueryOutcome};
pub use fleet::{FleetRecord, FleetRegistry, FleetSnapshot};
pub use frame::{read_frame, write_frame, Frame, FRAME_OVERHEAD_BYTES, MAX_PAYLOAD_BYTES};
pub use server::{serve_authority, ServerHandle};
pub use wire::{framing_overhead, FramedChannel, Hello, WireConfig, PROTOCOL_VERSION, WIRE_ID_BYTES};

/// Errors of the wire layer and fleet registry.
#[derive(Debug, thiserror::Error)]
pub enum NetError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("frame payload of {0} bytes exceeds the {MAX_PAYLOAD_BYTES}-byte cap")]
    Oversize(u64),
    #[error("unknown message type 0x{0:02x}")]
    UnknownMsgType(u8),
    #[error("protocol version mismatch: ours {ours}, peer {theirs}")]
    VersionMismatch { ours: u8, theirs: u8 },
    #[error("peer reported: {0}")]
    Remote(String),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("fleet file line {line}: {msg}")]
    FleetParse { line: usize, msg: String },
    #[error("duplicate drone id '{0}'")]
    DuplicateId(String),
    #[error("unknown drone id '{0}'")]
    UnknownId(String),
    #[error("drone id '{0}' does not fit {WIRE_ID_BYTES} bytes")]
    IdTooLong(String),
    #[error("fleet is empty; nothing to query")]
    EmptyFleet,
    #[error(transparent)]
    Geometry(#[from] skyveil_geometry::GeometryError),
    #[error(transparent)]
    Shortlist(#[from] skyveil_shortlist::ShortlistError),
    #[error(transparent)]
    Engine(#[from] skyveil_mpc::MpcError),
}

pub type Result<T> = std::result::Result<T, NetError>;
