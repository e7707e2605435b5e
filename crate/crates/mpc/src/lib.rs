//! Two-party additive secret sharing over the ring Z_(2^128).
//!
//! The engine evaluates straight-line arithmetic programs between a
//! `Citizen` and an `Authority`. Values are fixed-point encoded with a
//! statically-known scale exponent per wire; there is no in-circuit
//! truncation, so every reconstruction is exact modulo 2^128. Interactive
//! multiplication uses Beaver triples from a trusted dealer, which stands
//! in for an oblivious-transfer preprocessing phase: this is a semi-honest,
//! pedagogical engine, not a hardened MPC stack. The dealer's traffic is
//! accounted separately from the online transcript, whose shape (message
//! count, sizes, round count) is a function of the circuit plan alone and
//! never of secret values.

mod exec;
mod fixed;
mod plan;
mod ring;
mod session;
mod share;
mod transcript;
mod triple;

pub use exec::{run_segment_as, PartyExec, PipeChannel, RevealedValue, SessionChannel, TranscriptingChannel};
pub use fixed::{fx_encode, fx_decode, FixedPoint, MAX_MAGNITUDE_BITS};
pub use plan::{InputSpec, PlanBuilder, PlanOp, PlanSegment, RevealRecipient, RevealSpec, WireId};
pub use ring::RingElement;
pub use session::{ProtocolVariant, ScaleTable, SessionParams};
pub use share::{add, mul_public, reconstruct, scale_up, share, sub, PartyRole, Share};
pub use transcript::{Direction, MessageRecord, MessageTag, Transcript};
pub use triple::{
    dealer_generate_triples, mul_finalize, mul_open, preprocessing_bytes, MulOpening, TriplePool,
    TripleShare,
};

/// Engine and protocol errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MpcError {
    #[error("value {value} does not fit the ring bound of 2^{bound_bits} at scale {scale_exp}")]
    BoundExceeded {
        value: f64,
        scale_exp: u32,
        bound_bits: u32,
    },
    #[error("scale exponents differ: {lhs} vs {rhs}")]
    ScaleMismatch { lhs: u32, rhs: u32 },
    #[error("operands belong to the same party")]
    SameParty,
    #[error("operands belong to different parties")]
    PartyMismatch,
    #[error("beaver triple {index} already consumed")]
    TripleReuse { index: u64 },
    #[error("beaver triple pool exhausted after {capacity} triples")]
    TripleExhausted { capacity: usize },
    #[error("plan is malformed: {0}")]
    PlanInvalid(String),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("channel closed")]
    ChannelClosed,
}

pub type Result<T> = std::result::Result<T, MpcError>;
