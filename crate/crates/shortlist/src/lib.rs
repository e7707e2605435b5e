//! Privacy-preserving drone shortlisting.
//!
//! A citizen and the drone authority jointly evaluate, under additive
//! secret sharing, which drones of the fleet are near the citizen and at
//! what angle their cameras sit relative to the citizen's bearing. The
//! authority learns nothing about the citizen's position; the citizen
//! learns, per drone, a sign-masked pair of vicinity indicators and the
//! dot-product/norm-square pair from which the viewing angle follows on
//! the phone, in plaintext. Square roots, divisions and comparisons are
//! deliberately kept out of the circuit: the shared computation is purely
//! arithmetic (+, -, x), and only signs and ratios of the revealed values
//! carry meaning.
//!
//! Two variants exist. The oblivious one evaluates every drone in bulk,
//! making the transcript a function of the fleet size alone. The
//! non-oblivious one opens the vicinity predicate and runs the angular
//! gates only for nearby drones; its traffic grows with the number of
//! drones around the citizen, which is precisely the side channel the
//! variant exists to demonstrate. Masking factors keep raw positional
//! differences hidden from both parties either way; what the masked
//! magnitudes might still tell a citizen about drone distances is an open
//! question documented here rather than resolved.

mod circuit;
mod inputs;
mod protocol;
mod records;

pub use circuit::{
    build_circuit_plan, build_gated_phase2, build_gated_plan, build_vicinity_plan, CircuitPlan,
    GatedLayout, GatedPhase2, VicinityLayout,
};
pub use inputs::{
    encode_authority_inputs, encode_citizen_inputs, make_masks, AuthorityInputs, AuthorityMasks,
    CitizenInput, DroneInput, MaskPair, RegionRef, MASK_MAX_EXCLUSIVE, MAX_ABS_LAT_DEG,
    REGION_HALF_EXTENT_DEG, VICINITY_MAX_DEG,
};
pub use protocol::{
    run_authority_session, run_citizen_session, run_non_oblivious, run_oblivious, SessionOutput,
};
pub use records::{citizen_postprocess, decide_drone, ShortlistDecision, ShortlistRecord};

/// Errors raised while preparing inputs or running the shortlist protocol.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ShortlistError {
    #[error("coordinate ({lat}, {lon}) outside the deployment region around ({ref_lat}, {ref_lon})")]
    OutsideRegion {
        lat: f64,
        lon: f64,
        ref_lat: f64,
        ref_lon: f64,
    },
    #[error("vicinity threshold {0} outside (0, {VICINITY_MAX_DEG}] degrees")]
    BadVicinity(f64),
    #[error("masking factor {0} outside [1, 2^20)")]
    BadMask(u64),
    #[error("expected {expected} masks, got {got}")]
    MaskCountMismatch { expected: usize, got: usize },
    #[error("fleet size mismatch: session n = {session}, inputs carry {inputs}")]
    FleetSizeMismatch { session: usize, inputs: usize },
    #[error(transparent)]
    Geometry(#[from] skyveil_geometry::GeometryError),
    #[error(transparent)]
    Engine(#[from] skyveil_mpc::MpcError),
}

pub type Result<T> = std::result::Result<T, ShortlistError>;
