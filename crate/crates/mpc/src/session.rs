use serde::{Deserialize, Serialize};

/// Which shortlist protocol a session runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolVariant {
    /// Bulk evaluation over every drone; transcript depends on n alone.
    Oblivious,
    /// Vicinity-gated evaluation; transcript grows with the number of
    /// drones near the citizen, which is exactly the side channel this
    /// variant exists to demonstrate.
    NonOblivious,
}

impl ProtocolVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolVariant::Oblivious => "oblivious",
            ProtocolVariant::NonOblivious => "non-oblivious",
        }
    }
}

impl std::str::FromStr for ProtocolVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "oblivious" => Ok(ProtocolVariant::Oblivious),
            "non-oblivious" | "nonoblivious" => Ok(ProtocolVariant::NonOblivious),
            other => Err(format!("unknown variant '{other}'")),
        }
    }
}

/// Per-wire-kind scale exponents. These are protocol constants pinned by
/// the wire version; both parties must agree on them, and they are never
/// secret.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleTable {
    /// Latitude/longitude degrees and degree thresholds.
    pub degrees: u32,
    /// cos(latitude) factors.
    pub cos_lat: u32,
    /// Unit direction-vector components.
    pub direction: u32,
    /// Sign-preserving masking factors (plain positive integers).
    pub mask: u32,
}

impl Default for ScaleTable {
    fn default() -> Self {
        Self {
            degrees: 30,
            cos_lat: 15,
            direction: 13,
            mask: 0,
        }
    }
}

/// Public parameters of one protocol session. The fleet size n is public
/// to both parties by design; the seeds make runs reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionParams {
    pub n: usize,
    pub variant: ProtocolVariant,
    pub scales: ScaleTable,
    pub citizen_seed: u64,
    pub authority_seed: u64,
    pub dealer_seed: u64,
}

impl SessionParams {
    pub fn new(n: usize, variant: ProtocolVariant) -> Self {
        Self {
            n,
            variant,
            scales: ScaleTable::default(),
            citizen_seed: 1,
            authority_seed: 2,
            dealer_seed: 3,
        }
    }

    pub fn with_seeds(mut self, citizen: u64, authority: u64, dealer: u64) -> Self {
        self.citizen_seed = citizen;
        self.authority_seed = authority;
        self.dealer_seed = dealer;
        self
    }
}
