use serde::{Deserialize, Serialize};

/// Direction of a protocol message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    CitizenToAuthority,
    AuthorityToCitizen,
}

/// What a protocol message carries. `InputShares`, `MulOpen` and `Reveal`
/// are the online MPC payloads; the remaining tags are wire-protocol
/// control frames accounted by the network layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MessageTag {
    InputShares,
    MulOpen,
    Reveal,
    Hello,
    ThetasIds,
    Bye,
    Error,
}

impl MessageTag {
    pub fn is_mpc_payload(self) -> bool {
        matches!(
            self,
            MessageTag::InputShares | MessageTag::MulOpen | MessageTag::Reveal
        )
    }
}

/// One accounted message: direction, tag and exact payload size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageRecord {
    pub direction: Direction,
    pub tag: MessageTag,
    pub bytes: u64,
}

/// Byte-exact per-direction accounting of everything exchanged in one
/// session. Dealer traffic is tracked separately as preprocessing and never
/// mixes into the online counters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    records: Vec<MessageRecord>,
    citizen_to_authority: u64,
    authority_to_citizen: u64,
    rounds: u32,
    preprocessing_bytes: u64,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, direction: Direction, tag: MessageTag, bytes: u64) {
        self.records.push(MessageRecord {
            direction,
            tag,
            bytes,
        });
        match direction {
            Direction::CitizenToAuthority => self.citizen_to_authority += bytes,
            Direction::AuthorityToCitizen => self.authority_to_citizen += bytes,
        }
    }

    pub fn note_round(&mut self) {
        self.rounds += 1;
    }

    pub fn add_preprocessing(&mut self, bytes: u64) {
        self.preprocessing_bytes += bytes;
    }

    pub fn citizen_to_authority_bytes(&self) -> u64 {
        self.citizen_to_authority
    }

    pub fn authority_to_citizen_bytes(&self) -> u64 {
        self.authority_to_citizen
    }

    pub fn total_online_bytes(&self) -> u64 {
        self.citizen_to_authority + self.authority_to_citizen
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn preprocessing_bytes(&self) -> u64 {
        self.preprocessing_bytes
    }

    pub fn messages(&self) -> &[MessageRecord] {
        &self.records
    }

    /// The ordered (direction, tag, size) shape used for obliviousness
    /// comparisons: two sessions are transcript-identical iff these are
    /// equal and the round counts match.
    pub fn shape(&self) -> Vec<(Direction, MessageTag, u64)> {
        self.records
            .iter()
            .map(|r| (r.direction, r.tag, r.bytes))
            .collect()
    }

    /// Shape restricted to the MPC payload messages (excludes wire control
    /// frames).
    pub fn mpc_shape(&self) -> Vec<(Direction, MessageTag, u64)> {
        self.records
            .iter()
            .filter(|r| r.tag.is_mpc_payload())
            .map(|r| (r.direction, r.tag, r.bytes))
            .collect()
    }

    pub fn frame_count(&self) -> usize {
        self.records.len()
    }

    pub fn frames_in(&self, direction: Direction) -> usize {
        self.records
            .iter()
            .filter(|r| r.direction == direction)
            .count()
    }

    /// Counters must equal the sum of recorded message sizes per direction.
    pub fn verify_consistency(&self) -> bool {
        let mut c2a = 0u64;
        let mut a2c = 0u64;
        for r in &self.records {
            match r.direction {
                Direction::CitizenToAuthority => c2a += r.bytes,
                Direction::AuthorityToCitizen => a2c += r.bytes,
            }
        }
        c2a == self.citizen_to_authority && a2c == self.authority_to_citizen
    }
}
