use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::{MpcError, PartyRole, Result, RingElement, Share};

/// One party's fragments of a Beaver triple (a, b, c) with c = a*b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleShare {
    pub index: u64,
    pub a: RingElement,
    pub b: RingElement,
    pub c: RingElement,
}

/// A party's stock of one-time triples. Each triple can be claimed exactly
/// once; claiming out of stock or twice is a protocol error.
#[derive(Debug, Clone)]
pub struct TriplePool {
    role: PartyRole,
    shares: Vec<TripleShare>,
    used: Vec<bool>,
    next: usize,
}

impl TriplePool {
    pub fn new(role: PartyRole, shares: Vec<TripleShare>) -> Self {
        let used = vec![false; shares.len()];
        Self {
            role,
            shares,
            used,
            next: 0,
        }
    }

    pub fn role(&self) -> PartyRole {
        self.role
    }

    pub fn capacity(&self) -> usize {
        self.shares.len()
    }

    pub fn remaining(&self) -> usize {
        self.used.iter().filter(|&&u| !u).count()
    }

    /// Claim the next unused triple in dealing order.
    pub fn claim_next(&mut self) -> Result<TripleShare> {
        let index = self.next as u64;
        self.next += 1;
        self.claim(index)
    }

    /// Claim a specific triple; rejects reuse and exhaustion.
    pub fn claim(&mut self, index: u64) -> Result<TripleShare> {
        let i = index as usize;
        if i >= self.shares.len() {
            return Err(MpcError::TripleExhausted {
                capacity: self.shares.len(),
            });
        }
        if self.used[i] {
            return Err(MpcError::TripleReuse { index });
        }
        self.used[i] = true;
        Ok(self.shares[i])
    }
}

/// Deal `count` triples deterministically from a seed, returning the
/// citizen and authority pools. Both parties of a session must be
/// provisioned from the same seed.
pub fn dealer_generate_triples(seed: u64, count: usize) -> (TriplePool, TriplePool) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut citizen = Vec::with_capacity(count);
    let mut authority = Vec::with_capacity(count);
    for index in 0..count as u64 {
        let a = RingElement::new(rng.gen::<u128>());
        let b = RingElement::new(rng.gen::<u128>());
        let c = a.wrapping_mul(b);
        let a0 = RingElement::new(rng.gen::<u128>());
        let b0 = RingElement::new(rng.gen::<u128>());
        let c0 = RingElement::new(rng.gen::<u128>());
        citizen.push(TripleShare {
            index,
            a: a0,
            b: b0,
            c: c0,
        });
        authority.push(TripleShare {
            index,
            a: a.wrapping_sub(a0),
            b: b.wrapping_sub(b0),
            c: c.wrapping_sub(c0),
        });
    }
    (
        TriplePool::new(PartyRole::Citizen, citizen),
        TriplePool::new(PartyRole::Authority, authority),
    )
}

/// Dealer-to-parties traffic for `count` triples: three fragments of 16
/// bytes to each of the two parties per triple.
pub fn preprocessing_bytes(count: usize) -> u64 {
    (count as u64) * 2 * 3 * (RingElement::BYTES as u64)
}

/// The masked differences (d, e) = (x - a, y - b) one party contributes to
/// open a multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulOpening {
    pub d: RingElement,
    pub e: RingElement,
}

impl MulOpening {
    pub fn to_bytes(self) -> [u8; 32] {
        let mut out = [0u8; 32];
        out[..16].copy_from_slice(&self.d.to_le_bytes());
        out[16..].copy_from_slice(&self.e.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() != 32 {
            return Err(MpcError::Protocol(format!(
                "mul opening must be 32 bytes, got {}",
                bytes.len()
            )));
        }
        let mut d = [0u8; 16];
        let mut e = [0u8; 16];
        d.copy_from_slice(&bytes[..16]);
        e.copy_from_slice(&bytes[16..]);
        Ok(Self {
            d: RingElement::from_le_bytes(d),
            e: RingElement::from_le_bytes(e),
        })
    }
}

/// First half of a Beaver multiplication: mask the operands.
pub fn mul_open(x: &Share, y: &Share, t: &TripleShare) -> Result<MulOpening> {
    if x.party != y.party {
        return Err(MpcError::PartyMismatch);
    }
    Ok(MulOpening {
        d: x.fragment.wrapping_sub(t.a),
        e: y.fragment.wrapping_sub(t.b),
    })
}

/// Second half: combine both openings into the product share. The output
/// scale exponent is the sum of the operand scale exponents. The authority
/// carries the public d*e correction term.
pub fn mul_finalize(
    x: &Share,
    y: &Share,
    t: &TripleShare,
    mine: MulOpening,
    peer: MulOpening,
) -> Share {
    let d = mine.d.wrapping_add(peer.d);
    let e = mine.e.wrapping_add(peer.e);
    let mut fragment = t
        .c
        .wrapping_add(e.wrapping_mul(t.a))
        .wrapping_add(d.wrapping_mul(t.b));
    if x.party == PartyRole::Authority {
        fragment = fragment.wrapping_add(d.wrapping_mul(e));
    }
    Share {
        party: x.party,
        fragment,
        scale_exp: x.scale_exp + y.scale_exp,
    }
}
