use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{FixedPoint, MpcError, Result, RingElement};

/// The two protocol roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartyRole {
    Citizen,
    Authority,
}

impl PartyRole {
    pub fn peer(self) -> PartyRole {
        match self {
            PartyRole::Citizen => PartyRole::Authority,
            PartyRole::Authority => PartyRole::Citizen,
        }
    }
}

/// One party's additive fragment of a secret wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Share {
    pub party: PartyRole,
    pub fragment: RingElement,
    pub scale_exp: u32,
}

/// Split an encoded value into two fragments summing to its raw encoding
/// mod 2^128. The citizen fragment is fresh uniform randomness.
pub fn share(value: &FixedPoint, rng: &mut impl Rng) -> (Share, Share) {
    let r = RingElement::new(rng.gen::<u128>());
    let citizen = Share {
        party: PartyRole::Citizen,
        fragment: r,
        scale_exp: value.scale_exp(),
    };
    let authority = Share {
        party: PartyRole::Authority,
        fragment: value.raw().wrapping_sub(r),
        scale_exp: value.scale_exp(),
    };
    (citizen, authority)
}

/// Rebuild the encoded value from both fragments.
pub fn reconstruct(a: &Share, b: &Share) -> Result<FixedPoint> {
    if a.party == b.party {
        return Err(MpcError::SameParty);
    }
    if a.scale_exp != b.scale_exp {
        return Err(MpcError::ScaleMismatch {
            lhs: a.scale_exp,
            rhs: b.scale_exp,
        });
    }
    Ok(FixedPoint::from_raw(
        a.fragment.wrapping_add(b.fragment),
        a.scale_exp,
    ))
}

/// Local addition of same-party shares. Zero transcript bytes.
pub fn add(x: &Share, y: &Share) -> Result<Share> {
    if x.party != y.party {
        return Err(MpcError::PartyMismatch);
    }
    if x.scale_exp != y.scale_exp {
        return Err(MpcError::ScaleMismatch {
            lhs: x.scale_exp,
            rhs: y.scale_exp,
        });
    }
    Ok(Share {
        party: x.party,
        fragment: x.fragment.wrapping_add(y.fragment),
        scale_exp: x.scale_exp,
    })
}

/// Local subtraction of same-party shares. Zero transcript bytes.
pub fn sub(x: &Share, y: &Share) -> Result<Share> {
    if x.party != y.party {
        return Err(MpcError::PartyMismatch);
    }
    if x.scale_exp != y.scale_exp {
        return Err(MpcError::ScaleMismatch {
            lhs: x.scale_exp,
            rhs: y.scale_exp,
        });
    }
    Ok(Share {
        party: x.party,
        fragment: x.fragment.wrapping_sub(y.fragment),
        scale_exp: x.scale_exp,
    })
}

/// Local multiplication by a public integer constant. Zero transcript bytes.
pub fn mul_public(x: &Share, factor: i128) -> Share {
    Share {
        party: x.party,
        fragment: x.fragment.wrapping_mul(RingElement::from_signed(factor)),
        scale_exp: x.scale_exp,
    }
}

/// Local exact rescale: shift the raw fragment left and raise the scale
/// exponent by the same amount. The represented value is unchanged.
pub fn scale_up(x: &Share, delta: u32) -> Share {
    Share {
        party: x.party,
        fragment: x.fragment.wrapping_shl(delta),
        scale_exp: x.scale_exp + delta,
    }
}
