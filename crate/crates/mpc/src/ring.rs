use serde::{Deserialize, Serialize};

/// An element of Z_(2^128). Arithmetic wraps; signed interpretation is
/// two's-complement.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElement(u128);

impl RingElement {
    pub const ZERO: RingElement = RingElement(0);
    pub const BYTES: usize = 16;

    pub const fn new(raw: u128) -> Self {
        RingElement(raw)
    }

    pub const fn from_signed(v: i128) -> Self {
        RingElement(v as u128)
    }

    pub const fn raw(self) -> u128 {
        self.0
    }

    /// Two's-complement signed decode.
    pub const fn to_signed(self) -> i128 {
        self.0 as i128
    }

    pub fn wrapping_add(self, rhs: Self) -> Self {
        RingElement(self.0.wrapping_add(rhs.0))
    }

    pub fn wrapping_sub(self, rhs: Self) -> Self {
        RingElement(self.0.wrapping_sub(rhs.0))
    }

    pub fn wrapping_mul(self, rhs: Self) -> Self {
        RingElement(self.0.wrapping_mul(rhs.0))
    }

    pub fn wrapping_neg(self) -> Self {
        RingElement(self.0.wrapping_neg())
    }

    pub fn wrapping_shl(self, shift: u32) -> Self {
        RingElement(self.0.wrapping_shl(shift))
    }

    pub fn to_le_bytes(self) -> [u8; 16] {
        self.0.to_le_bytes()
    }

    pub fn from_le_bytes(bytes: [u8; 16]) -> Self {
        RingElement(u128::from_le_bytes(bytes))
    }
}

impl std::fmt::Debug for RingElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RingElement({})", self.to_signed())
    }
}
