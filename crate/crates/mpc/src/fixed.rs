use serde::{Deserialize, Serialize};

use crate::{MpcError, Result, RingElement};

/// Encoded magnitudes must stay strictly below 2^126 at every wire.
pub const MAX_MAGNITUDE_BITS: u32 = 126;

/// A ring element together with its statically-known scale exponent:
/// the represented value is `signed(raw) / 2^scale_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPoint {
    raw: RingElement,
    scale_exp: u32,
}

impl FixedPoint {
    pub fn from_raw(raw: RingElement, scale_exp: u32) -> Self {
        Self { raw, scale_exp }
    }

    pub fn raw(&self) -> RingElement {
        self.raw
    }

    pub fn scale_exp(&self) -> u32 {
        self.scale_exp
    }

    pub fn signed_raw(&self) -> i128 {
        self.raw.to_signed()
    }
}

/// Encode a real value at the given scale, rounding half away from zero.
pub fn fx_encode(value: f64, scale_exp: u32) -> Result<FixedPoint> {
    let scaled = value * (scale_exp as f64).exp2();
    // f64::round is round-half-away-from-zero, which keeps masked values
    // sign-symmetric.
    let rounded = scaled.round();
    if !rounded.is_finite() || rounded.abs() >= (MAX_MAGNITUDE_BITS as f64).exp2() {
        return Err(MpcError::BoundExceeded {
            value,
            scale_exp,
            bound_bits: MAX_MAGNITUDE_BITS,
        });
    }
    Ok(FixedPoint {
        raw: RingElement::from_signed(rounded as i128),
        scale_exp,
    })
}

/// Decode back to a real value, honoring the composite scale exponent.
pub fn fx_decode(fp: &FixedPoint) -> f64 {
    (fp.signed_raw() as f64) * (-(fp.scale_exp as i32) as f64).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_zero_at_any_scale() {
        for scale in [0, 10, 30, 90] {
            let fp = fx_encode(0.0, scale).unwrap();
            assert_eq!(fp.signed_raw(), 0);
            assert_eq!(fx_decode(&fp), 0.0);
        }
    }

    #[test]
    fn dyadic_rational_is_exact() {
        let fp = fx_encode(-1.5, 10).unwrap();
        assert_eq!(fp.signed_raw(), -1536);
        assert_eq!(fx_decode(&fp), -1.5);
    }

    #[test]
    fn milli_degree_round_trip_error_is_bounded() {
        let fp = fx_encode(0.001, 30).unwrap();
        let err = (fx_decode(&fp) - 0.001).abs();
        assert!(err <= (-30f64).exp2(), "round-trip error {err}");
    }

    #[test]
    fn rounds_half_away_from_zero() {
        assert_eq!(fx_encode(2.5, 0).unwrap().signed_raw(), 3);
        assert_eq!(fx_encode(-2.5, 0).unwrap().signed_raw(), -3);
        assert_eq!(fx_encode(2.4375, 2).unwrap().signed_raw(), 10); // 9.75 -> 10
    }

    #[test]
    fn overflow_is_rejected() {
        assert!(fx_encode(1e38, 0).is_err());
        assert!(fx_encode(1.0, 127).is_err());
        assert!(fx_encode(f64::NAN, 4).is_err());
    }

    #[test]
    fn random_round_trips_stay_within_half_ulp() {
        // Deterministic pseudo-random sweep, no RNG dependency needed.
        let mut x = 0.123456789f64;
        for _ in 0..1000 {
            x = (x * 997.0 + 0.618).fract() * 2000.0 - 1000.0;
            let fp = fx_encode(x, 30).unwrap();
            assert!((fx_decode(&fp) - x).abs() <= (-30f64).exp2());
        }
    }
}
