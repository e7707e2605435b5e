use serde::{Deserialize, Serialize};

use skyveil_mpc::{fx_decode, FixedPoint};

/// The four values revealed to the citizen for one drone. `dotp` and
/// `norm_sq` are in degree-proportional units (the projection's constant
/// meters-per-degree factor cancels in the angle ratio); only their ratio
/// and the signs of the masked vicinity margins carry meaning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortlistRecord {
    pub id: String,
    pub dotp: FixedPoint,
    pub norm_sq: FixedPoint,
    pub nearby_lat: FixedPoint,
    pub nearby_lon: FixedPoint,
}

/// The citizen's plaintext verdict for one drone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortlistDecision {
    pub id: String,
    pub in_vicinity: bool,
    /// Viewing angle, present only for valid in-vicinity drones.
    pub phi_rad: Option<f64>,
    pub shortlisted: bool,
    /// Set when an in-vicinity drone's norm square came back non-positive
    /// (degenerate geometry); no angle is derived for it.
    pub invalid: bool,
}

/// The shared decision rule of both protocol variants: vicinity from the
/// signs of the masked margins, then the angle from the dot/norm ratio.
pub fn decide_drone(
    id: &str,
    nearby_lat_raw: i128,
    nearby_lon_raw: i128,
    angular: Option<(&FixedPoint, &FixedPoint)>,
    theta_rad: f64,
) -> ShortlistDecision {
    let in_vicinity = nearby_lat_raw <= 0 && nearby_lon_raw <= 0;
    if !in_vicinity {
        return ShortlistDecision {
            id: id.to_owned(),
            in_vicinity: false,
            phi_rad: None,
            shortlisted: false,
            invalid: false,
        };
    }
    let (dotp, norm_sq) = match angular {
        Some(pair) => pair,
        None => {
            return ShortlistDecision {
                id: id.to_owned(),
                in_vicinity: true,
                phi_rad: None,
                shortlisted: false,
                invalid: true,
            }
        }
    };
    if norm_sq.signed_raw() <= 0 {
        return ShortlistDecision {
            id: id.to_owned(),
            in_vicinity: true,
            phi_rad: None,
            shortlisted: false,
            invalid: true,
        };
    }
    let cos_phi = (fx_decode(dotp) / fx_decode(norm_sq).sqrt()).clamp(-1.0, 1.0);
    let phi = cos_phi.acos();
    ShortlistDecision {
        id: id.to_owned(),
        in_vicinity: true,
        phi_rad: Some(phi),
        shortlisted: phi <= theta_rad,
        invalid: false,
    }
}

/// The citizen-side post-processing of the oblivious variant's records:
/// square root, division, arccos and the theta comparison, all plaintext
/// on the citizen's device.
pub fn citizen_postprocess(records: &[ShortlistRecord], thetas: &[f64]) -> Vec<ShortlistDecision> {
    records
        .iter()
        .zip(thetas)
        .map(|(r, &theta)| {
            decide_drone(
                &r.id,
                r.nearby_lat.signed_raw(),
                r.nearby_lon.signed_raw(),
                Some((&r.dotp, &r.norm_sq)),
                theta,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use skyveil_mpc::{fx_encode, RingElement};

    fn fp(v: f64, scale: u32) -> FixedPoint {
        fx_encode(v, scale).unwrap()
    }

    fn record(dotp: f64, norm_sq: f64, nlat: f64, nlon: f64) -> ShortlistRecord {
        ShortlistRecord {
            id: "d".into(),
            dotp: fp(dotp, 20),
            norm_sq: fp(norm_sq, 40),
            nearby_lat: fp(nlat, 20),
            nearby_lon: fp(nlon, 20),
        }
    }

    #[test]
    fn out_of_vicinity_skips_the_angle() {
        let d = citizen_postprocess(&[record(1.0, 1.0, 0.5, -1.0)], &[0.6]);
        assert!(!d[0].in_vicinity && d[0].phi_rad.is_none() && !d[0].shortlisted);
    }

    #[test]
    fn collinear_dotp_equals_norm_root() {
        // dotp = sqrt(norm_sq) means phi = 0: shortlisted for any theta > 0.
        let d = citizen_postprocess(&[record(3.0, 9.0, -0.25, -0.125)], &[1e-6]);
        assert!(d[0].in_vicinity);
        assert!(d[0].phi_rad.unwrap().abs() < 1e-7);
        assert!(d[0].shortlisted);
    }

    #[test]
    fn boundary_theta_is_inclusive() {
        // phi = pi/2 (dotp = 0), theta = pi/2: inclusive comparison keeps it.
        let d = citizen_postprocess(&[record(0.0, 4.0, -0.5, -0.5)], &[std::f64::consts::FRAC_PI_2]);
        assert!(d[0].shortlisted);
    }

    #[test]
    fn degenerate_norm_is_flagged_invalid() {
        let zero = ShortlistRecord {
            id: "z".into(),
            dotp: fp(0.0, 20),
            norm_sq: FixedPoint::from_raw(RingElement::from_signed(0), 40),
            nearby_lat: fp(-0.1, 20),
            nearby_lon: fp(-0.1, 20),
        };
        let d = citizen_postprocess(&[zero], &[0.5]);
        assert!(d[0].in_vicinity && d[0].invalid && d[0].phi_rad.is_none() && !d[0].shortlisted);
    }

    #[test]
    fn clamps_cosine_drift() {
        // Ratio slightly above 1 from fixed-point rounding must not NaN.
        let d = citizen_postprocess(&[record(2.000001, 4.0, -0.1, -0.1)], &[0.3]);
        assert_eq!(d[0].phi_rad, Some(0.0));
        assert!(d[0].shortlisted);
    }
}
