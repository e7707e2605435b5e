use rand::Rng;
use serde::{Deserialize, Serialize};

use skyveil_geometry::{rotate_vector, vectorize, DronePose, GeoCoord, PlanarVector};
use skyveil_mpc::{fx_encode, FixedPoint, RingElement, ScaleTable};

use crate::{Result, ShortlistError};

/// Coordinates must lie within this many degrees of the public region
/// reference; it is what bounds every in-circuit coordinate difference.
pub const REGION_HALF_EXTENT_DEG: f64 = 1.0;

/// Deployments are limited to |latitude| <= 70 degrees so cos(lat) stays
/// well away from zero.
pub const MAX_ABS_LAT_DEG: f64 = 70.0;

/// Vicinity thresholds are capped at one degree per axis.
pub const VICINITY_MAX_DEG: f64 = 1.0;

/// Masking factors are positive integers below 2^20; the range keeps every
/// masked product inside the ring budget while preserving signs.
pub const MASK_MAX_EXCLUSIVE: u64 = 1 << 20;

/// The public center of the deployment region. Coordinates are encoded
/// relative to it, which is what keeps their in-ring magnitudes small.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionRef {
    pub lat: f64,
    pub lon: f64,
}

impl RegionRef {
    pub fn validate(&self) -> Result<()> {
        if self.lat.abs() + REGION_HALF_EXTENT_DEG > MAX_ABS_LAT_DEG + 1.0
            || !self.lat.is_finite()
            || !self.lon.is_finite()
            || self.lon.abs() > 180.0
        {
            return Err(ShortlistError::OutsideRegion {
                lat: self.lat,
                lon: self.lon,
                ref_lat: self.lat,
                ref_lon: self.lon,
            });
        }
        Ok(())
    }

    pub fn contains(&self, coord: GeoCoord) -> bool {
        (coord.lat - self.lat).abs() <= REGION_HALF_EXTENT_DEG
            && (coord.lon - self.lon).abs() <= REGION_HALF_EXTENT_DEG
            && coord.lat.abs() <= MAX_ABS_LAT_DEG
    }

    fn check(&self, coord: GeoCoord) -> Result<()> {
        if self.contains(coord) {
            Ok(())
        } else {
            Err(ShortlistError::OutsideRegion {
                lat: coord.lat,
                lon: coord.lon,
                ref_lat: self.lat,
                ref_lon: self.lon,
            })
        }
    }
}

/// One positive masking factor per coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskPair {
    pub lat: u64,
    pub lon: u64,
}

impl MaskPair {
    fn validate(&self) -> Result<()> {
        for m in [self.lat, self.lon] {
            if m == 0 || m >= MASK_MAX_EXCLUSIVE {
                return Err(ShortlistError::BadMask(m));
            }
        }
        Ok(())
    }
}

/// Draw n uniformly random mask pairs from [1, 2^20).
pub fn make_masks(rng: &mut impl Rng, n: usize) -> Vec<MaskPair> {
    (0..n)
        .map(|_| MaskPair {
            lat: rng.gen_range(1..MASK_MAX_EXCLUSIVE),
            lon: rng.gen_range(1..MASK_MAX_EXCLUSIVE),
        })
        .collect()
}

/// The authority's per-drone protocol inputs, precomputed from the raw
/// pose. The direction vector is normalized to unit length (the angular
/// verdict is invariant under positive scaling of the motion vector), and
/// the gimbal yaw, when present, is already folded into it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroneInput {
    pub id: String,
    pub pos_t: GeoCoord,
    /// Unit-length camera axis on the local plane.
    pub dvec: PlanarVector,
    /// |dvec|^2, kept alongside for consistency checks; the encoded form
    /// is re-derived exactly from the quantized components.
    pub dnorm_sq: f64,
    /// cos(pos_t latitude), the authority-local factor of the projection.
    pub cos_lat: f64,
    pub theta_rad: f64,
}

impl DroneInput {
    pub fn from_pose(pose: &DronePose) -> Result<Self> {
        pose.validate()?;
        let motion = vectorize(pose.pos_t, pose.pos_t_delta);
        let axis = match pose.gimbal_yaw_rad {
            Some(alpha) => rotate_vector(motion, alpha),
            None => motion,
        };
        let norm = axis.norm();
        if norm == 0.0 {
            return Err(skyveil_geometry::GeometryError::DegeneratePose.into());
        }
        let unit = axis.scale(1.0 / norm);
        Ok(Self {
            id: pose.id.clone(),
            pos_t: pose.pos_t,
            dvec: unit,
            dnorm_sq: unit.norm_sq(),
            cos_lat: pose.pos_t.lat.to_radians().cos(),
            theta_rad: pose.camera.half_angle_rad,
        })
    }
}

/// The citizen's protocol inputs: position, per-axis vicinity thresholds,
/// and one mask pair per drone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitizenInput {
    pub pos: GeoCoord,
    pub lat_vicinity_deg: f64,
    pub lon_vicinity_deg: f64,
    pub masks: Vec<MaskPair>,
}

impl CitizenInput {
    pub fn validate(&self, region: &RegionRef, n: usize) -> Result<()> {
        region.check(self.pos)?;
        for v in [self.lat_vicinity_deg, self.lon_vicinity_deg] {
            if !(v > 0.0 && v <= VICINITY_MAX_DEG) {
                return Err(ShortlistError::BadVicinity(v));
            }
        }
        if self.masks.len() != n {
            return Err(ShortlistError::MaskCountMismatch {
                expected: n,
                got: self.masks.len(),
            });
        }
        for m in &self.masks {
            m.validate()?;
        }
        Ok(())
    }
}

/// The authority's mask set, one pair per drone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorityMasks(pub Vec<MaskPair>);

/// Everything the authority contributes to one session.
#[derive(Debug, Clone, PartialEq)]
pub struct AuthorityInputs {
    pub region: RegionRef,
    pub drones: Vec<DroneInput>,
    pub masks: AuthorityMasks,
}

impl AuthorityInputs {
    pub fn validate(&self) -> Result<()> {
        self.region.validate()?;
        if self.masks.0.len() != self.drones.len() {
            return Err(ShortlistError::MaskCountMismatch {
                expected: self.drones.len(),
                got: self.masks.0.len(),
            });
        }
        for d in &self.drones {
            self.region.check(d.pos_t)?;
        }
        for m in &self.masks.0 {
            m.validate()?;
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.drones.iter().map(|d| d.theta_rad).collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.drones.iter().map(|d| d.id.clone()).collect()
    }
}

fn mask_fp(m: u64) -> FixedPoint {
    FixedPoint::from_raw(RingElement::from_signed(m as i128), 0)
}

/// Encode the citizen's wire values in plan input order:
/// [lat, lon, lat_vicinity, lon_vicinity, (mask_lat_i, mask_lon_i)...].
pub fn encode_citizen_inputs(
    citizen: &CitizenInput,
    region: &RegionRef,
    n: usize,
    scales: &ScaleTable,
) -> Result<Vec<FixedPoint>> {
    citizen.validate(region, n)?;
    let mut out = Vec::with_capacity(4 + 2 * n);
    out.push(fx_encode(citizen.pos.lat - region.lat, scales.degrees)?);
    out.push(fx_encode(citizen.pos.lon - region.lon, scales.degrees)?);
    out.push(fx_encode(citizen.lat_vicinity_deg, scales.degrees)?);
    out.push(fx_encode(citizen.lon_vicinity_deg, scales.degrees)?);
    for m in &citizen.masks {
        out.push(mask_fp(m.lat));
        out.push(mask_fp(m.lon));
    }
    Ok(out)
}

/// Encoded per-drone authority values in plan input order.
pub struct EncodedDrone {
    pub lat: FixedPoint,
    pub lon: FixedPoint,
    pub dx: FixedPoint,
    pub dy: FixedPoint,
    /// Derived exactly from the already-quantized dx, dy so the revealed
    /// dot/norm ratio is an exact cosine of encoded vectors.
    pub dnorm_sq: FixedPoint,
    pub cos_lat: FixedPoint,
}

pub(crate) fn encode_drone(
    drone: &DroneInput,
    region: &RegionRef,
    scales: &ScaleTable,
) -> Result<EncodedDrone> {
    let dx = fx_encode(drone.dvec.x, scales.direction)?;
    let dy = fx_encode(drone.dvec.y, scales.direction)?;
    let dnorm_raw = dx.signed_raw() * dx.signed_raw() + dy.signed_raw() * dy.signed_raw();
    Ok(EncodedDrone {
        lat: fx_encode(drone.pos_t.lat - region.lat, scales.degrees)?,
        lon: fx_encode(drone.pos_t.lon - region.lon, scales.degrees)?,
        dx,
        dy,
        dnorm_sq: FixedPoint::from_raw(RingElement::from_signed(dnorm_raw), 2 * scales.direction),
        cos_lat: fx_encode(drone.cos_lat, scales.cos_lat)?,
    })
}

/// Encode the authority's wire values for the oblivious plan:
/// [(lat_i, lon_i, dx_i, dy_i, dnorm_sq_i, cos_lat_i, rmask_lat_i,
/// rmask_lon_i)...].
pub fn encode_authority_inputs(
    authority: &AuthorityInputs,
    scales: &ScaleTable,
) -> Result<Vec<FixedPoint>> {
    authority.validate()?;
    let mut out = Vec::with_capacity(8 * authority.drones.len());
    for (drone, masks) in authority.drones.iter().zip(&authority.masks.0) {
        let e = encode_drone(drone, &authority.region, scales)?;
        out.extend_from_slice(&[e.lat, e.lon, e.dx, e.dy, e.dnorm_sq, e.cos_lat]);
        out.push(mask_fp(masks.lat));
        out.push(mask_fp(masks.lon));
    }
    Ok(out)
}
