use serde::{Deserialize, Serialize};

use crate::{GeometryError, Result};

/// Mean Earth radius in meters, the fixed spherical model used throughout.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// A GPS latitude/longitude pair, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoCoord {
    /// Degrees latitude, in [-90, 90].
    pub lat: f64,
    /// Degrees longitude, in [-180, 180].
    pub lon: f64,
}

impl GeoCoord {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !lat.is_finite() || !lon.is_finite() || lat.abs() > 90.0 || lon.abs() > 180.0 {
            return Err(GeometryError::InvalidCoordinate { lat, lon });
        }
        Ok(Self { lat, lon })
    }
}

/// A vector on the local tangent plane: `x` meters East, `y` meters North.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarVector {
    pub x: f64,
    pub y: f64,
}

impl PlanarVector {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: PlanarVector) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn scale(self, k: f64) -> PlanarVector {
        PlanarVector::new(self.x * k, self.y * k)
    }
}

/// Camera optics reduced to the half-angle of its cone of vision.
///
/// The half-angle is tied to the optics by `half_angle_rad =
/// arctan(sensor_dim_mm / (2 * focal_length_mm))` and always lies in
/// (0, pi/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraSpec {
    pub focal_length_mm: f64,
    pub sensor_dim_mm: f64,
    pub half_angle_rad: f64,
}

impl CameraSpec {
    /// Derive the cone half-angle from focal length and sensor dimension.
    pub fn from_optics(focal_length_mm: f64, sensor_dim_mm: f64) -> Result<Self> {
        let half_angle_rad = crate::camera_half_angle(focal_length_mm, sensor_dim_mm)?;
        Ok(Self {
            focal_length_mm,
            sensor_dim_mm,
            half_angle_rad,
        })
    }

    /// Build a spec from a known half-angle, synthesizing consistent optics
    /// (unit focal length).
    pub fn from_half_angle(half_angle_rad: f64) -> Result<Self> {
        if !(half_angle_rad > 0.0 && half_angle_rad < std::f64::consts::FRAC_PI_2) {
            return Err(GeometryError::NonPositive {
                what: "camera half-angle within (0, pi/2)",
                value: half_angle_rad,
            });
        }
        Ok(Self {
            focal_length_mm: 1.0,
            sensor_dim_mm: 2.0 * half_angle_rad.tan(),
            half_angle_rad,
        })
    }
}

/// Spherical model constants; the radius is configurable but fixed per use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConstants {
    pub earth_radius_m: f64,
}

impl Default for GeometryConstants {
    fn default() -> Self {
        Self {
            earth_radius_m: EARTH_RADIUS_M,
        }
    }
}

/// A drone snapshot: two position samples a short interval apart (defining
/// the direction of motion), the camera cone, and an optional gimbal yaw
/// offset of the camera relative to the motion vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DronePose {
    pub id: String,
    pub pos_t: GeoCoord,
    pub pos_t_delta: GeoCoord,
    pub camera: CameraSpec,
    pub gimbal_yaw_rad: Option<f64>,
}

impl DronePose {
    /// The motion direction is undefined when both samples coincide.
    pub fn validate(&self) -> Result<()> {
        if self.pos_t == self.pos_t_delta {
            return Err(GeometryError::DegeneratePose);
        }
        Ok(())
    }
}

/// How "nearby" is decided before the angular test.
///
/// `RadiusMeters` is the literal great-circle check; `LatLonDeg` bounds the
/// per-axis coordinate differences instead, which is the form the secure
/// protocol evaluates. The two coincide away from threshold boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VicinitySpec {
    RadiusMeters(f64),
    LatLonDeg { lat_deg: f64, lon_deg: f64 },
}

impl VicinitySpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            VicinitySpec::RadiusMeters(r) if r > 0.0 => Ok(()),
            VicinitySpec::RadiusMeters(r) => Err(GeometryError::NonPositive {
                what: "vicinity radius",
                value: r,
            }),
            VicinitySpec::LatLonDeg { lat_deg, lon_deg } => {
                if lat_deg > 0.0 && lon_deg > 0.0 {
                    Ok(())
                } else {
                    Err(GeometryError::NonPositive {
                        what: "vicinity threshold",
                        value: lat_deg.min(lon_deg),
                    })
                }
            }
        }
    }
}

/// Full outcome of one plaintext field-of-view evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FovReport {
    pub in_vicinity: bool,
    /// Angle between the camera axis and the citizen bearing; present only
    /// when the vicinity gate passed.
    pub phi_rad: Option<f64>,
    pub in_view: bool,
}
