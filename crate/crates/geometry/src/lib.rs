//! Plaintext geometry for drone field-of-view queries.
//!
//! Everything in this crate is ordinary `f64` math over GPS coordinates:
//! equirectangular projection onto a local East/North plane, haversine
//! distances, camera cone-of-vision angles and the full per-drone
//! field-of-view decision. The secure protocol crates compute the same
//! quantities under secret sharing; this crate is their correctness oracle
//! and also serves the operator-facing CLI directly.

mod ops;
mod types;

pub use ops::{
    angle_between, camera_half_angle, detect_field_of_view, fov_report, haversine_distance,
    meters_to_degree_thresholds, rotate_vector, vectorize, vertical_fov_check,
};
pub use types::{
    CameraSpec, DronePose, FovReport, GeoCoord, GeometryConstants, PlanarVector, VicinitySpec,
    EARTH_RADIUS_M,
};

/// Errors for domain violations in geometric computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("{what} must be positive (got {value})")]
    NonPositive { what: &'static str, value: f64 },
    #[error("coordinate out of range: lat {lat}, lon {lon}")]
    InvalidCoordinate { lat: f64, lon: f64 },
    #[error("zero-length vector has no direction")]
    ZeroVector,
    #[error("drone pose is degenerate: both position samples coincide")]
    DegeneratePose,
    #[error("latitude {0} too close to a pole for longitude thresholds")]
    PolarLatitude(f64),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
