use crate::{
    DronePose, FovReport, GeoCoord, GeometryConstants, GeometryError, PlanarVector, Result,
    VicinitySpec,
};

/// Half-angle of a camera's cone of vision: `arctan(d / 2f)`.
pub fn camera_half_angle(focal_length_mm: f64, sensor_dim_mm: f64) -> Result<f64> {
    if !(focal_length_mm > 0.0) || !focal_length_mm.is_finite() {
        return Err(GeometryError::NonPositive {
            what: "focal length",
            value: focal_length_mm,
        });
    }
    if !(sensor_dim_mm > 0.0) || !sensor_dim_mm.is_finite() {
        return Err(GeometryError::NonPositive {
            what: "sensor dimension",
            value: sensor_dim_mm,
        });
    }
    Ok((sensor_dim_mm / (2.0 * focal_length_mm)).atan())
}

impl GeometryConstants {
    /// Equirectangular projection of `target` onto the tangent plane at
    /// `origin`: x East, y North, in meters. Coordinate differences are
    /// converted to radians before scaling by the Earth radius, and the
    /// longitude axis is compressed by cos(origin latitude).
    pub fn vectorize(&self, origin: GeoCoord, target: GeoCoord) -> PlanarVector {
        let dlat_rad = (target.lat - origin.lat).to_radians();
        let dlon_rad = (target.lon - origin.lon).to_radians();
        PlanarVector::new(
            self.earth_radius_m * dlon_rad * origin.lat.to_radians().cos(),
            self.earth_radius_m * dlat_rad,
        )
    }

    /// Great-circle distance in meters on the spherical model.
    pub fn haversine_distance(&self, a: GeoCoord, b: GeoCoord) -> f64 {
        let lat1 = a.lat.to_radians();
        let lat2 = b.lat.to_radians();
        let dlat = (b.lat - a.lat).to_radians();
        let dlon = (b.lon - a.lon).to_radians();
        let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
        2.0 * self.earth_radius_m * h.sqrt().min(1.0).asin()
    }

    /// Vicinity radius in meters converted to per-axis degree thresholds at
    /// the given latitude.
    pub fn meters_to_degree_thresholds(&self, radius_m: f64, at_lat_deg: f64) -> Result<(f64, f64)> {
        if !(radius_m > 0.0) || !radius_m.is_finite() {
            return Err(GeometryError::NonPositive {
                what: "vicinity radius",
                value: radius_m,
            });
        }
        if at_lat_deg.abs() >= 89.0 {
            return Err(GeometryError::PolarLatitude(at_lat_deg));
        }
        let lat_vicinity = radius_m / (self.earth_radius_m * std::f64::consts::PI / 180.0);
        let lon_vicinity = lat_vicinity / at_lat_deg.to_radians().cos();
        Ok((lat_vicinity, lon_vicinity))
    }
}

/// `vectorize` with the default Earth radius.
pub fn vectorize(origin: GeoCoord, target: GeoCoord) -> PlanarVector {
    GeometryConstants::default().vectorize(origin, target)
}

/// `haversine_distance` with the default Earth radius.
pub fn haversine_distance(a: GeoCoord, b: GeoCoord) -> f64 {
    GeometryConstants::default().haversine_distance(a, b)
}

/// `meters_to_degree_thresholds` with the default Earth radius.
pub fn meters_to_degree_thresholds(radius_m: f64, at_lat_deg: f64) -> Result<(f64, f64)> {
    GeometryConstants::default().meters_to_degree_thresholds(radius_m, at_lat_deg)
}

/// Angle between two plane vectors via the dot product, in [0, pi].
/// The cosine is clamped to [-1, 1] to absorb floating-point drift.
pub fn angle_between(d: PlanarVector, c: PlanarVector) -> Result<f64> {
    let dn = d.norm();
    let cn = c.norm();
    if dn == 0.0 || cn == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    Ok((d.dot(c) / (dn * cn)).clamp(-1.0, 1.0).acos())
}

/// Rotate a plane vector counterclockwise by `alpha_rad`. Norm-preserving.
pub fn rotate_vector(d: PlanarVector, alpha_rad: f64) -> PlanarVector {
    let (s, c) = alpha_rad.sin_cos();
    PlanarVector::new(d.x * c - d.y * s, d.x * s + d.y * c)
}

/// Whether a drone at altitude `altitude_m` and ground distance `dist_m`
/// keeps the ground point inside its vertical field of view:
/// `arctan(h / dist) < theta`, strict.
pub fn vertical_fov_check(altitude_m: f64, dist_m: f64, theta_rad: f64) -> Result<bool> {
    if !(dist_m > 0.0) || !dist_m.is_finite() {
        return Err(GeometryError::NonPositive {
            what: "ground distance",
            value: dist_m,
        });
    }
    if altitude_m < 0.0 || !altitude_m.is_finite() {
        return Err(GeometryError::NonPositive {
            what: "altitude",
            value: altitude_m,
        });
    }
    Ok((altitude_m / dist_m).atan() < theta_rad)
}

/// One full plaintext evaluation: vicinity gate first, then the angular
/// test against the camera axis.
///
/// The axis is the drone motion vector, rotated by the gimbal yaw when one
/// is present. The angular test is inclusive (`phi <= theta`), matching
/// the vicinity comparisons.
pub fn fov_report(citizen: GeoCoord, drone: &DronePose, vicinity: &VicinitySpec) -> Result<FovReport> {
    drone.validate()?;
    vicinity.validate()?;
    let consts = GeometryConstants::default();

    let in_vicinity = match *vicinity {
        VicinitySpec::RadiusMeters(r) => consts.haversine_distance(citizen, drone.pos_t) <= r,
        VicinitySpec::LatLonDeg { lat_deg, lon_deg } => {
            (citizen.lat - drone.pos_t.lat).abs() <= lat_deg
                && (citizen.lon - drone.pos_t.lon).abs() <= lon_deg
        }
    };
    if !in_vicinity {
        return Ok(FovReport {
            in_vicinity: false,
            phi_rad: None,
            in_view: false,
        });
    }

    let motion = consts.vectorize(drone.pos_t, drone.pos_t_delta);
    let axis = match drone.gimbal_yaw_rad {
        Some(alpha) => rotate_vector(motion, alpha),
        None => motion,
    };
    let bearing = consts.vectorize(drone.pos_t, citizen);
    let phi = angle_between(axis, bearing)?;
    Ok(FovReport {
        in_vicinity: true,
        phi_rad: Some(phi),
        in_view: phi <= drone.camera.half_angle_rad,
    })
}

/// Boolean form of [`fov_report`].
pub fn detect_field_of_view(
    citizen: GeoCoord,
    drone: &DronePose,
    vicinity: &VicinitySpec,
) -> Result<bool> {
    Ok(fov_report(citizen, drone, vicinity)?.in_view)
}
