use skyveil_geometry::{fov_report, CameraSpec, DronePose, GeoCoord, VicinitySpec};

use crate::query::resolve_vicinity;
use crate::{CliError, Result};

pub fn run(args: &crate::args::OracleArgs) -> Result<()> {
    let drone = DronePose {
        id: "oracle".into(),
        pos_t: GeoCoord::new(args.drone_lat, args.drone_lon)
            .map_err(|e| CliError::Usage(e.to_string()))?,
        pos_t_delta: GeoCoord::new(args.drone_lat2, args.drone_lon2)
            .map_err(|e| CliError::Usage(e.to_string()))?,
        camera: CameraSpec::from_half_angle(args.theta_deg.to_radians())
            .map_err(|e| CliError::Usage(e.to_string()))?,
        gimbal_yaw_rad: args.gimbal_yaw_deg.map(f64::to_radians),
    };
    let citizen = GeoCoord::new(args.lat, args.lon).map_err(|e| CliError::Usage(e.to_string()))?;
    let vicinity = match args.radius_m {
        Some(r) => VicinitySpec::RadiusMeters(r),
        None => {
            let (lat_v, lon_v) =
                resolve_vicinity(args.lat, None, args.lat_vic_deg, args.lon_vic_deg)?;
            VicinitySpec::LatLonDeg {
                lat_deg: lat_v,
                lon_deg: lon_v,
            }
        }
    };
    let report =
        fov_report(citizen, &drone, &vicinity).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
