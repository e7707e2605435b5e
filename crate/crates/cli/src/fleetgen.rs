use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use skyveil_netlink::FleetRecord;

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy)]
pub struct BBox {
    pub lat_min: f64,
    pub lon_min: f64,
    pub lat_max: f64,
    pub lon_max: f64,
}

impl std::str::FromStr for BBox {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("bad bbox '{s}': {e}")))?;
        if parts.len() != 4 {
            return Err(CliError::Usage(format!(
                "bbox needs lat_min,lon_min,lat_max,lon_max, got '{s}'"
            )));
        }
        let bbox = BBox {
            lat_min: parts[0],
            lon_min: parts[1],
            lat_max: parts[2],
            lon_max: parts[3],
        };
        if !(bbox.lat_min < bbox.lat_max && bbox.lon_min < bbox.lon_max) {
            return Err(CliError::Usage(format!("bbox '{s}' is inverted or empty")));
        }
        if bbox.lat_min.abs().max(bbox.lat_max.abs()) > 69.0 {
            return Err(CliError::Usage(
                "bbox latitudes must stay within +/-69 degrees".into(),
            ));
        }
        if bbox.lat_max - bbox.lat_min > 1.5 || bbox.lon_max - bbox.lon_min > 1.5 {
            return Err(CliError::Usage(
                "bbox spans more than 1.5 degrees; fleets must fit one deployment region".into(),
            ));
        }
        Ok(bbox)
    }
}

/// Uniform positions over the bbox, uniform headings, one second of travel
/// at 5-25 m/s, camera half-angles in [20, 45] degrees.
pub fn generate_fleet(n: u64, bbox: BBox, seed: u64) -> Vec<FleetRecord> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let lat = rng.gen_range(bbox.lat_min..bbox.lat_max);
            let lon = rng.gen_range(bbox.lon_min..bbox.lon_max);
            let heading = rng.gen_range(0.0..std::f64::consts::TAU);
            let speed_m_s = rng.gen_range(5.0..25.0);
            FleetRecord {
                id: format!("drone-{i:06}"),
                lat_t: lat,
                lon_t: lon,
                lat_t2: lat + speed_m_s * heading.cos() / 111_195.0,
                lon_t2: lon + speed_m_s * heading.sin() / (111_195.0 * lat.to_radians().cos()),
                theta_deg: rng.gen_range(20.0..=45.0),
                gimbal_yaw_deg: None,
            }
        })
        .collect()
}

pub fn write_fleet(records: &[FleetRecord], mut out: impl Write) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn run(args: &crate::args::FleetgenArgs) -> Result<()> {
    let bbox: BBox = args.bbox.parse()?;
    let records = generate_fleet(args.n, bbox, args.seed);
    let file = std::fs::File::create(&args.out)?;
    write_fleet(&records, std::io::BufWriter::new(file))?;
    eprintln!("wrote {} drones to {}", records.len(), args.out.display());
    Ok(())
}
