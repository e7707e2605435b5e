use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use skyveil_geometry::{CameraSpec, DronePose, GeoCoord};
use skyveil_shortlist::{DroneInput, RegionRef, MAX_ABS_LAT_DEG, REGION_HALF_EXTENT_DEG};

use crate::wire::WIRE_ID_BYTES;
use crate::{NetError, Result};

/// One line of a fleet file: two position samples, the camera half-angle
/// in degrees, and an optional gimbal yaw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleetRecord {
    pub id: String,
    pub lat_t: f64,
    pub lon_t: f64,
    pub lat_t2: f64,
    pub lon_t2: f64,
    pub theta_deg: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gimbal_yaw_deg: Option<f64>,
}

impl FleetRecord {
    pub fn to_pose(&self) -> Result<DronePose> {
        if self.id.is_empty() {
            return Err(NetError::Protocol("drone id must be non-empty".into()));
        }
        if self.id.as_bytes().len() > WIRE_ID_BYTES {
            return Err(NetError::IdTooLong(self.id.clone()));
        }
        if !(self.theta_deg > 0.0 && self.theta_deg < 90.0) {
            return Err(NetError::Protocol(format!(
                "theta_deg {} outside (0, 90)",
                self.theta_deg
            )));
        }
        let pose = DronePose {
            id: self.id.clone(),
            pos_t: GeoCoord::new(self.lat_t, self.lon_t)?,
            pos_t_delta: GeoCoord::new(self.lat_t2, self.lon_t2)?,
            camera: CameraSpec::from_half_angle(self.theta_deg.to_radians())?,
            gimbal_yaw_rad: self.gimbal_yaw_deg.map(f64::to_radians),
        };
        pose.validate()?;
        Ok(pose)
    }

    pub fn from_pose(pose: &DronePose) -> Self {
        Self {
            id: pose.id.clone(),
            lat_t: pose.pos_t.lat,
            lon_t: pose.pos_t.lon,
            lat_t2: pose.pos_t_delta.lat,
            lon_t2: pose.pos_t_delta.lon,
            theta_deg: pose.camera.half_angle_rad.to_degrees(),
            gimbal_yaw_deg: pose.gimbal_yaw_rad.map(f64::to_degrees),
        }
    }
}

#[derive(Debug, Clone)]
struct DroneEntry {
    pose: DronePose,
    input: DroneInput,
    updated_at: u64,
}

/// The authority's fleet state. Entries keep insertion order (which fixes
/// the drone order of every session); queries run against immutable
/// snapshots so updates never perturb in-flight sessions.
#[derive(Debug, Clone)]
pub struct FleetRegistry {
    region: RegionRef,
    entries: Vec<DroneEntry>,
    by_id: HashMap<String, usize>,
    clock: u64,
}

/// An immutable per-query view of the fleet.
#[derive(Debug, Clone)]
pub struct FleetSnapshot {
    pub region: RegionRef,
    pub drones: Vec<DroneInput>,
    pub ids: Vec<String>,
    pub thetas: Vec<f64>,
}

impl FleetSnapshot {
    pub fn n(&self) -> usize {
        self.drones.len()
    }
}

impl FleetRegistry {
    /// Ingest a JSONL fleet file: one record per line, blank lines
    /// ignored. The deployment region reference is the centroid of the
    /// ingested positions snapped to a quarter-degree grid, and every
    /// position must fall within the region window around it.
    pub fn ingest_reader(reader: impl BufRead) -> Result<Self> {
        let mut records = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: FleetRecord =
                serde_json::from_str(&line).map_err(|e| NetError::FleetParse {
                    line: idx + 1,
                    msg: e.to_string(),
                })?;
            let pose = record.to_pose().map_err(|e| NetError::FleetParse {
                line: idx + 1,
                msg: e.to_string(),
            })?;
            records.push(pose);
        }

        let region = if records.is_empty() {
            RegionRef { lat: 0.0, lon: 0.0 }
        } else {
            let lat = records.iter().map(|p| p.pos_t.lat).sum::<f64>() / records.len() as f64;
            let lon = records.iter().map(|p| p.pos_t.lon).sum::<f64>() / records.len() as f64;
            RegionRef {
                lat: (lat * 4.0).round() / 4.0,
                lon: (lon * 4.0).round() / 4.0,
            }
        };

        let mut registry = Self {
            region,
            entries: Vec::with_capacity(records.len()),
            by_id: HashMap::new(),
            clock: 0,
        };
        for pose in records {
            registry.insert(pose)?;
        }
        Ok(registry)
    }

    pub fn ingest_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::ingest_reader(std::io::BufReader::new(file))
    }

    fn check_region(&self, pose: &DronePose) -> Result<()> {
        let c = pose.pos_t;
        if (c.lat - self.region.lat).abs() > REGION_HALF_EXTENT_DEG
            || (c.lon - self.region.lon).abs() > REGION_HALF_EXTENT_DEG
            || c.lat.abs() > MAX_ABS_LAT_DEG
        {
            return Err(NetError::Protocol(format!(
                "drone '{}' at ({}, {}) outside the deployment region around ({}, {})",
                pose.id, c.lat, c.lon, self.region.lat, self.region.lon
            )));
        }
        Ok(())
    }

    fn insert(&mut self, pose: DronePose) -> Result<()> {
        if self.by_id.contains_key(&pose.id) {
            return Err(NetError::DuplicateId(pose.id));
        }
        self.check_region(&pose)?;
        let input = DroneInput::from_pose(&pose)?;
        self.clock += 1;
        self.by_id.insert(pose.id.clone(), self.entries.len());
        self.entries.push(DroneEntry {
            pose,
            input,
            updated_at: self.clock,
        });
        Ok(())
    }

    /// Replace a drone's position pair, recomputing its derived inputs.
    /// Camera and gimbal stay as registered. Snapshots taken before the
    /// update are unaffected.
    pub fn update_drone(&mut self, id: &str, pos_t: GeoCoord, pos_t_delta: GeoCoord) -> Result<()> {
        let idx = *self
            .by_id
            .get(id)
            .ok_or_else(|| NetError::UnknownId(id.to_owned()))?;
        let mut pose = self.entries[idx].pose.clone();
        pose.pos_t = pos_t;
        pose.pos_t_delta = pos_t_delta;
        pose.validate()?;
        self.check_region(&pose)?;
        let input = DroneInput::from_pose(&pose)?;
        self.clock += 1;
        self.entries[idx] = DroneEntry {
            pose,
            input,
            updated_at: self.clock,
        };
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn region(&self) -> RegionRef {
        self.region
    }

    pub fn pose(&self, id: &str) -> Option<&DronePose> {
        self.by_id.get(id).map(|&i| &self.entries[i].pose)
    }

    pub fn input(&self, id: &str) -> Option<&DroneInput> {
        self.by_id.get(id).map(|&i| &self.entries[i].input)
    }

    pub fn updated_at(&self, id: &str) -> Option<u64> {
        self.by_id.get(id).map(|&i| self.entries[i].updated_at)
    }

    pub fn snapshot(&self) -> FleetSnapshot {
        FleetSnapshot {
            region: self.region,
            drones: self.entries.iter().map(|e| e.input.clone()).collect(),
            ids: self.entries.iter().map(|e| e.pose.id.clone()).collect(),
            thetas: self
                .entries
                .iter()
                .map(|e| e.pose.camera.half_angle_rad)
                .collect(),
        }
    }
}
