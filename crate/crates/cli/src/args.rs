use clap::{Args, Parser, Subcommand};

use skyveil_mpc::ProtocolVariant;

#[derive(Parser)]
#[command(
    name = "skyveil",
    version,
    about = "Privacy-preserving drone field-of-view queries and footage-audit verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a synthetic drone fleet as JSONL
    Fleetgen(FleetgenArgs),
    /// Serve a fleet registry and its query endpoint
    Authority(AuthorityArgs),
    /// Query an authority for drones that may have you in camera view
    Citizen(CitizenArgs),
    /// Measure per-query traffic across fleet sizes, to CSV
    Bench(BenchArgs),
    /// Evaluate the plaintext field-of-view decision for one drone
    Oracle(OracleArgs),
    /// Build and sign an audit trail from a launch-entry file
    AuditSign(AuditSignArgs),
    /// Run the three audit checks against a signed trail
    AuditVerify(AuditVerifyArgs),
}

#[derive(Args)]
pub struct FleetgenArgs {
    /// Number of drones
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Bounding box as lat_min,lon_min,lat_max,lon_max
    #[arg(long)]
    pub bbox: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output path for the JSONL fleet
    #[arg(long)]
    pub out: std::path::PathBuf,
}

#[derive(Args)]
pub struct AuthorityArgs {
    /// Fleet JSONL file to serve
    #[arg(long)]
    pub fleet: std::path::PathBuf,
    /// Listen address, e.g. 127.0.0.1:7700
    #[arg(long)]
    pub listen: String,
    /// Preprocessing seed; must match the citizens'
    #[arg(long, default_value_t = skyveil_netlink::WireConfig::default().dealer_seed)]
    pub dealer_seed: u64,
    /// Per-session authority randomness seed
    #[arg(long, default_value_t = skyveil_netlink::WireConfig::default().session_seed)]
    pub session_seed: u64,
}

#[derive(Args)]
pub struct CitizenArgs {
    /// Authority address, e.g. 127.0.0.1:7700
    #[arg(long)]
    pub connect: String,
    #[arg(long)]
    pub lat: f64,
    #[arg(long)]
    pub lon: f64,
    /// Vicinity radius in meters (converted to degree thresholds)
    #[arg(long, conflicts_with_all = ["lat_vic_deg", "lon_vic_deg"])]
    pub radius_m: Option<f64>,
    /// Latitude vicinity threshold in degrees
    #[arg(long, requires = "lon_vic_deg")]
    pub lat_vic_deg: Option<f64>,
    /// Longitude vicinity threshold in degrees
    #[arg(long, requires = "lat_vic_deg")]
    pub lon_vic_deg: Option<f64>,
    #[arg(long, default_value = "oblivious")]
    pub variant: ProtocolVariant,
    /// Emit the decision table and transcript summary as JSON
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = skyveil_netlink::ClientSeeds::default().citizen_seed)]
    pub citizen_seed: u64,
    #[arg(long, default_value_t = skyveil_netlink::ClientSeeds::default().mask_seed)]
    pub mask_seed: u64,
    /// Preprocessing seed; must match the authority's
    #[arg(long, default_value_t = skyveil_netlink::WireConfig::default().dealer_seed)]
    pub dealer_seed: u64,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated fleet sizes, e.g. 100,200,500,1000
    #[arg(long)]
    pub n_list: String,
    #[arg(long, default_value_t = 1)]
    pub repeats: u32,
    /// CSV output path
    #[arg(long)]
    pub out: std::path::PathBuf,
    #[arg(long, default_value = "oblivious")]
    pub variant: ProtocolVariant,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Also print a table in the given units (bytes|mb)
    #[arg(long, default_value = "bytes")]
    pub units: String,
}

#[derive(Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub drone_lat: f64,
    #[arg(long)]
    pub drone_lon: f64,
    #[arg(long)]
    pub drone_lat2: f64,
    #[arg(long)]
    pub drone_lon2: f64,
    #[arg(long)]
    pub theta_deg: f64,
    #[arg(long)]
    pub gimbal_yaw_deg: Option<f64>,
    #[arg(long)]
    pub lat: f64,
    #[arg(long)]
    pub lon: f64,
    #[arg(long, conflicts_with_all = ["lat_vic_deg", "lon_vic_deg"])]
    pub radius_m: Option<f64>,
    #[arg(long, requires = "lon_vic_deg")]
    pub lat_vic_deg: Option<f64>,
    #[arg(long, requires = "lat_vic_deg")]
    pub lon_vic_deg: Option<f64>,
}

#[derive(Args)]
pub struct AuditSignArgs {
    /// Signing-key seed (the simulated device key)
    #[arg(long, default_value_t = 1)]
    pub key_seed: u64,
    /// JSON array of launch entries {timestamp_ms, manifest, attestation}
    #[arg(long)]
    pub entries: std::path::PathBuf,
    /// Output path for the signed trail
    #[arg(long)]
    pub out: std::path::PathBuf,
}

#[derive(Args)]
pub struct AuditVerifyArgs {
    /// Signed trail file
    #[arg(long)]
    pub trail: std::path::PathBuf,
    /// Policy JSON (sensitive topics, sanitizer id, allowlist)
    #[arg(long)]
    pub policy: Option<std::path::PathBuf>,
    /// Expected measurement database JSON (component -> hash hex)
    #[arg(long)]
    pub measurements: Option<std::path::PathBuf>,
}
