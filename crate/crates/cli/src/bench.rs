use std::io::Write;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use skyveil_mpc::ProtocolVariant;
use skyveil_netlink::{
    query_as_citizen, serve_authority, CitizenQuery, ClientSeeds, FleetRegistry, WireConfig,
};

use crate::fleetgen::{generate_fleet, BBox};
use crate::{CliError, Result};

pub const CSV_HEADER: &str =
    "n,variant,total_bytes,c2a_bytes,a2c_bytes,rounds,preprocessing_bytes,wall_ms";

/// One measured query session.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub variant: ProtocolVariant,
    pub total_bytes: u64,
    pub c2a_bytes: u64,
    pub a2c_bytes: u64,
    pub rounds: u32,
    pub preprocessing_bytes: u64,
    pub wall_ms: f64,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.3}",
            self.n,
            self.variant.as_str(),
            self.total_bytes,
            self.c2a_bytes,
            self.a2c_bytes,
            self.rounds,
            self.preprocessing_bytes,
            self.wall_ms
        )
    }
}

const BENCH_BBOX: BBox = BBox {
    lat_min: 11.95,
    lon_min: 76.95,
    lat_max: 12.05,
    lon_max: 77.05,
};

/// Loopback-measured sessions: for each fleet size, serve a generated
/// fleet and run `repeats` full wire queries against it. Byte columns of
/// oblivious rows are deterministic; wall time is not.
pub fn measure(n_list: &[usize], repeats: u32, variant: ProtocolVariant, seed: u64) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in n_list {
        let records = generate_fleet(n as u64, BENCH_BBOX, seed ^ n as u64);
        let mut jsonl = Vec::new();
        crate::fleetgen::write_fleet(&records, &mut jsonl)?;
        let registry = FleetRegistry::ingest_reader(jsonl.as_slice())?;
        let config = WireConfig {
            dealer_seed: ClientSeeds::default().dealer_seed,
            session_seed: seed,
        };
        let server = serve_authority(Arc::new(RwLock::new(registry)), "127.0.0.1:0", config)?;

        let query = CitizenQuery {
            pos: skyveil_geometry::GeoCoord::new(12.0, 77.0)
                .map_err(|e| CliError::Usage(e.to_string()))?,
            lat_vicinity_deg: 0.005,
            lon_vicinity_deg: 0.005 / 12f64.to_radians().cos(),
            variant,
        };
        for _ in 0..repeats {
            let outcome = query_as_citizen(server.local_addr(), &query, ClientSeeds::default())?;
            rows.push(BenchRow {
                n,
                variant,
                total_bytes: outcome.transcript.total_online_bytes(),
                c2a_bytes: outcome.transcript.citizen_to_authority_bytes(),
                a2c_bytes: outcome.transcript.authority_to_citizen_bytes(),
                rounds: outcome.transcript.rounds(),
                preprocessing_bytes: outcome.transcript.preprocessing_bytes(),
                wall_ms: outcome.wall.as_secs_f64() * 1e3,
            });
        }
        server.shutdown();
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    Ok(())
}

pub fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    let list: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad n list '{s}': {e}")))?;
    if list.is_empty() || list.contains(&0) {
        return Err(CliError::Usage("fleet sizes must be positive".into()));
    }
    Ok(list)
}

pub fn run(args: &crate::args::BenchArgs) -> Result<()> {
    let n_list = parse_n_list(&args.n_list)?;
    let rows = measure(&n_list, args.repeats, args.variant, args.seed)?;
    let file = std::fs::File::create(&args.out)?;
    write_csv(&rows, std::io::BufWriter::new(file))?;

    match args.units.as_str() {
        "mb" => {
            println!("{:>8} {:>14} {:>10}", "n", "variant", "MB/query");
            for row in &rows {
                println!(
                    "{:>8} {:>14} {:>10.3}",
                    row.n,
                    row.variant.as_str(),
                    row.total_bytes as f64 / 1e6
                );
            }
        }
        "bytes" => {
            println!("{:>8} {:>14} {:>12}", "n", "variant", "bytes/query");
            for row in &rows {
                println!("{:>8} {:>14} {:>12}", row.n, row.variant.as_str(), row.total_bytes);
            }
        }
        other => return Err(CliError::Usage(format!("unknown units '{other}'"))),
    }
    eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}
