use std::sync::{Arc, RwLock};

use serde::Serialize;

use skyveil_geometry::{meters_to_degree_thresholds, GeoCoord};
use skyveil_netlink::{
    query_as_citizen, serve_authority, CitizenQuery, ClientSeeds, FleetRegistry, QueryOutcome,
    WireConfig,
};
use skyveil_shortlist::ShortlistDecision;

use crate::{CliError, Result};

pub fn run_authority(args: &crate::args::AuthorityArgs) -> Result<()> {
    let registry = FleetRegistry::ingest_path(&args.fleet)?;
    eprintln!(
        "serving {} drones (region ref {:.2}, {:.2}) on {}",
        registry.len(),
        registry.region().lat,
        registry.region().lon,
        args.listen
    );
    let handle = serve_authority(
        Arc::new(RwLock::new(registry)),
        &args.listen,
        WireConfig {
            dealer_seed: args.dealer_seed,
            session_seed: args.session_seed,
        },
    )?;
    eprintln!("listening on {}", handle.local_addr());
    // Serve until killed.
    loop {
        std::thread::sleep(std::time::Duration::from_secs(3600));
    }
}

#[derive(Serialize)]
struct TranscriptSummary {
    n: usize,
    total_bytes: u64,
    citizen_to_authority_bytes: u64,
    authority_to_citizen_bytes: u64,
    rounds: u32,
    preprocessing_bytes: u64,
    socket_bytes_sent: u64,
    socket_bytes_received: u64,
    wall_ms: f64,
}

#[derive(Serialize)]
struct CitizenReport<'a> {
    decisions: &'a [ShortlistDecision],
    transcript: TranscriptSummary,
}

pub fn resolve_vicinity(
    lat: f64,
    radius_m: Option<f64>,
    lat_vic: Option<f64>,
    lon_vic: Option<f64>,
) -> Result<(f64, f64)> {
    match (radius_m, lat_vic, lon_vic) {
        (Some(r), None, None) => Ok(meters_to_degree_thresholds(r, lat)?),
        (None, Some(lat_v), Some(lon_v)) => Ok((lat_v, lon_v)),
        _ => Err(CliError::Usage(
            "give either --radius-m or both --lat-vic-deg and --lon-vic-deg".into(),
        )),
    }
}

pub fn run_citizen(args: &crate::args::CitizenArgs) -> Result<()> {
    let (lat_vic, lon_vic) =
        resolve_vicinity(args.lat, args.radius_m, args.lat_vic_deg, args.lon_vic_deg)?;
    let query = CitizenQuery {
        pos: GeoCoord::new(args.lat, args.lon).map_err(|e| CliError::Usage(e.to_string()))?,
        lat_vicinity_deg: lat_vic,
        lon_vicinity_deg: lon_vic,
        variant: args.variant,
    };
    let seeds = ClientSeeds {
        citizen_seed: args.citizen_seed,
        mask_seed: args.mask_seed,
        dealer_seed: args.dealer_seed,
    };
    let outcome = query_as_citizen(&args.connect, &query, seeds)?;
    print_outcome(&outcome, args.json);
    Ok(())
}

fn print_outcome(outcome: &QueryOutcome, json: bool) {
    let summary = TranscriptSummary {
        n: outcome.n,
        total_bytes: outcome.transcript.total_online_bytes(),
        citizen_to_authority_bytes: outcome.transcript.citizen_to_authority_bytes(),
        authority_to_citizen_bytes: outcome.transcript.authority_to_citizen_bytes(),
        rounds: outcome.transcript.rounds(),
        preprocessing_bytes: outcome.transcript.preprocessing_bytes(),
        socket_bytes_sent: outcome.socket_bytes_sent,
        socket_bytes_received: outcome.socket_bytes_received,
        wall_ms: outcome.wall.as_secs_f64() * 1e3,
    };
    if json {
        let report = CitizenReport {
            decisions: &outcome.decisions,
            transcript: summary,
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return;
    }
    println!("id               vicinity  phi_deg   shortlisted");
    for d in &outcome.decisions {
        println!(
            "{:<16} {:<9} {:<9} {}",
            d.id,
            if d.in_vicinity { "yes" } else { "no" },
            d.phi_rad
                .map(|p| format!("{:.2}", p.to_degrees()))
                .unwrap_or_else(|| "-".into()),
            if d.shortlisted {
                "YES"
            } else if d.invalid {
                "invalid"
            } else {
                "no"
            }
        );
    }
    let shortlisted = outcome.decisions.iter().filter(|d| d.shortlisted).count();
    println!(
        "\n{} of {} drones shortlisted; {} bytes up, {} bytes down, {} rounds, {:.1} ms",
        shortlisted,
        outcome.n,
        summary.socket_bytes_sent,
        summary.socket_bytes_received,
        summary.rounds,
        summary.wall_ms
    );
}
