use std::net::{TcpStream, ToSocketAddrs};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use skyveil_geometry::GeoCoord;
use skyveil_mpc::{
    Direction, MessageTag, ProtocolVariant, SessionChannel, SessionParams, Transcript,
};
use skyveil_shortlist::{
    make_masks, run_citizen_session, CitizenInput, SessionOutput, ShortlistDecision,
    ShortlistRecord,
};

use crate::wire::{decode_thetas_ids, FramedChannel, Hello, PROTOCOL_VERSION};
use crate::{NetError, Result};

/// What a citizen asks: position, vicinity thresholds, protocol variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CitizenQuery {
    pub pos: GeoCoord,
    pub lat_vicinity_deg: f64,
    pub lon_vicinity_deg: f64,
    pub variant: ProtocolVariant,
}

/// Client-side randomness. The dealer seed must match the authority's.
#[derive(Debug, Clone, Copy)]
pub struct ClientSeeds {
    pub citizen_seed: u64,
    pub mask_seed: u64,
    pub dealer_seed: u64,
}

impl Default for ClientSeeds {
    fn default() -> Self {
        Self {
            citizen_seed: 0xC171_2E4,
            mask_seed: 0x3A5C,
            dealer_seed: crate::WireConfig::default().dealer_seed,
        }
    }
}

/// Everything a completed query yields, including the exact traffic
/// accounting the session produced.
#[derive(Debug, Clone)]
pub struct QueryOutcome {
    pub n: usize,
    pub ids: Vec<String>,
    pub thetas: Vec<f64>,
    pub records: Option<Vec<ShortlistRecord>>,
    pub decisions: Vec<ShortlistDecision>,
    pub transcript: Transcript,
    pub socket_bytes_sent: u64,
    pub socket_bytes_received: u64,
    pub frames_sent: u64,
    pub frames_received: u64,
    pub wall: Duration,
}

fn send_control(
    framed: &mut FramedChannel<TcpStream>,
    transcript: &mut Transcript,
    tag: MessageTag,
    payload: &[u8],
) -> Result<()> {
    SessionChannel::send(framed, tag, payload)?;
    transcript.record(Direction::CitizenToAuthority, tag, payload.len() as u64);
    Ok(())
}

fn recv_control(
    framed: &mut FramedChannel<TcpStream>,
    transcript: &mut Transcript,
    tag: MessageTag,
) -> Result<Vec<u8>> {
    let payload = SessionChannel::recv(framed, tag)?;
    transcript.record(Direction::AuthorityToCitizen, tag, payload.len() as u64);
    Ok(payload)
}

/// Run one full query session against an authority endpoint.
pub fn query_as_citizen(
    addr: impl ToSocketAddrs,
    query: &CitizenQuery,
    seeds: ClientSeeds,
) -> Result<QueryOutcome> {
    let start = Instant::now();
    let stream = TcpStream::connect(addr)?;
    stream.set_nodelay(true)?;
    stream.set_read_timeout(Some(Duration::from_secs(60)))?;
    let mut framed = FramedChannel::new(stream);
    let mut transcript = Transcript::new();

    send_control(
        &mut framed,
        &mut transcript,
        MessageTag::Hello,
        &Hello {
            version: PROTOCOL_VERSION,
            variant: query.variant,
            n: 0,
        }
        .to_bytes(),
    )?;
    let reply = Hello::from_bytes(&recv_control(&mut framed, &mut transcript, MessageTag::Hello)?)?;
    if reply.version != PROTOCOL_VERSION {
        return Err(NetError::VersionMismatch {
            ours: PROTOCOL_VERSION,
            theirs: reply.version,
        });
    }
    if reply.variant != query.variant {
        return Err(NetError::Protocol("authority changed the variant".into()));
    }

    let (region, ids, thetas) = decode_thetas_ids(&recv_control(
        &mut framed,
        &mut transcript,
        MessageTag::ThetasIds,
    )?)?;
    let n = ids.len();
    if n != reply.n as usize || n == 0 {
        return Err(NetError::Protocol(format!(
            "fleet metadata carries {n} drones, HELLO said {}",
            reply.n
        )));
    }

    let mut mask_rng = ChaCha20Rng::seed_from_u64(seeds.mask_seed);
    let citizen = CitizenInput {
        pos: query.pos,
        lat_vicinity_deg: query.lat_vicinity_deg,
        lon_vicinity_deg: query.lon_vicinity_deg,
        masks: make_masks(&mut mask_rng, n),
    };
    let params = SessionParams::new(n, query.variant).with_seeds(
        seeds.citizen_seed,
        0, // authority seed is the peer's affair
        seeds.dealer_seed,
    );

    let output = run_citizen_session(
        &mut framed,
        &mut transcript,
        &params,
        &citizen,
        &region,
        &ids,
        &thetas,
    )?;

    send_control(&mut framed, &mut transcript, MessageTag::Bye, &[])?;
    recv_control(&mut framed, &mut transcript, MessageTag::Bye)?;

    let records = match &output {
        SessionOutput::Records(r) => Some(r.clone()),
        SessionOutput::Decisions(_) => None,
    };
    let decisions = output.into_decisions(&thetas);

    Ok(QueryOutcome {
        n,
        ids,
        thetas,
        records,
        decisions,
        transcript,
        socket_bytes_sent: framed.bytes_sent(),
        socket_bytes_received: framed.bytes_received(),
        frames_sent: framed.frames_sent(),
        frames_received: framed.frames_received(),
        wall: start.elapsed(),
    })
}
