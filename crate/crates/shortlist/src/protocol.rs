use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use skyveil_mpc::{
    dealer_generate_triples, preprocessing_bytes, run_segment_as, FixedPoint, PartyExec, PartyRole,
    PipeChannel, ProtocolVariant, RevealedValue, SessionChannel, SessionParams, Transcript,
    TranscriptingChannel,
};

use crate::inputs::encode_drone;
use crate::{
    build_gated_phase2, build_gated_plan, build_vicinity_plan, citizen_postprocess, decide_drone,
    encode_authority_inputs, encode_citizen_inputs, AuthorityInputs, CitizenInput, RegionRef,
    Result, ShortlistDecision, ShortlistError, ShortlistRecord,
};

/// What a citizen session yields: raw records for the oblivious variant
/// (post-processing is a separate plaintext step), or finished decisions
/// for the gated one.
#[derive(Debug, Clone, PartialEq)]
pub enum SessionOutput {
    Records(Vec<ShortlistRecord>),
    Decisions(Vec<ShortlistDecision>),
}

impl SessionOutput {
    /// Decisions either way: records are post-processed with the thetas.
    pub fn into_decisions(self, thetas: &[f64]) -> Vec<ShortlistDecision> {
        match self {
            SessionOutput::Records(records) => citizen_postprocess(&records, thetas),
            SessionOutput::Decisions(d) => d,
        }
    }
}

fn provision(params: &SessionParams, role: PartyRole) -> (skyveil_mpc::TriplePool, u64) {
    let count = 12 * params.n + 2;
    let (citizen_pool, authority_pool) = dealer_generate_triples(params.dealer_seed, count);
    let pool = match role {
        PartyRole::Citizen => citizen_pool,
        PartyRole::Authority => authority_pool,
    };
    (pool, preprocessing_bytes(count))
}

fn gated_indices(nearby: &[(i128, i128)]) -> Vec<usize> {
    nearby
        .iter()
        .enumerate()
        .filter(|(_, (lat, lon))| *lat <= 0 && *lon <= 0)
        .map(|(i, _)| i)
        .collect()
}

/// Run the citizen side of one session over a channel. `ids` and `thetas`
/// are the public fleet metadata (wire sessions receive them from the
/// authority before this runs). The transcript accounts every message this
/// function moves, plus the dealer provisioning as preprocessing.
pub fn run_citizen_session(
    channel: &mut dyn SessionChannel,
    transcript: &mut Transcript,
    params: &SessionParams,
    citizen: &CitizenInput,
    region: &RegionRef,
    ids: &[String],
    thetas: &[f64],
) -> Result<SessionOutput> {
    if ids.len() != params.n || thetas.len() != params.n {
        return Err(ShortlistError::FleetSizeMismatch {
            session: params.n,
            inputs: ids.len().min(thetas.len()),
        });
    }
    let inputs = encode_citizen_inputs(citizen, region, params.n, &params.scales)?;
    let (pool, prep) = provision(params, PartyRole::Citizen);
    transcript.add_preprocessing(prep);
    let mut exec = PartyExec::new(
        PartyRole::Citizen,
        pool,
        ChaCha20Rng::seed_from_u64(params.citizen_seed),
    );
    let mut chan = TranscriptingChannel::new(channel, PartyRole::Citizen, transcript);

    match params.variant {
        ProtocolVariant::Oblivious => {
            let (segment, layout) = build_vicinity_plan(params.n, &params.scales)?;
            let revealed = run_segment_as(&mut exec, &segment, &inputs, &mut chan)?;
            let records = assemble_records(&revealed, &layout, ids)?;
            Ok(SessionOutput::Records(records))
        }
        ProtocolVariant::NonOblivious => {
            let (segment, layout) = build_gated_plan(params.n, &params.scales)?;
            let revealed = run_segment_as(&mut exec, &segment, &inputs, &mut chan)?;
            let nearby = pair_nearby(&revealed, params.n)?;
            let gated = gated_indices(&nearby);
            let phase2 = build_gated_phase2(&layout, &gated, &params.scales)?;
            let angular = run_segment_as(&mut exec, &phase2.segment, &[], &mut chan)?;
            if angular.len() != 2 * gated.len() {
                return Err(skyveil_mpc::MpcError::Protocol(format!(
                    "expected {} angular reveals, got {}",
                    2 * gated.len(),
                    angular.len()
                ))
                .into());
            }
            let mut decisions = Vec::with_capacity(params.n);
            let mut gate_slot = 0usize;
            for (i, (nlat, nlon)) in nearby.iter().enumerate() {
                let pair = if gated.contains(&i) {
                    let dotp = angular[2 * gate_slot].value;
                    let norm_sq = angular[2 * gate_slot + 1].value;
                    gate_slot += 1;
                    Some((dotp, norm_sq))
                } else {
                    None
                };
                decisions.push(decide_drone(
                    &ids[i],
                    *nlat,
                    *nlon,
                    pair.as_ref().map(|(d, n)| (d, n)),
                    thetas[i],
                ));
            }
            Ok(SessionOutput::Decisions(decisions))
        }
    }
}

/// Run the authority side of one session over a channel. The authority
/// contributes the fleet inputs and its masks, and learns nothing beyond
/// the transcript shape (plus, in the gated variant, the opened vicinity
/// predicate it is designed to leak).
pub fn run_authority_session(
    channel: &mut dyn SessionChannel,
    params: &SessionParams,
    authority: &AuthorityInputs,
) -> Result<()> {
    if authority.drones.len() != params.n {
        return Err(ShortlistError::FleetSizeMismatch {
            session: params.n,
            inputs: authority.drones.len(),
        });
    }
    let (pool, _) = provision(params, PartyRole::Authority);
    let mut exec = PartyExec::new(
        PartyRole::Authority,
        pool,
        ChaCha20Rng::seed_from_u64(params.authority_seed),
    );
    let mut chan = channel;

    match params.variant {
        ProtocolVariant::Oblivious => {
            let inputs = encode_authority_inputs(authority, &params.scales)?;
            let (segment, _) = build_vicinity_plan(params.n, &params.scales)?;
            run_segment_as(&mut exec, &segment, &inputs, &mut chan)?;
            Ok(())
        }
        ProtocolVariant::NonOblivious => {
            authority.validate()?;
            let mut inputs = Vec::with_capacity(4 * params.n);
            for (drone, masks) in authority.drones.iter().zip(&authority.masks.0) {
                let e = encode_drone(drone, &authority.region, &params.scales)?;
                inputs.extend_from_slice(&[
                    e.lat,
                    e.lon,
                    FixedPoint::from_raw(
                        skyveil_mpc::RingElement::from_signed(masks.lat as i128),
                        params.scales.mask,
                    ),
                    FixedPoint::from_raw(
                        skyveil_mpc::RingElement::from_signed(masks.lon as i128),
                        params.scales.mask,
                    ),
                ]);
            }
            let (segment, layout) = build_gated_plan(params.n, &params.scales)?;
            let revealed = run_segment_as(&mut exec, &segment, &inputs, &mut chan)?;
            let nearby = pair_nearby(&revealed, params.n)?;
            let gated = gated_indices(&nearby);
            let phase2 = build_gated_phase2(&layout, &gated, &params.scales)?;
            let mut phase2_inputs = Vec::with_capacity(4 * gated.len());
            for &i in &gated {
                let e = encode_drone(&authority.drones[i], &authority.region, &params.scales)?;
                phase2_inputs.extend_from_slice(&[e.dx, e.dy, e.dnorm_sq, e.cos_lat]);
            }
            run_segment_as(&mut exec, &phase2.segment, &phase2_inputs, &mut chan)?;
            Ok(())
        }
    }
}

fn pair_nearby(revealed: &[RevealedValue], n: usize) -> Result<Vec<(i128, i128)>> {
    if revealed.len() != 2 * n {
        return Err(skyveil_mpc::MpcError::Protocol(format!(
            "expected {} vicinity reveals, got {}",
            2 * n,
            revealed.len()
        ))
        .into());
    }
    Ok(revealed
        .chunks_exact(2)
        .map(|pair| (pair[0].value.signed_raw(), pair[1].value.signed_raw()))
        .collect())
}

fn assemble_records(
    revealed: &[RevealedValue],
    layout: &crate::VicinityLayout,
    ids: &[String],
) -> Result<Vec<ShortlistRecord>> {
    if revealed.len() != 4 * layout.n {
        return Err(skyveil_mpc::MpcError::Protocol(format!(
            "expected {} reveals, got {}",
            4 * layout.n,
            revealed.len()
        ))
        .into());
    }
    let mut records = Vec::with_capacity(layout.n);
    for (i, chunk) in revealed.chunks_exact(4).enumerate() {
        debug_assert_eq!(chunk[0].wire, layout.dotp[i]);
        records.push(ShortlistRecord {
            id: ids[i].clone(),
            dotp: chunk[0].value,
            norm_sq: chunk[1].value,
            nearby_lat: chunk[2].value,
            nearby_lon: chunk[3].value,
        });
    }
    Ok(records)
}

fn run_in_process(
    params: &SessionParams,
    citizen: &CitizenInput,
    authority: &AuthorityInputs,
) -> Result<(SessionOutput, Transcript)> {
    let (chan_c, chan_a) = PipeChannel::pair();
    let params_a = *params;
    let authority_clone = authority.clone();
    let handle = std::thread::spawn(move || {
        let mut chan = chan_a;
        run_authority_session(&mut chan, &params_a, &authority_clone)
    });

    let mut transcript = Transcript::new();
    let mut chan = chan_c;
    let ids = authority.ids();
    let thetas = authority.thetas();
    let output = run_citizen_session(
        &mut chan,
        &mut transcript,
        params,
        citizen,
        &authority.region,
        &ids,
        &thetas,
    );
    let authority_result = handle
        .join()
        .map_err(|_| skyveil_mpc::MpcError::ChannelClosed)?;
    authority_result?;
    Ok((output?, transcript))
}

/// In-process oblivious session: both parties simulated over memory pipes.
/// Returns the records revealed to the citizen and the citizen-side
/// transcript.
pub fn run_oblivious(
    citizen: &CitizenInput,
    authority: &AuthorityInputs,
    params: &SessionParams,
) -> Result<(Vec<ShortlistRecord>, Transcript)> {
    let params = SessionParams {
        variant: ProtocolVariant::Oblivious,
        ..*params
    };
    match run_in_process(&params, citizen, authority)? {
        (SessionOutput::Records(r), t) => Ok((r, t)),
        _ => unreachable!("oblivious sessions yield records"),
    }
}

/// In-process gated (non-oblivious) session. Returns finished decisions
/// and the citizen-side transcript, whose size grows with the number of
/// drones near the citizen.
pub fn run_non_oblivious(
    citizen: &CitizenInput,
    authority: &AuthorityInputs,
    params: &SessionParams,
) -> Result<(Vec<ShortlistDecision>, Transcript)> {
    let params = SessionParams {
        variant: ProtocolVariant::NonOblivious,
        ..*params
    };
    match run_in_process(&params, citizen, authority)? {
        (SessionOutput::Decisions(d), t) => Ok((d, t)),
        _ => unreachable!("gated sessions yield decisions"),
    }
}
