//! Acceptance suite: one test per shipping criterion, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them).

use std::collections::BTreeSet;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use skyveil_geometry::{fov_report, CameraSpec, DronePose, GeoCoord, VicinitySpec};
use skyveil_mpc::{ProtocolVariant, SessionParams};
use skyveil_netlink::{
    framing_overhead, query_as_citizen, serve_authority, CitizenQuery, ClientSeeds, FleetRegistry,
    WireConfig,
};
use skyveil_shortlist::{
    citizen_postprocess, make_masks, run_non_oblivious, run_oblivious, AuthorityInputs,
    AuthorityMasks, CitizenInput, DroneInput, MaskPair, RegionRef,
};

const REGION: RegionRef = RegionRef {
    lat: 12.0,
    lon: 77.0,
};

fn report(criterion: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("ACCEPTANCE {criterion}: PASS"),
        Err(msg) => {
            println!("ACCEPTANCE {criterion}: FAIL ({msg})");
            panic!("{criterion} failed: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn coord(lat: f64, lon: f64) -> GeoCoord {
    GeoCoord::new(lat, lon).unwrap()
}

fn random_pose(rng: &mut ChaCha20Rng, id: usize) -> DronePose {
    let lat = REGION.lat + rng.gen_range(-0.02..0.02);
    let lon = REGION.lon + rng.gen_range(-0.02..0.02);
    let heading = rng.gen_range(0.0..std::f64::consts::TAU);
    let speed = rng.gen_range(5.0..25.0);
    DronePose {
        id: format!("drone-{id:04}"),
        pos_t: coord(lat, lon),
        pos_t_delta: coord(
            lat + speed * heading.cos() / 111_195.0,
            lon + speed * heading.sin() / (111_195.0 * lat.to_radians().cos()),
        ),
        camera: CameraSpec::from_half_angle(rng.gen_range(20.0..45.0f64).to_radians()).unwrap(),
        gimbal_yaw_rad: None,
    }
}

fn authority_from(poses: &[DronePose], rng: &mut ChaCha20Rng) -> AuthorityInputs {
    AuthorityInputs {
        region: REGION,
        drones: poses.iter().map(|p| DroneInput::from_pose(p).unwrap()).collect(),
        masks: AuthorityMasks(make_masks(rng, poses.len())),
    }
}

fn random_citizen(rng: &mut ChaCha20Rng, n: usize) -> CitizenInput {
    let lat_vic = rng.gen_range(0.003..0.007);
    let lat = REGION.lat + rng.gen_range(-0.015..0.015);
    CitizenInput {
        pos: coord(lat, REGION.lon + rng.gen_range(-0.015..0.015)),
        lat_vicinity_deg: lat_vic,
        lon_vicinity_deg: lat_vic / lat.to_radians().cos(),
        masks: make_masks(rng, n),
    }
}

/// Fleet with exactly `k` drones inside the citizen's vicinity box.
fn density_fleet(rng: &mut ChaCha20Rng, n: usize, k: usize, citizen: &CitizenInput) -> Vec<DronePose> {
    (0..n)
        .map(|i| {
            let (dlat, dlon) = if i < k {
                (
                    rng.gen_range(-0.4..0.4) * citizen.lat_vicinity_deg,
                    rng.gen_range(-0.4..0.4) * citizen.lon_vicinity_deg,
                )
            } else {
                let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                (
                    s * citizen.lat_vicinity_deg * rng.gen_range(3.0..6.0),
                    s * citizen.lon_vicinity_deg * rng.gen_range(3.0..6.0),
                )
            };
            let lat = citizen.pos.lat + dlat;
            let lon = citizen.pos.lon + dlon;
            let heading: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            DronePose {
                id: format!("drone-{i:04}"),
                pos_t: coord(lat, lon),
                pos_t_delta: coord(
                    lat + 1.5e-4 * heading.cos(),
                    lon + 1.5e-4 * heading.sin(),
                ),
                camera: CameraSpec::from_half_angle(rng.gen_range(20.0..45.0f64).to_radians())
                    .unwrap(),
                gimbal_yaw_rad: None,
            }
        })
        .collect()
}

#[test]
fn criterion_1_oracle_equivalence() {
    report("1 oracle-equivalence", (|| {
        let started = std::time::Instant::now();
        let mut rng = ChaCha20Rng::seed_from_u64(0xACC1);
        for fleet_no in 0..200u64 {
            let n = rng.gen_range(1..=64);
            let poses: Vec<DronePose> = (0..n).map(|i| random_pose(&mut rng, i)).collect();
            let authority = authority_from(&poses, &mut rng);
            let citizen = random_citizen(&mut rng, n);
            let params = SessionParams::new(n, ProtocolVariant::Oblivious)
                .with_seeds(fleet_no + 1, fleet_no + 2, fleet_no + 3);

            let (records, _) = run_oblivious(&citizen, &authority, &params)
                .map_err(|e| format!("fleet {fleet_no}: {e}"))?;
            let decisions = citizen_postprocess(&records, &authority.thetas());

            let vicinity = VicinitySpec::LatLonDeg {
                lat_deg: citizen.lat_vicinity_deg,
                lon_deg: citizen.lon_vicinity_deg,
            };
            let mpc_ids: BTreeSet<&str> = decisions
                .iter()
                .filter(|d| d.shortlisted)
                .map(|d| d.id.as_str())
                .collect();
            let mut oracle_ids = BTreeSet::new();
            for (pose, decision) in poses.iter().zip(&decisions) {
                let oracle = fov_report(citizen.pos, pose, &vicinity).unwrap();
                if oracle.in_view {
                    oracle_ids.insert(pose.id.as_str());
                }
                if let (Some(got), Some(want)) = (decision.phi_rad, oracle.phi_rad) {
                    ensure!(
                        (got - want).abs() < 1e-3,
                        "fleet {fleet_no} drone {}: phi {got} vs {want}",
                        pose.id
                    );
                }
            }
            ensure!(
                mpc_ids == oracle_ids,
                "fleet {fleet_no}: shortlist {mpc_ids:?} != oracle {oracle_ids:?}"
            );
        }
        ensure!(
            started.elapsed() < std::time::Duration::from_secs(120),
            "took {:?}, budget is 2 minutes",
            started.elapsed()
        );
        Ok(())
    })());
}

#[test]
fn criterion_2_field_accuracy_analogue() {
    report("2 field-accuracy-analogue", (|| {
        // One fixed northbound drone; 20 hand-placed citizens whose ground
        // truth follows from the placement construction: bearing beta from
        // the motion axis and either inside or outside the vicinity box.
        let theta_deg = 30.0;
        let drone = DronePose {
            id: "field-drone".into(),
            pos_t: coord(12.0, 77.0),
            pos_t_delta: coord(12.001, 77.0),
            camera: CameraSpec::from_half_angle(theta_deg.to_radians()).unwrap(),
            gimbal_yaw_rad: None,
        };
        let vic = 0.005;
        // (bearing degrees, radial offset in degrees, expected in-view)
        let placements: [(f64, f64, bool); 20] = [
            (0.0, 0.002, true),
            (10.0, 0.002, true),
            (-10.0, 0.003, true),
            (20.0, 0.001, true),
            (-20.0, 0.002, true),
            (28.0, 0.003, true),
            (-28.0, 0.001, true),
            (5.0, 0.0005, true),
            (-15.0, 0.0025, true),
            (25.0, 0.002, true),
            (40.0, 0.002, false),
            (-40.0, 0.003, false),
            (60.0, 0.002, false),
            (-60.0, 0.001, false),
            (90.0, 0.003, false),
            (-90.0, 0.002, false),
            (135.0, 0.002, false),
            (180.0, 0.003, false),
            (32.5, 0.002, false),
            (0.0, 0.02, false), // dead ahead but outside the vicinity box
        ];

        let mut rng = ChaCha20Rng::seed_from_u64(0xACC2);
        let mut agree = 0;
        for (i, &(beta_deg, r, expected)) in placements.iter().enumerate() {
            let beta = beta_deg.to_radians();
            let pos = coord(
                12.0 + r * beta.cos(),
                77.0 + r * beta.sin() / 12f64.to_radians().cos(),
            );
            let citizen = CitizenInput {
                pos,
                lat_vicinity_deg: vic,
                lon_vicinity_deg: vic / 12f64.to_radians().cos(),
                masks: make_masks(&mut rng, 1),
            };
            let authority = AuthorityInputs {
                region: REGION,
                drones: vec![DroneInput::from_pose(&drone).unwrap()],
                masks: AuthorityMasks(make_masks(&mut rng, 1)),
            };
            let params = SessionParams::new(1, ProtocolVariant::Oblivious)
                .with_seeds(i as u64 + 10, i as u64 + 20, i as u64 + 30);
            let (records, _) =
                run_oblivious(&citizen, &authority, &params).map_err(|e| e.to_string())?;
            let decision = &citizen_postprocess(&records, &[drone.camera.half_angle_rad])[0];
            if decision.shortlisted == expected {
                agree += 1;
            }
        }
        ensure!(agree == 20, "{agree}/20 placements agreed with ground truth");
        Ok(())
    })());
}

#[test]
fn criterion_3_obliviousness() {
    report("3 obliviousness", (|| {
        let mut rng = ChaCha20Rng::seed_from_u64(0xACC3);
        for &n in &[100usize, 1000] {
            let mut reference: Option<(Vec<_>, u32)> = None;
            for density in 0..20usize {
                let citizen = random_citizen(&mut rng, n);
                let poses = density_fleet(&mut rng, n, density.min(n), &citizen);
                let authority = authority_from(&poses, &mut rng);
                let params = SessionParams::new(n, ProtocolVariant::Oblivious).with_seeds(
                    density as u64 + 1,
                    density as u64 + 2,
                    density as u64 + 3,
                );
                let (_, transcript) =
                    run_oblivious(&citizen, &authority, &params).map_err(|e| e.to_string())?;
                let shape = (transcript.shape(), transcript.rounds());
                match &reference {
                    None => reference = Some(shape),
                    Some(r) => ensure!(
                        *r == shape,
                        "n={n} density={density}: transcript shape diverged"
                    ),
                }
            }
        }
        Ok(())
    })());
}

#[test]
fn criterion_4_side_channel_demonstration() {
    report("4 side-channel-demonstration", (|| {
        let n = 200;
        let mut rng = ChaCha20Rng::seed_from_u64(0xACC4);
        let citizen = random_citizen(&mut rng, n);
        let mut last: Option<(usize, u64)> = None;
        for &density in &[0usize, 2, 5, 10] {
            let poses = density_fleet(&mut rng, n, density, &citizen);
            let authority = authority_from(&poses, &mut rng);
            let params = SessionParams::new(n, ProtocolVariant::NonOblivious).with_seeds(
                density as u64 + 7,
                density as u64 + 8,
                density as u64 + 9,
            );
            let (decisions, transcript) =
                run_non_oblivious(&citizen, &authority, &params).map_err(|e| e.to_string())?;
            ensure!(
                decisions.iter().filter(|d| d.in_vicinity).count() == density,
                "constructed density {density} not realized"
            );
            let bytes = transcript.total_online_bytes();
            if let Some((prev_density, prev_bytes)) = last {
                ensure!(
                    bytes > prev_bytes,
                    "bytes({density}) = {bytes} not greater than bytes({prev_density}) = {prev_bytes}"
                );
            }
            last = Some((density, bytes));
        }
        Ok(())
    })());
}

#[test]
fn criterion_5_traffic_scaling() {
    report("5 traffic-scaling", (|| {
        let n_list = [100usize, 200, 500, 1000];
        let rows = skyveil_cli::bench::measure(&n_list, 1, ProtocolVariant::Oblivious, 0xACC5)
            .map_err(|e| e.to_string())?;
        ensure!(rows.len() == 4, "expected 4 rows");

        let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.total_bytes as f64).collect();
        let mean_x = xs.iter().sum::<f64>() / 4.0;
        let mean_y = ys.iter().sum::<f64>() / 4.0;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
        let slope = sxy / sxx;
        let intercept = mean_y - slope * mean_x;
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
            .sum();
        let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
        let r2 = 1.0 - ss_res / ss_tot;
        ensure!(r2 > 0.99, "linear fit R^2 = {r2}");

        let ratio = ys[3] / ys[0];
        ensure!(
            (9.0..=11.0).contains(&ratio),
            "bytes(1000)/bytes(100) = {ratio}"
        );
        Ok(())
    })());
}

#[test]
fn criterion_6_wire_fidelity() {
    report("6 wire-fidelity", (|| {
        let mut rng = ChaCha20Rng::seed_from_u64(0xACC6);
        let n = 16;
        let poses: Vec<DronePose> = (0..n).map(|i| random_pose(&mut rng, i)).collect();
        let jsonl: String = poses
            .iter()
            .map(|p| {
                serde_json::to_string(&skyveil_netlink::FleetRecord::from_pose(p)).unwrap() + "\n"
            })
            .collect();
        let registry = FleetRegistry::ingest_reader(jsonl.as_bytes()).map_err(|e| e.to_string())?;
        let region = registry.region();
        let snapshot = registry.snapshot();
        let config = WireConfig::default();
        let server = serve_authority(Arc::new(RwLock::new(registry)), "127.0.0.1:0", config)
            .map_err(|e| e.to_string())?;

        let seeds = ClientSeeds::default();
        let query = CitizenQuery {
            pos: coord(12.003, 77.004),
            lat_vicinity_deg: 0.006,
            lon_vicinity_deg: 0.0061,
            variant: ProtocolVariant::Oblivious,
        };
        let outcome =
            query_as_citizen(server.local_addr(), &query, seeds).map_err(|e| e.to_string())?;
        server.shutdown();

        // Reproduce in-process with the same inputs and seeds.
        let citizen = CitizenInput {
            pos: query.pos,
            lat_vicinity_deg: query.lat_vicinity_deg,
            lon_vicinity_deg: query.lon_vicinity_deg,
            masks: make_masks(&mut ChaCha20Rng::seed_from_u64(seeds.mask_seed), n),
        };
        let authority = AuthorityInputs {
            region,
            drones: snapshot.drones,
            masks: config.session_masks(0, n),
        };
        let params = SessionParams {
            citizen_seed: seeds.citizen_seed,
            ..config.session_params(0, n, ProtocolVariant::Oblivious)
        };
        let (records, in_process) =
            run_oblivious(&citizen, &authority, &params).map_err(|e| e.to_string())?;
        let expected = citizen_postprocess(&records, &snapshot.thetas);

        ensure!(outcome.decisions == expected, "wire decisions diverge from in-process");
        ensure!(
            outcome.transcript.mpc_shape() == in_process.mpc_shape(),
            "wire MPC transcript diverges from in-process"
        );
        ensure!(
            outcome.socket_bytes_sent
                == outcome.transcript.citizen_to_authority_bytes()
                    + framing_overhead(outcome.frames_sent),
            "sent bytes {} != transcript {} + framing {}",
            outcome.socket_bytes_sent,
            outcome.transcript.citizen_to_authority_bytes(),
            framing_overhead(outcome.frames_sent)
        );
        ensure!(
            outcome.socket_bytes_received
                == outcome.transcript.authority_to_citizen_bytes()
                    + framing_overhead(outcome.frames_received),
            "received bytes {} != transcript {} + framing {}",
            outcome.socket_bytes_received,
            outcome.transcript.authority_to_citizen_bytes(),
            framing_overhead(outcome.frames_received)
        );
        Ok(())
    })());
}

mod engine_soundness {
    use super::*;
    use skyveil_mpc::{
        dealer_generate_triples, fx_encode, run_segment_as, FixedPoint, PartyExec, PartyRole,
        PipeChannel, PlanBuilder, PlanOp, PlanSegment, RevealRecipient, RingElement,
    };

    pub fn ring_oracle(segment: &PlanSegment, inputs: &[RingElement]) -> Vec<RingElement> {
        let mut wires: Vec<RingElement> = inputs.to_vec();
        for op in &segment.ops {
            let v = match *op {
                PlanOp::Add { lhs, rhs } => wires[lhs].wrapping_add(wires[rhs]),
                PlanOp::Sub { lhs, rhs } => wires[lhs].wrapping_sub(wires[rhs]),
                PlanOp::MulPub { src, factor } => {
                    wires[src].wrapping_mul(RingElement::from_signed(factor))
                }
                PlanOp::ScaleUp { src, delta } => wires[src].wrapping_shl(delta),
                PlanOp::Mul { lhs, rhs, .. } => wires[lhs].wrapping_mul(wires[rhs]),
            };
            wires.push(v);
        }
        segment.reveals.iter().map(|r| wires[r.wire]).collect()
    }

    pub fn random_program(
        rng: &mut ChaCha20Rng,
        max_gates: usize,
    ) -> (PlanSegment, Vec<FixedPoint>, Vec<FixedPoint>) {
        let mut b = PlanBuilder::new();
        let n_inputs = rng.gen_range(2..6);
        let mut citizen_inputs = Vec::new();
        let mut authority_inputs = Vec::new();
        let mut wires = Vec::new();
        for _ in 0..n_inputs {
            let owner = if rng.gen_bool(0.5) {
                PartyRole::Citizen
            } else {
                PartyRole::Authority
            };
            let scale = rng.gen_range(0..4u32);
            let raw: i64 = rng.gen_range(-200..200);
            let fp = FixedPoint::from_raw(RingElement::from_signed(raw as i128), scale);
            wires.push(b.input(owner, scale, 8).unwrap());
            match owner {
                PartyRole::Citizen => citizen_inputs.push(fp),
                PartyRole::Authority => authority_inputs.push(fp),
            }
        }
        let gates = rng.gen_range(1..=max_gates);
        let mut round = 0usize;
        for _ in 0..gates {
            let a = wires[rng.gen_range(0..wires.len())];
            let c = wires[rng.gen_range(0..wires.len())];
            let added = match rng.gen_range(0..5u8) {
                0 | 1 => {
                    let sa = b.scale_of(a).unwrap();
                    let sc = b.scale_of(c).unwrap();
                    let (lo, hi) = if sa <= sc { (a, c) } else { (c, a) };
                    let delta = b.scale_of(hi).unwrap() - b.scale_of(lo).unwrap();
                    b.scale_up(lo, delta).ok().and_then(|l| {
                        if rng.gen_bool(0.5) {
                            b.add(l, hi).ok()
                        } else {
                            b.sub(l, hi).ok()
                        }
                    })
                }
                2 => b.mul_pub(a, rng.gen_range(-9..9)).ok(),
                3 => b.scale_up(a, rng.gen_range(0..3)).ok(),
                _ => match b.mul(a, c, round) {
                    Ok(w) => {
                        round += 1;
                        Some(w)
                    }
                    Err(_) => match b.mul(a, c, round + 1) {
                        Ok(w) => {
                            round += 2;
                            Some(w)
                        }
                        Err(_) => None,
                    },
                },
            };
            if let Some(w) = added {
                wires.push(w);
            }
        }
        for _ in 0..rng.gen_range(1..=wires.len().min(4)) {
            b.reveal(wires[rng.gen_range(0..wires.len())], RevealRecipient::Citizen)
                .unwrap();
        }
        (b.finish(), citizen_inputs, authority_inputs)
    }

    pub fn run_both(
        segment: &PlanSegment,
        citizen_inputs: Vec<FixedPoint>,
        authority_inputs: Vec<FixedPoint>,
        seed: u64,
    ) -> Vec<skyveil_mpc::RevealedValue> {
        let (cp, ap) = dealer_generate_triples(seed, segment.mul_count());
        let (chan_c, chan_a) = PipeChannel::pair();
        let seg = segment.clone();
        let handle = std::thread::spawn(move || {
            let mut exec = PartyExec::new(
                PartyRole::Authority,
                ap,
                ChaCha20Rng::seed_from_u64(seed + 1),
            );
            let mut chan = chan_a;
            run_segment_as(&mut exec, &seg, &authority_inputs, &mut chan).unwrap();
        });
        let mut exec = PartyExec::new(
            PartyRole::Citizen,
            cp,
            ChaCha20Rng::seed_from_u64(seed + 2),
        );
        let mut chan = chan_c;
        let out = run_segment_as(&mut exec, segment, &citizen_inputs, &mut chan).unwrap();
        handle.join().unwrap();
        out
    }

    pub fn check(trials: usize) -> Result<(), String> {
        let mut rng = ChaCha20Rng::seed_from_u64(0xACC7);
        for case in 0..trials {
            let (segment, c_in, a_in) = random_program(&mut rng, 50);
            let mut ring_inputs = Vec::new();
            let mut ci = c_in.iter();
            let mut ai = a_in.iter();
            for spec in &segment.inputs {
                let v = match spec.owner {
                    PartyRole::Citizen => ci.next().unwrap(),
                    PartyRole::Authority => ai.next().unwrap(),
                };
                ring_inputs.push(v.raw());
            }
            let expected = ring_oracle(&segment, &ring_inputs);
            let revealed = run_both(&segment, c_in, a_in, case as u64);
            if revealed.len() != expected.len() {
                return Err(format!("case {case}: reveal count mismatch"));
            }
            for (got, want) in revealed.iter().zip(expected) {
                if got.value.raw() != want {
                    return Err(format!("case {case}: wire {} mismatch", got.wire));
                }
            }
        }

        // Dealer triples: defining property and one-time use.
        let (mut cp, mut ap) = dealer_generate_triples(77, 256);
        for _ in 0..256 {
            let tc = cp.claim_next().map_err(|e| e.to_string())?;
            let ta = ap.claim_next().map_err(|e| e.to_string())?;
            let a = tc.a.wrapping_add(ta.a);
            let b = tc.b.wrapping_add(ta.b);
            let c = tc.c.wrapping_add(ta.c);
            if c != a.wrapping_mul(b) {
                return Err("triple does not satisfy c = a*b".into());
            }
        }
        let (mut cp, _) = dealer_generate_triples(78, 2);
        cp.claim(0).map_err(|e| e.to_string())?;
        match cp.claim(0) {
            Err(skyveil_mpc::MpcError::TripleReuse { .. }) => {}
            other => return Err(format!("triple reuse not rejected: {other:?}")),
        }
        match fx_encode(1e40, 0) {
            Err(skyveil_mpc::MpcError::BoundExceeded { .. }) => {}
            other => return Err(format!("bound violation not rejected: {other:?}")),
        }
        Ok(())
    }
}

#[test]
fn criterion_7_engine_soundness() {
    report("7 engine-soundness", engine_soundness::check(10_000));
}

#[test]
fn criterion_8_audit_verifier() {
    use skyveil_audit::{
        keygen, record_launch, verify_trail, AttestationReport, AuditPolicy, AuditTrail, Manifest,
        MeasurementDb, REQUIRED_COMPONENTS,
    };

    report("8 audit-verifier", (|| {
        let started = std::time::Instant::now();
        let db: MeasurementDb = REQUIRED_COMPONENTS
            .iter()
            .map(|c| (c.to_string(), format!("{:064x}", c.len() * 31)))
            .collect();
        let policy = AuditPolicy {
            measurements: db.clone(),
            ..AuditPolicy::default()
        };
        let report_for = |app_hash: &str| AttestationReport {
            components: {
                let mut m = db.clone();
                m.insert("launched-app".into(), app_hash.into());
                m
            },
        };
        let manifest = |app: &str, pubs: &[&str], subs: &[&str]| Manifest {
            app_id: app.into(),
            publishes: pubs.iter().map(|s| s.to_string()).collect(),
            subscribes: subs.iter().map(|s| s.to_string()).collect(),
            cert_fingerprint: "00ff".into(),
        };
        let key = keygen(0xACC8);
        let mut trail = AuditTrail::new(&key).map_err(|e| e.to_string())?;
        for (ts, (app, pubs, subs)) in [
            ("camera", vec!["VideoFeed"], vec![]),
            ("Sanitizer-FE", vec!["PrivVideoFeed"], vec!["VideoFeed"]),
            ("navigator", vec![], vec!["PrivVideoFeed"]),
        ]
        .into_iter()
        .enumerate()
        {
            trail = record_launch(
                &trail,
                manifest(app, &pubs, &subs),
                report_for("beef"),
                (ts as u64 + 1) * 1000,
                &key,
            )
            .map_err(|e| e.to_string())?;
        }

        // Compliant fixture passes all three checks.
        let verdict = verify_trail(&trail, &policy);
        ensure!(verdict.overall_pass(), "compliant fixture failed: {verdict:?}");

        // Tamper class 1: flipped measurement fails exactly check 1.
        let mut bad_report = report_for("beef");
        let mut h = bad_report.components["middleware"].clone();
        h.replace_range(0..1, if h.as_bytes()[0] == b'0' { "1" } else { "0" });
        bad_report.components.insert("middleware".into(), h);
        let tampered =
            record_launch(&trail, manifest("mapper", &[], &[]), bad_report, 9000, &key)
                .map_err(|e| e.to_string())?;
        let verdict = verify_trail(&tampered, &policy);
        ensure!(
            !verdict.check1_integrity.passed
                && verdict.check2_trusted_components.passed
                && verdict.check3_pubsub.passed,
            "measurement flip verdict wrong: {verdict:?}"
        );
        ensure!(
            verdict.check1_integrity.violations[0].subject == "middleware",
            "wrong component blamed"
        );

        // Tamper class 2: rogue subscriber fails exactly check 3.
        let rogue = record_launch(
            &trail,
            manifest("rogue", &[], &["VideoFeed"]),
            report_for("beef"),
            9000,
            &key,
        )
        .map_err(|e| e.to_string())?;
        let verdict = verify_trail(&rogue, &policy);
        ensure!(
            verdict.check1_integrity.passed
                && verdict.check2_trusted_components.passed
                && !verdict.check3_pubsub.passed,
            "rogue subscriber verdict wrong: {verdict:?}"
        );
        ensure!(
            verdict.check3_pubsub.violations.iter().any(|v| v.subject == "rogue"),
            "rogue not named"
        );

        // Tamper class 3: signature flip fails everything outright.
        let mut sig_flipped = trail.clone();
        let mut sig = sig_flipped.signature.clone();
        sig.replace_range(0..1, if sig.as_bytes()[0] == b'0' { "1" } else { "0" });
        sig_flipped.signature = sig;
        let verdict = verify_trail(&sig_flipped, &policy);
        ensure!(
            !verdict.check1_integrity.passed
                && !verdict.check2_trusted_components.passed
                && !verdict.check3_pubsub.passed,
            "signature flip not fatal"
        );

        // Any single-byte mutation of the trail file is detected.
        let bytes = trail.to_json_bytes().map_err(|e| e.to_string())?;
        for mask in [0x01u8, 0x20, 0x80] {
            for idx in 0..bytes.len() {
                let mut mutated = bytes.clone();
                mutated[idx] ^= mask;
                let detected = match AuditTrail::from_json_bytes(&mutated) {
                    Err(_) => true,
                    Ok(t) => !verify_trail(&t, &policy).overall_pass(),
                };
                ensure!(detected, "mutation {mask:#04x} at byte {idx} undetected");
            }
        }
        ensure!(
            started.elapsed() < std::time::Duration::from_secs(30),
            "audit criterion took {:?}",
            started.elapsed()
        );
        Ok(())
    })());
}

#[test]
fn criterion_9_masking() {
    report("9 masking", (|| {
        use skyveil_mpc::fx_encode;
        let mut rng = ChaCha20Rng::seed_from_u64(0xACC9);
        for trial in 0..100_000u32 {
            // A squared-margin value as the circuit produces it (scale 60)
            // and one mask pair, multiplied in the ring.
            let diff_deg = rng.gen_range(-2.0..2.0f64);
            let vic_deg = rng.gen_range(1e-4..1.0f64);
            let margin = fx_encode(diff_deg * diff_deg - vic_deg * vic_deg, 60)
                .map_err(|e| e.to_string())?;
            let raw = margin.signed_raw();
            let masks = MaskPair {
                lat: rng.gen_range(1..(1u64 << 20)),
                lon: rng.gen_range(1..(1u64 << 20)),
            };
            let masked = raw * masks.lat as i128 * masks.lon as i128;
            ensure!(
                masked.signum() == raw.signum(),
                "trial {trial}: sign flipped ({raw} -> {masked})"
            );
            if masks.lat > 1 && masks.lon > 1 && raw != 0 {
                ensure!(masked != raw, "trial {trial}: masked equals raw");
            }
        }
        Ok(())
    })());
}
