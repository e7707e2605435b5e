use serde::{Deserialize, Serialize};

use skyveil_mpc::{
    PartyRole, PlanBuilder, PlanSegment, ProtocolVariant, RevealRecipient, ScaleTable, WireId,
};

use crate::Result;

/// Value-magnitude promises for each input kind (|value| < 2^bits), the
/// enforcement side of the documented bounds table. Coordinates are
/// region-relative so both diffs and absolute values stay below 2 degrees.
const COORD_BITS: u32 = 1;
const VICINITY_BITS: u32 = 1;
const COS_BITS: u32 = 1;
const DIRECTION_BITS: u32 = 1;
const DNORM_BITS: u32 = 1;
const MASK_BITS: u32 = 20;

/// Where each drone's revealed values live in the oblivious plan, in
/// reveal order (four wires per drone).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VicinityLayout {
    pub n: usize,
    pub dotp: Vec<WireId>,
    pub norm_sq: Vec<WireId>,
    pub nearby_lat: Vec<WireId>,
    pub nearby_lon: Vec<WireId>,
}

/// Layout of the vicinity-only first segment of the gated variant, plus
/// what the second segment needs to continue: the retained coordinate
/// difference wires and the wire-bounds snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatedLayout {
    pub n: usize,
    pub nearby_lat: Vec<WireId>,
    pub nearby_lon: Vec<WireId>,
    pub latdiff: Vec<WireId>,
    pub londiff: Vec<WireId>,
    pub bounds: Vec<(u32, u32)>,
}

/// The angular follow-up segment of the gated variant, restricted to the
/// drones whose vicinity predicate opened true.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatedPhase2 {
    pub segment: PlanSegment,
    pub gated: Vec<usize>,
    pub dotp: Vec<WireId>,
    pub norm_sq: Vec<WireId>,
}

/// The full oblivious plan: every drone gets vicinity and angular gates,
/// so the gate sequence (hence the transcript) is fixed by n alone.
///
/// Multiplications are batched in three rounds: squares and first-order
/// products, then products of round-0 results, then the mask and norm
/// closers. 12n + 2 multiplication gates total.
pub fn build_vicinity_plan(n: usize, scales: &ScaleTable) -> Result<(PlanSegment, VicinityLayout)> {
    let mut b = PlanBuilder::new();

    let lat_c = b.input(PartyRole::Citizen, scales.degrees, COORD_BITS)?;
    let lon_c = b.input(PartyRole::Citizen, scales.degrees, COORD_BITS)?;
    let lat_vic = b.input(PartyRole::Citizen, scales.degrees, VICINITY_BITS)?;
    let lon_vic = b.input(PartyRole::Citizen, scales.degrees, VICINITY_BITS)?;
    let cmasks: Vec<(WireId, WireId)> = (0..n)
        .map(|_| {
            Ok((
                b.input(PartyRole::Citizen, scales.mask, MASK_BITS)?,
                b.input(PartyRole::Citizen, scales.mask, MASK_BITS)?,
            ))
        })
        .collect::<Result<_>>()?;

    struct DroneWires {
        lat_t: WireId,
        lon_t: WireId,
        dx: WireId,
        dy: WireId,
        dnorm_sq: WireId,
        cos_lat: WireId,
        rmask_lat: WireId,
        rmask_lon: WireId,
    }
    let drones: Vec<DroneWires> = (0..n)
        .map(|_| {
            Ok(DroneWires {
                lat_t: b.input(PartyRole::Authority, scales.degrees, COORD_BITS)?,
                lon_t: b.input(PartyRole::Authority, scales.degrees, COORD_BITS)?,
                dx: b.input(PartyRole::Authority, scales.direction, DIRECTION_BITS)?,
                dy: b.input(PartyRole::Authority, scales.direction, DIRECTION_BITS)?,
                dnorm_sq: b.input(PartyRole::Authority, 2 * scales.direction, DNORM_BITS)?,
                cos_lat: b.input(PartyRole::Authority, scales.cos_lat, COS_BITS)?,
                rmask_lat: b.input(PartyRole::Authority, scales.mask, MASK_BITS)?,
                rmask_lon: b.input(PartyRole::Authority, scales.mask, MASK_BITS)?,
            })
        })
        .collect::<Result<_>>()?;

    // Depth-0 locals: coordinate differences and the rescaled north
    // component (lifted so both bearing components share a scale).
    let mut latdiff = Vec::with_capacity(n);
    let mut londiff = Vec::with_capacity(n);
    let mut cy = Vec::with_capacity(n);
    for d in &drones {
        latdiff.push(b.sub(lat_c, d.lat_t)?);
        londiff.push(b.sub(lon_c, d.lon_t)?);
        cy.push(b.scale_up(*latdiff.last().unwrap(), scales.cos_lat)?);
    }

    // Round 0: all squares of inputs/diffs, the east bearing component,
    // and the north half of the dot product.
    let lat_vic2 = b.mul(lat_vic, lat_vic, 0)?;
    let lon_vic2 = b.mul(lon_vic, lon_vic, 0)?;
    let mut latdiff2 = Vec::with_capacity(n);
    let mut londiff2 = Vec::with_capacity(n);
    let mut cx = Vec::with_capacity(n);
    let mut cy2 = Vec::with_capacity(n);
    let mut ty = Vec::with_capacity(n);
    for (i, d) in drones.iter().enumerate() {
        latdiff2.push(b.mul(latdiff[i], latdiff[i], 0)?);
        londiff2.push(b.mul(londiff[i], londiff[i], 0)?);
        cx.push(b.mul(londiff[i], d.cos_lat, 0)?);
        cy2.push(b.mul(cy[i], cy[i], 0)?);
        ty.push(b.mul(d.dy, cy[i], 0)?);
    }

    // Locals on round-0 results: signed squared-distance margins.
    let mut nl = Vec::with_capacity(n);
    let mut nlon = Vec::with_capacity(n);
    for i in 0..n {
        nl.push(b.sub(latdiff2[i], lat_vic2)?);
        nlon.push(b.sub(londiff2[i], lon_vic2)?);
    }

    // Round 1: east squares, east dot-product half, citizen masks.
    let mut cx2 = Vec::with_capacity(n);
    let mut tx = Vec::with_capacity(n);
    let mut nl_cm = Vec::with_capacity(n);
    let mut nlon_cm = Vec::with_capacity(n);
    for (i, d) in drones.iter().enumerate() {
        cx2.push(b.mul(cx[i], cx[i], 1)?);
        tx.push(b.mul(d.dx, cx[i], 1)?);
        nl_cm.push(b.mul(nl[i], cmasks[i].0, 1)?);
        nlon_cm.push(b.mul(nlon[i], cmasks[i].1, 1)?);
    }

    // Locals: assemble |C|^2 and the dot product.
    let mut cnorm = Vec::with_capacity(n);
    let mut dotp = Vec::with_capacity(n);
    for i in 0..n {
        cnorm.push(b.add(cx2[i], cy2[i])?);
        dotp.push(b.add(tx[i], ty[i])?);
    }

    // Round 2: norm product and authority masks.
    let mut norm_sq = Vec::with_capacity(n);
    let mut nearby_lat = Vec::with_capacity(n);
    let mut nearby_lon = Vec::with_capacity(n);
    for (i, d) in drones.iter().enumerate() {
        norm_sq.push(b.mul(d.dnorm_sq, cnorm[i], 2)?);
        nearby_lat.push(b.mul(nl_cm[i], d.rmask_lat, 2)?);
        nearby_lon.push(b.mul(nlon_cm[i], d.rmask_lon, 2)?);
    }

    for i in 0..n {
        b.reveal(dotp[i], RevealRecipient::Citizen)?;
        b.reveal(norm_sq[i], RevealRecipient::Citizen)?;
        b.reveal(nearby_lat[i], RevealRecipient::Citizen)?;
        b.reveal(nearby_lon[i], RevealRecipient::Citizen)?;
    }

    let segment = b.finish();
    Ok((
        segment,
        VicinityLayout {
            n,
            dotp,
            norm_sq,
            nearby_lat,
            nearby_lon,
        },
    ))
}

/// First segment of the gated variant: vicinity margins only, opened to
/// both parties. 6n + 2 multiplication gates over the same three-round
/// structure.
pub fn build_gated_plan(n: usize, scales: &ScaleTable) -> Result<(PlanSegment, GatedLayout)> {
    let mut b = PlanBuilder::new();

    let lat_c = b.input(PartyRole::Citizen, scales.degrees, COORD_BITS)?;
    let lon_c = b.input(PartyRole::Citizen, scales.degrees, COORD_BITS)?;
    let lat_vic = b.input(PartyRole::Citizen, scales.degrees, VICINITY_BITS)?;
    let lon_vic = b.input(PartyRole::Citizen, scales.degrees, VICINITY_BITS)?;
    let cmasks: Vec<(WireId, WireId)> = (0..n)
        .map(|_| {
            Ok((
                b.input(PartyRole::Citizen, scales.mask, MASK_BITS)?,
                b.input(PartyRole::Citizen, scales.mask, MASK_BITS)?,
            ))
        })
        .collect::<Result<_>>()?;
    struct DroneWires {
        lat_t: WireId,
        lon_t: WireId,
        rmask_lat: WireId,
        rmask_lon: WireId,
    }
    let drones: Vec<DroneWires> = (0..n)
        .map(|_| {
            Ok(DroneWires {
                lat_t: b.input(PartyRole::Authority, scales.degrees, COORD_BITS)?,
                lon_t: b.input(PartyRole::Authority, scales.degrees, COORD_BITS)?,
                rmask_lat: b.input(PartyRole::Authority, scales.mask, MASK_BITS)?,
                rmask_lon: b.input(PartyRole::Authority, scales.mask, MASK_BITS)?,
            })
        })
        .collect::<Result<_>>()?;

    let mut latdiff = Vec::with_capacity(n);
    let mut londiff = Vec::with_capacity(n);
    for d in &drones {
        latdiff.push(b.sub(lat_c, d.lat_t)?);
        londiff.push(b.sub(lon_c, d.lon_t)?);
    }

    let lat_vic2 = b.mul(lat_vic, lat_vic, 0)?;
    let lon_vic2 = b.mul(lon_vic, lon_vic, 0)?;
    let mut latdiff2 = Vec::with_capacity(n);
    let mut londiff2 = Vec::with_capacity(n);
    for i in 0..n {
        latdiff2.push(b.mul(latdiff[i], latdiff[i], 0)?);
        londiff2.push(b.mul(londiff[i], londiff[i], 0)?);
    }

    let mut nl = Vec::with_capacity(n);
    let mut nlon = Vec::with_capacity(n);
    for i in 0..n {
        nl.push(b.sub(latdiff2[i], lat_vic2)?);
        nlon.push(b.sub(londiff2[i], lon_vic2)?);
    }

    let mut nl_cm = Vec::with_capacity(n);
    let mut nlon_cm = Vec::with_capacity(n);
    for i in 0..n {
        nl_cm.push(b.mul(nl[i], cmasks[i].0, 1)?);
        nlon_cm.push(b.mul(nlon[i], cmasks[i].1, 1)?);
    }

    let mut nearby_lat = Vec::with_capacity(n);
    let mut nearby_lon = Vec::with_capacity(n);
    for (i, d) in drones.iter().enumerate() {
        nearby_lat.push(b.mul(nl_cm[i], d.rmask_lat, 2)?);
        nearby_lon.push(b.mul(nlon_cm[i], d.rmask_lon, 2)?);
    }

    // The predicate is opened to both parties: that is the variant's
    // defining (and leaky) property.
    for i in 0..n {
        b.reveal(nearby_lat[i], RevealRecipient::Both)?;
        b.reveal(nearby_lon[i], RevealRecipient::Both)?;
    }

    let bounds = b.bounds_snapshot();
    let segment = b.finish();
    Ok((
        segment,
        GatedLayout {
            n,
            nearby_lat,
            nearby_lon,
            latdiff,
            londiff,
            bounds,
        },
    ))
}

/// Second segment of the gated variant: angular gates for exactly the
/// drones in `gated` (ascending indices both parties derived from the
/// opened predicate). Emits its three rounds even when the set is empty so
/// the message sequence stays fixed while sizes leak the density.
pub fn build_gated_phase2(
    layout: &GatedLayout,
    gated: &[usize],
    scales: &ScaleTable,
) -> Result<GatedPhase2> {
    let mut b = PlanBuilder::continuation_with_bounds(&layout.bounds);

    struct GateWires {
        dx: WireId,
        dy: WireId,
        dnorm_sq: WireId,
        cos_lat: WireId,
    }
    let inputs: Vec<GateWires> = gated
        .iter()
        .map(|_| {
            Ok(GateWires {
                dx: b.input(PartyRole::Authority, scales.direction, DIRECTION_BITS)?,
                dy: b.input(PartyRole::Authority, scales.direction, DIRECTION_BITS)?,
                dnorm_sq: b.input(PartyRole::Authority, 2 * scales.direction, DNORM_BITS)?,
                cos_lat: b.input(PartyRole::Authority, scales.cos_lat, COS_BITS)?,
            })
        })
        .collect::<Result<_>>()?;

    let mut cy = Vec::with_capacity(gated.len());
    for &i in gated {
        cy.push(b.scale_up(layout.latdiff[i], scales.cos_lat)?);
    }

    let mut cx = Vec::with_capacity(gated.len());
    let mut cy2 = Vec::with_capacity(gated.len());
    let mut ty = Vec::with_capacity(gated.len());
    for (k, &i) in gated.iter().enumerate() {
        cx.push(b.mul(layout.londiff[i], inputs[k].cos_lat, 0)?);
        cy2.push(b.mul(cy[k], cy[k], 0)?);
        ty.push(b.mul(inputs[k].dy, cy[k], 0)?);
    }

    let mut cx2 = Vec::with_capacity(gated.len());
    let mut tx = Vec::with_capacity(gated.len());
    for k in 0..gated.len() {
        cx2.push(b.mul(cx[k], cx[k], 1)?);
        tx.push(b.mul(inputs[k].dx, cx[k], 1)?);
    }

    let mut dotp = Vec::with_capacity(gated.len());
    let mut cnorm = Vec::with_capacity(gated.len());
    for k in 0..gated.len() {
        cnorm.push(b.add(cx2[k], cy2[k])?);
        dotp.push(b.add(tx[k], ty[k])?);
    }

    let mut norm_sq = Vec::with_capacity(gated.len());
    for k in 0..gated.len() {
        norm_sq.push(b.mul(inputs[k].dnorm_sq, cnorm[k], 2)?);
    }

    for k in 0..gated.len() {
        b.reveal(dotp[k], RevealRecipient::Citizen)?;
        b.reveal(norm_sq[k], RevealRecipient::Citizen)?;
    }

    let segment = b.finish_with_min_rounds(3);
    Ok(GatedPhase2 {
        segment,
        gated: gated.to_vec(),
        dotp,
        norm_sq,
    })
}

/// The deterministic gate sequence for a session: a pure function of
/// (n, variant), independent of any party's inputs. `mul_gates_provisioned`
/// is the dealer's triple budget; the gated variant is provisioned for its
/// worst case (every drone in vicinity) so preprocessing never leaks the
/// density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitPlan {
    pub n: usize,
    pub variant: ProtocolVariant,
    pub first_segment: PlanSegment,
    pub mul_gates_provisioned: usize,
}

pub fn build_circuit_plan(n: usize, variant: ProtocolVariant) -> Result<CircuitPlan> {
    let scales = ScaleTable::default();
    let first_segment = match variant {
        ProtocolVariant::Oblivious => build_vicinity_plan(n, &scales)?.0,
        ProtocolVariant::NonOblivious => build_gated_plan(n, &scales)?.0,
    };
    Ok(CircuitPlan {
        n,
        variant,
        first_segment,
        mul_gates_provisioned: 12 * n + 2,
    })
}
