use serde::{Deserialize, Serialize};

use crate::{MpcError, PartyRole, Result, MAX_MAGNITUDE_BITS};

pub type WireId = usize;

/// Declaration of one secret input wire: who feeds it, at which scale, and
/// the promised magnitude bound (|value| < 2^value_bits) that input
/// validation enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSpec {
    pub owner: PartyRole,
    pub scale_exp: u32,
    pub value_bits: u32,
}

/// One straight-line operation. `Mul` is the only interactive op; its
/// `round` assigns the opening to a communication batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanOp {
    Add { lhs: WireId, rhs: WireId },
    Sub { lhs: WireId, rhs: WireId },
    MulPub { src: WireId, factor: i128 },
    ScaleUp { src: WireId, delta: u32 },
    Mul { lhs: WireId, rhs: WireId, round: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RevealRecipient {
    Citizen,
    Authority,
    Both,
}

impl RevealRecipient {
    pub fn includes(self, role: PartyRole) -> bool {
        match self {
            RevealRecipient::Citizen => role == PartyRole::Citizen,
            RevealRecipient::Authority => role == PartyRole::Authority,
            RevealRecipient::Both => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevealSpec {
    pub wire: WireId,
    pub to: RevealRecipient,
}

/// A validated straight-line program segment. Wire ids are global to a
/// session: a segment may reference wires below `first_wire` that earlier
/// segments created. Inputs occupy `first_wire..first_wire+inputs.len()`,
/// then each op defines one wire.
///
/// The builder guarantees: scales are consistent, every wire's signed raw
/// magnitude stays below 2^126 given the declared input bounds, and the
/// round schedule is executable in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSegment {
    pub first_wire: WireId,
    pub inputs: Vec<InputSpec>,
    pub ops: Vec<PlanOp>,
    pub rounds: usize,
    pub reveals: Vec<RevealSpec>,
    /// Scale exponent of every wire this segment defines (inputs then ops).
    pub wire_scales: Vec<u32>,
}

impl PlanSegment {
    pub fn wires_defined(&self) -> usize {
        self.inputs.len() + self.ops.len()
    }

    pub fn end_wire(&self) -> WireId {
        self.first_wire + self.wires_defined()
    }

    pub fn mul_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, PlanOp::Mul { .. }))
            .count()
    }

    pub fn inputs_owned_by(&self, role: PartyRole) -> usize {
        self.inputs.iter().filter(|i| i.owner == role).count()
    }

    pub fn scale_of(&self, wire: WireId) -> Option<u32> {
        wire.checked_sub(self.first_wire)
            .and_then(|i| self.wire_scales.get(i).copied())
    }

    /// Muls grouped by round, in op order. Used by the executor to size and
    /// order opening batches.
    pub fn muls_by_round(&self) -> Vec<Vec<WireId>> {
        let mut rounds = vec![Vec::new(); self.rounds];
        for (i, op) in self.ops.iter().enumerate() {
            if let PlanOp::Mul { round, .. } = op {
                rounds[*round].push(self.first_wire + self.inputs.len() + i);
            }
        }
        rounds
    }
}

/// Tracks scale and magnitude metadata per wire while a segment is built,
/// rejecting anything that could wrap the ring.
pub struct PlanBuilder {
    first_wire: WireId,
    prior_meta: Vec<WireMeta>,
    inputs: Vec<InputSpec>,
    ops: Vec<PlanOp>,
    meta: Vec<WireMeta>,
    reveals: Vec<RevealSpec>,
    max_mul_round: Option<usize>,
    /// Earliest round a newly-emitted mul may target. Openings are
    /// collected by a cursor walking ops in order, and a local op whose
    /// operands come out of round r blocks that cursor until round r
    /// completes, so a later mul cannot join an earlier batch.
    min_round: usize,
}

#[derive(Debug, Clone, Copy)]
struct WireMeta {
    scale_exp: u32,
    /// |signed raw| < 2^raw_bits.
    raw_bits: u32,
    /// Earliest exchange round after which the wire's value is available:
    /// 0 for inputs and local derivations thereof, r+1 for a round-r mul.
    ready_round: usize,
}

impl PlanBuilder {
    /// Start a fresh session plan (wire ids from zero).
    pub fn new() -> Self {
        Self::continuation(&[])
    }

    /// Start a follow-on segment that may reference the wires of earlier
    /// segments, described by `(scale_exp, raw_bits)` pairs in wire order.
    pub fn continuation_with_bounds(prior: &[(u32, u32)]) -> Self {
        let prior_meta = prior
            .iter()
            .map(|&(scale_exp, raw_bits)| WireMeta {
                scale_exp,
                raw_bits,
                ready_round: 0,
            })
            .collect::<Vec<_>>();
        Self {
            first_wire: prior_meta.len(),
            prior_meta,
            inputs: Vec::new(),
            ops: Vec::new(),
            meta: Vec::new(),
            reveals: Vec::new(),
            max_mul_round: None,
            min_round: 0,
        }
    }

    fn continuation(prior: &[(u32, u32)]) -> Self {
        Self::continuation_with_bounds(prior)
    }

    fn lookup(&self, wire: WireId) -> Result<WireMeta> {
        if wire < self.first_wire {
            return self
                .prior_meta
                .get(wire)
                .copied()
                .ok_or_else(|| MpcError::PlanInvalid(format!("unknown wire {wire}")));
        }
        self.meta
            .get(wire - self.first_wire)
            .copied()
            .ok_or_else(|| MpcError::PlanInvalid(format!("forward reference to wire {wire}")))
    }

    /// Commit an op and its output metadata atomically; the bound check
    /// runs first so a rejected op leaves the builder untouched.
    fn push_op(&mut self, op: Option<PlanOp>, meta: WireMeta) -> Result<WireId> {
        if meta.raw_bits > MAX_MAGNITUDE_BITS {
            return Err(MpcError::PlanInvalid(format!(
                "wire magnitude bound 2^{} exceeds ring budget 2^{MAX_MAGNITUDE_BITS}",
                meta.raw_bits
            )));
        }
        if let Some(op) = op {
            self.ops.push(op);
        }
        self.meta.push(meta);
        Ok(self.first_wire + self.meta.len() - 1)
    }

    pub fn input(&mut self, owner: PartyRole, scale_exp: u32, value_bits: u32) -> Result<WireId> {
        if !self.ops.is_empty() {
            return Err(MpcError::PlanInvalid(
                "inputs must precede operations".into(),
            ));
        }
        let wire = self.push_op(
            None,
            WireMeta {
                scale_exp,
                raw_bits: value_bits + scale_exp,
                ready_round: 0,
            },
        )?;
        self.inputs.push(InputSpec {
            owner,
            scale_exp,
            value_bits,
        });
        Ok(wire)
    }

    fn binary_linear(&mut self, op: fn(WireId, WireId) -> PlanOp, lhs: WireId, rhs: WireId) -> Result<WireId> {
        let l = self.lookup(lhs)?;
        let r = self.lookup(rhs)?;
        if l.scale_exp != r.scale_exp {
            return Err(MpcError::ScaleMismatch {
                lhs: l.scale_exp,
                rhs: r.scale_exp,
            });
        }
        let ready_round = l.ready_round.max(r.ready_round);
        let wire = self.push_op(
            Some(op(lhs, rhs)),
            WireMeta {
                scale_exp: l.scale_exp,
                raw_bits: l.raw_bits.max(r.raw_bits) + 1,
                ready_round,
            },
        )?;
        self.min_round = self.min_round.max(ready_round);
        Ok(wire)
    }

    pub fn add(&mut self, lhs: WireId, rhs: WireId) -> Result<WireId> {
        self.binary_linear(|lhs, rhs| PlanOp::Add { lhs, rhs }, lhs, rhs)
    }

    pub fn sub(&mut self, lhs: WireId, rhs: WireId) -> Result<WireId> {
        self.binary_linear(|lhs, rhs| PlanOp::Sub { lhs, rhs }, lhs, rhs)
    }

    pub fn mul_pub(&mut self, src: WireId, factor: i128) -> Result<WireId> {
        let s = self.lookup(src)?;
        let factor_bits = 128 - factor.unsigned_abs().leading_zeros();
        let wire = self.push_op(
            Some(PlanOp::MulPub { src, factor }),
            WireMeta {
                scale_exp: s.scale_exp,
                raw_bits: s.raw_bits + factor_bits,
                ready_round: s.ready_round,
            },
        )?;
        self.min_round = self.min_round.max(s.ready_round);
        Ok(wire)
    }

    pub fn scale_up(&mut self, src: WireId, delta: u32) -> Result<WireId> {
        let s = self.lookup(src)?;
        let wire = self.push_op(
            Some(PlanOp::ScaleUp { src, delta }),
            WireMeta {
                scale_exp: s.scale_exp + delta,
                raw_bits: s.raw_bits + delta,
                ready_round: s.ready_round,
            },
        )?;
        self.min_round = self.min_round.max(s.ready_round);
        Ok(wire)
    }

    pub fn mul(&mut self, lhs: WireId, rhs: WireId, round: usize) -> Result<WireId> {
        let l = self.lookup(lhs)?;
        let r = self.lookup(rhs)?;
        if l.ready_round > round || r.ready_round > round {
            return Err(MpcError::PlanInvalid(format!(
                "mul scheduled in round {round} before its operands are ready (rounds {}, {})",
                l.ready_round, r.ready_round
            )));
        }
        if round < self.min_round {
            return Err(MpcError::PlanInvalid(format!(
                "mul round {round} precedes already-committed round {}",
                self.min_round
            )));
        }
        let wire = self.push_op(
            Some(PlanOp::Mul { lhs, rhs, round }),
            WireMeta {
                scale_exp: l.scale_exp + r.scale_exp,
                raw_bits: l.raw_bits + r.raw_bits,
                ready_round: round + 1,
            },
        )?;
        self.min_round = round;
        self.max_mul_round = Some(self.max_mul_round.map_or(round, |m| m.max(round)));
        Ok(wire)
    }

    pub fn reveal(&mut self, wire: WireId, to: RevealRecipient) -> Result<()> {
        self.lookup(wire)?;
        self.reveals.push(RevealSpec { wire, to });
        Ok(())
    }

    pub fn scale_of(&self, wire: WireId) -> Result<u32> {
        Ok(self.lookup(wire)?.scale_exp)
    }

    /// Exported (scale, raw_bits) pairs for every wire known to this
    /// builder, for seeding a continuation segment.
    pub fn bounds_snapshot(&self) -> Vec<(u32, u32)> {
        self.prior_meta
            .iter()
            .chain(self.meta.iter())
            .map(|m| (m.scale_exp, m.raw_bits))
            .collect()
    }

    pub fn finish(self) -> PlanSegment {
        let rounds = self.max_mul_round.map_or(0, |m| m + 1);
        PlanSegment {
            first_wire: self.first_wire,
            inputs: self.inputs,
            ops: self.ops,
            rounds,
            reveals: self.reveals,
            wire_scales: self.meta.iter().map(|m| m.scale_exp).collect(),
        }
    }

    /// Like `finish`, but force at least `min_rounds` exchange rounds so a
    /// segment's round structure can stay fixed while its content varies.
    pub fn finish_with_min_rounds(self, min_rounds: usize) -> PlanSegment {
        let mut segment = self.finish();
        segment.rounds = segment.rounds.max(min_rounds);
        segment
    }
}

impl Default for PlanBuilder {
    fn default() -> Self {
        Self::new()
    }
}
