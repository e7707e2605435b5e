use rand_chacha::ChaCha20Rng;

use crate::{
    mul_finalize, mul_open, share, Direction, FixedPoint, MessageTag, MpcError, MulOpening,
    PartyRole, PlanOp, PlanSegment, Result, RingElement, Share, Transcript, TriplePool, TripleShare,
    WireId,
};

/// Transport abstraction one party drives a session over. Implementations
/// exist for in-memory pipes (simulation) and framed sockets (network).
pub trait SessionChannel {
    fn send(&mut self, tag: MessageTag, payload: &[u8]) -> Result<()>;
    fn recv(&mut self, expect: MessageTag) -> Result<Vec<u8>>;
    /// Called once per exchange round; transcript-recording channels count
    /// these.
    fn note_round(&mut self) {}
}

impl<C: SessionChannel + ?Sized> SessionChannel for &mut C {
    fn send(&mut self, tag: MessageTag, payload: &[u8]) -> Result<()> {
        (**self).send(tag, payload)
    }

    fn recv(&mut self, expect: MessageTag) -> Result<Vec<u8>> {
        (**self).recv(expect)
    }

    fn note_round(&mut self) {
        (**self).note_round()
    }
}

/// In-memory duplex channel over std mpsc pairs.
pub struct PipeChannel {
    tx: std::sync::mpsc::Sender<(MessageTag, Vec<u8>)>,
    rx: std::sync::mpsc::Receiver<(MessageTag, Vec<u8>)>,
}

impl PipeChannel {
    /// A connected pair: what one end sends, the other receives.
    pub fn pair() -> (PipeChannel, PipeChannel) {
        let (tx_a, rx_b) = std::sync::mpsc::channel();
        let (tx_b, rx_a) = std::sync::mpsc::channel();
        (
            PipeChannel { tx: tx_a, rx: rx_a },
            PipeChannel { tx: tx_b, rx: rx_b },
        )
    }
}

impl SessionChannel for PipeChannel {
    fn send(&mut self, tag: MessageTag, payload: &[u8]) -> Result<()> {
        self.tx
            .send((tag, payload.to_vec()))
            .map_err(|_| MpcError::ChannelClosed)
    }

    fn recv(&mut self, expect: MessageTag) -> Result<Vec<u8>> {
        let (tag, payload) = self.rx.recv().map_err(|_| MpcError::ChannelClosed)?;
        if tag != expect {
            return Err(MpcError::Protocol(format!(
                "expected {expect:?} message, got {tag:?}"
            )));
        }
        Ok(payload)
    }
}

/// Wraps a channel and accounts every message into a transcript from the
/// wrapped party's point of view.
pub struct TranscriptingChannel<'a, C: SessionChannel> {
    inner: C,
    role: PartyRole,
    transcript: &'a mut Transcript,
}

impl<'a, C: SessionChannel> TranscriptingChannel<'a, C> {
    pub fn new(inner: C, role: PartyRole, transcript: &'a mut Transcript) -> Self {
        Self {
            inner,
            role,
            transcript,
        }
    }

    pub fn into_inner(self) -> C {
        self.inner
    }

    fn outbound(&self) -> Direction {
        match self.role {
            PartyRole::Citizen => Direction::CitizenToAuthority,
            PartyRole::Authority => Direction::AuthorityToCitizen,
        }
    }

    fn inbound(&self) -> Direction {
        match self.role {
            PartyRole::Citizen => Direction::AuthorityToCitizen,
            PartyRole::Authority => Direction::CitizenToAuthority,
        }
    }
}

impl<C: SessionChannel> SessionChannel for TranscriptingChannel<'_, C> {
    fn send(&mut self, tag: MessageTag, payload: &[u8]) -> Result<()> {
        self.transcript
            .record(self.outbound(), tag, payload.len() as u64);
        self.inner.send(tag, payload)
    }

    fn recv(&mut self, expect: MessageTag) -> Result<Vec<u8>> {
        let payload = self.inner.recv(expect)?;
        self.transcript
            .record(self.inbound(), expect, payload.len() as u64);
        Ok(payload)
    }

    fn note_round(&mut self) {
        self.transcript.note_round();
        self.inner.note_round();
    }
}

/// A value opened to this party at the end of a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevealedValue {
    pub wire: WireId,
    pub value: FixedPoint,
}

struct PendingMul {
    wire: WireId,
    x: Share,
    y: Share,
    triple: TripleShare,
    mine: MulOpening,
}

/// One party's wire state and execution cursor for a session. Wires
/// accumulate across segments; each segment is executed with the round
/// schedule its plan declares.
pub struct PartyExec {
    role: PartyRole,
    wires: Vec<Option<Share>>,
    triples: TriplePool,
    rng: ChaCha20Rng,
}

impl PartyExec {
    pub fn new(role: PartyRole, triples: TriplePool, rng: ChaCha20Rng) -> Self {
        Self {
            role,
            wires: Vec::new(),
            triples,
            rng,
        }
    }

    pub fn role(&self) -> PartyRole {
        self.role
    }

    fn wire(&self, id: WireId) -> Result<Share> {
        self.wires
            .get(id)
            .copied()
            .flatten()
            .ok_or_else(|| MpcError::Protocol(format!("wire {id} not yet available")))
    }

    fn set_wire(&mut self, id: WireId, value: Share) {
        if self.wires.len() <= id {
            self.wires.resize(id + 1, None);
        }
        self.wires[id] = Some(value);
    }

    /// Validate and share this party's own inputs for a segment, returning
    /// the peer's fragments in input order.
    fn provide_inputs(&mut self, segment: &PlanSegment, my_inputs: &[FixedPoint]) -> Result<Vec<u8>> {
        if self.wires.len() != segment.first_wire {
            return Err(MpcError::PlanInvalid(format!(
                "segment expects wires to start at {}, party holds {}",
                segment.first_wire,
                self.wires.len()
            )));
        }
        self.wires
            .resize(segment.first_wire + segment.wires_defined(), None);
        let mut payload = Vec::new();
        let mut supplied = my_inputs.iter();
        for (offset, spec) in segment.inputs.iter().enumerate() {
            if spec.owner != self.role {
                continue;
            }
            let value = supplied.next().ok_or_else(|| {
                MpcError::Protocol("fewer input values than the plan declares".into())
            })?;
            if value.scale_exp() != spec.scale_exp {
                return Err(MpcError::ScaleMismatch {
                    lhs: value.scale_exp(),
                    rhs: spec.scale_exp,
                });
            }
            let magnitude = value.signed_raw().unsigned_abs();
            let bound_bits = spec.value_bits + spec.scale_exp;
            if magnitude >= 1u128 << bound_bits {
                return Err(MpcError::BoundExceeded {
                    value: crate::fx_decode(value),
                    scale_exp: spec.scale_exp,
                    bound_bits,
                });
            }
            let (citizen_share, authority_share) = share(value, &mut self.rng);
            let (mine, theirs) = match self.role {
                PartyRole::Citizen => (citizen_share, authority_share),
                PartyRole::Authority => (authority_share, citizen_share),
            };
            self.set_wire(segment.first_wire + offset, mine);
            payload.extend_from_slice(&theirs.fragment.to_le_bytes());
        }
        if supplied.next().is_some() {
            return Err(MpcError::Protocol(
                "more input values than the plan declares".into(),
            ));
        }
        Ok(payload)
    }

    /// Store the fragments the peer shared for its own inputs.
    fn absorb_peer_inputs(&mut self, segment: &PlanSegment, payload: &[u8]) -> Result<()> {
        let peer = self.role.peer();
        let peer_inputs: Vec<usize> = segment
            .inputs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.owner == peer)
            .map(|(i, _)| i)
            .collect();
        if payload.len() != peer_inputs.len() * RingElement::BYTES {
            return Err(MpcError::Protocol(format!(
                "input share batch of {} bytes, expected {}",
                payload.len(),
                peer_inputs.len() * RingElement::BYTES
            )));
        }
        for (chunk, offset) in payload.chunks_exact(RingElement::BYTES).zip(peer_inputs) {
            let mut bytes = [0u8; 16];
            bytes.copy_from_slice(chunk);
            let spec = segment.inputs[offset];
            self.set_wire(
                segment.first_wire + offset,
                Share {
                    party: self.role,
                    fragment: RingElement::from_le_bytes(bytes),
                    scale_exp: spec.scale_exp,
                },
            );
        }
        Ok(())
    }
}

fn local_op(exec: &mut PartyExec, out: WireId, op: &PlanOp) -> Result<()> {
    let value = match *op {
        PlanOp::Add { lhs, rhs } => crate::add(&exec.wire(lhs)?, &exec.wire(rhs)?)?,
        PlanOp::Sub { lhs, rhs } => crate::sub(&exec.wire(lhs)?, &exec.wire(rhs)?)?,
        PlanOp::MulPub { src, factor } => crate::mul_public(&exec.wire(src)?, factor),
        PlanOp::ScaleUp { src, delta } => crate::scale_up(&exec.wire(src)?, delta),
        PlanOp::Mul { .. } => unreachable!("mul handled by the round loop"),
    };
    exec.set_wire(out, value);
    Ok(())
}

/// Open this party's side of every round-`round` multiplication, leaving
/// them pending, and evaluate any local ops that become computable along
/// the way. Returns the concatenated openings.
fn open_round(
    exec: &mut PartyExec,
    segment: &PlanSegment,
    cursor: &mut usize,
    round: usize,
) -> Result<(Vec<u8>, Vec<PendingMul>)> {
    let mut payload = Vec::new();
    let mut pending = Vec::new();
    while *cursor < segment.ops.len() {
        let op = segment.ops[*cursor];
        let out = segment.first_wire + segment.inputs.len() + *cursor;
        match op {
            PlanOp::Mul {
                lhs,
                rhs,
                round: op_round,
            } => {
                if op_round > round {
                    break;
                }
                if op_round < round {
                    return Err(MpcError::PlanInvalid(format!(
                        "round {op_round} mul encountered while opening round {round}"
                    )));
                }
                let x = exec.wire(lhs)?;
                let y = exec.wire(rhs)?;
                let triple = exec.triples.claim_next()?;
                let mine = mul_open(&x, &y, &triple)?;
                payload.extend_from_slice(&mine.to_bytes());
                pending.push(PendingMul {
                    wire: out,
                    x,
                    y,
                    triple,
                    mine,
                });
                *cursor += 1;
            }
            _ => {
                // Local ops run as soon as their operands exist; one whose
                // operands are still pending blocks the cursor until the
                // round completes.
                let ready = match op {
                    PlanOp::Add { lhs, rhs } | PlanOp::Sub { lhs, rhs } => {
                        exec.wire(lhs).is_ok() && exec.wire(rhs).is_ok()
                    }
                    PlanOp::MulPub { src, .. } | PlanOp::ScaleUp { src, .. } => {
                        exec.wire(src).is_ok()
                    }
                    PlanOp::Mul { .. } => unreachable!(),
                };
                if !ready {
                    break;
                }
                local_op(exec, out, &op)?;
                *cursor += 1;
            }
        }
    }
    Ok((payload, pending))
}

/// Complete a round's pending multiplications with the peer's openings.
fn absorb_round(exec: &mut PartyExec, pending: Vec<PendingMul>, payload: &[u8]) -> Result<()> {
    if payload.len() != pending.len() * 32 {
        return Err(MpcError::Protocol(format!(
            "mul round of {} bytes, expected {}",
            payload.len(),
            pending.len() * 32
        )));
    }
    for (p, chunk) in pending.into_iter().zip(payload.chunks_exact(32)) {
        let peer = MulOpening::from_bytes(chunk)?;
        let z = mul_finalize(&p.x, &p.y, &p.triple, p.mine, peer);
        exec.set_wire(p.wire, z);
    }
    Ok(())
}

/// Drain any trailing local ops after the final round of a segment.
fn finish_locals(exec: &mut PartyExec, segment: &PlanSegment, cursor: &mut usize) -> Result<()> {
    while *cursor < segment.ops.len() {
        let op = segment.ops[*cursor];
        let out = segment.first_wire + segment.inputs.len() + *cursor;
        local_op(exec, out, &op)?;
        *cursor += 1;
    }
    Ok(())
}

fn reveal_payload(exec: &PartyExec, segment: &PlanSegment) -> Result<Vec<u8>> {
    let mut payload = Vec::new();
    for spec in &segment.reveals {
        if spec.to.includes(exec.role.peer()) {
            payload.extend_from_slice(&exec.wire(spec.wire)?.fragment.to_le_bytes());
        }
    }
    Ok(payload)
}

fn absorb_reveals(
    exec: &PartyExec,
    segment: &PlanSegment,
    payload: &[u8],
) -> Result<Vec<RevealedValue>> {
    let mine: Vec<&crate::RevealSpec> = segment
        .reveals
        .iter()
        .filter(|spec| spec.to.includes(exec.role))
        .collect();
    if payload.len() != mine.len() * RingElement::BYTES {
        return Err(MpcError::Protocol(format!(
            "reveal batch of {} bytes, expected {}",
            payload.len(),
            mine.len() * RingElement::BYTES
        )));
    }
    let mut out = Vec::with_capacity(mine.len());
    for (spec, chunk) in mine.into_iter().zip(payload.chunks_exact(RingElement::BYTES)) {
        let mut bytes = [0u8; 16];
        bytes.copy_from_slice(chunk);
        let peer_fragment = RingElement::from_le_bytes(bytes);
        let my_share = exec.wire(spec.wire)?;
        out.push(RevealedValue {
            wire: spec.wire,
            value: FixedPoint::from_raw(
                my_share.fragment.wrapping_add(peer_fragment),
                my_share.scale_exp,
            ),
        });
    }
    Ok(out)
}

/// Execute one plan segment as `role` over `channel`.
///
/// Message order is fixed by the plan alone: the citizen sends its input
/// batch first, then the authority; each multiplication round is one
/// citizen-then-authority exchange of openings; reveals close the segment
/// in the same citizen-then-authority order. Both directions always carry
/// their (possibly empty) message so the message sequence is identical for
/// every run of the same plan.
pub fn run_segment_as(
    exec: &mut PartyExec,
    segment: &PlanSegment,
    my_inputs: &[FixedPoint],
    channel: &mut dyn SessionChannel,
) -> Result<Vec<RevealedValue>> {
    // Input exchange.
    let my_batch = exec.provide_inputs(segment, my_inputs)?;
    let peer_batch = match exec.role {
        PartyRole::Citizen => {
            channel.send(MessageTag::InputShares, &my_batch)?;
            channel.recv(MessageTag::InputShares)?
        }
        PartyRole::Authority => {
            let batch = channel.recv(MessageTag::InputShares)?;
            channel.send(MessageTag::InputShares, &my_batch)?;
            batch
        }
    };
    exec.absorb_peer_inputs(segment, &peer_batch)?;
    channel.note_round();

    // Multiplication rounds.
    let mut cursor = 0usize;
    for round in 0..segment.rounds {
        let (my_opens, pending) = open_round(exec, segment, &mut cursor, round)?;
        let peer_opens = match exec.role {
            PartyRole::Citizen => {
                channel.send(MessageTag::MulOpen, &my_opens)?;
                channel.recv(MessageTag::MulOpen)?
            }
            PartyRole::Authority => {
                let opens = channel.recv(MessageTag::MulOpen)?;
                channel.send(MessageTag::MulOpen, &my_opens)?;
                opens
            }
        };
        absorb_round(exec, pending, &peer_opens)?;
        channel.note_round();
    }
    finish_locals(exec, segment, &mut cursor)?;

    // Reveal exchange.
    let my_reveals = reveal_payload(exec, segment)?;
    let peer_reveals = match exec.role {
        PartyRole::Citizen => {
            channel.send(MessageTag::Reveal, &my_reveals)?;
            channel.recv(MessageTag::Reveal)?
        }
        PartyRole::Authority => {
            let reveals = channel.recv(MessageTag::Reveal)?;
            channel.send(MessageTag::Reveal, &my_reveals)?;
            reveals
        }
    };
    channel.note_round();
    absorb_reveals(exec, segment, &peer_reveals)
}
