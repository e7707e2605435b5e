use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use skyveil_mpc::{MessageTag, MpcError, ProtocolVariant, SessionChannel, SessionParams};
use skyveil_shortlist::{make_masks, AuthorityMasks, RegionRef};

use crate::frame::{msg_type, read_frame, write_frame, Frame, FRAME_OVERHEAD_BYTES};
use crate::{NetError, Result};

pub const PROTOCOL_VERSION: u8 = 1;

/// Drone ids travel as fixed-width NUL-padded UTF-8 so the public metadata
/// frame has the same size for every fleet of a given n.
pub const WIRE_ID_BYTES: usize = 16;

fn tag_to_code(tag: MessageTag) -> u8 {
    match tag {
        MessageTag::Hello => msg_type::HELLO,
        MessageTag::ThetasIds => msg_type::THETAS_IDS,
        MessageTag::InputShares => msg_type::INPUT_SHARE_BATCH,
        MessageTag::MulOpen => msg_type::MUL_ROUND,
        MessageTag::Reveal => msg_type::REVEAL,
        MessageTag::Bye => msg_type::BYE,
        MessageTag::Error => msg_type::ERROR,
    }
}

fn code_to_tag(code: u8) -> Result<MessageTag> {
    Ok(match code {
        msg_type::HELLO => MessageTag::Hello,
        msg_type::THETAS_IDS => MessageTag::ThetasIds,
        msg_type::INPUT_SHARE_BATCH => MessageTag::InputShares,
        msg_type::MUL_ROUND => MessageTag::MulOpen,
        msg_type::REVEAL => MessageTag::Reveal,
        msg_type::BYE => MessageTag::Bye,
        msg_type::ERROR => MessageTag::Error,
        other => return Err(NetError::UnknownMsgType(other)),
    })
}

/// A `SessionChannel` over any duplex byte stream, counting exact socket
/// bytes and frames per direction. A received ERROR frame surfaces as a
/// protocol error carrying the peer's message.
pub struct FramedChannel<S: Read + Write> {
    stream: S,
    bytes_sent: u64,
    bytes_received: u64,
    frames_sent: u64,
    frames_received: u64,
    capture: Option<Vec<Frame>>,
}

impl<S: Read + Write> FramedChannel<S> {
    pub fn new(stream: S) -> Self {
        Self {
            stream,
            bytes_sent: 0,
            bytes_received: 0,
            frames_sent: 0,
            frames_received: 0,
            capture: None,
        }
    }

    /// Keep a copy of every frame moved in either direction (tests).
    pub fn enable_capture(&mut self) {
        self.capture = Some(Vec::new());
    }

    pub fn captured(&self) -> &[Frame] {
        self.capture.as_deref().unwrap_or(&[])
    }

    pub fn bytes_sent(&self) -> u64 {
        self.bytes_sent
    }

    pub fn bytes_received(&self) -> u64 {
        self.bytes_received
    }

    pub fn frames_sent(&self) -> u64 {
        self.frames_sent
    }

    pub fn frames_received(&self) -> u64 {
        self.frames_received
    }

    pub fn send_frame(&mut self, msg_type: u8, payload: Vec<u8>) -> Result<()> {
        let frame = Frame { msg_type, payload };
        self.bytes_sent += write_frame(&mut self.stream, &frame)?;
        self.frames_sent += 1;
        if let Some(capture) = &mut self.capture {
            capture.push(frame);
        }
        Ok(())
    }

    pub fn recv_frame(&mut self) -> Result<Frame> {
        let frame = read_frame(&mut self.stream)?;
        self.bytes_received += frame.wire_len();
        self.frames_received += 1;
        if let Some(capture) = &mut self.capture {
            capture.push(frame.clone());
        }
        if frame.msg_type == msg_type::ERROR {
            return Err(NetError::Remote(
                String::from_utf8_lossy(&frame.payload).into_owned(),
            ));
        }
        Ok(frame)
    }

    /// Best-effort ERROR notification before tearing a session down.
    pub fn send_error(&mut self, message: &str) {
        let _ = self.send_frame(msg_type::ERROR, message.as_bytes().to_vec());
    }
}

impl<S: Read + Write> SessionChannel for FramedChannel<S> {
    fn send(&mut self, tag: MessageTag, payload: &[u8]) -> skyveil_mpc::Result<()> {
        self.send_frame(tag_to_code(tag), payload.to_vec())
            .map_err(|e| MpcError::Protocol(e.to_string()))
    }

    fn recv(&mut self, expect: MessageTag) -> skyveil_mpc::Result<Vec<u8>> {
        let frame = self
            .recv_frame()
            .map_err(|e| MpcError::Protocol(e.to_string()))?;
        let tag = code_to_tag(frame.msg_type).map_err(|e| MpcError::Protocol(e.to_string()))?;
        if tag != expect {
            return Err(MpcError::Protocol(format!(
                "expected {expect:?} frame, got {tag:?}"
            )));
        }
        Ok(frame.payload)
    }
}

/// HELLO payload: version, variant, fleet size. The citizen opens with
/// n = 0; the authority's reply reveals the true n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hello {
    pub version: u8,
    pub variant: ProtocolVariant,
    pub n: u32,
}

impl Hello {
    pub fn to_bytes(self) -> Vec<u8> {
        let mut out = Vec::with_capacity(6);
        out.push(self.version);
        out.push(match self.variant {
            ProtocolVariant::Oblivious => 0,
            ProtocolVariant::NonOblivious => 1,
        });
        out.extend_from_slice(&self.n.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() != 6 {
            return Err(NetError::Protocol(format!(
                "HELLO must be 6 bytes, got {}",
                bytes.len()
            )));
        }
        let variant = match bytes[1] {
            0 => ProtocolVariant::Oblivious,
            1 => ProtocolVariant::NonOblivious,
            other => {
                return Err(NetError::Protocol(format!(
                    "unknown variant code {other}"
                )))
            }
        };
        Ok(Self {
            version: bytes[0],
            variant,
            n: u32::from_le_bytes([bytes[2], bytes[3], bytes[4], bytes[5]]),
        })
    }
}

/// THETAS_IDS payload: the public region reference followed by one
/// fixed-width (id, theta) pair per drone.
pub(crate) fn encode_thetas_ids(
    region: &RegionRef,
    ids: &[String],
    thetas: &[f64],
) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(16 + ids.len() * (WIRE_ID_BYTES + 8));
    out.extend_from_slice(&region.lat.to_le_bytes());
    out.extend_from_slice(&region.lon.to_le_bytes());
    for (id, theta) in ids.iter().zip(thetas) {
        let bytes = id.as_bytes();
        if bytes.len() > WIRE_ID_BYTES {
            return Err(NetError::IdTooLong(id.clone()));
        }
        let mut slot = [0u8; WIRE_ID_BYTES];
        slot[..bytes.len()].copy_from_slice(bytes);
        out.extend_from_slice(&slot);
        out.extend_from_slice(&theta.to_le_bytes());
    }
    Ok(out)
}

pub(crate) fn decode_thetas_ids(payload: &[u8]) -> Result<(RegionRef, Vec<String>, Vec<f64>)> {
    if payload.len() < 16 || (payload.len() - 16) % (WIRE_ID_BYTES + 8) != 0 {
        return Err(NetError::Protocol(format!(
            "malformed THETAS_IDS payload of {} bytes",
            payload.len()
        )));
    }
    let region = RegionRef {
        lat: f64::from_le_bytes(payload[..8].try_into().unwrap()),
        lon: f64::from_le_bytes(payload[8..16].try_into().unwrap()),
    };
    let mut ids = Vec::new();
    let mut thetas = Vec::new();
    for chunk in payload[16..].chunks_exact(WIRE_ID_BYTES + 8) {
        let id_end = chunk[..WIRE_ID_BYTES]
            .iter()
            .position(|&b| b == 0)
            .unwrap_or(WIRE_ID_BYTES);
        let id = std::str::from_utf8(&chunk[..id_end])
            .map_err(|_| NetError::Protocol("drone id is not UTF-8".into()))?
            .to_owned();
        ids.push(id);
        thetas.push(f64::from_le_bytes(
            chunk[WIRE_ID_BYTES..].try_into().unwrap(),
        ));
    }
    Ok((region, ids, thetas))
}

/// Server-side wire configuration. The dealer seed must match the
/// citizens' (the trusted dealer is simulated by a shared seed and its
/// traffic accounted as preprocessing); the session seed derives per-query
/// authority randomness.
#[derive(Debug, Clone, Copy)]
pub struct WireConfig {
    pub dealer_seed: u64,
    pub session_seed: u64,
}

impl Default for WireConfig {
    fn default() -> Self {
        Self {
            dealer_seed: 0x5EED_DEA1,
            session_seed: 0x5E55_10,
        }
    }
}

impl WireConfig {
    fn derived_seed(&self, counter: u64) -> u64 {
        self.session_seed ^ counter.wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }

    /// The parameters the authority uses for its `counter`-th session.
    pub fn session_params(&self, counter: u64, n: usize, variant: ProtocolVariant) -> SessionParams {
        SessionParams::new(n, variant).with_seeds(0, self.derived_seed(counter) + 1, self.dealer_seed)
    }

    /// The authority mask set for its `counter`-th session.
    pub fn session_masks(&self, counter: u64, n: usize) -> AuthorityMasks {
        let mut rng = ChaCha20Rng::seed_from_u64(self.derived_seed(counter));
        AuthorityMasks(make_masks(&mut rng, n))
    }
}

/// Total framing overhead for a frame count.
pub fn framing_overhead(frames: u64) -> u64 {
    frames * FRAME_OVERHEAD_BYTES
}
