use std::io::{Read, Write};

use crate::{NetError, Result};

/// Frames larger than this abort the session.
pub const MAX_PAYLOAD_BYTES: u64 = 16 * 1024 * 1024;

/// Fixed per-frame cost: 4-byte big-endian length plus one type byte.
pub const FRAME_OVERHEAD_BYTES: u64 = 5;

pub(crate) mod msg_type {
    pub const HELLO: u8 = 0x01;
    pub const THETAS_IDS: u8 = 0x02;
    pub const INPUT_SHARE_BATCH: u8 = 0x03;
    pub const MUL_ROUND: u8 = 0x04;
    pub const REVEAL: u8 = 0x05;
    pub const BYE: u8 = 0x06;
    pub const ERROR: u8 = 0x7F;

    pub fn is_known(code: u8) -> bool {
        matches!(
            code,
            HELLO | THETAS_IDS | INPUT_SHARE_BATCH | MUL_ROUND | REVEAL | BYE | ERROR
        )
    }
}

/// One wire frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub msg_type: u8,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn wire_len(&self) -> u64 {
        FRAME_OVERHEAD_BYTES + self.payload.len() as u64
    }
}

/// Write one frame. Returns the number of bytes put on the wire.
pub fn write_frame(w: &mut impl Write, frame: &Frame) -> Result<u64> {
    let len = frame.payload.len() as u64;
    if len > MAX_PAYLOAD_BYTES {
        return Err(NetError::Oversize(len));
    }
    w.write_all(&(len as u32).to_be_bytes())?;
    w.write_all(&[frame.msg_type])?;
    w.write_all(&frame.payload)?;
    w.flush()?;
    Ok(frame.wire_len())
}

/// Read one frame. Rejects oversize payloads and unknown message types.
pub fn read_frame(r: &mut impl Read) -> Result<Frame> {
    let mut header = [0u8; 5];
    r.read_exact(&mut header)?;
    let len = u32::from_be_bytes([header[0], header[1], header[2], header[3]]) as u64;
    if len > MAX_PAYLOAD_BYTES {
        return Err(NetError::Oversize(len));
    }
    let msg_type = header[4];
    if !msg_type::is_known(msg_type) {
        return Err(NetError::UnknownMsgType(msg_type));
    }
    let mut payload = vec![0u8; len as usize];
    r.read_exact(&mut payload)?;
    Ok(Frame { msg_type, payload })
}
