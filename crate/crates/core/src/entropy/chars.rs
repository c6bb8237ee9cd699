//! Fixed prefix code for the character streams.
//!
//! ```text
//! A 00    C 01    G 10    T 110    N 1110    other 1111 + 8-bit byte
//! ```
//!
//! The end marker is the escape followed by `0x00`.

use super::bitio::{BitReader, BitWriter};
use super::DecodeError;
use crate::mapper::Novel;

const ESCAPE: (u64, u32) = (0b1111, 4);
pub const END_BYTE: u8 = 0x00;

fn code(b: u8) -> Option<(u64, u32)> {
    match b {
        b'A' => Some((0b00, 2)),
        b'C' => Some((0b01, 2)),
        b'G' => Some((0b10, 2)),
        b'T' => Some((0b110, 3)),
        b'N' => Some((0b1110, 4)),
        _ => None,
    }
}

pub fn encode_char(w: &mut BitWriter, b: u8) {
    match code(b) {
        Some((bits, n)) => w.write_bits(bits, n),
        None => {
            w.write_bits(ESCAPE.0, ESCAPE.1);
            w.write_bits(u64::from(b), 8);
        }
    }
}

pub fn encode_novel(w: &mut BitWriter, z: Novel) {
    match z {
        Novel::Byte(b) => encode_char(w, b),
        Novel::End => {
            w.write_bits(ESCAPE.0, ESCAPE.1);
            w.write_bits(u64::from(END_BYTE), 8);
        }
    }
}

pub fn encode_chars(chars: &[u8]) -> BitWriter {
    let mut w = BitWriter::new();
    chars.iter().for_each(|&b| encode_char(&mut w, b));
    w
}

/// Decodes one character. An escaped `0x00` comes back as `0x00`; telling
/// it apart from the end marker is left to the caller.
pub fn decode_char(r: &mut BitReader<'_>) -> Result<u8, DecodeError> {
    if !r.read_bit()? {
        return Ok(if r.read_bit()? { b'C' } else { b'A' });
    }
    if !r.read_bit()? {
        return Ok(b'G');
    }
    if !r.read_bit()? {
        return Ok(b'T');
    }
    if !r.read_bit()? {
        return Ok(b'N');
    }
    Ok(r.read_bits(8)? as u8)
}

pub fn decode_chars(r: &mut BitReader<'_>, count: usize) -> Result<Vec<u8>, DecodeError> {
    let mut out = Vec::with_capacity(count.min(r.remaining() as usize / 2));
    for _ in 0..count {
        out.push(decode_char(r)?);
    }
    Ok(out)
}
