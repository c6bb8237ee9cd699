//! On-disk framing of a compressed target.
//!
//! All integers are big-endian. Each section is padded with zero bits to a
//! whole byte.
//!
//! ```text
//! offset size
//!      0    4  magic "RGC1"
//!      4    1  flags: bit 0 case-normalized, bit 1 FASTA headers dropped
//!      5    8  target length
//!     13    8  reference length
//!     21    4  window left half-width L
//!     25    4  window right half-width R
//!     29    4  re-centring period M
//!     33    4  maximum deletion L_max
//!     37    4  initial window centre W
//!     41   16  |F|, |S|, |I|, |D| (4 bytes each)
//!     57    1  Golomb parameter of the codebook remainder, 0xFF if none
//!     58   32  bit lengths of: sign bits, codebook, integer payload,
//!              character payload (8 bytes each)
//!     90       sections in the same order
//! ```

use thiserror::Error;

use crate::codec::Params;
use crate::entropy::{Bits, EncodedStreams, SectionCounts};
use crate::entropy::golomb::MAX_PARAM;
use crate::mapper::WindowParams;

pub const MAGIC: &[u8; 4] = b"RGC1";
pub const HEADER_LEN: usize = 90;

const NO_GOLOMB: u8 = 0xFF;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub normalized: bool,
    pub headers_dropped: bool,
}

impl Flags {
    const NORMALIZED: u8 = 1;
    const HEADERS_DROPPED: u8 = 2;

    fn to_byte(self) -> u8 {
        (if self.normalized { Self::NORMALIZED } else { 0 })
            | (if self.headers_dropped { Self::HEADERS_DROPPED } else { 0 })
    }

    fn from_byte(b: u8) -> Result<Self, ContainerError> {
        if b & !(Self::NORMALIZED | Self::HEADERS_DROPPED) != 0 {
            return Err(ContainerError::InvalidField("reserved flag bits set"));
        }
        Ok(Flags {
            normalized: b & Self::NORMALIZED != 0,
            headers_dropped: b & Self::HEADERS_DROPPED != 0,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Container {
    pub flags: Flags,
    pub target_length: u64,
    pub reference_length: u64,
    pub params: Params,
    pub streams: EncodedStreams,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainerError {
    #[error("not an rgc container (bad magic)")]
    BadMagic,
    #[error("container truncated: need {needed} bytes, have {available}")]
    Truncated { needed: u64, available: u64 },
    #[error("section lengths do not match the container: {0}")]
    SectionLength(&'static str),
    #[error("non-zero padding bits in {0} section")]
    Padding(&'static str),
    #[error("invalid header field: {0}")]
    InvalidField(&'static str),
    #[error("{0} does not fit its header field")]
    Overflow(&'static str),
}

fn u32_field(v: u64, what: &'static str) -> Result<[u8; 4], ContainerError> {
    u32::try_from(v)
        .map(u32::to_be_bytes)
        .map_err(|_| ContainerError::Overflow(what))
}

const SECTION_NAMES: [&str; 4] = ["sign bit", "codebook", "integer payload", "character payload"];

fn sections(s: &EncodedStreams) -> [&Bits; 4] {
    [&s.sign_bits, &s.codebook, &s.integers, &s.chars]
}

pub fn write_container(c: &Container) -> Result<Vec<u8>, ContainerError> {
    let body: usize = sections(&c.streams).iter().map(|b| b.bytes.len()).sum();
    let mut out = Vec::with_capacity(HEADER_LEN + body);
    out.extend_from_slice(MAGIC);
    out.push(c.flags.to_byte());
    out.extend_from_slice(&c.target_length.to_be_bytes());
    out.extend_from_slice(&c.reference_length.to_be_bytes());
    let w = &c.params.window;
    out.extend_from_slice(&u32_field(w.left, "window left half-width")?);
    out.extend_from_slice(&u32_field(w.right, "window right half-width")?);
    out.extend_from_slice(&w.period.to_be_bytes());
    out.extend_from_slice(&u32_field(c.params.max_deletion, "maximum deletion")?);
    out.extend_from_slice(&u32_field(w.start, "initial window centre")?);
    for (n, what) in c.streams.counts.as_array().into_iter().zip(["|F|", "|S|", "|I|", "|D|"]) {
        out.extend_from_slice(&u32_field(n, what)?);
    }
    out.push(c.streams.golomb_param.unwrap_or(NO_GOLOMB));
    for bits in sections(&c.streams) {
        if bits.len.div_ceil(8) != bits.bytes.len() as u64 {
            return Err(ContainerError::SectionLength("bit length disagrees with byte length"));
        }
        out.extend_from_slice(&bits.len.to_be_bytes());
    }
    debug_assert_eq!(out.len(), HEADER_LEN);
    for bits in sections(&c.streams) {
        out.extend_from_slice(&bits.bytes);
    }
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self) -> [u8; N] {
        let out = self.bytes[self.pos..self.pos + N].try_into().unwrap();
        self.pos += N;
        out
    }

    fn u8(&mut self) -> u8 {
        self.take::<1>()[0]
    }

    fn u32(&mut self) -> u32 {
        u32::from_be_bytes(self.take())
    }

    fn u64(&mut self) -> u64 {
        u64::from_be_bytes(self.take())
    }
}

pub fn read_container(bytes: &[u8]) -> Result<Container, ContainerError> {
    if bytes.len() >= MAGIC.len() && &bytes[..MAGIC.len()] != MAGIC {
        return Err(ContainerError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(ContainerError::Truncated {
            needed: HEADER_LEN as u64,
            available: bytes.len() as u64,
        });
    }
    let mut cur = Cursor { bytes, pos: MAGIC.len() };
    let flags = Flags::from_byte(cur.u8())?;
    let target_length = cur.u64();
    let reference_length = cur.u64();
    let left = u64::from(cur.u32());
    let right = u64::from(cur.u32());
    let period = cur.u32();
    let max_deletion = u64::from(cur.u32());
    let start = u64::from(cur.u32());
    let counts = SectionCounts {
        instructions: u64::from(cur.u32()),
        substitutions: u64::from(cur.u32()),
        insertions: u64::from(cur.u32()),
        deletions: u64::from(cur.u32()),
    };
    let golomb_param = match cur.u8() {
        NO_GOLOMB => None,
        p if u32::from(p) <= MAX_PARAM => Some(p),
        _ => return Err(ContainerError::InvalidField("Golomb parameter out of range")),
    };
    let bit_lens: [u64; 4] = std::array::from_fn(|_| cur.u64());
    if bit_lens[0] != counts.instructions {
        return Err(ContainerError::SectionLength("sign bit count differs from |F|"));
    }

    let mut needed = HEADER_LEN as u64;
    for len in bit_lens {
        needed = needed
            .checked_add(len.div_ceil(8))
            .ok_or(ContainerError::SectionLength("section sizes overflow"))?;
    }
    let available = bytes.len() as u64;
    if available < needed {
        return Err(ContainerError::Truncated { needed, available });
    }
    if available > needed {
        return Err(ContainerError::SectionLength("bytes after the last section"));
    }

    let mut parts: Vec<Bits> = Vec::with_capacity(4);
    let mut pos = HEADER_LEN;
    for (len, name) in bit_lens.into_iter().zip(SECTION_NAMES) {
        let n = len.div_ceil(8) as usize;
        let chunk = &bytes[pos..pos + n];
        let pad = (n as u64 * 8 - len) as u32;
        if pad > 0 && chunk[n - 1] & ((1u8 << pad) - 1) != 0 {
            return Err(ContainerError::Padding(name));
        }
        parts.push(Bits { bytes: chunk.to_vec(), len });
        pos += n;
    }
    let [sign_bits, codebook, integers, chars]: [Bits; 4] = parts.try_into().unwrap();

    Ok(Container {
        flags,
        target_length,
        reference_length,
        params: Params {
            window: WindowParams { left, right, period, start },
            max_deletion,
        },
        streams: EncodedStreams {
            counts,
            golomb_param,
            sign_bits,
            codebook,
            integers,
            chars,
        },
    })
}
