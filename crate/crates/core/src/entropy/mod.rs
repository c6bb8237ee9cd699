//! Stage two: turning an [`EditSet`] into bit streams.
//!
//! All integers go into one list, coded with a canonical Huffman code:
//!
//! 1. `|delta|` of the `F` positions (signs kept in a separate bit vector),
//! 2. the `F` lengths as they are,
//! 3. deltas of the `S` positions,
//! 4. deltas of the `I` positions,
//! 5. deltas of the `D` positions,
//! 6. the `D` lengths.
//!
//! Every delta list starts from 0. Characters use the fixed table in
//! [`chars`]: the `F` novel symbols, then the `S` characters, then the `I`
//! characters.

pub mod bitio;
pub mod chars;
pub mod golomb;
pub mod huffman;

use thiserror::Error;

use crate::mapper::{Instruction, Novel};
use crate::segmenter::{Deletion, EditSet, Insertion, Substitution};
use bitio::{BitReader, BitWriter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("bit stream ended early")]
    Exhausted,
    #[error("malformed stream: {0}")]
    Malformed(&'static str),
    #[error("{section} section has {left} unused bits")]
    TrailingBits { section: &'static str, left: u64 },
}

/// `(|F|, |S|, |I|, |D|)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SectionCounts {
    pub instructions: u64,
    pub substitutions: u64,
    pub insertions: u64,
    pub deletions: u64,
}

impl SectionCounts {
    pub fn of(edits: &EditSet) -> Self {
        let [f, s, i, d] = edits.counts();
        SectionCounts {
            instructions: f as u64,
            substitutions: s as u64,
            insertions: i as u64,
            deletions: d as u64,
        }
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.instructions, self.substitutions, self.insertions, self.deletions]
    }

    fn integer_count(&self) -> Option<u64> {
        self.instructions
            .checked_mul(2)?
            .checked_add(self.substitutions)?
            .checked_add(self.insertions)?
            .checked_add(self.deletions.checked_mul(2)?)
    }

    fn char_count(&self) -> Option<u64> {
        self.instructions
            .checked_add(self.substitutions)?
            .checked_add(self.insertions)
    }
}

/// The combined integer list plus the `F` position signs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerStream {
    pub values: Vec<u64>,
    /// `true` where the `F` position delta is negative.
    pub sign_bits: Vec<bool>,
    pub counts: SectionCounts,
}

pub fn build_integer_stream(edits: &EditSet) -> IntegerStream {
    let counts = SectionCounts::of(edits);
    let mut values = Vec::with_capacity(counts.integer_count().unwrap_or(0) as usize);
    let mut sign_bits = Vec::with_capacity(edits.instructions.len());
    let mut prev = 0u64;
    for ins in &edits.instructions {
        sign_bits.push(ins.pos < prev);
        values.push(ins.pos.abs_diff(prev));
        prev = ins.pos;
    }
    values.extend(edits.instructions.iter().map(|i| i.len));
    values.extend(deltas(edits.substitutions.iter().map(|s| s.pos)));
    values.extend(deltas(edits.insertions.iter().map(|i| i.pos)));
    values.extend(deltas(edits.deletions.iter().map(|d| d.pos)));
    values.extend(edits.deletions.iter().map(|d| d.len));
    IntegerStream { values, sign_bits, counts }
}

fn deltas(positions: impl Iterator<Item = u64>) -> impl Iterator<Item = u64> {
    positions.scan(0u64, |prev, p| {
        let d = p.wrapping_sub(*prev);
        *prev = p;
        Some(d)
    })
}

fn undelta(values: &[u64]) -> Result<Vec<u64>, DecodeError> {
    let mut acc = 0u64;
    values
        .iter()
        .map(|&d| {
            acc = acc
                .checked_add(d)
                .ok_or(DecodeError::Malformed("position overflows u64"))?;
            Ok(acc)
        })
        .collect()
}

/// Characters in stream order.
pub fn char_stream(edits: &EditSet) -> Vec<Novel> {
    edits
        .instructions
        .iter()
        .map(|i| i.novel)
        .chain(edits.substitutions.iter().map(|s| Novel::Byte(s.ch)))
        .chain(edits.insertions.iter().map(|i| Novel::Byte(i.ch)))
        .collect()
}

/// A finished bit string.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bits {
    pub bytes: Vec<u8>,
    pub len: u64,
}

impl From<BitWriter> for Bits {
    fn from(w: BitWriter) -> Self {
        let (bytes, len) = w.finish();
        Bits { bytes, len }
    }
}

impl Bits {
    pub fn reader(&self) -> BitReader<'_> {
        BitReader::new(&self.bytes, self.len)
    }
}

/// Everything the container stores about an edit set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EncodedStreams {
    pub counts: SectionCounts,
    /// Golomb parameter of the codebook's remainder list, if it has one.
    pub golomb_param: Option<u8>,
    pub sign_bits: Bits,
    pub codebook: Bits,
    pub integers: Bits,
    pub chars: Bits,
}

pub fn encode_edits(edits: &EditSet) -> EncodedStreams {
    let stream = build_integer_stream(edits);

    let mut signs = BitWriter::new();
    stream.sign_bits.iter().for_each(|&b| signs.write_bit(b));

    let (book, payload) = huffman::huffman_encode(&stream.values);
    let mut codebook = BitWriter::new();
    let param = huffman::encode_codebook(&book, &mut codebook);

    let mut chars = BitWriter::new();
    for z in char_stream(edits) {
        chars::encode_novel(&mut chars, z);
    }

    EncodedStreams {
        counts: stream.counts,
        golomb_param: param.map(|r| r as u8),
        sign_bits: signs.into(),
        codebook: codebook.into(),
        integers: payload.into(),
        chars: chars.into(),
    }
}

fn expect_drained(r: &BitReader<'_>, section: &'static str) -> Result<(), DecodeError> {
    match r.remaining() {
        0 => Ok(()),
        left => Err(DecodeError::TrailingBits { section, left }),
    }
}

/// Decodes the integer list and sign bits back into an [`IntegerStream`]
/// and the character list.
pub fn decode_streams(streams: &EncodedStreams) -> Result<(IntegerStream, Vec<u8>), DecodeError> {
    let counts = streams.counts;
    let n_ints = counts
        .integer_count()
        .ok_or(DecodeError::Malformed("section counts overflow"))?;
    let n_chars = counts
        .char_count()
        .ok_or(DecodeError::Malformed("section counts overflow"))?;

    let mut r = streams.sign_bits.reader();
    if r.remaining() != counts.instructions {
        return Err(DecodeError::Malformed("sign vector length differs from |F|"));
    }
    let sign_bits = (0..counts.instructions)
        .map(|_| r.read_bit())
        .collect::<Result<Vec<_>, _>>()?;

    let mut r = streams.codebook.reader();
    let (book, param) = huffman::decode_codebook(&mut r)?;
    expect_drained(&r, "codebook")?;
    if param.map(|p| p as u8) != streams.golomb_param {
        return Err(DecodeError::Malformed("Golomb parameter differs from header"));
    }

    let mut r = streams.integers.reader();
    let values = huffman::huffman_decode(&book, &mut r, usize::try_from(n_ints).unwrap_or(usize::MAX))?;
    expect_drained(&r, "integer payload")?;

    let mut r = streams.chars.reader();
    let chars = chars::decode_chars(&mut r, usize::try_from(n_chars).unwrap_or(usize::MAX))?;
    expect_drained(&r, "character payload")?;

    Ok((IntegerStream { values, sign_bits, counts }, chars))
}

/// Rebuilds the edit set from a decoded integer stream and character list.
///
/// An escaped `0x00` in the last `F` slot is the end marker exactly when
/// that reading reproduces `target_length`.
pub fn assemble(
    stream: &IntegerStream,
    chars: &[u8],
    target_length: u64,
) -> Result<EditSet, DecodeError> {
    let [f, s, i, d] = stream.counts.as_array().map(|c| c as usize);
    if stream.values.len() != 2 * f + s + i + 2 * d || chars.len() != f + s + i || stream.sign_bits.len() != f {
        return Err(DecodeError::Malformed("stream sizes disagree with section counts"));
    }
    let (f_pos, rest) = stream.values.split_at(f);
    let (f_len, rest) = rest.split_at(f);
    let (s_pos, rest) = rest.split_at(s);
    let (i_pos, rest) = rest.split_at(i);
    let (d_pos, d_len) = rest.split_at(d);

    let mut instructions = Vec::with_capacity(f);
    let mut prev = 0u64;
    for k in 0..f {
        let pos = if stream.sign_bits[k] {
            prev.checked_sub(f_pos[k])
        } else {
            prev.checked_add(f_pos[k])
        }
        .ok_or(DecodeError::Malformed("instruction position out of range"))?;
        prev = pos;
        instructions.push(Instruction::new(pos, f_len[k], chars[k]));
    }
    let substitutions = undelta(s_pos)?
        .into_iter()
        .zip(&chars[f..f + s])
        .map(|(pos, &ch)| Substitution { pos, ch })
        .collect();
    let insertions = undelta(i_pos)?
        .into_iter()
        .zip(&chars[f + s..])
        .map(|(pos, &ch)| Insertion { pos, ch })
        .collect();
    let deletions: Vec<Deletion> = undelta(d_pos)?
        .into_iter()
        .zip(d_len)
        .map(|(pos, &len)| Deletion { pos, len })
        .collect();

    let mut edits = EditSet { instructions, substitutions, insertions, deletions };
    if let Some(last) = edits.instructions.last_mut() {
        if last.novel == Novel::Byte(chars::END_BYTE) {
            let with_byte = produced_length(&edits);
            if with_byte.and_then(|n| n.checked_sub(1)) == Some(target_length) {
                edits.instructions.last_mut().unwrap().novel = Novel::End;
            }
        }
    }
    Ok(edits)
}

/// Target length implied by an edit set, `None` on overflow or underflow.
pub fn produced_length(edits: &EditSet) -> Option<u64> {
    let mut total = 0u64;
    for ins in &edits.instructions {
        total = total.checked_add(ins.len)?.checked_add(u64::from(!ins.novel.is_end()))?;
    }
    total = total.checked_add(edits.insertions.len() as u64)?;
    for d in &edits.deletions {
        total = total.checked_sub(d.len)?;
    }
    Some(total)
}

/// Full inverse of [`encode_edits`].
pub fn decode_edits(streams: &EncodedStreams, target_length: u64) -> Result<EditSet, DecodeError> {
    let (stream, chars) = decode_streams(streams)?;
    assemble(&stream, &chars, target_length)
}
