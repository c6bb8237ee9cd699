//! End-to-end compression and decompression.

use thiserror::Error;

use crate::container::{read_container, write_container, Container, ContainerError, Flags};
use crate::entropy::{decode_edits, encode_edits, DecodeError};
use crate::mapper::{parse, Novel, WindowParams};
use crate::segmenter::{segment, EditSet, DEFAULT_MAX_DELETION};
use crate::seqio::Sequence;

/// Everything that shapes the encoding. Stored in the container header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub window: WindowParams,
    /// `L_max`: largest reference gap recorded as a deletion.
    pub max_deletion: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            window: WindowParams::default(),
            max_deletion: DEFAULT_MAX_DELETION,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("instruction {index} copies outside the reference")]
    PositionOutOfRange { index: usize },
    #[error("edit record at target position {pos} is out of order or out of range")]
    RecordOutOfRange { pos: u64 },
    #[error("intermediate sequence exhausted before the target was complete")]
    Exhausted,
    #[error("reconstructed length differs from the recorded target length {expected}")]
    LengthMismatch { expected: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("target sequence is empty")]
    EmptyTarget,
    #[error("reference sequence is empty")]
    EmptyReference,
    #[error("reference has {actual} characters but the container was made with {expected}")]
    ReferenceMismatch { expected: u64, actual: u64 },
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
}

/// Parses and segments `target` against `reference`.
pub fn edits(target: &Sequence, reference: &Sequence, params: &Params) -> EditSet {
    let instructions = parse(target, reference, &params.window);
    segment(&instructions, reference, params.max_deletion)
}

pub fn encode(
    target: &Sequence,
    reference: &Sequence,
    params: &Params,
    flags: Flags,
) -> Result<Container, CodecError> {
    if target.is_empty() {
        return Err(CodecError::EmptyTarget);
    }
    if reference.is_empty() {
        return Err(CodecError::EmptyReference);
    }
    let edits = edits(target, reference, params);
    Ok(Container {
        flags,
        target_length: target.len() as u64,
        reference_length: reference.len() as u64,
        params: *params,
        streams: encode_edits(&edits),
    })
}

pub fn compress(target: &Sequence, reference: &Sequence, params: &Params) -> Result<Vec<u8>, CodecError> {
    compress_with_flags(target, reference, params, Flags::default())
}

pub fn compress_with_flags(
    target: &Sequence,
    reference: &Sequence,
    params: &Params,
    flags: Flags,
) -> Result<Vec<u8>, CodecError> {
    Ok(write_container(&encode(target, reference, params, flags)?)?)
}

/// Decodes a parsed container's edit set.
pub fn container_edits(container: &Container) -> Result<EditSet, CodecError> {
    Ok(decode_edits(&container.streams, container.target_length)?)
}

pub fn decode(container: &Container, reference: &Sequence) -> Result<Sequence, CodecError> {
    let actual = reference.len() as u64;
    if actual != container.reference_length {
        return Err(CodecError::ReferenceMismatch {
            expected: container.reference_length,
            actual,
        });
    }
    let edits = container_edits(container)?;
    Ok(reconstruct(&edits, reference, container.target_length)?)
}

pub fn decompress(bytes: &[u8], reference: &Sequence) -> Result<Sequence, CodecError> {
    decode(&read_container(bytes)?, reference)
}

/// Rebuilds the target from an edit set.
///
/// First every instruction is expanded against the reference. Then a sweep
/// over target positions `t = 1, 2, ...` applies the records: a deletion at
/// `t - 1` skips characters of the expansion, an insertion at `t - 1` emits
/// its character without consuming any, a substitution at `t` replaces one.
pub fn reconstruct(
    edits: &EditSet,
    reference: &Sequence,
    target_length: u64,
) -> Result<Sequence, ReconstructError> {
    let mismatch = ReconstructError::LengthMismatch { expected: target_length };

    // Size the expansion before building it; a corrupt header must not
    // trigger a huge allocation.
    let mut expanded_len = 0u64;
    for (index, ins) in edits.instructions.iter().enumerate() {
        if ins.len > 0 {
            let last = ins.pos.checked_add(ins.len - 1);
            if ins.pos == 0 || last.is_none_or(|l| l > reference.len() as u64) {
                return Err(ReconstructError::PositionOutOfRange { index });
            }
        }
        expanded_len = expanded_len.checked_add(ins.span()).ok_or(mismatch.clone())?;
    }
    let deleted = edits
        .deletions
        .iter()
        .try_fold(0u64, |acc, d| acc.checked_add(d.len))
        .ok_or(mismatch.clone())?;
    let expected_expanded = target_length
        .checked_sub(edits.insertions.len() as u64)
        .and_then(|n| n.checked_add(deleted));
    if expected_expanded != Some(expanded_len) {
        return Err(mismatch);
    }

    let reference = reference.as_bytes();
    let mut expanded = Vec::with_capacity(expanded_len as usize);
    for ins in &edits.instructions {
        // A zero-length copy's position may lie past the reference end.
        if ins.len > 0 {
            let start = (ins.pos - 1) as usize;
            expanded.extend_from_slice(&reference[start..start + ins.len as usize]);
        }
        if let Novel::Byte(z) = ins.novel {
            expanded.push(z);
        }
    }

    let (subs, inss, dels) = (&edits.substitutions, &edits.insertions, &edits.deletions);
    let (mut si, mut ii, mut di) = (0usize, 0usize, 0usize);
    let mut out = Vec::with_capacity(target_length as usize);
    let mut cur = 0usize;
    loop {
        let t = out.len() as u64 + 1;
        // Target position each pending record acts on.
        let d_at = dels.get(di).map(|d| d.pos.saturating_add(1));
        let i_at = inss.get(ii).map(|i| i.pos.saturating_add(1));
        let s_at = subs.get(si).map(|s| s.pos);
        for (at, pos) in [
            (d_at, dels.get(di).map(|d| d.pos)),
            (i_at, inss.get(ii).map(|i| i.pos)),
            (s_at, subs.get(si).map(|s| s.pos)),
        ] {
            if let (Some(at), Some(pos)) = (at, pos) {
                if at < t || at > target_length {
                    return Err(ReconstructError::RecordOutOfRange { pos });
                }
            }
        }
        if t > target_length {
            break;
        }
        if d_at == Some(t) {
            cur = cur.checked_add(dels[di].len as usize).ok_or(ReconstructError::Exhausted)?;
            if cur > expanded.len() {
                return Err(ReconstructError::Exhausted);
            }
            di += 1;
        }
        if i_at == Some(t) {
            out.push(inss[ii].ch);
            ii += 1;
            continue;
        }
        if s_at == Some(t) {
            if cur >= expanded.len() {
                return Err(ReconstructError::Exhausted);
            }
            out.push(subs[si].ch);
            cur += 1;
            si += 1;
            continue;
        }
        let next = [dels.get(di).map(|d| d.pos + 1), i_at, s_at]
            .into_iter()
            .flatten()
            .filter(|&at| at > t)
            .fold(target_length + 1, u64::min);
        let run = (next - t) as usize;
        let chunk = expanded.get(cur..cur + run).ok_or(ReconstructError::Exhausted)?;
        out.extend_from_slice(chunk);
        cur += run;
    }
    if cur != expanded.len() {
        return Err(mismatch);
    }
    Ok(Sequence::new(out))
}
