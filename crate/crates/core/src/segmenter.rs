//! Stage one, second half: folding neighbouring instructions into explicit
//! substitution, single-character insertion and bounded deletion records.
//!
//! For consecutive instructions `a = (p_a, l_a, z_a)` and `b = (p_b, l_b, z_b)`
//! the reference gap `p_b - (p_a + l_a + 1)` classifies the pair:
//!
//! | gap             | meaning                          | merged instruction          |
//! |-----------------|----------------------------------|-----------------------------|
//! | `0`             | `z_a` replaced one reference char | `(p_a, l_a + l_b + 1, z_b)` |
//! | `-1`            | `z_a` was inserted               | `(p_a, l_a + l_b, z_b)`     |
//! | `2..=L_max`, `z_a = y[p_b - 1]` | `gap` reference chars were dropped | `(p_a, p_b + l_b - p_a, z_b)` |
//!
//! Merging is applied repeatedly to a running instruction, so arbitrarily
//! long chains collapse into one.

use crate::mapper::{Instruction, Novel};
use crate::seqio::Sequence;

pub const DEFAULT_MAX_DELETION: u64 = 1000;

/// `(p_s, z_s)`: target position `p_s` holds `z_s` instead of the reference character.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub pos: u64,
    pub ch: u8,
}

/// `(p_i, z_i)`: `z_i` is inserted immediately after target position `p_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Insertion {
    pub pos: u64,
    pub ch: u8,
}

/// `(p_d, l_d)`: `l_d` reference characters are skipped immediately after
/// target position `p_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Deletion {
    pub pos: u64,
    pub len: u64,
}

/// The `{F}, {S}, {I}, {D}` sets. Record positions are final target coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EditSet {
    pub instructions: Vec<Instruction>,
    pub substitutions: Vec<Substitution>,
    pub insertions: Vec<Insertion>,
    pub deletions: Vec<Deletion>,
}

impl EditSet {
    /// `(|F|, |S|, |I|, |D|)`.
    pub fn counts(&self) -> [usize; 4] {
        [
            self.instructions.len(),
            self.substitutions.len(),
            self.insertions.len(),
            self.deletions.len(),
        ]
    }

    /// Share of substitutions among edit records, `None` without records.
    pub fn substitution_fraction(&self) -> Option<f64> {
        let [_, s, i, d] = self.counts();
        let edits = s + i + d;
        (edits > 0).then(|| s as f64 / edits as f64)
    }
}

/// Target offset of an instruction's first character (`n_k`, 0-based count
/// of characters before it).
type Offset = u64;

/// The substituted character `y[p_a + l_a]` must exist: no-match phrases
/// near the end can sit past the reference.
pub fn try_merge_substitution(
    a: &Instruction,
    b: &Instruction,
    b_offset: Offset,
    reference: &Sequence,
) -> Option<(Instruction, Substitution)> {
    let z = a.novel.byte()?;
    let replaced = a.pos.checked_add(a.len)?;
    (replaced + 1 == b.pos && replaced <= reference.len() as u64).then(|| {
        (
            Instruction { pos: a.pos, len: a.len + b.len + 1, novel: b.novel },
            Substitution { pos: b_offset, ch: z },
        )
    })
}

pub fn try_merge_insertion(
    a: &Instruction,
    b: &Instruction,
    b_offset: Offset,
) -> Option<(Instruction, Insertion)> {
    let z = a.novel.byte()?;
    (a.pos.checked_add(a.len)? == b.pos && b_offset > 0).then(|| {
        (
            Instruction { pos: a.pos, len: a.len + b.len, novel: b.novel },
            Insertion { pos: b_offset - 1, ch: z },
        )
    })
}

pub fn try_merge_deletion(
    a: &Instruction,
    b: &Instruction,
    b_offset: Offset,
    reference: &Sequence,
    max_deletion: u64,
) -> Option<(Instruction, Deletion)> {
    let z = a.novel.byte()?;
    let gap = b.pos.checked_sub(a.pos.checked_add(a.len)?.checked_add(1)?)?;
    if !(2..=max_deletion).contains(&gap) || reference.get(b.pos - 1) != Some(z) || b_offset == 0 {
        return None;
    }
    Some((
        Instruction { pos: a.pos, len: b.pos + b.len - a.pos, novel: b.novel },
        Deletion { pos: b_offset - 1, len: gap },
    ))
}

/// Single left-to-right pass keeping a running merged instruction. Each
/// incoming instruction is tried as a substitution, an insertion, then a
/// deletion against it; when none applies the running instruction is
/// flushed to `F`.
pub fn segment(instructions: &[Instruction], reference: &Sequence, max_deletion: u64) -> EditSet {
    let mut edits = EditSet::default();
    let mut iter = instructions.iter();
    let Some(first) = iter.next() else {
        return edits;
    };
    let mut current = *first;
    let mut offset = first.span();
    for next in iter {
        if let Some((merged, s)) = try_merge_substitution(&current, next, offset, reference) {
            current = merged;
            edits.substitutions.push(s);
        } else if let Some((merged, i)) = try_merge_insertion(&current, next, offset) {
            current = merged;
            edits.insertions.push(i);
        } else if let Some((merged, d)) =
            try_merge_deletion(&current, next, offset, reference, max_deletion)
        {
            current = merged;
            edits.deletions.push(d);
        } else {
            edits.instructions.push(current);
            current = *next;
        }
        offset += next.span();
    }
    edits.instructions.push(current);
    debug_assert!(edits.instructions[..edits.instructions.len() - 1]
        .iter()
        .all(|i| i.novel != Novel::End));
    edits
}
