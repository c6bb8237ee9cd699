//! Stage one: greedy parsing of the target into phrases copied from a
//! window that slides along the reference.
//!
//! Each phrase is an [`Instruction`] `(p, l, z)`: copy `l` reference
//! characters starting at 1-based position `p`, then emit the novel
//! character `z`. The search window is centred on `W`, which advances with
//! the target cursor and is periodically re-centred by the median drift
//! between where matches were found and where they were expected.

use std::fmt;
use std::ops::RangeInclusive;

use crate::seqio::Sequence;

/// Added to the window centre on top of the match length after each phrase.
///
/// `1` keeps the centre in step with the target cursor, which also consumes
/// the novel symbol. The `advance-excludes-novel` feature sets it to `0`.
pub const NOVEL_ADVANCE: u64 = if cfg!(feature = "advance-excludes-novel") { 0 } else { 1 };

pub const DEFAULT_HALF_WIDTH: u64 = 1000;
pub const DEFAULT_PERIOD: u32 = 100;

/// The character closing a phrase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Novel {
    Byte(u8),
    /// The target ended exactly where the match ended.
    End,
}

impl Novel {
    pub fn byte(self) -> Option<u8> {
        match self {
            Novel::Byte(b) => Some(b),
            Novel::End => None,
        }
    }

    pub fn is_end(self) -> bool {
        self == Novel::End
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instruction {
    /// 1-based reference position of the copy.
    pub pos: u64,
    /// Number of reference characters copied.
    pub len: u64,
    pub novel: Novel,
}

impl Instruction {
    pub fn new(pos: u64, len: u64, novel: u8) -> Self {
        Instruction { pos, len, novel: Novel::Byte(novel) }
    }

    pub fn end(pos: u64, len: u64) -> Self {
        Instruction { pos, len, novel: Novel::End }
    }

    /// Number of target characters this instruction produces on replay.
    pub fn span(&self) -> u64 {
        self.len + u64::from(!self.novel.is_end())
    }
}

impl fmt::Debug for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.novel {
            Novel::Byte(b) if b.is_ascii_graphic() => {
                write!(f, "({},{},{})", self.pos, self.len, b as char)
            }
            Novel::Byte(b) => write!(f, "({},{},0x{:02x})", self.pos, self.len, b),
            Novel::End => write!(f, "({},{},$)", self.pos, self.len),
        }
    }
}

/// Tunable window parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowParams {
    /// Left half-width `L`.
    pub left: u64,
    /// Right half-width `R`.
    pub right: u64,
    /// Re-centre every `period` phrases (`M`); `0` disables re-centring.
    pub period: u32,
    /// Initial centre `W`, 1-based.
    pub start: u64,
}

impl Default for WindowParams {
    fn default() -> Self {
        WindowParams {
            left: DEFAULT_HALF_WIDTH,
            right: DEFAULT_HALF_WIDTH,
            period: DEFAULT_PERIOD,
            start: 1,
        }
    }
}

/// The parser's `(W, L, R)` window plus the drift observed since the last
/// re-centring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowState {
    pub center: u64,
    pub left: u64,
    pub right: u64,
    pub period: u32,
    drift: Vec<i64>,
}

impl WindowState {
    pub fn new(params: &WindowParams) -> Self {
        WindowState {
            center: params.start.max(1),
            left: params.left,
            right: params.right,
            period: params.period,
            drift: Vec::with_capacity(params.period as usize),
        }
    }

    /// Candidate match starts, clipped to the reference. `None` when the
    /// window lies entirely outside it.
    pub fn range(&self, reference_len: u64) -> Option<RangeInclusive<u64>> {
        let lo = self.center.saturating_sub(self.left).max(1);
        let hi = self.center.saturating_add(self.right).min(reference_len);
        (lo <= hi).then_some(lo..=hi)
    }

    pub fn drift_history(&self) -> &[i64] {
        &self.drift
    }

    /// Notes where a phrase was found relative to the current centre.
    pub fn record(&mut self, pos: u64) {
        if self.period == 0 {
            return;
        }
        self.drift.push(signed_diff(pos, self.center));
    }

    /// Moves the window past a phrase that consumed `len` matched characters.
    /// `phrase_index` is the 1-based index of that phrase; every `period`
    /// phrases the centre is also shifted by the median recorded drift.
    pub fn update(&mut self, len: u64, phrase_index: u64) {
        self.center = self.center.saturating_add(len + NOVEL_ADVANCE);
        if self.period > 0 && phrase_index.is_multiple_of(u64::from(self.period)) {
            if let Some(shift) = lower_median(&mut self.drift) {
                self.center = shift_clamped(self.center, shift);
            }
            self.drift.clear();
        }
    }
}

fn signed_diff(a: u64, b: u64) -> i64 {
    if a >= b {
        i64::try_from(a - b).unwrap_or(i64::MAX)
    } else {
        i64::try_from(b - a).map(|d| -d).unwrap_or(i64::MIN)
    }
}

fn shift_clamped(center: u64, shift: i64) -> u64 {
    if shift >= 0 {
        center.saturating_add(shift as u64)
    } else {
        center.saturating_sub(shift.unsigned_abs()).max(1)
    }
}

/// Median of an even-length list is the lower of the two middle values.
pub(crate) fn lower_median(values: &mut [i64]) -> Option<i64> {
    if values.is_empty() {
        return None;
    }
    let mid = (values.len() - 1) / 2;
    let (_, m, _) = values.select_nth_unstable(mid);
    Some(*m)
}

/// Longest common prefix of two byte slices.
fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    let n = a.len().min(b.len());
    let mut i = 0;
    while i + 8 <= n {
        let x = u64::from_le_bytes(a[i..i + 8].try_into().unwrap());
        let y = u64::from_le_bytes(b[i..i + 8].try_into().unwrap());
        let diff = x ^ y;
        if diff != 0 {
            return i + (diff.trailing_zeros() / 8) as usize;
        }
        i += 8;
    }
    while i < n && a[i] == b[i] {
        i += 1;
    }
    i
}

/// Window positions in preference order: nearest to the centre first, the
/// smaller position first on equal distance.
fn candidates(center: u64, range: RangeInclusive<u64>) -> impl Iterator<Item = u64> {
    let (lo, hi) = (*range.start(), *range.end());
    let reach = center.saturating_sub(lo).max(hi.saturating_sub(center));
    (0..=reach).flat_map(move |d| {
        let below = center.checked_sub(d).filter(|&i| i >= lo && i <= hi);
        let above = center
            .checked_add(d)
            .filter(|&i| d > 0 && i >= lo && i <= hi);
        below.into_iter().chain(above)
    })
}

/// Longest match of `target[n..]` starting anywhere in the window.
///
/// `n` is the number of target characters already parsed. Only the match
/// start is confined to the window; the match itself may run past it. Among
/// starts reaching the maximal length the one nearest the window centre
/// wins, then the smaller position. Returns `(center, 0)` when nothing in
/// the window matches even one character.
pub fn find_longest_match(
    target: &Sequence,
    n: usize,
    reference: &Sequence,
    window: &WindowState,
) -> (u64, u64) {
    longest_match(target.as_bytes(), n, reference.as_bytes(), window)
}

fn longest_match(target: &[u8], n: usize, reference: &[u8], window: &WindowState) -> (u64, u64) {
    let rest = &target[n..];
    let Some(range) = window.range(reference.len() as u64) else {
        return (window.center, 0);
    };
    let mut best_pos = window.center;
    let mut best = 0usize;
    for i in candidates(window.center, range) {
        let cand = &reference[(i - 1) as usize..];
        let limit = rest.len().min(cand.len());
        if limit <= best {
            continue;
        }
        let len = if best == 0 {
            common_prefix(rest, cand)
        } else {
            // Must agree on the first `best + 1` characters to beat the
            // current best. Check the far end first; it fails fastest on
            // shifted copies of low-complexity runs.
            if rest[best] != cand[best] {
                continue;
            }
            let tail = best.saturating_sub(32);
            if rest[tail..best] != cand[tail..best] || rest[..tail] != cand[..tail] {
                continue;
            }
            best + 1 + common_prefix(&rest[best + 1..], &cand[best + 1..])
        };
        if len > best {
            best = len;
            best_pos = i;
            if best == rest.len() {
                break;
            }
        }
    }
    (best_pos, best as u64)
}

/// One parsed phrase together with the state it was parsed under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phrase {
    pub instruction: Instruction,
    /// Number of target characters preceding the phrase (`n_k`).
    pub target_offset: u64,
    /// Window centre in force when the phrase was searched.
    pub center: u64,
    /// Searched start positions, `None` when the window missed the reference.
    pub window: Option<RangeInclusive<u64>>,
}

/// Incremental parser; yields one [`Phrase`] per step until the target is
/// exhausted.
pub struct Mapper<'a> {
    target: &'a [u8],
    reference: &'a [u8],
    window: WindowState,
    offset: usize,
    index: u64,
}

impl<'a> Mapper<'a> {
    pub fn new(target: &'a Sequence, reference: &'a Sequence, params: &WindowParams) -> Self {
        Mapper {
            target: target.as_bytes(),
            reference: reference.as_bytes(),
            window: WindowState::new(params),
            offset: 0,
            index: 0,
        }
    }

    pub fn window(&self) -> &WindowState {
        &self.window
    }
}

impl Iterator for Mapper<'_> {
    type Item = Phrase;

    fn next(&mut self) -> Option<Phrase> {
        if self.offset >= self.target.len() {
            return None;
        }
        let n = self.offset;
        let center = self.window.center;
        let range = self.window.range(self.reference.len() as u64);
        let (pos, len) = longest_match(self.target, n, self.reference, &self.window);
        let end = n + len as usize;
        let instruction = match self.target.get(end) {
            Some(&z) => Instruction::new(pos, len, z),
            None => Instruction::end(pos, len),
        };
        self.index += 1;
        self.window.record(pos);
        self.window.update(len, self.index);
        self.offset = end + 1;
        Some(Phrase {
            instruction,
            target_offset: n as u64,
            center,
            window: range,
        })
    }
}

/// Parses the whole target into instructions.
pub fn parse(target: &Sequence, reference: &Sequence, params: &WindowParams) -> Vec<Instruction> {
    Mapper::new(target, reference, params)
        .map(|phrase| phrase.instruction)
        .collect()
}

/// Expands instructions against the reference. `None` if an instruction
/// copies from outside the reference.
pub fn replay(instructions: &[Instruction], reference: &Sequence) -> Option<Sequence> {
    let reference = reference.as_bytes();
    let mut out = Vec::new();
    for ins in instructions {
        if ins.len > 0 {
            let start = usize::try_from(ins.pos.checked_sub(1)?).ok()?;
            let end = start.checked_add(usize::try_from(ins.len).ok()?)?;
            out.extend_from_slice(reference.get(start..end)?);
        }
        if let Novel::Byte(z) = ins.novel {
            out.push(z);
        }
    }
    Some(Sequence::new(out))
}
