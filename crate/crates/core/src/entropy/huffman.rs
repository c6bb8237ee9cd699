//! Canonical Huffman coding over `u64` symbols, and the compact codebook
//! description used for the integer stream.
//!
//! Codebook bit layout:
//!
//! ```text
//! gamma(N)               length of the run 1, 2, ..., N of present symbols
//! gamma(K)               number of present symbols greater than N
//! 1 bit                  whether 0 is present
//! [6 bits r]             Golomb parameter, only when K > 0
//! K x golomb(delta, r)   symbols > N as successive differences, the first from N
//! 8 bits per symbol      code lengths in increasing symbol order
//! ```
//!
//! `gamma(v)` is the Elias gamma code of `v + 1`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::bitio::{BitReader, BitWriter};
use super::golomb::{best_param, golomb_decode, golomb_encode, MAX_PARAM, PARAM_BITS};
use super::DecodeError;

pub const MAX_CODE_LEN: u8 = 32;

/// Symbols in increasing order with one code length each.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HuffmanCodebook {
    symbols: Vec<u64>,
    lengths: Vec<u8>,
}

impl HuffmanCodebook {
    /// Builds a codebook from `(symbol, length)` pairs; symbols must be
    /// strictly increasing and the lengths a valid prefix code.
    pub fn from_lengths(symbols: Vec<u64>, lengths: Vec<u8>) -> Result<Self, DecodeError> {
        if symbols.len() != lengths.len() {
            return Err(DecodeError::Malformed("symbol and length counts differ"));
        }
        if symbols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DecodeError::Malformed("codebook symbols not increasing"));
        }
        check_kraft(&lengths)?;
        Ok(HuffmanCodebook { symbols, lengths })
    }

    /// Empirical-frequency code for `values`.
    pub fn from_values(values: &[u64]) -> Self {
        let mut freq: HashMap<u64, u64> = HashMap::new();
        for &v in values {
            *freq.entry(v).or_default() += 1;
        }
        let mut pairs: Vec<(u64, u64)> = freq.into_iter().collect();
        pairs.sort_unstable();
        let (symbols, weights): (Vec<u64>, Vec<u64>) = pairs.into_iter().unzip();
        let lengths = code_lengths(&weights, MAX_CODE_LEN);
        HuffmanCodebook { symbols, lengths }
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn lengths(&self) -> &[u8] {
        &self.lengths
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Largest `N` with `1..=N` all present.
    pub fn consecutive_run(&self) -> u64 {
        let start = self.symbols.partition_point(|&s| s < 1);
        self.symbols[start..]
            .iter()
            .zip(1u64..)
            .take_while(|(s, expect)| **s == *expect)
            .count() as u64
    }

    /// Canonical codes: ordered by `(length, symbol)`, counting upwards.
    pub fn codes(&self) -> Vec<(u64, u32, u8)> {
        let mut order: Vec<usize> = (0..self.symbols.len()).collect();
        order.sort_by_key(|&i| (self.lengths[i], self.symbols[i]));
        let mut out = Vec::with_capacity(order.len());
        let mut code = 0u64;
        let mut prev_len = 0u8;
        for (k, &i) in order.iter().enumerate() {
            let len = self.lengths[i];
            if k > 0 {
                code = (code + 1) << (len - prev_len);
            } else {
                code <<= len;
            }
            prev_len = len;
            out.push((self.symbols[i], code as u32, len));
        }
        out
    }

    pub fn encoder(&self) -> HashMap<u64, (u32, u8)> {
        self.codes().into_iter().map(|(s, c, l)| (s, (c, l))).collect()
    }

    pub fn decoder(&self) -> Decoder {
        let codes = self.codes();
        let mut count = [0u32; MAX_CODE_LEN as usize + 1];
        for &(_, _, len) in &codes {
            count[len as usize] += 1;
        }
        let mut first = [0u64; MAX_CODE_LEN as usize + 1];
        let mut offset = [0u32; MAX_CODE_LEN as usize + 1];
        let mut code = 0u64;
        let mut index = 0u32;
        for len in 1..=MAX_CODE_LEN as usize {
            code = (code + u64::from(count[len - 1])) << 1;
            first[len] = code;
            offset[len] = index;
            index += count[len];
        }
        Decoder {
            sorted: codes.into_iter().map(|(s, _, _)| s).collect(),
            count,
            first,
            offset,
        }
    }
}

/// Bit-serial canonical decoder.
pub struct Decoder {
    sorted: Vec<u64>,
    count: [u32; MAX_CODE_LEN as usize + 1],
    first: [u64; MAX_CODE_LEN as usize + 1],
    offset: [u32; MAX_CODE_LEN as usize + 1],
}

impl Decoder {
    pub fn decode(&self, r: &mut BitReader<'_>) -> Result<u64, DecodeError> {
        let mut code = 0u64;
        for len in 1..=MAX_CODE_LEN as usize {
            code = (code << 1) | u64::from(r.read_bit()?);
            let rel = code.wrapping_sub(self.first[len]);
            if code >= self.first[len] && rel < u64::from(self.count[len]) {
                return Ok(self.sorted[(self.offset[len] + rel as u32) as usize]);
            }
        }
        Err(DecodeError::Malformed("invalid Huffman codeword"))
    }
}

/// One symbol gets length 1 (code `0`); otherwise the lengths must fill
/// the code space exactly.
fn check_kraft(lengths: &[u8]) -> Result<(), DecodeError> {
    if lengths.iter().any(|&l| l == 0 || l > MAX_CODE_LEN) {
        return Err(DecodeError::Malformed("code length out of range"));
    }
    match lengths.len() {
        0 => Ok(()),
        1 if lengths[0] == 1 => Ok(()),
        1 => Err(DecodeError::Malformed("single symbol must use a 1-bit code")),
        _ => {
            let total: u64 = lengths.iter().map(|&l| 1u64 << (MAX_CODE_LEN - l)).sum();
            if total == 1u64 << MAX_CODE_LEN {
                Ok(())
            } else {
                Err(DecodeError::Malformed("code lengths violate Kraft equality"))
            }
        }
    }
}

/// Huffman code lengths for `weights`, capped at `limit`.
///
/// Ties in the merge order are broken by node index, so the output depends
/// only on the weights. Over-long codes are folded back with the JPEG
/// `bl_count` adjustment and re-dealt so heavier symbols keep shorter codes.
pub fn code_lengths(weights: &[u64], limit: u8) -> Vec<u8> {
    let n = weights.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![1],
        _ => {}
    }
    assert!(n as u128 <= 1u128 << limit, "too many symbols for the length limit");

    let mut parent = vec![usize::MAX; 2 * n - 1];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> =
        weights.iter().enumerate().map(|(i, &w)| Reverse((w, i))).collect();
    let mut next = n;
    while heap.len() > 1 {
        let Reverse((wa, a)) = heap.pop().unwrap();
        let Reverse((wb, b)) = heap.pop().unwrap();
        parent[a] = next;
        parent[b] = next;
        heap.push(Reverse((wa.saturating_add(wb), next)));
        next += 1;
    }
    let root = next - 1;
    let mut depth = vec![0u32; 2 * n - 1];
    for node in (0..root).rev() {
        depth[node] = depth[parent[node]] + 1;
    }

    let max_depth = depth[..n].iter().copied().max().unwrap() as usize;
    if max_depth <= limit as usize {
        return depth[..n].iter().map(|&d| d as u8).collect();
    }

    let mut bl_count = vec![0u64; max_depth + 1];
    for &d in &depth[..n] {
        bl_count[d as usize] += 1;
    }
    let limit = limit as usize;
    let mut i = max_depth;
    while i > limit {
        while bl_count[i] > 0 {
            let mut j = i - 2;
            while bl_count[j] == 0 {
                j -= 1;
            }
            bl_count[i] -= 2;
            bl_count[i - 1] += 1;
            bl_count[j + 1] += 2;
            bl_count[j] -= 1;
        }
        i -= 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| (depth[k], Reverse(weights[k]), k));
    let mut lengths = vec![0u8; n];
    let mut dealt = order.into_iter();
    for (len, &count) in bl_count.iter().enumerate().take(limit + 1) {
        for _ in 0..count {
            lengths[dealt.next().unwrap()] = len as u8;
        }
    }
    lengths
}

pub fn huffman_encode(values: &[u64]) -> (HuffmanCodebook, BitWriter) {
    let book = HuffmanCodebook::from_values(values);
    let table = book.encoder();
    let mut w = BitWriter::new();
    for v in values {
        let (code, len) = table[v];
        w.write_bits(u64::from(code), u32::from(len));
    }
    (book, w)
}

pub fn huffman_decode(
    book: &HuffmanCodebook,
    r: &mut BitReader<'_>,
    count: usize,
) -> Result<Vec<u64>, DecodeError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if book.is_empty() {
        return Err(DecodeError::Malformed("values present but codebook is empty"));
    }
    let decoder = book.decoder();
    let mut out = Vec::with_capacity(count.min(r.remaining() as usize));
    for _ in 0..count {
        out.push(decoder.decode(r)?);
    }
    Ok(out)
}

/// Writes the codebook; returns the Golomb parameter used for the
/// remainder list, if there was one.
pub fn encode_codebook(book: &HuffmanCodebook, w: &mut BitWriter) -> Option<u32> {
    let run = book.consecutive_run();
    let has_zero = book.symbols.first() == Some(&0);
    let beyond: Vec<u64> = book.symbols.iter().copied().filter(|&s| s > run).collect();
    w.write_gamma(run);
    w.write_gamma(beyond.len() as u64);
    w.write_bit(has_zero);
    let mut param = None;
    if !beyond.is_empty() {
        let deltas: Vec<u64> = std::iter::once(run)
            .chain(beyond.iter().copied())
            .collect::<Vec<_>>()
            .windows(2)
            .map(|p| p[1] - p[0])
            .collect();
        let r = best_param(&deltas);
        w.write_bits(u64::from(r), PARAM_BITS);
        for d in deltas {
            golomb_encode(w, d, r);
        }
        param = Some(r);
    }
    for &len in &book.lengths {
        w.write_bits(u64::from(len), 8);
    }
    param
}

/// Reads a codebook written by [`encode_codebook`], with its Golomb parameter.
pub fn decode_codebook(
    r: &mut BitReader<'_>,
) -> Result<(HuffmanCodebook, Option<u32>), DecodeError> {
    let run = r.read_gamma()?;
    let beyond = r.read_gamma()?;
    let has_zero = r.read_bit()?;
    let total = u128::from(run) + u128::from(beyond) + u128::from(has_zero);
    // Every symbol owns an 8-bit length field.
    if total * 8 > u128::from(r.remaining()) {
        return Err(DecodeError::Malformed("codebook larger than its section"));
    }
    let mut symbols = Vec::with_capacity(total as usize);
    if has_zero {
        symbols.push(0);
    }
    symbols.extend(1..=run);
    let mut param = None;
    if beyond > 0 {
        let p = r.read_bits(PARAM_BITS)? as u32;
        if p > MAX_PARAM {
            return Err(DecodeError::Malformed("Golomb parameter out of range"));
        }
        let mut prev = run;
        for _ in 0..beyond {
            let d = golomb_decode(r, p)?;
            if d == 0 {
                return Err(DecodeError::Malformed("codebook symbols not increasing"));
            }
            prev = prev
                .checked_add(d)
                .ok_or(DecodeError::Malformed("codebook symbol overflows u64"))?;
            symbols.push(prev);
        }
        param = Some(p);
    }
    let lengths = (0..symbols.len())
        .map(|_| r.read_bits(8).map(|l| l as u8))
        .collect::<Result<Vec<u8>, _>>()?;
    Ok((HuffmanCodebook::from_lengths(symbols, lengths)?, param))
}
