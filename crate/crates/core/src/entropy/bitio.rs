//! MSB-first bit packing. The final byte is zero-padded.

use super::DecodeError;

#[derive(Clone, Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    pending: u32,
    written: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of bits written so far.
    pub fn len(&self) -> u64 {
        self.written
    }

    pub fn is_empty(&self) -> bool {
        self.written == 0
    }

    pub fn write_bit(&mut self, bit: bool) {
        self.write_bits(u64::from(bit), 1);
    }

    /// Writes the low `count` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u64, count: u32) {
        debug_assert!(count <= 64);
        if count == 0 {
            return;
        }
        let value = if count == 64 { value } else { value & ((1u64 << count) - 1) };
        self.written += u64::from(count);
        // Split so the accumulator never needs more than 64 bits.
        if self.pending + count > 64 {
            let hi = count - 32;
            self.push(value >> 32, hi);
            self.push(value & 0xFFFF_FFFF, 32);
        } else {
            self.push(value, count);
        }
    }

    fn push(&mut self, value: u64, count: u32) {
        self.acc = if count == 64 { value } else { (self.acc << count) | value };
        self.pending += count;
        while self.pending >= 8 {
            self.pending -= 8;
            self.bytes.push((self.acc >> self.pending) as u8);
        }
        if self.pending < 64 {
            self.acc &= (1u64 << self.pending) - 1;
        }
    }

    /// `count` one bits followed by a zero.
    pub fn write_unary(&mut self, count: u64) {
        let mut left = count;
        while left >= 32 {
            self.write_bits(0xFFFF_FFFF, 32);
            left -= 32;
        }
        self.write_bits((1u64 << left) - 1, left as u32);
        self.write_bit(false);
    }

    /// Elias gamma code of `value + 1`, so zero is representable.
    pub fn write_gamma(&mut self, value: u64) {
        let v = u128::from(value) + 1;
        let width = 128 - v.leading_zeros();
        for _ in 1..width {
            self.write_bit(false);
        }
        if width > 64 {
            self.write_bit(true);
            self.write_bits(v as u64, 64);
        } else {
            self.write_bits(v as u64, width);
        }
    }

    pub fn finish(mut self) -> (Vec<u8>, u64) {
        if self.pending > 0 {
            let pad = 8 - self.pending;
            self.bytes.push((self.acc << pad) as u8);
        }
        (self.bytes, self.written)
    }
}

/// Reads at most `len` bits from a byte slice.
#[derive(Clone, Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: u64,
    len: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8], len: u64) -> Self {
        let len = len.min(bytes.len() as u64 * 8);
        BitReader { bytes, pos: 0, len }
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn remaining(&self) -> u64 {
        self.len - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool, DecodeError> {
        if self.pos >= self.len {
            return Err(DecodeError::Exhausted);
        }
        let byte = self.bytes[(self.pos / 8) as usize];
        let bit = (byte >> (7 - (self.pos % 8))) & 1;
        self.pos += 1;
        Ok(bit == 1)
    }

    pub fn read_bits(&mut self, count: u32) -> Result<u64, DecodeError> {
        debug_assert!(count <= 64);
        if u64::from(count) > self.remaining() {
            return Err(DecodeError::Exhausted);
        }
        let mut v = 0u64;
        let mut left = count;
        while left > 0 {
            let offset = (self.pos % 8) as u32;
            let take = left.min(8 - offset);
            let byte = u64::from(self.bytes[(self.pos / 8) as usize]);
            let chunk = (byte >> (8 - offset - take)) & ((1 << take) - 1);
            v = if take == 64 { chunk } else { (v << take) | chunk };
            self.pos += u64::from(take);
            left -= take;
        }
        Ok(v)
    }

    pub fn read_unary(&mut self) -> Result<u64, DecodeError> {
        let mut q = 0u64;
        while self.read_bit()? {
            q += 1;
        }
        Ok(q)
    }

    pub fn read_gamma(&mut self) -> Result<u64, DecodeError> {
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 64 {
                return Err(DecodeError::Malformed("gamma code longer than 65 bits"));
            }
        }
        let rest = self.read_bits(zeros)? as u128;
        let v = (1u128 << zeros) | rest;
        u64::try_from(v - 1).map_err(|_| DecodeError::Malformed("gamma value overflows u64"))
    }
}
