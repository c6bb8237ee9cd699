//! Golomb codes with power-of-two modulus (Rice codes).

use super::bitio::{BitReader, BitWriter};
use super::DecodeError;

/// Largest supported `r` (`m = 2^r`); stored in [`PARAM_BITS`] bits.
pub const MAX_PARAM: u32 = 63;
pub const PARAM_BITS: u32 = 6;

/// Unary quotient `v >> r` (ones closed by a zero), then the low `r` bits.
pub fn golomb_encode(w: &mut BitWriter, value: u64, r: u32) {
    debug_assert!(r <= MAX_PARAM);
    w.write_unary(value >> r);
    w.write_bits(value, r);
}

pub fn golomb_decode(reader: &mut BitReader<'_>, r: u32) -> Result<u64, DecodeError> {
    let q = reader.read_unary()?;
    let rem = reader.read_bits(r)?;
    q.checked_mul(1u64 << r)
        .and_then(|hi| hi.checked_add(rem))
        .ok_or(DecodeError::Malformed("golomb value overflows u64"))
}

/// Bits needed to Golomb-code `value` with parameter `r`.
pub fn golomb_len(value: u64, r: u32) -> u64 {
    (value >> r) + 1 + u64::from(r)
}

/// The `r` minimising the total coded length of `values`; smallest on ties.
pub fn best_param(values: &[u64]) -> u32 {
    (0..=MAX_PARAM)
        .min_by_key(|&r| {
            values
                .iter()
                .fold(0u64, |acc, &v| acc.saturating_add(golomb_len(v, r)))
        })
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(value: u64, r: u32) -> String {
        let mut w = BitWriter::new();
        golomb_encode(&mut w, value, r);
        let (bytes, len) = w.finish();
        let mut rd = BitReader::new(&bytes, len);
        (0..len).map(|_| if rd.read_bit().unwrap() { '1' } else { '0' }).collect()
    }

    #[test]
    fn known_codewords() {
        assert_eq!(bits(0, 0), "0");
        assert_eq!(bits(9, 2), "11001");
        assert_eq!(bits(3, 0), "1110");
        assert_eq!(bits(5, 3), "0101");
    }

    #[test]
    fn parameter_search() {
        assert_eq!(best_param(&[]), 0);
        assert_eq!(best_param(&[0, 0, 1, 0]), 0);
        // Brute-force the cost table directly.
        let values = [904u64, 4093, 17, 300];
        let cost = |r: u32| values.iter().map(|&v| golomb_len(v, r)).sum::<u64>();
        let r = best_param(&values);
        assert!((0..=MAX_PARAM).all(|q| cost(r) <= cost(q)));
        assert!(best_param(&[100_000_000]) > 15);
    }

    #[test]
    fn huge_value_with_large_param() {
        let mut w = BitWriter::new();
        golomb_encode(&mut w, u64::MAX, 63);
        let (bytes, len) = w.finish();
        assert_eq!(len, 1 + 1 + 63);
        assert_eq!(golomb_decode(&mut BitReader::new(&bytes, len), 63).unwrap(), u64::MAX);
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(value in 0u64..1 << 20, r in 0u32..16) {
            let mut w = BitWriter::new();
            golomb_encode(&mut w, value, r);
            prop_assert_eq!(w.len(), golomb_len(value, r));
            let (bytes, len) = w.finish();
            prop_assert_eq!(golomb_decode(&mut BitReader::new(&bytes, len), r).unwrap(), value);
        }
    }
}
