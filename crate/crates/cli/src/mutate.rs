//! Seeded synthetic targets for testing and benchmarking.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BASES: &[u8; 4] = b"ACGT";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rates {
    /// Per-base probability of a point substitution.
    pub substitution: f64,
    /// Per-base probability of an insertion before the base.
    pub insertion: f64,
    /// Per-base probability of a deletion starting at the base.
    pub deletion: f64,
    /// Indel lengths are uniform in `1..=max_indel`.
    pub max_indel: usize,
}

impl Default for Rates {
    fn default() -> Self {
        Rates {
            substitution: 0.0,
            insertion: 0.0,
            deletion: 0.0,
            max_indel: 1,
        }
    }
}

impl Rates {
    pub fn validate(&self) -> Result<(), String> {
        for (name, r) in [
            ("substitution", self.substitution),
            ("insertion", self.insertion),
            ("deletion", self.deletion),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(format!("{name} rate {r} is outside [0, 1]"));
            }
        }
        if self.substitution + self.insertion + self.deletion > 1.0 {
            return Err("rates sum to more than 1".into());
        }
        if self.max_indel == 0 {
            return Err("max indel length must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub substitutions: u64,
    pub insertions: u64,
    pub deletions: u64,
    pub inserted_bases: u64,
    pub deleted_bases: u64,
}

fn other_base(rng: &mut ChaCha8Rng, current: u8) -> u8 {
    match BASES.iter().position(|&b| b == current) {
        Some(i) => BASES[(i + rng.gen_range(1..4)) % 4],
        None => BASES[rng.gen_range(0..4)],
    }
}

/// Applies independent per-base edits to `reference`. The same seed always
/// gives the same output.
pub fn mutate(reference: &[u8], rates: &Rates, seed: u64) -> (Vec<u8>, Stats) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(reference.len() + reference.len() / 64);
    let mut stats = Stats::default();
    let del_cut = rates.deletion;
    let ins_cut = del_cut + rates.insertion;
    let sub_cut = ins_cut + rates.substitution;
    let mut i = 0;
    while i < reference.len() {
        let u: f64 = rng.gen();
        if u < del_cut {
            let n = rng.gen_range(1..=rates.max_indel).min(reference.len() - i);
            stats.deletions += 1;
            stats.deleted_bases += n as u64;
            i += n;
            continue;
        }
        if u < ins_cut {
            let n = rng.gen_range(1..=rates.max_indel);
            out.extend((0..n).map(|_| BASES[rng.gen_range(0..4)]));
            stats.insertions += 1;
            stats.inserted_bases += n as u64;
            out.push(reference[i]);
        } else if u < sub_cut {
            out.push(other_base(&mut rng, reference[i]));
            stats.substitutions += 1;
        } else {
            out.push(reference[i]);
        }
        i += 1;
    }
    (out, stats)
}

/// Uniform random `ACGT` string.
pub fn random_sequence(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| BASES[rng.gen_range(0..4)]).collect()
}

/// One substitution in each `slot`-sized block, at least `margin` bases from
/// the block edges, so no two edits are closer than `2 * margin`. Returns
/// the target and the 1-based positions changed.
pub fn isolated_substitutions(reference: &[u8], slot: usize, margin: usize, seed: u64) -> (Vec<u8>, Vec<u64>) {
    assert!(slot > 2 * margin);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = reference.to_vec();
    let mut positions = Vec::with_capacity(reference.len() / slot);
    for block in (0..reference.len() / slot).map(|b| b * slot) {
        let i = block + rng.gen_range(margin..slot - margin);
        out[i] = other_base(&mut rng, out[i]);
        positions.push(i as u64 + 1);
    }
    (out, positions)
}
