//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rgc::codec::{self, Params};
use rgc::container::{read_container, HEADER_LEN};
use rgc::entropy::bitio::{BitReader, BitWriter};
use rgc::entropy::golomb::{golomb_decode, golomb_encode};
use rgc::entropy::huffman::{decode_codebook, encode_codebook, huffman_decode, huffman_encode};
use rgc::entropy::{encode_edits, EncodedStreams};
use rgc::mapper::{parse, Instruction};
use rgc::segmenter::{segment, EditSet, Insertion, Substitution};
use rgc::{Sequence, WindowParams};
use rgc_cli::mutate::{isolated_substitutions, mutate, random_sequence, Rates};

const EX1_TARGET: &str = "AATGCAGGTACTATAAGNAANTGC";
const EX1_REFERENCE: &str = "AATGTAGGTACATAAGATGCNNNN";
const BASE_SEED: u64 = 0x5EED_2024;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ac1_golden_parse() -> Outcome {
    let t = Sequence::from(EX1_TARGET);
    let r = Sequence::from(EX1_REFERENCE);
    let want = [
        Instruction::new(1, 4, b'C'),
        Instruction::new(6, 6, b'T'),
        Instruction::new(12, 5, b'N'),
        Instruction::new(14, 2, b'N'),
    ];
    let got = parse(&t, &r, &WindowParams::default());
    check(got.starts_with(&want), || format!("got {got:?}"))?;
    let runs = 100u32;
    let mut worst = Duration::ZERO;
    for _ in 0..runs {
        let start = Instant::now();
        std::hint::black_box(parse(&t, &r, &WindowParams::default()));
        worst = worst.max(start.elapsed());
    }
    check(worst < Duration::from_millis(1), || format!("slowest of {runs} runs took {worst:?}"))?;
    Ok(format!("{got:?}, slowest of {runs} runs {worst:?}"))
}

fn ac2_golden_segmentation() -> Outcome {
    let r = Sequence::from(EX1_REFERENCE);
    let f = parse(&Sequence::from(EX1_TARGET), &r, &WindowParams::default());
    let e = segment(&f, &r, Params::default().max_deletion);
    let want = EditSet {
        instructions: vec![
            Instruction::new(1, 16, b'N'),
            Instruction::new(14, 2, b'N'),
            Instruction::end(18, 3),
        ],
        substitutions: vec![Substitution { pos: 5, ch: b'C' }],
        insertions: vec![Insertion { pos: 11, ch: b'T' }],
        deletions: vec![],
    };
    check(e == want, || format!("got {e:?}"))?;
    Ok(format!(
        "F={:?} S=(5,C) I=(11,T), D empty",
        e.instructions
    ))
}

fn ac3_round_trip() -> Outcome {
    let trials = 200u64;
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED);
    let mut total_bases = 0usize;
    let started = Instant::now();
    for trial in 0..trials {
        let seed = BASE_SEED + trial;
        // log-uniform between 1 kB and 1 MB
        let len = (1000.0 * 1000f64.powf(rng.gen::<f64>())) as usize;
        let rates = Rates {
            substitution: rng.gen_range(0.0..=0.02),
            insertion: rng.gen_range(0.0..=0.002),
            deletion: rng.gen_range(0.0..=0.002),
            max_indel: rng.gen_range(1..=20),
        };
        let y = random_sequence(len, seed);
        let (x, _) = mutate(&y, &rates, seed);
        if x.is_empty() {
            continue;
        }
        let (x, y) = (Sequence::new(x), Sequence::new(y));
        let bytes = codec::compress(&x, &y, &Params::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        let back = codec::decompress(&bytes, &y).map_err(|e| format!("seed {seed}: {e}"))?;
        check(back == x, || format!("seed {seed} (len {len}, {rates:?}): output differs"))?;
        total_bases += len;
    }
    Ok(format!(
        "{trials} pairs, seeds {BASE_SEED}..{}, {total_bases} reference bases, {:.1} s",
        BASE_SEED + trials - 1,
        started.elapsed().as_secs_f64()
    ))
}

fn ac4_codec_inverses() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED ^ 4);
    let values: Vec<u64> = (0..10_000)
        .map(|_| {
            let bits = rng.gen_range(0..15);
            rng.gen_range(0..1u64 << bits)
        })
        .collect();
    for r in 0..16 {
        let mut w = BitWriter::new();
        values.iter().for_each(|&v| golomb_encode(&mut w, v, r));
        let (bytes, len) = w.finish();
        let mut rd = BitReader::new(&bytes, len);
        for (i, &v) in values.iter().enumerate() {
            let got = golomb_decode(&mut rd, r).map_err(|e| format!("golomb r={r} value {i}: {e}"))?;
            check(got == v, || format!("golomb r={r}: {v} decoded as {got}"))?;
        }
        check(rd.remaining() == 0, || format!("golomb r={r}: trailing bits"))?;
    }
    let multisets = 1000;
    for m in 0..multisets {
        let n = rng.gen_range(1..2000);
        let spread = 1u64 << rng.gen_range(0..40);
        let values: Vec<u64> = (0..n)
            .map(|_| {
                // skewed so some symbols repeat and others are unique
                let v = rng.gen_range(0..spread);
                if rng.gen_bool(0.5) { v % 16 } else { v }
            })
            .collect();
        let (book, payload) = huffman_encode(&values);
        let mut cb = BitWriter::new();
        encode_codebook(&book, &mut cb);
        let (cb_bytes, cb_len) = cb.finish();
        let (p_bytes, p_len) = payload.finish();
        let mut cr = BitReader::new(&cb_bytes, cb_len);
        let (back, _) = decode_codebook(&mut cr).map_err(|e| format!("multiset {m}: {e}"))?;
        check(back == book && cr.remaining() == 0, || format!("multiset {m}: codebook differs"))?;
        let mut pr = BitReader::new(&p_bytes, p_len);
        let got = huffman_decode(&back, &mut pr, values.len()).map_err(|e| format!("multiset {m}: {e}"))?;
        check(got == values && pr.remaining() == 0, || format!("multiset {m}: values differ"))?;
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "10000 integers x r in 0..=15, {multisets} Huffman multisets, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn container_size(streams: &EncodedStreams) -> usize {
    HEADER_LEN
        + [&streams.sign_bits, &streams.codebook, &streams.integers, &streams.chars]
            .iter()
            .map(|b| b.bytes.len())
            .sum::<usize>()
}

struct SubstitutionPair {
    reference: Sequence,
    target: Sequence,
    positions: Vec<u64>,
}

fn substitution_pair() -> SubstitutionPair {
    let reference = random_sequence(10_000_000, BASE_SEED ^ 5);
    let (target, positions) = isolated_substitutions(&reference, 1000, 16, BASE_SEED ^ 55);
    SubstitutionPair {
        reference: Sequence::new(reference),
        target: Sequence::new(target),
        positions,
    }
}

fn ac5_effectiveness(pair: &SubstitutionPair) -> Outcome {
    let edits = pair.positions.len();
    let bytes = codec::compress(&pair.target, &pair.reference, &Params::default()).map_err(|e| e.to_string())?;
    let size = bytes.len();

    // The ideal edit set: one whole-reference copy plus the known substitutions.
    let known = EditSet {
        instructions: vec![Instruction::end(1, pair.reference.len() as u64)],
        substitutions: pair
            .positions
            .iter()
            .map(|&pos| Substitution { pos, ch: pair.target.get(pos).unwrap() })
            .collect(),
        ..EditSet::default()
    };
    let oracle = container_size(&encode_edits(&known));

    let budget = 20 * edits + 512;
    let raw = pair.target.len();
    check(size <= budget, || format!("{size} bytes exceeds budget {budget}"))?;
    check(size <= 2 * oracle, || format!("{size} bytes is more than twice the oracle {oracle}"))?;
    check(size * 100 < raw, || format!("{size} bytes is not below 1% of {raw}"))?;
    check(codec::decompress(&bytes, &pair.reference).map_err(|e| e.to_string())? == pair.target, || {
        "round trip differs".into()
    })?;
    Ok(format!(
        "{edits} substitutions -> {size} bytes (budget {budget}, oracle {oracle}, {:.1}:1)",
        raw as f64 / size as f64
    ))
}

fn ac6_substitution_dominance(pair: &SubstitutionPair) -> Outcome {
    let bytes = codec::compress(&pair.target, &pair.reference, &Params::default()).map_err(|e| e.to_string())?;
    let counts = read_container(&bytes).map_err(|e| e.to_string())?.streams.counts.as_array();
    let fraction = rgc_cli::substitution_fraction(counts);
    let [f, s, i, d] = counts;
    check(fraction == "100.00%", || format!("substitution share {fraction}, counts {counts:?}"))?;
    check(f <= s + 1, || format!("|F|={f} > |S|+1={}", s + 1))?;
    check(s == pair.positions.len() as u64, || format!("|S|={s}, expected {}", pair.positions.len()))?;
    Ok(format!("share {fraction}, (|F|,|S|,|I|,|D|)=({f},{s},{i},{d})"))
}

fn ac7_identical_input() -> Outcome {
    let cases: Vec<(&str, Vec<u8>)> = vec![
        ("1 base", b"A".to_vec()),
        ("1 kB random", random_sequence(1000, 71)),
        ("1 MB random", random_sequence(1_000_000, 72)),
        ("100 MB random", random_sequence(100_000_000, 73)),
        ("100 MB all-A", vec![b'A'; 100_000_000]),
    ];
    let mut sizes = Vec::new();
    for (name, x) in cases {
        let x = Sequence::new(x);
        let bytes = codec::compress(&x, &x, &Params::default()).map_err(|e| e.to_string())?;
        check(bytes.len() < 128, || format!("{name}: {} bytes", bytes.len()))?;
        check(codec::decompress(&bytes, &x).map_err(|e| e.to_string())? == x, || {
            format!("{name}: round trip differs")
        })?;
        sizes.push(format!("{name} {}", bytes.len()));
    }
    Ok(format!("container bytes: {}", sizes.join(", ")))
}

fn ac8_resynchronization() -> Outcome {
    let y = random_sequence(1_000_000, BASE_SEED ^ 8);
    let mid = y.len() / 2;
    let mut x = y[..mid].to_vec();
    x.extend_from_slice(&y[mid + 500..]);
    let (x, y) = (Sequence::new(x), Sequence::new(y));
    let params = Params::default();
    let f = parse(&x, &y, &params.window);
    let e = segment(&f, &y, params.max_deletion);
    check(f.len() <= 3, || format!("{} instructions: {f:?}", f.len()))?;
    check(e.deletions.len() == 1, || format!("{} deletions: {e:?}", e.deletions.len()))?;
    check(codec::reconstruct(&e, &y, x.len() as u64).ok() == Some(x), || "reconstruction differs".into())?;
    Ok(format!("parse {:?}, D={:?}", f, e.deletions))
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let started = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let secs = started.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("[PASS] {name}: {detail} [{secs:.2} s]");
            true
        }
        Err(why) => {
            println!("[FAIL] {name}: {why} [{secs:.2} s]");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= run("AC1 golden parse", ac1_golden_parse);
    ok &= run("AC2 golden segmentation", ac2_golden_segmentation);
    ok &= run("AC3 lossless round trip", ac3_round_trip);
    ok &= run("AC4 codec inverses", ac4_codec_inverses);
    let pair = substitution_pair();
    ok &= run("AC5 compression effectiveness", || ac5_effectiveness(&pair));
    ok &= run("AC6 substitution dominance", || ac6_substitution_dominance(&pair));
    drop(pair);
    ok &= run("AC7 identical input", ac7_identical_input);
    ok &= run("AC8 window resynchronization", ac8_resynchronization);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
