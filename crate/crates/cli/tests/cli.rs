use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const EX1_TARGET: &str = "AATGCAGGTACTATAAGNAAN";
const EX1_REFERENCE: &str = "AATGTAGGTACATAAGATGCNNNN";

fn rgc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rgc")).args(args).output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files { dir: TempDir::new().unwrap() }
    }

    fn put(&self, name: &str, body: &[u8]) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn compress(f: &Files, target: &Path, reference: &Path, extra: &[&str]) -> Output {
    let out = f.path("out.rgc");
    let mut args = vec!["compress", "-r", path_str(reference), "-t", path_str(target), "-o", path_str(&out)];
    args.extend_from_slice(extra);
    rgc(&args)
}

#[test]
fn example_pair_inspects_to_expected_counts() {
    let f = Files::new();
    let t = f.put("t.txt", EX1_TARGET.as_bytes());
    let r = f.put("r.txt", EX1_REFERENCE.as_bytes());
    let out = compress(&f, &t, &r, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let log = String::from_utf8_lossy(&out.stderr);
    assert!(log.contains("input 21 bytes") && log.contains("ratio"), "{log}");

    let report = rgc(&["inspect", "-i", path_str(&f.path("out.rgc"))]);
    assert!(report.status.success());
    let text = String::from_utf8(report.stdout).unwrap();
    assert!(text.contains("(2,1,1,0)"), "{text}");
    assert!(text.contains("substitution share: 50.00%"), "{text}");
    assert!(text.contains("period M:           100"), "{text}");
    assert!(text.contains("max deletion:       1000"), "{text}");
    assert!(text.contains("window L, R:        1000, 1000"), "{text}");
}

#[test]
fn identical_pair_reports_na_fraction() {
    let f = Files::new();
    let r = f.put("r.txt", b"ACGTTGCAACGT");
    assert!(compress(&f, &r, &r, &[]).status.success());
    let text = String::from_utf8(rgc(&["inspect", "-i", path_str(&f.path("out.rgc"))]).stdout).unwrap();
    assert!(text.contains("substitution share: n/a"), "{text}");
}

#[test]
fn file_level_round_trip_normalizes_and_drops_headers() {
    let f = Files::new();
    let r = f.put("r.fa", b">chrR\nacgtacgtAAAAccccGGGGtttt\nACGTNNNN\n");
    let t = f.put("t.fa", b">chrT something\nacgtacgtAAAACcccGGGG\nttttACGTNN\n");
    let out = compress(&f, &t, &r, &["--window", "50", "50", "--period", "10", "--lmax", "20"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let restored = f.path("t.out");
    let out = rgc(&[
        "decompress", "-r", path_str(&r), "-i", path_str(&f.path("out.rgc")), "-o", path_str(&restored),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&restored).unwrap(), b"ACGTACGTAAAACCCCGGGGTTTTACGTNN");

    let text = String::from_utf8(rgc(&["inspect", "-i", path_str(&f.path("out.rgc"))]).stdout).unwrap();
    assert!(text.contains("headers dropped:    yes") && text.contains("window L, R:        50, 50"), "{text}");
}

#[test]
fn no_normalize_keeps_case() {
    let f = Files::new();
    let r = f.put("r.txt", b"acgtACGTacgt");
    let t = f.put("t.txt", b"acgtACGAacgt");
    assert!(compress(&f, &t, &r, &["--no-normalize", "--raw"]).status.success());
    let restored = f.path("t.out");
    let out = rgc(&[
        "decompress", "-r", path_str(&r), "-i", path_str(&f.path("out.rgc")), "-o", path_str(&restored), "--raw",
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read(&restored).unwrap(), b"acgtACGAacgt");
}

#[test]
fn missing_reference_is_usage_error() {
    let f = Files::new();
    let t = f.put("t.txt", b"ACGT");
    let out = compress(&f, &t, &f.path("absent.txt"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.txt"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(rgc(&["compress", "-r", "x"]).status.code(), Some(2));
    assert_eq!(rgc(&["frobnicate"]).status.code(), Some(2));
    let f = Files::new();
    let r = f.put("r.txt", b"ACGT");
    let out = rgc(&["mutate", "-r", path_str(&r), "-o", path_str(&f.path("m")), "--sub-rate", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupt_container_and_wrong_reference_fail() {
    let f = Files::new();
    let r = f.put("r.txt", EX1_REFERENCE.as_bytes());
    let t = f.put("t.txt", EX1_TARGET.as_bytes());
    assert!(compress(&f, &t, &r, &[]).status.success());
    let mut bytes = fs::read(f.path("out.rgc")).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x01;
    let bad = f.put("bad.rgc", &bytes);
    let out = rgc(&["decompress", "-r", path_str(&r), "-i", path_str(&bad), "-o", path_str(&f.path("x"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rgc(&["inspect", "-i", path_str(&bad)]).status.code(), Some(1));

    let short = f.put("short.txt", b"AATGTAGG");
    let out = rgc(&[
        "decompress", "-r", path_str(&short), "-i", path_str(&f.path("out.rgc")), "-o", path_str(&f.path("x")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reference"));
}

#[test]
fn mutate_prints_seed_and_is_reproducible() {
    let f = Files::new();
    let r = f.put("r.txt", rgc_cli::mutate::random_sequence(5000, 1).as_slice());
    let run = |name: &str| {
        let out = rgc(&[
            "mutate", "-r", path_str(&r), "-o", path_str(&f.path(name)),
            "--sub-rate", "0.01", "--ins-rate", "0.001", "--del-rate", "0.001", "--max-indel", "4", "--seed", "77",
        ]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stderr).contains("seed 77"));
        fs::read(f.path(name)).unwrap()
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    assert_ne!(a, fs::read(&r).unwrap());

    let out = rgc(&["mutate", "-r", path_str(&r), "-o", path_str(&f.path("c"))]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed "));
    assert_eq!(fs::read(f.path("c")).unwrap(), fs::read(&r).unwrap());
}

#[test]
fn mutated_fasta_round_trips_through_the_binary() {
    let f = Files::new();
    let seq = rgc_cli::mutate::random_sequence(30_000, 5);
    let r = f.put("r.fa", &rgc::seqio::to_fasta("ref", &rgc::Sequence::new(seq.clone()), 70));
    let t = f.path("t.fa");
    let out = rgc(&[
        "mutate", "-r", path_str(&r), "-o", path_str(&t),
        "--sub-rate", "0.02", "--ins-rate", "0.002", "--del-rate", "0.002", "--seed", "3",
    ]);
    assert!(out.status.success());
    assert!(fs::read(&t).unwrap().starts_with(b">ref mutated seed=3\n"));
    assert!(compress(&f, &t, &r, &[]).status.success());
    let restored = f.path("t.out");
    assert!(rgc(&["decompress", "-r", path_str(&r), "-i", path_str(&f.path("out.rgc")), "-o", path_str(&restored)])
        .status
        .success());
    let expected = rgc::seqio::load_sequence(&t, rgc::seqio::Format::Fasta).unwrap().sequence;
    assert_eq!(fs::read(&restored).unwrap(), expected.as_bytes());
}
