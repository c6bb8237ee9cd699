//! Command-line front end for the `rgc` reference-based compressor.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use rgc::codec::{self, Params};
use rgc::container::{read_container, Container, Flags};
use rgc::mapper::{DEFAULT_HALF_WIDTH, DEFAULT_PERIOD};
use rgc::segmenter::DEFAULT_MAX_DELETION;
use rgc::seqio::{self, Format, Loaded, Sequence};
use rgc::WindowParams;

pub mod mutate;

#[derive(Debug, Parser)]
#[command(name = "rgc", version, about = "Reference-based lossless genome compression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a target sequence against a reference.
    Compress(CompressArgs),
    /// Restore a target from a container and the same reference.
    Decompress(DecompressArgs),
    /// Print a container's header, edit counts and section sizes.
    Inspect(InspectArgs),
    /// Write a randomly mutated copy of a reference.
    Mutate(MutateArgs),
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    /// Treat inputs as raw sequence bytes.
    #[arg(long, conflicts_with = "fasta")]
    pub raw: bool,
    /// Treat inputs as FASTA. Without either flag, files starting with '>' are FASTA.
    #[arg(long)]
    pub fasta: bool,
}

impl FormatArgs {
    fn format_for(&self, bytes: &[u8]) -> Format {
        if self.raw {
            Format::Raw
        } else if self.fasta || bytes.first() == Some(&b'>') {
            Format::Fasta
        } else {
            Format::Raw
        }
    }
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[arg(short = 'r', long = "reference")]
    pub reference: PathBuf,
    #[arg(short = 't', long = "target")]
    pub target: PathBuf,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
    /// Left and right window half-widths.
    #[arg(long, num_args = 2, value_names = ["L", "R"], default_values_t = [DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH])]
    pub window: Vec<u64>,
    /// Re-centre the window every M phrases.
    #[arg(long, value_name = "M", default_value_t = DEFAULT_PERIOD)]
    pub period: u32,
    /// Longest reference gap recorded as a deletion.
    #[arg(long, value_name = "L_MAX", default_value_t = DEFAULT_MAX_DELETION)]
    pub lmax: u64,
    #[command(flatten)]
    pub format: FormatArgs,
    /// Keep letter case as read instead of upper-casing.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Debug, Args)]
pub struct DecompressArgs {
    #[arg(short = 'r', long = "reference")]
    pub reference: PathBuf,
    #[arg(short = 'i', long = "input")]
    pub input: PathBuf,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(short = 'i', long = "input")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct MutateArgs {
    #[arg(short = 'r', long = "reference")]
    pub reference: PathBuf,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub sub_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    pub ins_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    pub del_rate: f64,
    #[arg(long, default_value_t = 10)]
    pub max_indel: usize,
    /// Random when omitted; always printed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub format: FormatArgs,
}

/// Bad invocation or an input file that cannot be opened. Exits with 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        2
    } else {
        1
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())).into())
}

fn load(path: &Path, format: &FormatArgs) -> Result<Loaded> {
    let bytes = read_input(path)?;
    seqio::parse_sequence(&bytes, format.format_for(&bytes)).with_context(|| format!("loading {}", path.display()))
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

pub fn run(cli: Cli, log: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Compress(a) => compress(&a, log),
        Command::Decompress(a) => decompress(&a, log),
        Command::Inspect(a) => inspect(&a, &mut std::io::stdout().lock()),
        Command::Mutate(a) => mutate_cmd(&a, log),
    }
}

pub fn compress(a: &CompressArgs, log: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let reference = load(&a.reference, &a.format)?;
    let target = load(&a.target, &a.format)?;
    let normalized = !a.no_normalize;
    let prepare = |s: Sequence| if normalized { seqio::normalize(&s) } else { s };
    let flags = Flags {
        normalized,
        headers_dropped: target.drops_headers(),
    };
    if flags.headers_dropped {
        writeln!(
            log,
            "warning: {} FASTA header(s) in {} are not stored; decompression writes the bare sequence",
            target.records.len(),
            a.target.display()
        )?;
    }
    let input_size = target.sequence.len();
    let params = Params {
        window: WindowParams {
            left: a.window[0],
            right: a.window[1],
            period: a.period,
            start: 1,
        },
        max_deletion: a.lmax,
    };
    let bytes = codec::compress_with_flags(
        &prepare(target.sequence),
        &prepare(reference.sequence),
        &params,
        flags,
    )?;
    write_output(&a.output, &bytes)?;
    writeln!(
        log,
        "input {} bytes, output {} bytes, ratio {:.2}:1, {:.3} s",
        input_size,
        bytes.len(),
        input_size as f64 / bytes.len() as f64,
        started.elapsed().as_secs_f64()
    )?;
    Ok(())
}

pub fn decompress(a: &DecompressArgs, log: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let container = read_container(&read_input(&a.input)?)
        .with_context(|| format!("reading container {}", a.input.display()))?;
    let mut reference = load(&a.reference, &a.format)?.sequence;
    if container.flags.normalized {
        reference = seqio::normalize(&reference);
    }
    let target = codec::decode(&container, &reference)?;
    write_output(&a.output, target.as_bytes())?;
    writeln!(
        log,
        "restored {} bytes in {:.3} s",
        target.len(),
        started.elapsed().as_secs_f64()
    )?;
    Ok(())
}

pub fn inspect(a: &InspectArgs, out: &mut dyn Write) -> Result<()> {
    let bytes = read_input(&a.input)?;
    let container = read_container(&bytes).with_context(|| format!("reading container {}", a.input.display()))?;
    codec::container_edits(&container).context("decoding edit streams")?;
    write_report(&container, bytes.len(), out)
}

/// S/(S+I+D) as a percentage, or "n/a" when there are no records.
pub fn substitution_fraction(counts: [u64; 4]) -> String {
    let [_, s, i, d] = counts;
    match s + i + d {
        0 => "n/a".to_string(),
        total => format!("{:.2}%", 100.0 * s as f64 / total as f64),
    }
}

pub fn write_report(c: &Container, file_size: usize, out: &mut dyn Write) -> Result<()> {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let w = &c.params.window;
    let counts = c.streams.counts.as_array();
    let s = &c.streams;
    writeln!(out, "file size:          {file_size} bytes")?;
    writeln!(out, "target length:      {}", c.target_length)?;
    writeln!(out, "reference length:   {}", c.reference_length)?;
    writeln!(out, "normalized:         {}", yes_no(c.flags.normalized))?;
    writeln!(out, "headers dropped:    {}", yes_no(c.flags.headers_dropped))?;
    writeln!(out, "window L, R:        {}, {}", w.left, w.right)?;
    writeln!(out, "window start:       {}", w.start)?;
    writeln!(out, "period M:           {}", w.period)?;
    writeln!(out, "max deletion:       {}", c.params.max_deletion)?;
    match s.golomb_param {
        Some(r) => writeln!(out, "golomb parameter:   {r}")?,
        None => writeln!(out, "golomb parameter:   none")?,
    }
    writeln!(
        out,
        "counts |F| |S| |I| |D|: ({},{},{},{})",
        counts[0], counts[1], counts[2], counts[3]
    )?;
    writeln!(out, "substitution share: {}", substitution_fraction(counts))?;
    writeln!(out, "sign bits:          {}", s.sign_bits.len)?;
    writeln!(out, "codebook bits:      {}", s.codebook.len)?;
    writeln!(out, "integer bits:       {}", s.integers.len)?;
    writeln!(out, "character bits:     {}", s.chars.len)?;
    Ok(())
}

pub fn mutate_cmd(a: &MutateArgs, log: &mut dyn Write) -> Result<()> {
    let rates = mutate::Rates {
        substitution: a.sub_rate,
        insertion: a.ins_rate,
        deletion: a.del_rate,
        max_indel: a.max_indel,
    };
    rates.validate().map_err(UsageError)?;
    let seed = a.seed.unwrap_or_else(rand::random);
    writeln!(log, "seed {seed}")?;
    let loaded = load(&a.reference, &a.format)?;
    let (target, stats) = mutate::mutate(loaded.sequence.as_bytes(), &rates, seed);
    let bytes = match loaded.records.first() {
        Some(rec) => seqio::to_fasta(&format!("{} mutated seed={seed}", rec.header), &Sequence::new(target), 60),
        None => target,
    };
    write_output(&a.output, &bytes)?;
    writeln!(
        log,
        "{} substitutions, {} insertions ({} bases), {} deletions ({} bases)",
        stats.substitutions, stats.insertions, stats.inserted_bases, stats.deletions, stats.deleted_bases
    )?;
    Ok(())
}
