//! Loading and normalizing reference and target sequences.
//!
//! Positions exposed by [`Sequence`] are 1-based, matching the instruction
//! format used everywhere else in the crate.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

/// An indexed run of bytes over a nucleotide-like alphabet.
///
/// Any byte value is accepted; `A`, `C`, `G`, `T` and `N` are merely the
/// common case.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Sequence {
    chars: Vec<u8>,
}

impl Sequence {
    pub fn new(chars: impl Into<Vec<u8>>) -> Self {
        Sequence { chars: chars.into() }
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// Character at 1-based position `i`, or `None` when `i` is out of range.
    pub fn get(&self, i: u64) -> Option<u8> {
        if i == 0 {
            return None;
        }
        usize::try_from(i - 1).ok().and_then(|k| self.chars.get(k).copied())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.chars
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.chars
    }
}

impl From<&str> for Sequence {
    fn from(s: &str) -> Self {
        Sequence::new(s.as_bytes())
    }
}

impl From<Vec<u8>> for Sequence {
    fn from(v: Vec<u8>) -> Self {
        Sequence::new(v)
    }
}

impl AsRef<[u8]> for Sequence {
    fn as_ref(&self) -> &[u8] {
        &self.chars
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 64;
        let head = &self.chars[..self.chars.len().min(SHOWN)];
        write!(f, "Sequence({:?}", String::from_utf8_lossy(head))?;
        if self.chars.len() > SHOWN {
            write!(f, "... {} bytes", self.chars.len())?;
        }
        write!(f, ")")
    }
}

/// Input file layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// Header lines start with `>`; sequence lines may be wrapped anywhere.
    Fasta,
    /// The whole file is the sequence, minus whitespace.
    Raw,
}

/// One FASTA record inside a concatenated sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub header: String,
    /// 1-based position of the record's first character.
    pub start: u64,
    pub len: u64,
}

/// A sequence together with the record layout it was read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loaded {
    pub sequence: Sequence,
    /// Empty for raw input.
    pub records: Vec<Record>,
}

impl Loaded {
    /// True when FASTA headers were read and will not survive compression.
    pub fn drops_headers(&self) -> bool {
        !self.records.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum SeqError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("FASTA input must start with a '>' header line")]
    MissingHeader,
    #[error("sequence is empty after stripping headers and whitespace")]
    Empty,
}

impl SeqError {
    /// Whether the failure was a missing or unreadable file rather than bad content.
    pub fn is_io(&self) -> bool {
        matches!(self, SeqError::Io { .. })
    }
}

pub fn load_sequence(path: impl AsRef<Path>, format: Format) -> Result<Loaded, SeqError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| SeqError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_sequence(&bytes, format)
}

/// Same as [`load_sequence`] for bytes already in memory.
pub fn parse_sequence(bytes: &[u8], format: Format) -> Result<Loaded, SeqError> {
    let loaded = match format {
        Format::Raw => Loaded {
            sequence: Sequence::new(strip_whitespace(bytes)),
            records: Vec::new(),
        },
        Format::Fasta => parse_fasta(bytes)?,
    };
    if loaded.sequence.is_empty() {
        return Err(SeqError::Empty);
    }
    Ok(loaded)
}

fn strip_whitespace(bytes: &[u8]) -> Vec<u8> {
    bytes
        .iter()
        .copied()
        .filter(|b| !b.is_ascii_whitespace())
        .collect()
}

fn parse_fasta(bytes: &[u8]) -> Result<Loaded, SeqError> {
    if bytes.first() != Some(&b'>') {
        return Err(SeqError::MissingHeader);
    }
    let mut chars = Vec::with_capacity(bytes.len());
    let mut records: Vec<Record> = Vec::new();
    for line in bytes.split(|&b| b == b'\n') {
        if let Some(header) = line.strip_prefix(b">") {
            if let Some(last) = records.last_mut() {
                last.len = chars.len() as u64 + 1 - last.start;
            }
            records.push(Record {
                header: String::from_utf8_lossy(header).trim_end().to_string(),
                start: chars.len() as u64 + 1,
                len: 0,
            });
        } else {
            chars.extend(line.iter().copied().filter(|b| !b.is_ascii_whitespace()));
        }
    }
    if let Some(last) = records.last_mut() {
        last.len = chars.len() as u64 + 1 - last.start;
    }
    Ok(Loaded {
        sequence: Sequence::new(chars),
        records,
    })
}

/// Upper-cases ASCII letters and leaves every other byte alone.
pub fn normalize(s: &Sequence) -> Sequence {
    Sequence::new(s.as_bytes().to_ascii_uppercase())
}

/// Writes `seq` as a single-record FASTA file body wrapped at `width` columns.
pub fn to_fasta(header: &str, seq: &Sequence, width: usize) -> Vec<u8> {
    let width = width.max(1);
    let mut out = Vec::with_capacity(seq.len() + seq.len() / width + header.len() + 3);
    out.push(b'>');
    out.extend_from_slice(header.as_bytes());
    out.push(b'\n');
    for line in seq.as_bytes().chunks(width) {
        out.extend_from_slice(line);
        out.push(b'\n');
    }
    out
}
