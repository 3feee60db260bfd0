//! Nucleotide encodings of pixel bytes.
//!
//! Two different pair tables are in play. The forward encoder maps bit
//! pairs `11, 00, 10, 01` to `A, T, C, G`; the decoder reads `A, C, G, T`
//! back as `00, 01, 10, 11`. The tables are pairwise bit complements of
//! each other, so `decode_sequence(encode_grid(g))` is the per-byte
//! bitwise NOT of `g`. Each table also has an exact inverse, used on the
//! decryption path.
//!
//! Pairs are taken MSB first: `0b11_00_01_10` encodes as `ATGC`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::imagegrid::PixelGrid;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DnaError {
    #[error("sequence has {found} symbols, {width}x{height} needs {expected}")]
    LengthMismatch {
        width: usize,
        height: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid nucleotide {symbol:?} at position {position}")]
    InvalidSymbol { symbol: char, position: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Nucleotide {
    A,
    C,
    G,
    T,
}

impl Nucleotide {
    pub fn as_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
            Nucleotide::T => 'T',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'A' => Some(Nucleotide::A),
            'C' => Some(Nucleotide::C),
            'G' => Some(Nucleotide::G),
            'T' => Some(Nucleotide::T),
            _ => None,
        }
    }
}

use Nucleotide::{A, C, G, T};

/// Forward table, indexed by bit pair: 00→T, 01→G, 10→C, 11→A.
const ENCODE_PAIR: [Nucleotide; 4] = [T, G, C, A];
/// Reading table, indexed by nucleotide: A→00, C→01, G→10, T→11.
const DECODE_PAIR: [u8; 4] = [0b00, 0b01, 0b10, 0b11];
/// Inverse of `DECODE_PAIR`: 00→A, 01→C, 10→G, 11→T.
const DECODE_INV_PAIR: [Nucleotide; 4] = [A, C, G, T];
/// Inverse of `ENCODE_PAIR`: A→11, C→10, G→01, T→00.
const ENCODE_INV_PAIR: [u8; 4] = [0b11, 0b10, 0b01, 0b00];

/// A nucleotide string, four symbols per pixel.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DnaSequence(Vec<Nucleotide>);

impl DnaSequence {
    pub fn new(symbols: Vec<Nucleotide>) -> Self {
        Self(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Nucleotide] {
        &self.0
    }

    pub fn symbols_mut(&mut self) -> &mut [Nucleotide] {
        &mut self.0
    }

    pub fn into_symbols(self) -> Vec<Nucleotide> {
        self.0
    }

    /// One-line plain-text export.
    pub fn to_text(&self) -> String {
        self.0.iter().map(|n| n.as_char()).collect()
    }
}

impl fmt::Display for DnaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for DnaSequence {
    type Err = DnaError;

    /// Parses a symbol string; a single trailing newline is tolerated.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.strip_suffix('\n').unwrap_or(s);
        s.chars()
            .enumerate()
            .map(|(position, symbol)| {
                Nucleotide::from_char(symbol).ok_or(DnaError::InvalidSymbol { symbol, position })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(DnaSequence)
    }
}

fn encode_with(grid: &PixelGrid, table: &[Nucleotide; 4]) -> DnaSequence {
    let mut out = Vec::with_capacity(grid.len() * 4);
    for &b in grid.as_bytes() {
        out.extend([6u32, 4, 2, 0].map(|shift| table[((b >> shift) & 0b11) as usize]));
    }
    DnaSequence(out)
}

fn decode_with(
    seq: &DnaSequence,
    width: usize,
    height: usize,
    table: &[u8; 4],
) -> Result<PixelGrid, DnaError> {
    let mismatch = || DnaError::LengthMismatch {
        width,
        height,
        expected: width.saturating_mul(height).saturating_mul(4),
        found: seq.len(),
    };
    let pixels = width.checked_mul(height).ok_or_else(mismatch)?;
    if pixels.checked_mul(4) != Some(seq.len()) {
        return Err(mismatch());
    }
    let data = seq
        .0
        .chunks_exact(4)
        .map(|q| q.iter().fold(0u8, |acc, &n| (acc << 2) | table[n as usize]))
        .collect();
    PixelGrid::from_raw(width, height, data).map_err(|_| mismatch())
}

/// Forward encoding (11→A, 00→T, 10→C, 01→G), row-major.
pub fn encode_grid(grid: &PixelGrid) -> DnaSequence {
    encode_with(grid, &ENCODE_PAIR)
}

/// Reads 4-symbol groups as bytes with A→00, C→01, G→10, T→11.
pub fn decode_sequence(seq: &DnaSequence, width: usize, height: usize) -> Result<PixelGrid, DnaError> {
    decode_with(seq, width, height, &DECODE_PAIR)
}

/// Inverse of [`decode_sequence`]: 00→A, 01→C, 10→G, 11→T.
pub fn encode_grid_step4inv(grid: &PixelGrid) -> DnaSequence {
    encode_with(grid, &DECODE_INV_PAIR)
}

/// Inverse of [`encode_grid`]: A→11, T→00, C→10, G→01.
pub fn decode_sequence_table1inv(
    seq: &DnaSequence,
    width: usize,
    height: usize,
) -> Result<PixelGrid, DnaError> {
    decode_with(seq, width, height, &ENCODE_INV_PAIR)
}
