//! Statistical analysis of cipher images.
//!
//! Correlation uses every in-bounds adjacent pair in the chosen
//! direction. The co-occurrence matrix quantizes pixels to 8 levels
//! (`v / 32`) and counts ordered pairs at offset (0, +1).

use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;
use thiserror::Error;

use crate::imagegrid::PixelGrid;

pub const GLCM_LEVELS: usize = 8;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum MetricsError {
    #[error("zero variance: correlation is undefined")]
    ZeroVariance,
    #[error("fewer than two pixels along the {0:?} direction")]
    InsufficientPairs(Direction),
    #[error("co-occurrence needs width >= 2")]
    TooNarrow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Horizontal,
    Vertical,
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Horizontal, Direction::Vertical, Direction::Diagonal];

    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (0, 1),
            Direction::Vertical => (1, 0),
            Direction::Diagonal => (1, 1),
        }
    }
}

/// Adjacent pixel pairs `(p(i,j), p(i+di, j+dj))` for one direction.
pub fn adjacent_pairs(grid: &PixelGrid, direction: Direction) -> impl Iterator<Item = (u8, u8)> + '_ {
    let (dr, dc) = direction.offset();
    let (w, h) = (grid.width(), grid.height());
    let data = grid.as_bytes();
    (0..h.saturating_sub(dr)).flat_map(move |i| {
        (0..w.saturating_sub(dc)).map(move |j| (data[i * w + j], data[(i + dr) * w + j + dc]))
    })
}

/// Pearson coefficient over all adjacent pairs in `direction`.
pub fn correlation(grid: &PixelGrid, direction: Direction) -> Result<f64, MetricsError> {
    let n = adjacent_pairs(grid, direction).count();
    if n == 0 {
        return Err(MetricsError::InsufficientPairs(direction));
    }
    let (mut sum_a, mut sum_b) = (0u64, 0u64);
    for (a, b) in adjacent_pairs(grid, direction) {
        sum_a += a as u64;
        sum_b += b as u64;
    }
    let mean_a = sum_a as f64 / n as f64;
    let mean_b = sum_b as f64 / n as f64;

    let (mut cov, mut var_a, mut var_b) = (0.0f64, 0.0f64, 0.0f64);
    for (a, b) in adjacent_pairs(grid, direction) {
        let da = a as f64 - mean_a;
        let db = b as f64 - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(MetricsError::ZeroVariance);
    }
    Ok(cov / (var_a * var_b).sqrt())
}

pub fn histogram(grid: &PixelGrid) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for &v in grid.as_bytes() {
        counts[v as usize] += 1;
    }
    counts
}

/// Shannon entropy of the pixel histogram in bits, with 0·log 0 = 0.
pub fn entropy(grid: &PixelGrid) -> f64 {
    entropy_of(&histogram(grid))
}

pub fn entropy_of(hist: &[u64; 256]) -> f64 {
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let h: f64 = hist
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum();
    // a single occupied bin gives -0.0
    h.max(0.0)
}

/// Pearson's statistic against the uniform distribution over 256 bins.
pub fn chi_square(hist: &[u64; 256]) -> f64 {
    let total: u64 = hist.iter().sum();
    let expected = total as f64 / 256.0;
    if expected == 0.0 {
        return 0.0;
    }
    hist.iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Normalized 8-level horizontal co-occurrence matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GlcmMatrix {
    counts: [[u64; GLCM_LEVELS]; GLCM_LEVELS],
    probabilities: [[f64; GLCM_LEVELS]; GLCM_LEVELS],
    total: u64,
}

impl GlcmMatrix {
    pub fn levels(&self) -> usize {
        GLCM_LEVELS
    }

    pub fn counts(&self) -> &[[u64; GLCM_LEVELS]; GLCM_LEVELS] {
        &self.counts
    }

    pub fn probabilities(&self) -> &[[f64; GLCM_LEVELS]; GLCM_LEVELS] {
        &self.probabilities
    }

    /// Number of pairs counted, `M·(N−1)`.
    pub fn total_pairs(&self) -> u64 {
        self.total
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &p)| (i, j, p)))
    }

    pub fn homogeneity(&self) -> f64 {
        self.cells()
            .map(|(i, j, p)| p / (1.0 + i.abs_diff(j) as f64))
            .sum()
    }

    pub fn contrast(&self) -> f64 {
        self.cells()
            .map(|(i, j, p)| {
                let d = i.abs_diff(j) as f64;
                d * d * p
            })
            .sum()
    }

    pub fn energy(&self) -> f64 {
        self.cells().map(|(_, _, p)| p * p).sum()
    }
}

#[inline]
fn level(v: u8) -> usize {
    (v / 32) as usize
}

pub fn glcm(grid: &PixelGrid) -> Result<GlcmMatrix, MetricsError> {
    if grid.width() < 2 {
        return Err(MetricsError::TooNarrow);
    }
    let mut counts = [[0u64; GLCM_LEVELS]; GLCM_LEVELS];
    for (a, b) in adjacent_pairs(grid, Direction::Horizontal) {
        counts[level(a)][level(b)] += 1;
    }
    let total = (grid.height() * (grid.width() - 1)) as u64;
    let probabilities = counts.map(|row| row.map(|c| c as f64 / total as f64));
    Ok(GlcmMatrix {
        counts,
        probabilities,
        total,
    })
}

pub fn homogeneity(g: &GlcmMatrix) -> f64 {
    g.homogeneity()
}

pub fn contrast(g: &GlcmMatrix) -> f64 {
    g.contrast()
}

pub fn energy(g: &GlcmMatrix) -> f64 {
    g.energy()
}

/// A correlation result as it appears in a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Correlation {
    Coefficient(f64),
    ZeroVariance,
    InsufficientPairs,
}

impl Correlation {
    pub fn value(self) -> Option<f64> {
        match self {
            Correlation::Coefficient(r) => Some(r),
            _ => None,
        }
    }
}

impl From<Result<f64, MetricsError>> for Correlation {
    fn from(r: Result<f64, MetricsError>) -> Self {
        match r {
            Ok(v) => Correlation::Coefficient(v),
            Err(MetricsError::ZeroVariance) => Correlation::ZeroVariance,
            Err(_) => Correlation::InsufficientPairs,
        }
    }
}

/// Serialized as a number, or as the string `"zero_variance"` /
/// `"insufficient_pairs"` when undefined.
impl Serialize for Correlation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Correlation::Coefficient(v) => s.serialize_f64(*v),
            Correlation::ZeroVariance => s.serialize_str("zero_variance"),
            Correlation::InsufficientPairs => s.serialize_str("insufficient_pairs"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct MetricsReport {
    pub entropy: f64,
    pub corr_horizontal: Correlation,
    pub corr_vertical: Correlation,
    pub corr_diagonal: Correlation,
    pub contrast: f64,
    pub homogeneity: f64,
    pub energy: f64,
    #[serde(serialize_with = "serialize_histogram")]
    pub histogram: [u64; 256],
    pub chi_square: f64,
}

fn serialize_histogram<S: Serializer>(h: &[u64; 256], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(h.iter())
}

impl MetricsReport {
    /// Computes every metric. Fails only for single-column images, where
    /// no co-occurrence pairs exist.
    pub fn analyze(grid: &PixelGrid) -> Result<Self, MetricsError> {
        let g = glcm(grid)?;
        let hist = histogram(grid);
        Ok(Self {
            entropy: entropy_of(&hist),
            corr_horizontal: correlation(grid, Direction::Horizontal).into(),
            corr_vertical: correlation(grid, Direction::Vertical).into(),
            corr_diagonal: correlation(grid, Direction::Diagonal).into(),
            contrast: g.contrast(),
            homogeneity: g.homogeneity(),
            energy: g.energy(),
            histogram: hist,
            chi_square: chi_square(&hist),
        })
    }

    pub fn correlation(&self, direction: Direction) -> Correlation {
        match direction {
            Direction::Horizontal => self.corr_horizontal,
            Direction::Vertical => self.corr_vertical,
            Direction::Diagonal => self.corr_diagonal,
        }
    }

    /// Flat JSON object; floats are written in shortest round-trip form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are always serializable")
    }
}
