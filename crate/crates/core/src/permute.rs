//! Row-wise snake permutation and the keyed Fisher–Yates shuffle.

use thiserror::Error;

use crate::imagegrid::PixelGrid;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermuteError {
    #[error("shuffle of {len} symbols needs {expected} draws, got {found}")]
    DrawCountMismatch {
        len: usize,
        expected: usize,
        found: usize,
    },
    #[error("trace holds {found} swaps but the sequence needs {expected}")]
    TraceLengthMismatch { expected: usize, found: usize },
    #[error("swap {index} ({i}, {j}) violates the Fisher-Yates shape for length {len}")]
    InvalidTrace {
        index: usize,
        i: usize,
        j: usize,
        len: usize,
    },
}

/// Reverses every row with an even 1-based index (rows 2, 4, ...).
///
/// Applying it twice restores the input.
pub fn snake(grid: &PixelGrid) -> PixelGrid {
    let mut out = grid.clone();
    for row in out.rows_mut().skip(1).step_by(2) {
        row.reverse();
    }
    out
}

/// Record of the swaps made by [`keyed_shuffle`]; entry `k` is `(k, j)`
/// with `k <= j < len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleTrace {
    len: usize,
    swaps: Vec<(usize, usize)>,
}

impl ShuffleTrace {
    /// Rebuilds the trace a shuffle of `len` symbols would record for
    /// `draws`, without touching any data.
    pub fn from_draws(len: usize, draws: &[f64]) -> Result<Self, PermuteError> {
        let expected = len.saturating_sub(1);
        if draws.len() != expected {
            return Err(PermuteError::DrawCountMismatch {
                len,
                expected,
                found: draws.len(),
            });
        }
        let swaps = draws
            .iter()
            .enumerate()
            .map(|(i, &x)| (i, i + draw_offset(x, len - i)))
            .collect();
        Ok(Self { len, swaps })
    }

    /// Accepts an externally built swap list after checking its shape.
    pub fn from_swaps(len: usize, swaps: Vec<(usize, usize)>) -> Result<Self, PermuteError> {
        let expected = len.saturating_sub(1);
        if swaps.len() != expected {
            return Err(PermuteError::TraceLengthMismatch {
                expected,
                found: swaps.len(),
            });
        }
        for (index, &(i, j)) in swaps.iter().enumerate() {
            if i != index || j < i || j >= len {
                return Err(PermuteError::InvalidTrace { index, i, j, len });
            }
        }
        Ok(Self { len, swaps })
    }

    pub fn swaps(&self) -> &[(usize, usize)] {
        &self.swaps
    }

    /// Length of the sequence this trace permutes.
    pub fn sequence_len(&self) -> usize {
        self.len
    }
}

/// Offset into the unshuffled tail of length `remaining`:
/// `min(floor(x * remaining), remaining - 1)`.
#[inline]
fn draw_offset(x: f64, remaining: usize) -> usize {
    let scaled = (x * remaining as f64).floor();
    // `as` saturates, so negative or NaN draws land on 0
    (scaled as usize).min(remaining - 1)
}

/// Fisher–Yates over `seq` driven by `draws` (one per position except the
/// last). Returns the permuted copy and the swap trace.
pub fn keyed_shuffle<T: Clone>(
    seq: &[T],
    draws: &[f64],
) -> Result<(Vec<T>, ShuffleTrace), PermuteError> {
    let mut out = seq.to_vec();
    let trace = keyed_shuffle_in_place(&mut out, draws)?;
    Ok((out, trace))
}

pub fn keyed_shuffle_in_place<T>(seq: &mut [T], draws: &[f64]) -> Result<ShuffleTrace, PermuteError> {
    let trace = ShuffleTrace::from_draws(seq.len(), draws)?;
    apply_trace(seq, &trace);
    Ok(trace)
}

/// Applies a trace's swaps in order, i.e. replays the shuffle.
pub fn apply_trace<T>(seq: &mut [T], trace: &ShuffleTrace) {
    debug_assert_eq!(seq.len(), trace.len);
    for &(i, j) in &trace.swaps {
        seq.swap(i, j);
    }
}

/// Undoes [`keyed_shuffle`] by replaying the swaps in reverse.
pub fn invert_shuffle<T: Clone>(seq: &[T], trace: &ShuffleTrace) -> Result<Vec<T>, PermuteError> {
    let mut out = seq.to_vec();
    invert_shuffle_in_place(&mut out, trace)?;
    Ok(out)
}

pub fn invert_shuffle_in_place<T>(seq: &mut [T], trace: &ShuffleTrace) -> Result<(), PermuteError> {
    if seq.len() != trace.len {
        return Err(PermuteError::TraceLengthMismatch {
            expected: seq.len().saturating_sub(1),
            found: trace.swaps.len(),
        });
    }
    for &(i, j) in trace.swaps.iter().rev() {
        seq.swap(i, j);
    }
    Ok(())
}
