//! 8-bit grayscale pixel matrices and binary PGM (P5) I/O.
//!
//! Only maxval 255 is accepted. The header grammar follows the usual
//! netpbm reading: tokens separated by whitespace runs, `#` comments
//! running to end of line, and exactly one whitespace byte between the
//! maxval and the raster.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImageError {
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported maxval {0} (only 255 is accepted)")]
    UnsupportedMaxval(u64),
    #[error("truncated payload: expected {expected} pixel bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("dimension mismatch: {width}x{height} needs {expected} bytes, got {found}")]
    DimensionMismatch {
        width: usize,
        height: usize,
        expected: usize,
        found: usize,
    },
}

/// An M×N matrix of 8-bit intensities stored row-major.
///
/// `width` is the column count (N) and `height` the row count (M).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PixelGrid {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl PixelGrid {
    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImageError> {
        let expected = width.checked_mul(height);
        match expected {
            Some(n) if width > 0 && height > 0 && n == data.len() => Ok(Self {
                width,
                height,
                data,
            }),
            _ => Err(ImageError::DimensionMismatch {
                width,
                height,
                expected: expected.unwrap_or(usize::MAX),
                found: data.len(),
            }),
        }
    }

    /// A grid with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, ImageError> {
        let n = width.checked_mul(height).unwrap_or(0);
        Self::from_raw(width, height, vec![value; n])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false; a grid holds at least one pixel.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.data
    }

    /// Pixel at zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        assert!(row < self.height && col < self.width, "pixel index out of bounds");
        self.data[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        let start = row * self.width;
        &self.data[start..start + self.width]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u8> {
        self.data.chunks_exact(self.width)
    }

    /// Builds a grid of the same shape from replacement pixel data.
    pub(crate) fn with_data(&self, data: Vec<u8>) -> Self {
        debug_assert_eq!(data.len(), self.data.len());
        Self {
            width: self.width,
            height: self.height,
            data,
        }
    }

    pub(crate) fn rows_mut(&mut self) -> std::slice::ChunksExactMut<'_, u8> {
        self.data.chunks_exact_mut(self.width)
    }
}

/// Result of decoding a PGM stream, including bytes found after the raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedPgm {
    pub grid: PixelGrid,
    /// Number of bytes following the declared payload. They are ignored.
    pub trailing_bytes: usize,
}

/// Decodes a binary PGM, discarding any trailing data.
pub fn read_pgm(bytes: &[u8]) -> Result<PixelGrid, ImageError> {
    read_pgm_detailed(bytes).map(|d| d.grid)
}

/// Decodes a binary PGM and reports how many trailing bytes were ignored.
pub fn read_pgm_detailed(bytes: &[u8]) -> Result<DecodedPgm, ImageError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(ImageError::MalformedHeader("magic number is not P5".into()));
    }
    let mut cursor = HeaderCursor { bytes, pos: 2 };

    let width = cursor.number("width")?;
    let height = cursor.number("height")?;
    let maxval = cursor.number("maxval")?;

    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => {
            return Err(ImageError::MalformedHeader(
                "missing whitespace after maxval".into(),
            ))
        }
    }

    if width == 0 || height == 0 {
        return Err(ImageError::MalformedHeader("zero image dimension".into()));
    }
    if maxval != 255 {
        return Err(ImageError::UnsupportedMaxval(maxval));
    }
    let expected = usize::try_from(width)
        .ok()
        .zip(usize::try_from(height).ok())
        .and_then(|(w, h)| w.checked_mul(h))
        .ok_or_else(|| ImageError::MalformedHeader("image dimensions overflow".into()))?;

    let payload = &bytes[cursor.pos..];
    if payload.len() < expected {
        return Err(ImageError::TruncatedPayload {
            expected,
            found: payload.len(),
        });
    }
    let grid = PixelGrid::from_raw(width as usize, height as usize, payload[..expected].to_vec())?;
    Ok(DecodedPgm {
        grid,
        trailing_bytes: payload.len() - expected,
    })
}

pub fn write_pgm(grid: &PixelGrid) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", grid.width, grid.height);
    let mut out = Vec::with_capacity(header.len() + grid.data.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&grid.data);
    out
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    /// Skips one mandatory separator run (whitespace and comments), then
    /// reads a decimal token.
    fn number(&mut self, what: &str) -> Result<u64, ImageError> {
        let start = self.pos;
        self.skip_separators();
        if self.pos == start {
            return Err(ImageError::MalformedHeader(format!(
                "expected whitespace before {what}"
            )));
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits_start == self.pos {
            return Err(ImageError::MalformedHeader(format!("{what} is not numeric")));
        }
        // the digits are ASCII, so this cannot fail on UTF-8 grounds
        let text = std::str::from_utf8(&self.bytes[digits_start..self.pos]).unwrap_or_default();
        let value = text
            .parse::<u64>()
            .map_err(|_| ImageError::MalformedHeader(format!("{what} is out of range")))?;
        match self.bytes.get(self.pos) {
            None => Err(ImageError::MalformedHeader("header ends early".into())),
            Some(b) if b.is_ascii_whitespace() || *b == b'#' => Ok(value),
            Some(_) => Err(ImageError::MalformedHeader(format!("{what} is not numeric"))),
        }
    }

    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pgm(header: &str, payload: &[u8]) -> Vec<u8> {
        let mut v = header.as_bytes().to_vec();
        v.extend_from_slice(payload);
        v
    }

    #[test]
    fn reads_two_by_two() {
        let g = read_pgm(&pgm("P5\n2 2\n255\n", &[0, 1, 2, 3])).unwrap();
        assert_eq!((g.width(), g.height()), (2, 2));
        assert_eq!(g.row(0), &[0, 1]);
        assert_eq!(g.row(1), &[2, 3]);
    }

    #[test]
    fn reads_full_size_image() {
        let payload = vec![9u8; 65536];
        let g = read_pgm(&pgm("P5\n256 256\n255\n", &payload)).unwrap();
        assert_eq!((g.width(), g.height(), g.len()), (256, 256, 65536));
    }

    #[test]
    fn rejects_sixteen_bit_maxval() {
        let err = read_pgm(&pgm("P5\n2 2\n65535\n", &[0; 8])).unwrap_err();
        assert_eq!(err, ImageError::UnsupportedMaxval(65535));
    }

    #[test]
    fn rejects_bad_magic_and_dims() {
        assert!(matches!(
            read_pgm(&pgm("P2\n2 2\n255\n", &[0; 4])),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            read_pgm(&pgm("P5\nx 2\n255\n", &[0; 4])),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            read_pgm(&pgm("P5\n2a 2\n255\n", &[0; 4])),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            read_pgm(&pgm("P5\n0 2\n255\n", &[])),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            read_pgm(b"P5"),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            read_pgm(&pgm("P5\n99999999999 99999999999\n255\n", &[])),
            Err(ImageError::MalformedHeader(_))
        ));
    }

    #[test]
    fn truncated_payload() {
        let err = read_pgm(&pgm("P5\n2 2\n255\n", &[1, 2, 3])).unwrap_err();
        assert_eq!(
            err,
            ImageError::TruncatedPayload {
                expected: 4,
                found: 3
            }
        );
    }

    #[test]
    fn comments_and_whitespace_runs() {
        let bytes = pgm("P5 # made by hand\n  2\t\n# another\n1   255\n", &[7, 8]);
        let g = read_pgm(&bytes).unwrap();
        assert_eq!(g.as_bytes(), &[7, 8]);
    }

    #[test]
    fn only_one_whitespace_byte_before_payload() {
        // the second newline is pixel data, not header
        let g = read_pgm(&pgm("P5\n2 1\n255\n", b"\n\x05")).unwrap();
        assert_eq!(g.as_bytes(), &[b'\n', 5]);
    }

    #[test]
    fn trailing_bytes_are_reported() {
        let d = read_pgm_detailed(&pgm("P5\n1 1\n255\n", &[1, 2, 3])).unwrap();
        assert_eq!(d.grid.as_bytes(), &[1]);
        assert_eq!(d.trailing_bytes, 2);
    }

    #[test]
    fn writes_exact_header() {
        let g = PixelGrid::from_raw(1, 1, vec![7]).unwrap();
        assert_eq!(write_pgm(&g), b"P5\n1 1\n255\n\x07".to_vec());
        let g = PixelGrid::from_raw(3, 2, vec![0; 6]).unwrap();
        assert!(write_pgm(&g).starts_with(b"P5\n3 2\n255\n"));
    }

    #[test]
    fn from_raw_checks_length() {
        assert!(PixelGrid::from_raw(2, 2, vec![0; 4]).is_ok());
        assert!(PixelGrid::from_raw(256, 256, vec![0; 65536]).is_ok());
        assert!(matches!(
            PixelGrid::from_raw(2, 2, vec![0; 3]),
            Err(ImageError::DimensionMismatch { .. })
        ));
        assert!(PixelGrid::from_raw(0, 0, vec![]).is_err());
    }

    proptest! {
        #[test]
        fn pgm_round_trip(w in 1usize..40, h in 1usize..40, seed in any::<u64>()) {
            let data: Vec<u8> = (0..w * h)
                .map(|i| (seed.wrapping_mul(i as u64 + 1) >> 13) as u8)
                .collect();
            let g = PixelGrid::from_raw(w, h, data).unwrap();
            prop_assert_eq!(read_pgm(&write_pgm(&g)).unwrap(), g);
        }
    }
}
