//! Bijective byte substitution tables and the nibble-indexed lookup.
//!
//! The default set is derived from the AES S-box `S1`:
//! `S2 = S1 ∘ S1` and `S3 = S1 ^ 0x5A`. Both constructions keep the
//! tables bijective.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SBoxError {
    #[error("table is not a permutation of 0..=255: value {value} appears {count} times")]
    NotBijective { value: u8, count: usize },
    #[error("s-box block {block}: {source}")]
    Block {
        block: usize,
        #[source]
        source: Box<SBoxError>,
    },
    #[error("s-box file token {index} ({token:?}) is not an integer in 0..=255")]
    BadToken { index: usize, token: String },
    #[error("s-box file holds {found} values, expected 768 (3 blocks of 256)")]
    WrongCount { found: usize },
}

/// A bijection on bytes, stored with its inverse.
///
/// Viewed as a 16×16 grid, row `h` and column `l` (both 1-based) hold the
/// image of the byte whose high nibble is `h - 1` and low nibble `l - 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct SBox {
    table: [u8; 256],
    inverse: [u8; 256],
}

impl std::fmt::Debug for SBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SBox")
            .field("first", &&self.table[..8])
            .finish_non_exhaustive()
    }
}

impl SBox {
    pub fn from_table(table: [u8; 256]) -> Result<Self, SBoxError> {
        let mut count = [0usize; 256];
        for &v in &table {
            count[v as usize] += 1;
        }
        if let Some(v) = (0..256).find(|&v| count[v] != 1) {
            return Err(SBoxError::NotBijective {
                value: v as u8,
                count: count[v],
            });
        }
        let mut inverse = [0u8; 256];
        for (b, &v) in table.iter().enumerate() {
            inverse[v as usize] = b as u8;
        }
        Ok(Self { table, inverse })
    }

    pub fn table(&self) -> &[u8; 256] {
        &self.table
    }

    pub fn inverse_table(&self) -> &[u8; 256] {
        &self.inverse
    }

    /// Grid entry at 1-based `(row, col)`, each in `1..=16`.
    pub fn entry(&self, row: usize, col: usize) -> u8 {
        assert!((1..=16).contains(&row) && (1..=16).contains(&col));
        self.table[(row - 1) * 16 + (col - 1)]
    }

    /// Looks `b` up by its nibbles: high nibble + 1 is the row, low
    /// nibble + 1 the column.
    #[inline]
    pub fn substitute(&self, b: u8) -> u8 {
        let (row, col) = nibble_index(b);
        self.entry(row, col)
    }

    #[inline]
    pub fn substitute_inverse(&self, c: u8) -> u8 {
        self.inverse[c as usize]
    }
}

/// 1-based grid coordinates of `b`: `(high nibble + 1, low nibble + 1)`.
#[inline]
pub fn nibble_index(b: u8) -> (usize, usize) {
    ((b >> 4) as usize + 1, (b & 0x0f) as usize + 1)
}

pub fn substitute(b: u8, sbox: &SBox) -> u8 {
    sbox.substitute(b)
}

pub fn substitute_inverse(c: u8, sbox: &SBox) -> u8 {
    sbox.substitute_inverse(c)
}

/// Three S-boxes, indexed by selector values 0, 1, 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SBoxSet {
    boxes: [SBox; 3],
}

impl SBoxSet {
    pub fn new(boxes: [SBox; 3]) -> Self {
        Self { boxes }
    }

    pub fn get(&self, selector: u8) -> &SBox {
        &self.boxes[selector as usize]
    }

    pub fn boxes(&self) -> &[SBox; 3] {
        &self.boxes
    }

    /// Parses 768 whitespace-separated integers: three blocks of 256, each
    /// of which must be a permutation of 0..=255.
    pub fn parse_text(text: &str) -> Result<Self, SBoxError> {
        let mut values = Vec::with_capacity(768);
        for (index, token) in text.split_ascii_whitespace().enumerate() {
            if values.len() == 768 {
                return Err(SBoxError::WrongCount {
                    found: text.split_ascii_whitespace().count(),
                });
            }
            let v = token.parse::<u8>().map_err(|_| SBoxError::BadToken {
                index,
                token: token.chars().take(32).collect(),
            })?;
            values.push(v);
        }
        if values.len() != 768 {
            return Err(SBoxError::WrongCount {
                found: values.len(),
            });
        }
        let block = |i: usize| -> Result<SBox, SBoxError> {
            let mut table = [0u8; 256];
            table.copy_from_slice(&values[i * 256..(i + 1) * 256]);
            SBox::from_table(table).map_err(|e| SBoxError::Block {
                block: i,
                source: Box::new(e),
            })
        };
        Ok(Self::new([block(0)?, block(1)?, block(2)?]))
    }

    /// Inverse of [`SBoxSet::parse_text`]: 16 values per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.boxes {
            for row in b.table.chunks(16) {
                let line: Vec<String> = row.iter().map(u8::to_string).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}

impl Default for SBoxSet {
    fn default() -> Self {
        default_sbox_set()
    }
}

/// Multiplication in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1.
fn gf_mul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        let carry = a & 0x80 != 0;
        a <<= 1;
        if carry {
            a ^= 0x1b;
        }
        b >>= 1;
    }
    p
}

/// Multiplicative inverse as a^254; maps 0 to 0.
fn gf_inv(a: u8) -> u8 {
    let mut result = 1u8;
    let mut base = a;
    let mut e = 254u8;
    while e != 0 {
        if e & 1 != 0 {
            result = gf_mul(result, base);
        }
        base = gf_mul(base, base);
        e >>= 1;
    }
    if a == 0 {
        0
    } else {
        result
    }
}

/// The AES substitution table: GF(2^8) inverse followed by the affine map.
pub fn aes_sbox() -> SBox {
    let mut table = [0u8; 256];
    for (b, slot) in table.iter_mut().enumerate() {
        let x = gf_inv(b as u8);
        *slot = x ^ x.rotate_left(1) ^ x.rotate_left(2) ^ x.rotate_left(3) ^ x.rotate_left(4) ^ 0x63;
    }
    SBox::from_table(table).expect("AES S-box is a bijection")
}

pub const S3_MASK: u8 = 0x5a;

pub fn default_sbox_set() -> SBoxSet {
    let s1 = aes_sbox();
    let s2: [u8; 256] = std::array::from_fn(|b| s1.table[s1.table[b] as usize]);
    let s3: [u8; 256] = std::array::from_fn(|b| s1.table[b] ^ S3_MASK);
    SBoxSet::new([
        s1,
        SBox::from_table(s2).expect("composition of bijections"),
        SBox::from_table(s3).expect("xor with a constant is a bijection"),
    ])
}
