//! The full encryption pipeline and its step-by-step inverse.
//!
//! Encryption, in order:
//!
//! 1. snake permutation of the plaintext rows
//! 2. forward DNA encoding
//! 3. keyed Fisher–Yates shuffle of the nucleotides (`4·M·N − 1` draws)
//! 4. DNA decoding back to bytes
//! 5. per-pixel S-box selection from the selector stream (`M·N` draws)
//! 6. nibble-indexed substitution
//! 7. XOR with the keystream (`M·N` draws)
//!
//! Decryption regenerates the same three streams and undoes the stages in
//! reverse. Selector and keystream values are laid out row-major.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::chaos::{self, ChaosError, CipherKey, LogisticParams};
use crate::dna::{self, DnaError, DnaSequence};
use crate::imagegrid::PixelGrid;
use crate::permute::{self, PermuteError, ShuffleTrace};
use crate::sbox::SBoxSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CipherError {
    #[error(transparent)]
    Chaos(#[from] ChaosError),
    #[error(transparent)]
    Permute(#[from] PermuteError),
    #[error(transparent)]
    Dna(#[from] DnaError),
}

/// The three materialized streams for one image size.
#[derive(Debug, Clone, PartialEq)]
pub struct KeySchedule {
    pub shuffle_draws: Vec<f64>,
    pub selectors: Vec<u8>,
    pub keystream: Vec<u8>,
}

impl KeySchedule {
    /// Draws exactly `4·pixels − 1` shuffle states, `pixels` selector
    /// states and `pixels` keystream states.
    pub fn derive(key: &CipherKey, pixels: usize) -> Result<Self, CipherError> {
        key.validate()?;
        let symbols = pixels * 4;
        let shuffle_draws = chaos::stream(&key.shuffle, symbols.saturating_sub(1))?;
        let selectors = chaos::stream(&key.selector, pixels)?
            .into_iter()
            .map(chaos::quantize_selector)
            .collect();
        let keystream = chaos::stream(&key.xor, pixels)?
            .into_iter()
            .map(chaos::quantize_byte)
            .collect();
        Ok(Self {
            shuffle_draws,
            selectors,
            keystream,
        })
    }

    /// `(shuffle, selector, xor)` draw counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.shuffle_draws.len(),
            self.selectors.len(),
            self.keystream.len(),
        )
    }
}

/// Every intermediate value of one encryption.
#[derive(Debug, Clone)]
pub struct EncryptionStages {
    pub snaked: PixelGrid,
    pub encoded: DnaSequence,
    pub shuffled: DnaSequence,
    pub decoded: PixelGrid,
    pub substituted: PixelGrid,
    pub cipher: PixelGrid,
    pub schedule: KeySchedule,
}

/// Same as [`encrypt`] but keeps each stage.
pub fn encrypt_stages(
    plain: &PixelGrid,
    key: &CipherKey,
    boxes: &SBoxSet,
) -> Result<EncryptionStages, CipherError> {
    let (w, h) = (plain.width(), plain.height());
    let schedule = KeySchedule::derive(key, plain.len())?;

    let snaked = permute::snake(plain);
    let encoded = dna::encode_grid(&snaked);
    let mut shuffled = encoded.clone();
    permute::keyed_shuffle_in_place(shuffled.symbols_mut(), &schedule.shuffle_draws)?;
    let decoded = dna::decode_sequence(&shuffled, w, h)?;

    let substituted: Vec<u8> = decoded
        .as_bytes()
        .iter()
        .zip(&schedule.selectors)
        .map(|(&b, &s)| boxes.get(s).substitute(b))
        .collect();
    let cipher: Vec<u8> = substituted
        .iter()
        .zip(&schedule.keystream)
        .map(|(&b, &k)| b ^ k)
        .collect();

    Ok(EncryptionStages {
        substituted: plain.with_data(substituted),
        cipher: plain.with_data(cipher),
        snaked,
        encoded,
        shuffled,
        decoded,
        schedule,
    })
}

pub fn encrypt(plain: &PixelGrid, key: &CipherKey, boxes: &SBoxSet) -> Result<PixelGrid, CipherError> {
    encrypt_stages(plain, key, boxes).map(|s| s.cipher)
}

/// Cipher image plus a diagnostic fingerprint of the key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherOutput {
    pub cipher: PixelGrid,
    pub key_fingerprint: String,
}

pub fn encrypt_with_fingerprint(
    plain: &PixelGrid,
    key: &CipherKey,
    boxes: &SBoxSet,
) -> Result<CipherOutput, CipherError> {
    Ok(CipherOutput {
        cipher: encrypt(plain, key, boxes)?,
        key_fingerprint: key_fingerprint(key),
    })
}

/// Inverts [`encrypt`]. Also returns the nucleotide sequence recovered
/// just before un-shuffling, which equals the shuffled sequence of the
/// matching encryption.
pub fn decrypt_stages(
    cipher: &PixelGrid,
    key: &CipherKey,
    boxes: &SBoxSet,
) -> Result<(PixelGrid, DnaSequence, KeySchedule), CipherError> {
    let (w, h) = (cipher.width(), cipher.height());
    let schedule = KeySchedule::derive(key, cipher.len())?;

    let unsubstituted: Vec<u8> = cipher
        .as_bytes()
        .iter()
        .zip(&schedule.keystream)
        .zip(&schedule.selectors)
        .map(|((&c, &k), &s)| boxes.get(s).substitute_inverse(c ^ k))
        .collect();
    let shuffled = dna::encode_grid_step4inv(&cipher.with_data(unsubstituted));

    let trace = ShuffleTrace::from_draws(shuffled.len(), &schedule.shuffle_draws)?;
    let mut encoded = shuffled.clone();
    permute::invert_shuffle_in_place(encoded.symbols_mut(), &trace)?;
    let snaked = dna::decode_sequence_table1inv(&encoded, w, h)?;
    Ok((permute::snake(&snaked), shuffled, schedule))
}

pub fn decrypt(cipher: &PixelGrid, key: &CipherKey, boxes: &SBoxSet) -> Result<PixelGrid, CipherError> {
    decrypt_stages(cipher, key, boxes).map(|(plain, _, _)| plain)
}

/// 64-bit FNV-1a of the canonical key text, as 16 hex digits. Not a
/// security property; intended for logs.
pub fn key_fingerprint(key: &CipherKey) -> String {
    let text = key.to_key_text().unwrap_or_else(|_| format!("{key:?}"));
    format!("{:016x}", fnv1a64(text.as_bytes()))
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Iterates each candidate trajectory this far past burn-in when screening
/// generated keys.
pub const KEYGEN_SCREEN_ITERATES: usize = 2000;

/// Minimum Lyapunov estimate a generated trajectory must reach. Periodic
/// windows inside `[3.9, 4.0)` (about 3 % of draws) fall below it.
pub const KEYGEN_MIN_LYAPUNOV: f64 = 0.2;

/// Generates a key with every `r` in `[3.9, 4.0)` and every `x0` in
/// `(0.1, 0.9)`. Without `seed_text` the OS entropy source is used; with
/// it, generation is reproducible. Candidates are redrawn if their
/// trajectory collapses within [`KEYGEN_SCREEN_ITERATES`] or if it is not
/// chaotic there (see [`KEYGEN_MIN_LYAPUNOV`]).
pub fn keygen(seed_text: Option<&str>) -> CipherKey {
    let mut rng = match seed_text {
        Some(text) => ChaCha20Rng::seed_from_u64(fnv1a64(text.as_bytes())),
        None => ChaCha20Rng::from_os_rng(),
    };
    let mut params = || loop {
        let r = rng.random_range(3.9..4.0);
        let x0 = rng.random_range(0.1..0.9);
        if x0 <= 0.1 {
            continue;
        }
        let p = LogisticParams::new(r, x0);
        match chaos::lyapunov_estimate(&p, KEYGEN_SCREEN_ITERATES) {
            Ok(l) if l >= KEYGEN_MIN_LYAPUNOV => return p,
            _ => {}
        }
    };
    CipherKey::new(params(), params(), params())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::LogisticParams;
    use crate::sbox::default_sbox_set;

    fn reference_key() -> CipherKey {
        CipherKey::new(
            LogisticParams::new(3.99, 0.4),
            LogisticParams::new(3.97, 0.3),
            LogisticParams::new(3.95, 0.7),
        )
    }

    fn noise(w: usize, h: usize, seed: u64) -> PixelGrid {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        PixelGrid::from_raw(w, h, (0..w * h).map(|_| rng.random()).collect()).unwrap()
    }

    #[test]
    fn round_trip_small_shapes() {
        let boxes = default_sbox_set();
        let key = reference_key();
        for (w, h) in [(1, 1), (1, 7), (7, 1), (3, 5), (16, 16), (33, 9)] {
            let g = noise(w, h, (w * 100 + h) as u64);
            let c = encrypt(&g, &key, &boxes).unwrap();
            assert_eq!((c.width(), c.height()), (w, h));
            assert_eq!(decrypt(&c, &key, &boxes).unwrap(), g);
        }
    }

    #[test]
    fn deterministic() {
        let boxes = default_sbox_set();
        let g = noise(32, 32, 7);
        let a = encrypt(&g, &reference_key(), &boxes).unwrap();
        let b = encrypt(&g, &reference_key(), &boxes).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn stream_accounting() {
        let key = reference_key();
        let boxes = default_sbox_set();
        let g = noise(12, 5, 1);
        let stages = encrypt_stages(&g, &key, &boxes).unwrap();
        assert_eq!(stages.schedule.counts(), (4 * 60 - 1, 60, 60));
        let (_, _, schedule) = decrypt_stages(&stages.cipher, &key, &boxes).unwrap();
        assert_eq!(schedule, stages.schedule);
    }

    #[test]
    fn decrypt_recovers_shuffled_sequence() {
        let key = reference_key();
        let boxes = default_sbox_set();
        let stages = encrypt_stages(&noise(9, 4, 3), &key, &boxes).unwrap();
        let (_, shuffled, _) = decrypt_stages(&stages.cipher, &key, &boxes).unwrap();
        assert_eq!(shuffled, stages.shuffled);
    }

    #[test]
    fn rejects_invalid_key() {
        let mut key = reference_key();
        key.selector.r = 2.5;
        let g = noise(2, 2, 0);
        assert!(matches!(
            encrypt(&g, &key, &default_sbox_set()),
            Err(CipherError::Chaos(ChaosError::InvalidKey { .. }))
        ));
        assert!(decrypt(&g, &key, &default_sbox_set()).is_err());
    }

    #[test]
    fn degenerate_key_propagates() {
        let mut key = reference_key();
        key.xor = LogisticParams::new(4.0, 0.5);
        assert!(matches!(
            encrypt(&noise(2, 2, 0), &key, &default_sbox_set()),
            Err(CipherError::Chaos(ChaosError::DegenerateStream { .. }))
        ));
    }

    #[test]
    fn all_zero_cipher_decrypts() {
        let c = PixelGrid::filled(64, 64, 0).unwrap();
        let p = decrypt(&c, &reference_key(), &default_sbox_set()).unwrap();
        assert_eq!(encrypt(&p, &reference_key(), &default_sbox_set()).unwrap(), c);
    }

    #[test]
    fn fingerprint_is_stable() {
        let a = key_fingerprint(&reference_key());
        assert_eq!(a.len(), 16);
        assert_eq!(a, key_fingerprint(&reference_key()));
        let mut other = reference_key();
        other.xor.x0 += 1e-12;
        assert_ne!(a, key_fingerprint(&other));
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn keygen_contract() {
        let a = keygen(None);
        let b = keygen(None);
        assert_ne!(a, b);
        for key in [a, b, keygen(Some("fixed")), keygen(Some(""))] {
            key.validate().unwrap();
            for p in [key.selector, key.shuffle, key.xor] {
                assert!((3.9..4.0).contains(&p.r));
                assert!(p.x0 > 0.1 && p.x0 < 0.9);
                assert!(chaos::stream(&p, KEYGEN_SCREEN_ITERATES).is_ok());
                assert!(chaos::lyapunov_estimate(&p, KEYGEN_SCREEN_ITERATES).unwrap() >= KEYGEN_MIN_LYAPUNOV);
            }
        }
        assert_eq!(keygen(Some("fixed")), keygen(Some("fixed")));
        assert_ne!(keygen(Some("fixed")), keygen(Some("fixed2")));
    }
}
