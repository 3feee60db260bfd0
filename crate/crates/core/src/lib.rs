//! Keyed grayscale image cipher.
//!
//! The pipeline applies a row-wise snake permutation, encodes every pixel
//! as four nucleotides, shuffles the nucleotides with a logistic-map
//! driven Fisher–Yates pass, decodes back to bytes, substitutes each
//! pixel through one of three S-boxes picked by a second logistic stream,
//! and finally XORs a third logistic keystream. [`cipher::decrypt`] undoes
//! each stage exactly.
//!
//! [`metrics`] provides the statistics used to judge cipher images:
//! adjacent-pixel correlation, Shannon entropy, 8-level co-occurrence
//! texture measures and histogram uniformity.

pub mod chaos;
pub mod cipher;
pub mod cli;
pub mod dna;
pub mod imagegrid;
pub mod metrics;
pub mod permute;
pub mod sbox;

pub use chaos::{CipherKey, LogisticParams};
pub use cipher::{decrypt, encrypt, keygen, CipherError};
pub use imagegrid::{read_pgm, write_pgm, PixelGrid};
pub use metrics::MetricsReport;
pub use sbox::{default_sbox_set, SBoxSet};
