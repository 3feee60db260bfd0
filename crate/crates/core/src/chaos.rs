//! Logistic-map keystreams and the secret key that seeds them.
//!
//! All arithmetic is IEEE-754 binary64 with the fixed association
//! `(r * x) * (1 - x)`, so every conforming implementation regenerates
//! bit-identical streams from the same key.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

pub const R_MIN: f64 = 3.57;
pub const R_MAX: f64 = 4.0;
pub const DEFAULT_BURN_IN: u64 = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChaosError {
    #[error("invalid key: {field}: {reason}")]
    InvalidKey { field: String, reason: String },
    #[error("degenerate logistic stream: iterate {index} collapsed to {value}")]
    DegenerateStream { index: u64, value: f64 },
}

impl ChaosError {
    fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ChaosError::InvalidKey {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// One logistic-map trajectory: control parameter, seed and burn-in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    pub r: f64,
    pub x0: f64,
    pub burn_in: u64,
}

impl LogisticParams {
    pub fn new(r: f64, x0: f64) -> Self {
        Self {
            r,
            x0,
            burn_in: DEFAULT_BURN_IN,
        }
    }

    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    /// Checks the chaotic-regime and open-interval constraints. `name` is
    /// used as the field prefix in the error.
    pub fn validate(&self, name: &str) -> Result<(), ChaosError> {
        if !(R_MIN..=R_MAX).contains(&self.r) {
            return Err(ChaosError::invalid(
                format!("{name}_r"),
                format!("{} is outside the chaotic regime [{R_MIN}, {R_MAX}]", self.r),
            ));
        }
        if !(self.x0 > 0.0 && self.x0 < 1.0) {
            return Err(ChaosError::invalid(
                format!("{name}_x0"),
                format!("{} is not strictly inside (0, 1)", self.x0),
            ));
        }
        Ok(())
    }
}

/// `x -> (r * x) * (1 - x)` in exactly that evaluation order.
#[inline]
pub fn logistic_step(x: f64, r: f64) -> f64 {
    let t = 1.0 - x;
    (r * x) * t
}

/// Iterator over the post-burn-in states of a trajectory.
///
/// Yields `Err(DegenerateStream)` once, then stops, if any burned or
/// emitted iterate is exactly 0 or 1.
#[derive(Debug, Clone)]
pub struct LogisticMap {
    r: f64,
    state: f64,
    index: u64,
    failed: Option<ChaosError>,
    done: bool,
}

impl LogisticMap {
    pub fn new(params: &LogisticParams) -> Self {
        let mut map = Self {
            r: params.r,
            state: params.x0,
            index: 0,
            failed: None,
            done: false,
        };
        for _ in 0..params.burn_in {
            if let Err(e) = map.advance() {
                map.failed = Some(e);
                break;
            }
        }
        map
    }

    fn advance(&mut self) -> Result<f64, ChaosError> {
        self.state = logistic_step(self.state, self.r);
        self.index += 1;
        if self.state == 0.0 || self.state == 1.0 {
            return Err(ChaosError::DegenerateStream {
                index: self.index,
                value: self.state,
            });
        }
        Ok(self.state)
    }

    /// Number of map iterations performed so far, burn-in included.
    pub fn iterations(&self) -> u64 {
        self.index
    }
}

impl Iterator for LogisticMap {
    type Item = Result<f64, ChaosError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = match self.failed.take() {
            Some(e) => Err(e),
            None => self.advance(),
        };
        self.done = item.is_err();
        Some(item)
    }
}

/// The `n` states that follow the burn-in.
pub fn stream(params: &LogisticParams, n: usize) -> Result<Vec<f64>, ChaosError> {
    LogisticMap::new(params).take(n).collect()
}

/// Mean of `ln|r·(1 − 2x)|` over the `n` post-burn-in states: an estimate
/// of the trajectory's Lyapunov exponent. Negative values mean the orbit
/// has settled on a stable cycle (a periodic window of the map).
pub fn lyapunov_estimate(params: &LogisticParams, n: usize) -> Result<f64, ChaosError> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for x in LogisticMap::new(params).take(n) {
        sum += (params.r * (1.0 - 2.0 * x?)).abs().ln();
        count += 1;
    }
    Ok(if count == 0 { 0.0 } else { sum / count as f64 })
}

/// Maps a state in (0, 1) to an S-box index in {0, 1, 2}.
#[inline]
pub fn quantize_selector(x: f64) -> u8 {
    ((x * 3.0).floor() as u8).min(2)
}

/// Maps a state in (0, 1) to a keystream byte.
#[inline]
pub fn quantize_byte(x: f64) -> u8 {
    (x * 256.0).floor().min(255.0) as u8
}

/// The secret key: three independent logistic trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CipherKey {
    /// Chooses among the three S-boxes per pixel.
    pub selector: LogisticParams,
    /// Drives the Fisher–Yates shuffle of the nucleotide sequence.
    pub shuffle: LogisticParams,
    /// Produces the XOR keystream.
    pub xor: LogisticParams,
}

const KEY_FIELDS: [&str; 7] = [
    "selector_r",
    "selector_x0",
    "shuffle_r",
    "shuffle_x0",
    "xor_r",
    "xor_x0",
    "burn_in",
];

impl CipherKey {
    pub fn new(selector: LogisticParams, shuffle: LogisticParams, xor: LogisticParams) -> Self {
        Self {
            selector,
            shuffle,
            xor,
        }
    }

    pub fn validate(&self) -> Result<(), ChaosError> {
        self.selector.validate("selector")?;
        self.shuffle.validate("shuffle")?;
        self.xor.validate("xor")
    }

    /// Canonical key-file text. Floats use the shortest representation
    /// that parses back to the same bits.
    ///
    /// The file format carries a single burn-in, so keys whose streams
    /// use different burn-in counts cannot be written.
    pub fn to_key_text(&self) -> Result<String, ChaosError> {
        let burn_in = self.selector.burn_in;
        if self.shuffle.burn_in != burn_in || self.xor.burn_in != burn_in {
            return Err(ChaosError::invalid(
                "burn_in",
                "streams use different burn-in counts; the key file stores one",
            ));
        }
        let mut out = String::new();
        for (name, p) in [
            ("selector", &self.selector),
            ("shuffle", &self.shuffle),
            ("xor", &self.xor),
        ] {
            let _ = writeln!(out, "{name}_r={:?}", p.r);
            let _ = writeln!(out, "{name}_x0={:?}", p.x0);
        }
        let _ = writeln!(out, "burn_in={burn_in}");
        Ok(out)
    }

    /// Parses key-file text. `burn_in` may be omitted and then defaults
    /// to [`DEFAULT_BURN_IN`]; every other field is required. Blank lines
    /// are ignored. The parsed key is validated.
    pub fn parse_key_text(text: &str) -> Result<Self, ChaosError> {
        let mut values: [Option<&str>; 7] = [None; 7];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let (name, value) = line.split_once('=').ok_or_else(|| {
                ChaosError::invalid(format!("line {}", lineno + 1), "expected name=value")
            })?;
            let name = name.trim();
            let slot = KEY_FIELDS
                .iter()
                .position(|f| *f == name)
                .ok_or_else(|| ChaosError::invalid(name, "unknown key field"))?;
            if values[slot].replace(value.trim()).is_some() {
                return Err(ChaosError::invalid(name, "duplicate key field"));
            }
        }

        let float = |slot: usize| -> Result<f64, ChaosError> {
            let name = KEY_FIELDS[slot];
            let v = values[slot].ok_or_else(|| ChaosError::invalid(name, "missing"))?;
            v.parse::<f64>()
                .map_err(|_| ChaosError::invalid(name, format!("{v:?} is not a decimal number")))
        };
        let burn_in = match values[6] {
            None => DEFAULT_BURN_IN,
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| ChaosError::invalid("burn_in", format!("{v:?} is not an integer")))?,
        };
        let key = CipherKey {
            selector: LogisticParams::new(float(0)?, float(1)?).with_burn_in(burn_in),
            shuffle: LogisticParams::new(float(2)?, float(3)?).with_burn_in(burn_in),
            xor: LogisticParams::new(float(4)?, float(5)?).with_burn_in(burn_in),
        };
        key.validate()?;
        Ok(key)
    }
}

impl FromStr for CipherKey {
    type Err = ChaosError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_key_text(s)
    }
}

impl fmt::Display for CipherKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_key_text() {
            Ok(text) => f.write_str(&text),
            Err(_) => write!(f, "{self:?}"),
        }
    }
}

/// Validates all three trajectories of `key`.
pub fn validate_key(key: &CipherKey) -> Result<(), ChaosError> {
    key.validate()
}
