//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 invalid or degenerate key,
//! 4 I/O or file-format error. Diagnostics go to stderr, one line each.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::chaos::{ChaosError, CipherKey};
use crate::cipher::{self, CipherError};
use crate::imagegrid::{self, PixelGrid};
use crate::metrics::{Correlation, Direction, MetricsReport};
use crate::sbox::SBoxSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_KEY: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "snakedna",
    version,
    about = "Snake-permutation / DNA / chaotic S-box grayscale image cipher"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt a binary PGM image
    Encrypt(CipherArgs),
    /// Decrypt a binary PGM image
    Decrypt(CipherArgs),
    /// Print or write the statistical report for an image
    Analyze(AnalyzeArgs),
    /// Write a fresh key file
    Keygen(KeygenArgs),
}

#[derive(Debug, Args)]
pub struct CipherArgs {
    #[arg(long = "in", value_name = "PGM")]
    pub input: PathBuf,
    #[arg(long = "out", value_name = "PGM")]
    pub output: PathBuf,
    #[arg(long, value_name = "KEYFILE")]
    pub key: PathBuf,
    /// Replace the default S-boxes with three tables read from this file
    #[arg(long, value_name = "FILE")]
    pub sbox: Option<PathBuf>,
    /// Debug only, leaks structure: write the shuffled nucleotide
    /// sequence to `<out>.dna.txt`
    #[arg(long)]
    pub dump_dna: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in", value_name = "PGM")]
    pub input: PathBuf,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "JSON")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[arg(long = "out", value_name = "KEYFILE")]
    pub output: PathBuf,
    /// Derive the key reproducibly from this text instead of OS entropy
    #[arg(long, value_name = "TEXT")]
    pub seed: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Key(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Key(_) => EXIT_KEY,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Key(m) | Failure::Io(m) => m,
        }
    }
}

impl From<CipherError> for Failure {
    fn from(e: CipherError) -> Self {
        match e {
            CipherError::Chaos(e) => Failure::Key(e.to_string()),
            other => Failure::Io(other.to_string()),
        }
    }
}

impl From<ChaosError> for Failure {
    fn from(e: ChaosError) -> Self {
        Failure::Key(e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

fn load_image(path: &Path, err: &mut dyn Write) -> Result<PixelGrid, Failure> {
    let bytes = read(path)?;
    let decoded = imagegrid::read_pgm_detailed(&bytes)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    if decoded.trailing_bytes > 0 {
        let _ = writeln!(
            err,
            "warning: {}: ignoring {} trailing bytes after the raster",
            path.display(),
            decoded.trailing_bytes
        );
    }
    Ok(decoded.grid)
}

fn load_key(path: &Path) -> Result<CipherKey, Failure> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::Key(format!("{}: key file is not UTF-8", path.display())))?;
    Ok(CipherKey::parse_key_text(&text)?)
}

fn load_sboxes(path: Option<&Path>) -> Result<SBoxSet, Failure> {
    let Some(path) = path else {
        return Ok(SBoxSet::default());
    };
    let bytes = read(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::Io(format!("{}: s-box file is not UTF-8", path.display())))?;
    SBoxSet::parse_text(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn dna_dump_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".dna.txt");
    PathBuf::from(name)
}

fn run_cipher(args: &CipherArgs, decrypting: bool, err: &mut dyn Write) -> Result<(), Failure> {
    if same_file(&args.input, &args.output) {
        return Err(Failure::Usage("--out must not overwrite --in".into()));
    }
    let key = load_key(&args.key)?;
    let boxes = load_sboxes(args.sbox.as_deref())?;
    let input = load_image(&args.input, err)?;

    let (output, dna) = if decrypting {
        let (plain, shuffled, _) = cipher::decrypt_stages(&input, &key, &boxes)?;
        (plain, shuffled)
    } else {
        let stages = cipher::encrypt_stages(&input, &key, &boxes)?;
        (stages.cipher, stages.shuffled)
    };
    write(&args.output, &imagegrid::write_pgm(&output))?;
    if args.dump_dna {
        let path = dna_dump_path(&args.output);
        let mut text = dna.to_text();
        text.push('\n');
        write(&path, text.as_bytes())?;
        let _ = writeln!(err, "warning: wrote debug DNA dump to {}", path.display());
    }
    let _ = writeln!(err, "key fingerprint {}", cipher::key_fingerprint(&key));
    Ok(())
}

fn run_analyze(args: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let grid = load_image(&args.input, err)?;
    let report = MetricsReport::analyze(&grid)
        .map_err(|e| Failure::Io(format!("{}: {e}", args.input.display())))?;
    for d in Direction::ALL {
        match report.correlation(d) {
            Correlation::ZeroVariance => {
                let _ = writeln!(err, "note: {d:?} correlation undefined: zero variance");
            }
            Correlation::InsufficientPairs => {
                let _ = writeln!(err, "note: {d:?} correlation undefined: too few pixels");
            }
            Correlation::Coefficient(_) => {}
        }
    }
    let mut json = report.to_json();
    json.push('\n');
    match &args.report {
        Some(path) => write(path, json.as_bytes()),
        None => out
            .write_all(json.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write report: {e}"))),
    }
}

fn run_keygen(args: &KeygenArgs) -> Result<(), Failure> {
    let key = cipher::keygen(args.seed.as_deref());
    write(&args.output, key.to_key_text()?.as_bytes())
}

/// Runs the tool with explicit output streams and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_USAGE
                    } else {
                        EXIT_OK
                    }
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };

    let result = match &config.command {
        Command::Encrypt(a) => run_cipher(a, false, err),
        Command::Decrypt(a) => run_cipher(a, true, err),
        Command::Analyze(a) => run_analyze(a, out, err),
        Command::Keygen(a) => run_keygen(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

/// Runs the tool against the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(
            std::iter::once("snakedna").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&[]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&["encrypt", "--in", "a.pgm", "--out", "b.pgm"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--key"));
        assert_eq!(run_capture(&["analyze"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["keygen"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_succeeds() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("encrypt"));
    }

    #[test]
    fn missing_input_is_io_error() {
        let (code, _, err) = run_capture(&["analyze", "--in", "/nonexistent/x.pgm"]);
        assert_eq!(code, EXIT_IO);
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn dump_path() {
        assert_eq!(dna_dump_path(Path::new("out/c.pgm")), PathBuf::from("out/c.pgm.dna.txt"));
    }
}
