//! The `bertrand-kit` command line.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | unreadable input, bad expression or bad flag |
//! | 3 | parameter outside the curve domain, or a function outside its domain |
//! | 4 | singular point (use `--mask` where offered), or a numerical failure |
//! | 5 | degenerate ratio (helical or planar input) |
//! | 6 | the two curves are not a Bertrand pair |
//! | 7 | an identity check of `verify` failed |
//! | 8 | unusable sphere curve for `generate` |

mod commands;

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::error::Error;
use crate::indicatrix::IndicatrixKind;
use crate::jet::JetError;
use crate::expr::ExprError;

pub const THREADS_ENV: &str = "BERTRAND_KIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "bertrand-kit", version, about = "Frenet apparatus, Bertrand pairs and spherical indicatrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frenet frame, curvature, torsion and their derivatives.
    Frenet(FrenetArgs),
    /// Offset a curve along its principal normal.
    Mate(MateArgs),
    /// Closed-form apparatus of one spherical indicatrix against the sampled one.
    Indicatrix(IndicatrixArgs),
    /// Run the theorem suite over a Bertrand pair.
    Verify(VerifyArgs),
    /// Build a Bertrand curve from a curve on the unit sphere.
    Generate(GenerateArgs),
    /// Classify one curve, or a pair of curves.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("where").required(true).args(["at", "grid"])))]
pub struct FrenetArgs {
    pub curve: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub at: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Highest derivative of curvature reported (0, 1 or 2).
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub order: u8,
    /// Skip singular points instead of failing.
    #[arg(long)]
    pub mask: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("offset").required(true).args(["lambda", "auto"])))]
pub struct MateArgs {
    pub curve: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Take λ from the ratio invariants of the curve.
    #[arg(long)]
    pub auto: bool,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Write the mate as this many samples instead of an exact offset curve.
    #[arg(long)]
    pub sampled: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IndicatrixArgs {
    pub base: PathBuf,
    pub mate: PathBuf,
    /// One of t-base, n-base, b-base, t-mate, n-mate, b-mate.
    #[arg(long, value_parser = parse_kind)]
    pub kind: IndicatrixKind,
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Also write the sampled indicatrix as a curve file.
    #[arg(long)]
    pub curve_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub base: PathBuf,
    pub mate: PathBuf,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Tolerance override as `id=value`, repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Relative tolerance for accepting the pair before the suite runs.
    #[arg(long, default_value_t = 1e-2)]
    pub screen: f64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Preset name or curve file.
    #[arg(long)]
    pub sphere_curve: String,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = PI / 3.0)]
    pub omega: f64,
    #[arg(long, default_value_t = crate::bertrand::DEFAULT_SAMPLES)]
    pub n: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(num_args = 1..=2, required = true)]
    pub curves: Vec<PathBuf>,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Match pair points by normalized arc length instead of parameter.
    #[arg(long)]
    pub align: bool,
}

fn parse_kind(s: &str) -> Result<IndicatrixKind, String> {
    IndicatrixKind::parse(s).ok_or_else(|| format!("unknown indicatrix kind '{s}'"))
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (id, v) = s.split_once('=').ok_or("expected id=value")?;
    let v: f64 = v.parse().map_err(|e| format!("{e}"))?;
    if !(v > 0.0) {
        return Err("tolerance must be positive".into());
    }
    Ok((id.to_string(), v))
}

/// An error with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Expr(ExprError::Jet(JetError::Domain(_))) | Error::Jet(JetError::Domain(_)) | Error::OutOfDomain { .. } => 3,
        Error::Expr(_) | Error::InvalidCurve(_) | Error::GridMismatch(_) | Error::TooFewSamples { .. } => 2,
        Error::SingularPoint { .. } | Error::NonConvergent { .. } | Error::IllConditioned(_) | Error::Jet(_) => 4,
        Error::DegenerateRatio(_) => 5,
        Error::NotAPair { .. } => 6,
        Error::NotSpherical(_) | Error::DegenerateSphereCurve(_) => 8,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::new(exit_code(&e), e.to_string())
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::new(2, format!("{THREADS_ENV} must be an integer >= 1, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::new(2, e.to_string()))
}

/// What a successful run prints, and the exit code. `verify` reports
/// identity failures through a nonzero code with full output on stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: i32,
}

impl Output {
    pub fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: None,
            code: 0,
        }
    }
}

/// Runs a parsed command.
pub fn run(cli: Cli) -> Result<Output, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Frenet(a) => commands::frenet(a),
        Command::Mate(a) => commands::mate(a),
        Command::Indicatrix(a) => commands::indicatrix(a),
        Command::Verify(a) => commands::verify(a),
        Command::Generate(a) => commands::generate(a),
        Command::Classify(a) => commands::classify(a),
    }
}

/// Entry point of the binary; returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if let Some(msg) = out.stderr {
                eprintln!("{msg}");
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
