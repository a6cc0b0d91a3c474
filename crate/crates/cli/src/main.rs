use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
mod parse;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hypercheb::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0} case(s) outside tolerance")]
    Verification(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Verification(_) => 1,
            Self::Usage(_) | Self::Io(_) | Self::Core(hypercheb::Error::UnknownSuite(_)) => 2,
            Self::Core(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hypercheb", version, about = "Hyperbolic functions of order m, m-Tchebysheff polynomials and companion recurrences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the identity-verification suites.
    Verify(VerifyArgs),
    /// Tchebysheff values, exact expansion coefficients, stream tables.
    Cheb(ChebArgs),
    /// Generating functions of the m = 3 streams.
    Genfun(GenfunArgs),
    /// Hyperbolon invariant, point clouds, quartic reconciliation.
    Surface(SurfaceArgs),
    /// Root functions V, U, W and their de Moivre identifications.
    Lucas(LucasArgs),
    /// Companion-matrix orbits, powers and closed forms.
    Companion(CompanionArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `all` or a comma-separated list of suite names.
    #[arg(long, default_value = "all")]
    pub suites: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "HYPERCHEB_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ChebArgs {
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// Expansion kind 0, 1 or 2 (m = 3).
    #[arg(long, default_value_t = 0)]
    pub kind: u8,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// `0` for the main stream, `s >= 1` for the index `n + ω^s`.
    #[arg(long, default_value_t = 0)]
    pub stream: usize,
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub alpha: String,
    /// Print the exact expansion polynomial.
    #[arg(long, group = "mode")]
    pub coeffs: bool,
    /// CSV of every stream for indices 0..=n.
    #[arg(long, group = "mode")]
    pub table: bool,
    /// Generating function of `--stream`.
    #[arg(long, group = "mode")]
    pub genfun: bool,
    #[arg(long, default_value_t = 12)]
    pub terms: usize,
}

#[derive(Debug, Args)]
pub struct GenfunArgs {
    #[arg(long, default_value_t = 0)]
    pub stream: usize,
    #[arg(long, default_value_t = 12)]
    pub terms: usize,
    /// Substitute the constrained variables at this angle.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// The invariant polynomial (default).
    #[arg(long, group = "mode")]
    pub poly: bool,
    /// JSON point cloud over a square grid of complex angles.
    #[arg(long, group = "mode")]
    pub points: bool,
    /// Compare the exact quartic with the reference form (m = 4).
    #[arg(long, group = "mode")]
    pub reconcile: bool,
    #[arg(long, default_value_t = 11)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct LucasArgs {
    /// `a,b,c` (or `a,b`) reals, or `re,im;re,im;re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub roots: String,
    /// V, U, W or all.
    #[arg(long, default_value = "all")]
    pub which: String,
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    /// Identification with the de Moivre group at index n.
    #[arg(long)]
    pub identify: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompanionArgs {
    /// `α_0,...,α_{m-1}` of `F_{n+m} = Σ α_k F_{n+k}`.
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: Option<String>,
    /// `F_0,...,F_{m-1}`.
    #[arg(long, allow_hyphen_values = true)]
    pub seeds: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    /// Exact rational arithmetic (default).
    #[arg(long, conflicts_with = "float")]
    pub exact: bool,
    /// Complex floating point; lists use `re,im;re,im` for complex entries.
    #[arg(long)]
    pub float: bool,
    /// CSV of F_0..=F_n (default).
    #[arg(long, group = "mode")]
    pub orbit: bool,
    /// JSON of A^k.
    #[arg(long, group = "mode", value_name = "K")]
    pub matrix_power: Option<u64>,
    /// JSON of the closed-form index-shift search (m = 2, 3, exact).
    #[arg(long, group = "mode")]
    pub closed_form: bool,
    /// Use the Tchebysheff generator of order 2 or 3 at `--alpha` (float).
    #[arg(long, value_name = "M")]
    pub chebyshev: Option<usize>,
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub alpha: String,
}

fn emit(doc: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    let mut text = doc.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli.out.as_ref();
    match cli.command {
        Command::Verify(a) => {
            let (doc, failures) = commands::verify(&a)?;
            emit(&doc, out)?;
            if failures > 0 {
                return Err(CliError::Verification(failures));
            }
            Ok(())
        }
        Command::Cheb(a) => emit(&commands::cheb(&a)?, out),
        Command::Genfun(a) => emit(&commands::genfun(&a)?, out),
        Command::Surface(a) => emit(&commands::surface(&a)?, out),
        Command::Lucas(a) => emit(&commands::lucas(&a)?, out),
        Command::Companion(a) => emit(&commands::companion(&a)?, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hypercheb: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
