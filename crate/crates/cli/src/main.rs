//! Command-line driver for exact reductions of states supported on finitely
//! many Gaussian branches: overlaps, Gram conditioning, effective density
//! matrices, entropies, non-Gaussianity, negativity, CSV sweeps, and oracle
//! cross-checks against a truncated Fock basis.

mod commands;
mod spec;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Process-level failure, mapped onto the documented exit codes:
/// 2 parse/input, 3 near-dependence, 4 unphysical input, 5 verification.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    NearDependence(String),
    Unphysical(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::NearDependence(_) => 3,
            CliError::Unphysical(_) => 4,
            CliError::Verification(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::NearDependence(m)
            | CliError::Unphysical(m)
            | CliError::Verification(m) => m,
        }
    }
}

impl From<multiplet::Error> for CliError {
    fn from(e: multiplet::Error) -> Self {
        match e {
            multiplet::Error::NearDependence { .. } => CliError::NearDependence(e.to_string()),
            _ => CliError::Unphysical(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// 15 significant digits, sign always shown; the scalar-output format.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:+.14e}")
}

#[derive(Parser)]
#[command(
    name = "multiplet",
    version,
    about = "Exact reduction of bosonic states supported on Gaussian branches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pairwise branch overlaps ⟨g_i|g_j⟩ from a state file
    Overlap(commands::OverlapArgs),
    /// Gram matrix, rank, and conditioning of the branch manifold
    Gram(commands::StateArgs),
    /// Effective density matrix on the orthonormalized branch support
    Reduce(commands::StateArgs),
    /// Entropy of the reduced state (von Neumann, or Rényi via --alpha)
    Entropy(commands::EntropyArgs),
    /// Relative-entropy non-Gaussianity of the reduced state
    Nongauss(commands::NongaussArgs),
    /// Entanglement negativity of a two-branch Bell family
    Negativity(commands::NegativityArgs),
    /// CSV sweep of non-Gaussianity over the coherent amplitude
    SweepNongauss(sweep::SweepNongaussArgs),
    /// CSV sweep of negativity over amplitude and squeezing
    SweepNegativity(sweep::SweepNegativityArgs),
    /// Cross-check closed forms against the truncated-Fock oracle
    Verify(verify::VerifyArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Overlap(args) => commands::overlap(&args),
        Command::Gram(args) => commands::gram(&args),
        Command::Reduce(args) => commands::reduce(&args),
        Command::Entropy(args) => commands::entropy(&args),
        Command::Nongauss(args) => commands::nongauss(&args),
        Command::Negativity(args) => commands::negativity(&args),
        Command::SweepNongauss(args) => sweep::sweep_nongauss(&args),
        Command::SweepNegativity(args) => sweep::sweep_negativity(&args),
        Command::Verify(args) => verify::verify(&args),
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`multiplet sweep-... | head`) like other
    // line-oriented tools instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
