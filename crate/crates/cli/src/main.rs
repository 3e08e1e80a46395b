//! `gaussclone`: design, synthesize, verify and simulate optimal asymmetric
//! Gaussian cloners of coherent states.
//!
//! Exit codes: 0 on success, 2 on invalid input or a violated
//! precondition, 3 when a verification or certification runs and fails.
//! `GAUSSCLONE_TOL` overrides the default algebraic tolerance (1e-10).

mod commands;
mod documents;
mod error;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gaussclone::Tolerances;
use num_complex::Complex;

use crate::commands::{DesignArgs, SimulateArgs};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gaussclone", version, about = "Optimal asymmetric Gaussian cloning of coherent states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scheme {
    Amplifier,
    Feedforward,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal noise profile from cost weights, or the symmetric cloner.
    Design {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "symmetric")]
        weights: Option<Vec<f64>>,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        n_in: usize,
        #[arg(long)]
        m_out: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Noise of the last clone given the others.
    Solve {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        noises: Vec<f64>,
        #[arg(long)]
        n_in: usize,
        #[arg(long)]
        m_out: usize,
    },
    /// Circuit parameters for a design.
    Synth {
        #[arg(long)]
        design: PathBuf,
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a circuit document against the optimal channel.
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and check the optimality certificate of a design.
    Certify {
        #[arg(long)]
        design: PathBuf,
        /// Random feasible channels compared against the dual bound.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shot-level Monte Carlo of the feedforward scheme.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        /// Input amplitude as `re,im`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, default_value = "1,0")]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        shards: usize,
        /// Per-shot samples (CSV).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary statistics (JSON); always printed to stdout as well.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Copy/estimate fidelity trade-off curve as CSV.
    Tradeoff {
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn tolerances() -> Result<Tolerances<f64>, CliError> {
    let default = Tolerances::default();
    match std::env::var("GAUSSCLONE_TOL") {
        Err(_) => Ok(default),
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(default.with_algebraic(v)),
            _ => Err(CliError::Input(format!("GAUSSCLONE_TOL must be a positive number, got '{raw}'"))),
        },
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = tolerances()?;
    match cli.command {
        Command::Design { weights, symmetric, n_in, m_out, out } => {
            commands::design(DesignArgs { weights, symmetric, n_in, m_out, out })
        }
        Command::Solve { noises, n_in, m_out } => commands::solve(&noises, n_in, m_out),
        Command::Synth { design, scheme, out } => {
            let name = match scheme {
                Scheme::Amplifier => "amplifier",
                Scheme::Feedforward => "feedforward",
            };
            commands::synth(&design, name, out.as_deref(), &tol)
        }
        Command::Verify { circuit, out } => commands::verify(&circuit, out.as_deref(), &tol),
        Command::Certify { design, trials, seed, out } => commands::certify(&design, trials, seed, out.as_deref(), &tol),
        Command::Simulate { circuit, alpha, shots, seed, shards, out, summary } => {
            let [re, im] = alpha[..] else {
                return Err(CliError::Input(format!("--alpha needs two values re,im, got {}", alpha.len())));
            };
            commands::simulate(
                SimulateArgs { circuit, alpha: Complex::new(re, im), shots, seed, shards, out, summary },
                &tol,
            )
        }
        Command::Tradeoff { points, out } => commands::tradeoff(points, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
