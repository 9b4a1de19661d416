// SPDX-License-Identifier: Apache-2.0

//! `pseudoprob` command-line front end. Reports go to standard output (or
//! `--out`), diagnostics to standard error. Validation errors exit with 2.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] pseudoprob::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("malformed input {0}: {1}")]
    Input(String, String),
    #[error("cannot write output: {0}")]
    Output(String),
}

#[derive(Debug, Parser)]
#[command(name = "pseudoprob", version, about = "Pseudoprobability tests of nonlocality and entanglement")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every randomized search
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Multistart restarts per search
    #[arg(long, global = true, default_value_t = 64)]
    restarts: usize,
    /// Worker thread cap
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// ghz3, ghzN:<n>, w3 or file:<path>
    #[arg(long, default_value = "ghz3")]
    state: String,
    /// Visibility of the state against white noise
    #[arg(long, default_value_t = 1.0)]
    p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct AlphaArgs {
    /// Doublet opening angle in radians
    #[arg(long, conflicts_with = "alpha_max")]
    alpha: Option<f64>,
    /// Use the largest safe opening angle
    #[arg(long)]
    alpha_max: bool,
    /// Permit angles beyond the safe range (flagged in the report)
    #[arg(long)]
    unsafe_alpha: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value of a witness, polynomial or event expression on a state
    Eval {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, group = "target")]
        witness: Option<String>,
        /// svetlichny, mermin or dda
        #[arg(long, group = "target")]
        poly: Option<String>,
        /// Event expression, e.g. "E(~A1=A1'=A2; A3)"
        #[arg(long, group = "target")]
        event: Option<String>,
        #[command(flatten)]
        alpha: AlphaArgs,
        /// Direction file (witness config, observable pairs or settings)
        #[arg(long)]
        dirs: Option<PathBuf>,
        /// Search directions for the strongest violation
        #[arg(long)]
        optimize: bool,
    },
    /// Classical bound by enumeration of deterministic strategies
    Lhv {
        /// svetlichny, mermin, dda or an event expression
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Dense matrix of a linear witness operator
    Witness {
        #[arg(long)]
        witness: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long)]
        dirs: Option<PathBuf>,
    },
    /// White-noise detection thresholds or curves
    Scan {
        /// Comma-separated inequality names, or "all"
        #[arg(long, default_value = "all")]
        inequality: String,
        #[arg(long, default_value = "ghz3")]
        state: String,
        #[arg(long, default_value_t = 1e-4)]
        p_tol: f64,
        /// Comma-separated visibilities; emits curves instead of thresholds
        #[arg(long)]
        grid: Option<String>,
    },
    /// Nonnegative pseudoprojection expansion of a Hermitian matrix
    Expand {
        /// JSON matrix of [re, im] pairs
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
    },
    /// Pseudoprobability scheme and its negative entries
    Pps {
        #[command(flatten)]
        state: StateArgs,
        /// Per-qubit direction lists; defaults to (z, x) on every qubit
        #[arg(long)]
        dirs: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.common.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let common = &cli.common;
    if common.format == Format::Csv && !matches!(cli.command, Command::Scan { grid: None, .. }) {
        return Err(CliError::Usage("csv output is available for threshold scans only".into()));
    }
    let report = match cli.command {
        Command::Eval {
            state,
            witness,
            poly,
            event,
            alpha,
            dirs,
            optimize,
        } => {
            let rho = commands::noisy_state(&state)?;
            match (witness, poly, event) {
                (Some(w), _, _) => commands::eval_witness(common, &rho, &w, &alpha, dirs.as_deref(), optimize)?,
                (_, Some(p), _) => commands::eval_poly(common, &rho, &p, dirs.as_deref(), optimize)?,
                (_, _, Some(e)) => commands::eval_event(&rho, &e, dirs.as_deref())?,
                _ => return Err(CliError::Usage("eval needs --witness, --poly or --event".into())),
            }
        }
        Command::Lhv { expr, n } => commands::lhv(&expr, n)?,
        Command::Witness { witness, n, alpha, dirs } => {
            commands::witness_matrix(&witness, n, &alpha, dirs.as_deref())?
        }
        Command::Scan {
            inequality,
            state,
            p_tol,
            grid,
        } => commands::scan(common, &inequality, &state, p_tol, grid.as_deref())?,
        Command::Expand { input, theta } => commands::expand(&input, theta)?,
        Command::Pps { state, dirs, eps } => commands::pps(&state, dirs.as_deref(), eps)?,
    };
    match &common.out {
        Some(path) => std::fs::write(path, &report).map_err(|e| CliError::Output(e.to_string())),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&report)
                .map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
