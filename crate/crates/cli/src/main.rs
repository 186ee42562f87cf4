mod commands;
mod io;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use phasespace::{Error, LogBase, Ordering};

/// Gaussian phase-space calculations from the command line.
#[derive(Debug, Parser)]
#[command(name = "phasespace", version, about)]
struct Cli {
    /// Write the primary output to this file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Print diagnostics (residuals, warnings) to standard error
    #[arg(long, short, global = true)]
    verbose: bool,

    /// Also print a JSON summary (Wigner grids)
    #[arg(long, global = true)]
    summary: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and write Gaussian states
    State {
        #[command(subcommand)]
        action: StateAction,
    },
    /// Evolve a state under a quadratic Hamiltonian
    Evolve(EvolveArgs),
    /// Williamson decomposition of a state's covariance matrix
    Williamson {
        /// State file (JSON)
        state: PathBuf,
    },
    /// Von Neumann or entanglement entropy
    Entropy(EntropyArgs),
    /// Sample a single-mode Wigner function on a grid (CSV)
    Wigner(WignerArgs),
    /// Ground state of two harmonic oscillators coupled by λ(q₁ - q₂)²
    CoupledExample(CoupledArgs),
}

#[derive(Debug, Subcommand)]
enum StateAction {
    /// Construct a state and write it as JSON
    Make(MakeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum StateKind {
    Vacuum,
    Thermal,
    Coherent,
    Squeezed,
    Tmsv,
}

#[derive(Debug, Args)]
struct MakeArgs {
    kind: StateKind,
    /// Number of modes (vacuum)
    #[arg(long, default_value_t = 1)]
    modes: usize,
    /// Symplectic eigenvalue ν = 2n̄ + 1 (thermal)
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    /// Complex amplitude per mode, e.g. 1+0.5i (coherent; repeat for more modes)
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Vec<Complex64>,
    /// Squeezing strength (squeezed, tmsv)
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Squeezing phase (squeezed, tmsv)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    /// Quadrature ordering of the written file
    #[arg(long, default_value = "qpqp", value_parser = parse_ordering)]
    ordering: Ordering,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("generator").required(true).args(["hamiltonian", "squeeze", "tms", "rotate"])))]
struct EvolveArgs {
    /// State file (JSON)
    state: PathBuf,
    /// Hamiltonian file with `f_bar`, optional `alpha` and `ordering`
    #[arg(long, value_name = "PATH")]
    hamiltonian: Option<PathBuf>,
    /// Single-mode squeezer of strength R
    #[arg(long, value_name = "R", allow_hyphen_values = true)]
    squeeze: Option<f64>,
    /// Two-mode squeezer of strength R
    #[arg(long, value_name = "R", allow_hyphen_values = true)]
    tms: Option<f64>,
    /// Free rotation at frequency OMEGA on every mode
    #[arg(long, value_name = "OMEGA", allow_hyphen_values = true)]
    rotate: Option<f64>,
    /// Phase of the built-in squeezers
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    /// Modes the built-in squeezer acts on (default 0, or 0,1 for --tms)
    #[arg(long = "on", value_delimiter = ',', value_name = "MODES")]
    on: Vec<usize>,
    /// Evolution time
    #[arg(long, short, default_value_t = 1.0, allow_hyphen_values = true)]
    time: f64,
}

#[derive(Debug, Args)]
struct EntropyArgs {
    /// State file (JSON)
    state: PathBuf,
    /// Modes of the subsystem, e.g. 0 or 0,2; the global state must be pure
    #[arg(long, value_delimiter = ',')]
    subsystem: Option<Vec<usize>>,
    /// Logarithm base: e or 2
    #[arg(long, default_value = "e", value_parser = parse_base)]
    base: LogBase,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["state", "fock", "coherent"])))]
struct WignerArgs {
    /// State file (JSON)
    state: Option<PathBuf>,
    /// Fock state |n⟩
    #[arg(long, value_name = "N")]
    fock: Option<usize>,
    /// Coherent state amplitude, e.g. 1+1i
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    coherent: Option<Complex64>,
    /// Mode to keep when the state file has several
    #[arg(long)]
    mode: Option<usize>,
    /// q range as MIN,MAX
    #[arg(long, default_value = "-6,6", value_parser = parse_range, allow_hyphen_values = true)]
    qrange: (f64, f64),
    /// p range as MIN,MAX
    #[arg(long, default_value = "-6,6", value_parser = parse_range, allow_hyphen_values = true)]
    prange: (f64, f64),
    #[arg(long, default_value_t = 201)]
    nq: usize,
    #[arg(long, default_value_t = 201)]
    np: usize,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

#[derive(Debug, Args)]
struct CoupledArgs {
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// Logarithm base: e or 2
    #[arg(long, default_value = "e", value_parser = parse_base)]
    base: LogBase,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|_| format!("cannot parse {s:?} as a complex number like 1+0.5i"))
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected MIN,MAX, got {s:?}"));
    }
    let lo = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("{:?}: {e}", parts[0]))?;
    let hi = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("{:?}: {e}", parts[1]))?;
    Ok((lo, hi))
}

fn parse_ordering(s: &str) -> Result<Ordering, String> {
    match s {
        "qpqp" => Ok(Ordering::Pairwise),
        "qqpp" => Ok(Ordering::Blockwise),
        _ => Err(format!("expected qpqp or qqpp, got {s:?}")),
    }
}

fn parse_base(s: &str) -> Result<LogBase, String> {
    s.parse::<LogBase>().map_err(|e| e.to_string())
}

/// Exit codes: 2 usage or parse, 3 unphysical or numeric, 4 failed precondition.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::numeric(message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidDimension(_)
            | Error::InvalidInput(_)
            | Error::OrderingMismatch(_)
            | Error::Index(_)
            | Error::GridMismatch(_) => 2,
            Error::NotPure { .. } => 4,
            _ => 3,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub struct Globals {
    pub out: Option<PathBuf>,
    pub verbose: bool,
    pub summary: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let globals = Globals {
        out: cli.out,
        verbose: cli.verbose,
        summary: cli.summary,
    };
    let result = match cli.command {
        Command::State {
            action: StateAction::Make(args),
        } => commands::state_make(&globals, &args),
        Command::Evolve(args) => commands::evolve(&globals, &args),
        Command::Williamson { state } => commands::williamson(&globals, &state),
        Command::Entropy(args) => commands::entropy(&globals, &args),
        Command::Wigner(args) => commands::wigner(&globals, &args),
        Command::CoupledExample(args) => commands::coupled_example(&globals, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
