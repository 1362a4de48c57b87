//! Command-line surface for the pull-back tensor library.
//!
//! Subcommands: `tensor`, `measures`, `schmidt`, `sweep`, `verify`.
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 I/O error.

#![forbid(unsafe_code)]

pub mod ops;
pub mod state;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use state::{LoadedState, StateSource};

/// Error carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input: unparsable state, bad flag combination, dimension
    /// mismatch. Exit code 2.
    Input(String),
    /// Verification failure in `verify`. Exit code 1.
    VerifyFailed(String),
    /// Filesystem failure. Exit code 3.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::VerifyFailed(m) | CliError::Io(m) => m,
        }
    }
}

impl From<qpullback::Error> for CliError {
    fn from(e: qpullback::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "qpullback",
    about = "Riemannian and pre-symplectic tensors on local-unitary orbits of bipartite states",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Local dimensions d1 d2 of the bipartite split (default 2 2)
    #[arg(long, global = true, num_args = 2, value_names = ["D1", "D2"])]
    pub dims: Option<Vec<usize>>,

    /// Absolute tolerance for the verification checks
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Seed for the `random` preset
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write output here instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<std::path::PathBuf>,

    /// Output format (tensor and schmidt are JSON-only; sweep defaults to CSV)
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Interpret angles on the command line as degrees instead of radians
    #[arg(long, global = true)]
    pub degrees: bool,
}

#[derive(Debug, Args, Clone)]
pub struct StateArgs {
    /// Preset state: product | bell | schmidt:<alpha0> | random[:<seed>]
    #[arg(long, group = "state")]
    pub preset: Option<String>,

    /// Inline JSON state document
    #[arg(long, group = "state", value_name = "JSON")]
    pub json: Option<String>,

    /// Path to a JSON state document
    #[arg(long, group = "state", value_name = "PATH")]
    pub file: Option<std::path::PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pull-back tensor coefficients, their split, blocks, and spectrum
    Tensor(StateArgs),
    /// Scalar entanglement measures of a pure state
    Measures(StateArgs),
    /// Schmidt coefficients, rank, and angle of a pure state
    Schmidt(StateArgs),
    /// Sample the monotone curve over an angle interval
    Sweep {
        /// Interval start (radians unless --degrees)
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        /// Interval stop (radians unless --degrees)
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        stop: f64,
        /// Number of grid points (>= 2)
        #[arg(long, default_value_t = 65)]
        steps: usize,
    },
    /// Run the structural invariant checks against a pure state
    Verify(StateArgs),
}

/// Parses global dims into a validated pair.
fn parse_dims(cli: &Cli) -> Result<Option<(usize, usize)>, CliError> {
    match &cli.dims {
        None => Ok(None),
        Some(v) if v.len() == 2 && v[0] >= 1 && v[1] >= 1 => Ok(Some((v[0], v[1]))),
        Some(v) => Err(CliError::Input(format!("invalid --dims {v:?}"))),
    }
}

fn angle_to_radians(value: f64, degrees: bool) -> f64 {
    if degrees {
        value.to_radians()
    } else {
        value
    }
}

/// Runs a parsed command line, returning the rendered output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let dims_flag = parse_dims(cli)?;
    let format = cli.format;
    match &cli.command {
        Command::Tensor(args) => {
            let state = state::load(args, dims_flag, cli.seed, cli.degrees)?;
            require_json(format, "tensor")?;
            ops::run_tensor(&state)
        }
        Command::Measures(args) => {
            let state = state::load(args, dims_flag, cli.seed, cli.degrees)?;
            ops::run_measures(&state, format.unwrap_or(OutputFormat::Json))
        }
        Command::Schmidt(args) => {
            let state = state::load(args, dims_flag, cli.seed, cli.degrees)?;
            require_json(format, "schmidt")?;
            ops::run_schmidt(&state)
        }
        Command::Sweep { start, stop, steps } => {
            let start = angle_to_radians(*start, cli.degrees);
            let stop = angle_to_radians(*stop, cli.degrees);
            if let Some(dims) = dims_flag {
                if dims != (2, 2) {
                    return Err(CliError::Input(
                        "sweep is defined for the two-qubit Schmidt family (--dims 2 2)".into(),
                    ));
                }
            }
            ops::run_sweep(start, stop, *steps, format.unwrap_or(OutputFormat::Csv))
        }
        Command::Verify(args) => {
            let state = state::load(args, dims_flag, cli.seed, cli.degrees)?;
            ops::run_verify(&state, cli.tol)
        }
    }
}

fn require_json(format: Option<OutputFormat>, command: &str) -> Result<(), CliError> {
    if format == Some(OutputFormat::Csv) {
        return Err(CliError::Input(format!(
            "{command} output is a nested document; CSV is not supported here"
        )));
    }
    Ok(())
}

/// Writes the rendered output to the requested sink.
pub fn write_output(cli: &Cli, rendered: &str) -> Result<(), CliError> {
    match &cli.output {
        None => {
            print!("{rendered}");
            Ok(())
        }
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
    }
}
