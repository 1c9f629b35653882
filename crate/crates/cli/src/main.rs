//! Command-line driver: expansion inspection, gate counting, and the
//! error-scaling sweeps behind the library's figures, emitted as CSV with
//! `#` metadata headers.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod config;
mod methods;
mod runs;

use sze_core::SzeError;

#[derive(Parser)]
#[command(name = "sze", version, about = "Stochastic Zassenhaus expansion toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ModelArgs {
    /// Built-in model name (tfim)
    #[arg(long)]
    model: Option<String>,
    /// Number of qubits for the built-in model
    #[arg(long)]
    n: Option<usize>,
    /// Ising coupling J
    #[arg(long = "J")]
    coupling_j: Option<f64>,
    /// Transverse field h
    #[arg(long = "h")]
    field_h: Option<f64>,
    /// Load the Hamiltonian from a layered text file instead
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Key-value config file; explicit flags win over its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
struct SweepArgs {
    /// Methods, repeatable: pf:<p>, minpf:<p>, sze:<k>:<p>
    #[arg(long = "method")]
    methods: Vec<String>,
    /// Time grid, comma-separated
    #[arg(long = "t-values", value_delimiter = ',')]
    t_values: Vec<f64>,
    /// System sizes, comma-separated
    #[arg(long = "n-values", value_delimiter = ',')]
    n_values: Vec<usize>,
    /// Trotter steps per run
    #[arg(long)]
    r: Option<usize>,
    /// Stochastic factor handling: channel | sample | exact
    #[arg(long)]
    mode: Option<String>,
    /// RNG seed for sample mode
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print Zassenhaus exponents H_k of the model's layers, one block per order
    Expand {
        #[command(flatten)]
        model: ModelArgs,
        /// Highest order to extract
        #[arg(long)]
        order: Option<usize>,
    },
    /// Partition the model Hamiltonian into internally commuting parts
    Partition {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Build one time-step plan and print its factor list
    Plan {
        #[command(flatten)]
        model: ModelArgs,
        /// Method token (sze:k:p or pf:p)
        #[arg(long)]
        method: Option<String>,
        /// Nested Zassenhaus order k (with --p, shorthand for sze:k:p)
        #[arg(long)]
        k: Option<usize>,
        /// Stochastic cutoff order p
        #[arg(long)]
        p: Option<usize>,
    },
    /// Per-step gate counts for each method
    Count {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Trace-distance error vs evolution time
    SweepTime {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Trace-distance error vs system size at fixed t
    SweepSize {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Fixed evolution time
        #[arg(long)]
        t: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 2 for configuration problems, 3 for numeric-limit aborts.
fn exit_code(err: &SzeError) -> u8 {
    match err {
        SzeError::DenseLimit { .. } | SzeError::TermCap { .. } => 3,
        _ => 2,
    }
}

fn dispatch(cli: Cli) -> Result<(), SzeError> {
    match cli.command {
        Command::Expand { model, order } => runs::cmd_expand(model, order),
        Command::Partition { model } => runs::cmd_partition(model),
        Command::Plan { model, method, k, p } => runs::cmd_plan(model, method, k, p),
        Command::Count { model, sweep } => runs::cmd_count(model, sweep),
        Command::SweepTime { model, sweep } => runs::cmd_sweep_time(model, sweep),
        Command::SweepSize { model, sweep, t } => runs::cmd_sweep_size(model, sweep, t),
    }
}

pub(crate) fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), SzeError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| SzeError::Parse {
            line: 0,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| SzeError::Parse { line: 0, message: format!("stdout: {e}") }),
    }
}
