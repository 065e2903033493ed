//! `fanout`: batch driver for the verification suite, operator dumps and
//! Hamiltonian time scans.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod cmd;
mod error;
mod format;


#[derive(Parser, Debug)]
#[command(name = "fanout", version, about = "Parity and fanout gates from squared total-spin evolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification suite.
    Verify {
        /// Only run checks whose id starts with this prefix.
        #[arg(long)]
        filter: Option<String>,
        /// Lower every size cap to this many qubits.
        #[arg(long)]
        n_max: Option<usize>,
        /// Emit JSON Lines instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Print an operator's entries.
    Matrix {
        #[arg(long, value_enum)]
        what: MatrixTarget,
        #[arg(long)]
        n: Option<usize>,
        /// Evolution time; Hamiltonian targets print e^{-iHt} instead of H.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Coupling strength for `kn-ring`, `ln` and `ring` targets.
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        /// Circuit file for `circuit-file`.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Text)]
        format: MatrixFormat,
    },
    /// Print a built-in circuit in the text format.
    Circuit {
        #[arg(long, value_enum)]
        what: CircuitTarget,
        #[arg(long)]
        n: usize,
    },
    /// Scan evolution times for a parity-usable unitary.
    Explore {
        #[arg(long, value_enum)]
        hamiltonian: ExploreTarget,
        #[arg(long)]
        n: Option<usize>,
        /// `default`, `rational:Q`, `uniform:N`, or a comma list such as `pi/4,3pi/4,0.5`.
        #[arg(long, default_value = "default")]
        grid: String,
        /// Coupling file (`i j J_ij` per line, 1-indexed) for `kn-file`.
        #[arg(long)]
        coupling: Option<PathBuf>,
        /// Ring coupling strength.
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        #[arg(long, default_value_t = fanout_core::explore::SCAN_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixTarget {
    Un,
    Undag,
    Ieq,
    ParityRef,
    FanoutRef,
    ParityCircuit,
    ParityLikeCircuit,
    FanoutCircuit,
    SimplifiedFanoutCircuit,
    Hn,
    KnRing,
    #[value(name = "L2", alias = "l2")]
    L2,
    Ln,
    ZTot,
    XTot,
    YTot,
    CircuitFile,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Text,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CircuitTarget {
    Parity,
    ParityLike,
    Fanout,
    SimplifiedFanout,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExploreTarget {
    Hn,
    Ring,
    #[value(alias = "L2")]
    L2,
    KnFile,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { filter, n_max, json } => cmd::verify::run(filter.as_deref(), n_max, json),
        Command::Matrix { what, n, t, j, file, format } => {
            cmd::matrix::run(cmd::matrix::Args { what, n, t, j, file, format })
        }
        Command::Circuit { what, n } => cmd::circuit::run(what, n),
        Command::Explore { hamiltonian, n, grid, coupling, j, tol, json } => {
            cmd::explore::run(cmd::explore::Args { hamiltonian, n, grid, coupling, j, tol, json })
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fanout: {e}");
            e.exit_code()
        }
    }
}
