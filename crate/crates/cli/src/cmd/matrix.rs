use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::ValueEnum;
use fanout_core::basis::BasisIndex;
use fanout_core::circuits::{
    fanout_circuit, parity_circuit, parity_like_circuit, simplified_fanout_circuit, Circuit,
};
use fanout_core::gates::{fanout_reference, ieq_reference, parity_reference};
use fanout_core::hamiltonians::{
    build_hn, build_kn, build_l2, build_ln, build_total_spin_component, evolve, un, un_dagger,
    CouplingMatrix, Hamiltonian, SpinAxis,
};
use fanout_core::operator::Operator;
use fanout_core::Complex64;

use super::{parse_time, require_n};
use crate::error::{usage, CliError};
use crate::format::{compact, csv_pair};
use crate::{MatrixFormat, MatrixTarget};

pub struct Args {
    pub what: MatrixTarget,
    pub n: Option<usize>,
    pub t: Option<String>,
    pub j: f64,
    pub file: Option<PathBuf>,
    pub format: MatrixFormat,
}

fn hamiltonian(what: MatrixTarget, n: usize, j: f64) -> Result<Option<Hamiltonian>, CliError> {
    Ok(Some(match what {
        MatrixTarget::Hn => build_hn(n)?.into(),
        MatrixTarget::KnRing => build_kn(&CouplingMatrix::ring(n, j)?)?.into(),
        MatrixTarget::L2 => build_l2(n)?.into(),
        MatrixTarget::Ln => build_ln(&CouplingMatrix::uniform(n, j))?.into(),
        MatrixTarget::ZTot => build_total_spin_component(n, SpinAxis::Z)?.into(),
        MatrixTarget::XTot => build_total_spin_component(n, SpinAxis::X)?.into(),
        MatrixTarget::YTot => build_total_spin_component(n, SpinAxis::Y)?.into(),
        _ => return Ok(None),
    }))
}

fn circuit_file(path: &PathBuf) -> Result<Circuit, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(text.parse::<Circuit>()?)
}

fn unitary(args: &Args) -> Result<Operator, CliError> {
    let n = || require_n(args.n);
    Ok(match args.what {
        MatrixTarget::Un => un(n()?)?.into(),
        MatrixTarget::Undag => un_dagger(n()?)?.into(),
        MatrixTarget::Ieq => {
            if args.n.is_some_and(|n| n != 3) {
                return Err(usage("ieq acts on exactly 3 qubits"));
            }
            ieq_reference().into()
        }
        MatrixTarget::ParityRef => parity_reference(n()? + 1)?.into(),
        MatrixTarget::FanoutRef => fanout_reference(n()? + 1)?.into(),
        MatrixTarget::ParityCircuit => parity_circuit(n()?)?.compile()?.into(),
        MatrixTarget::ParityLikeCircuit => parity_like_circuit(n()?)?.compile()?.into(),
        MatrixTarget::FanoutCircuit => fanout_circuit(n()?)?.compile()?.into(),
        MatrixTarget::SimplifiedFanoutCircuit => simplified_fanout_circuit(n()?)?.compile()?.into(),
        MatrixTarget::CircuitFile => {
            let path = args.file.as_ref().ok_or_else(|| usage("circuit-file needs --file"))?;
            circuit_file(path)?.compile()?.into()
        }
        _ => unreachable!("Hamiltonian targets are handled separately"),
    })
}

/// Multiplies by the conjugate phase of the first nonzero entry (row-major)
/// so that entry is real and positive.
fn normalize_phase(op: Operator) -> Operator {
    let first = match &op {
        Operator::Diagonal(d) => d.entries().iter().copied().find(|z| z.norm() > 1e-12),
        Operator::Dense(m) => m.data().iter().copied().find(|z| z.norm() > 1e-12),
    };
    let Some(z) = first else { return op };
    let c = z.conj() / z.norm();
    match op {
        Operator::Diagonal(d) => {
            let n = d.n();
            let entries = d.into_entries().into_iter().map(|e| e * c).collect();
            fanout_core::DiagonalOperator::new(n, entries).expect("same size").into()
        }
        Operator::Dense(m) => m.scale(c).into(),
    }
}

fn hamiltonian_matrix(h: &Hamiltonian) -> Operator {
    match h {
        Hamiltonian::Diagonal(d) => {
            let entries = d.energies().iter().map(|&e| Complex64::new(e, 0.0)).collect();
            fanout_core::DiagonalOperator::new(d.n(), entries).expect("same size").into()
        }
        Hamiltonian::Dense(d) => d.matrix().clone().into(),
    }
}

pub fn render(op: &Operator, label: &str, format: MatrixFormat) -> String {
    let n = op.n();
    let dim = op.dim();
    let mut out = String::new();
    match (op, format) {
        (Operator::Diagonal(d), MatrixFormat::Text) => {
            let _ = writeln!(out, "# {label} qubits={n} diagonal (basis bits listed qubit 0 first)");
            for (x, &z) in d.entries().iter().enumerate() {
                let bits = BasisIndex::new(x, n).expect("in range").to_bit_string();
                let _ = writeln!(out, "{bits} {}", compact(z));
            }
        }
        (Operator::Diagonal(d), MatrixFormat::Csv) => {
            out.push_str("index,bits,re,im\n");
            for (x, &z) in d.entries().iter().enumerate() {
                let bits = BasisIndex::new(x, n).expect("in range").to_bit_string();
                let _ = writeln!(out, "{x},{bits},{}", csv_pair(z));
            }
        }
        (Operator::Dense(m), MatrixFormat::Text) => {
            let _ = writeln!(out, "# {label} qubits={n} dense {dim}x{dim}");
            for r in 0..dim {
                let row: Vec<String> = m.row(r).iter().map(|&z| compact(z)).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        (Operator::Dense(m), MatrixFormat::Csv) => {
            out.push_str("row,col,re,im\n");
            for r in 0..dim {
                for (c, &z) in m.row(r).iter().enumerate() {
                    let _ = writeln!(out, "{r},{c},{}", csv_pair(z));
                }
            }
        }
    }
    out
}

pub fn run(args: Args) -> Result<ExitCode, CliError> {
    let label = args.what.to_possible_value().expect("no skipped variants").get_name().to_string();
    let op = match args.what {
        MatrixTarget::Hn
        | MatrixTarget::KnRing
        | MatrixTarget::L2
        | MatrixTarget::Ln
        | MatrixTarget::ZTot
        | MatrixTarget::XTot
        | MatrixTarget::YTot => {
            let h = hamiltonian(args.what, require_n(args.n)?, args.j)?.expect("Hamiltonian target");
            match &args.t {
                Some(t) => normalize_phase(evolve(&h, parse_time(t)?)?),
                None => hamiltonian_matrix(&h),
            }
        }
        _ => {
            if args.t.is_some() {
                return Err(usage("--t only applies to Hamiltonian targets"));
            }
            normalize_phase(unitary(&args)?)
        }
    };
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(render(&op, &label, args.format).as_bytes());
    Ok(ExitCode::SUCCESS)
}
