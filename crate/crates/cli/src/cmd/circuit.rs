use std::process::ExitCode;

use fanout_core::circuits::{fanout_circuit, parity_circuit, parity_like_circuit, simplified_fanout_circuit};

use crate::error::CliError;
use crate::CircuitTarget;

pub fn run(what: CircuitTarget, n: usize) -> Result<ExitCode, CliError> {
    let c = match what {
        CircuitTarget::Parity => parity_circuit(n)?,
        CircuitTarget::ParityLike => parity_like_circuit(n)?,
        CircuitTarget::Fanout => fanout_circuit(n)?,
        CircuitTarget::SimplifiedFanout => simplified_fanout_circuit(n)?,
    };
    print!("{}", c.to_text());
    Ok(ExitCode::SUCCESS)
}
