pub mod circuit;
pub mod explore;
pub mod matrix;
pub mod verify;

use std::f64::consts::PI;

use crate::error::{usage, CliError};

/// Parses a real number or a multiple of pi such as `pi`, `3pi/4`, `-pi/2`,
/// `0.25*pi`.
pub fn parse_time(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || usage(format!("cannot parse time `{s}`"));
    let lower = s.to_ascii_lowercase();
    let Some(pos) = lower.find("pi") else {
        return lower.parse::<f64>().map_err(|_| bad());
    };
    let coeff = lower[..pos].trim_end_matches('*');
    let coeff = match coeff {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = &lower[pos + 2..];
    let denom = match rest.strip_prefix('/') {
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    if denom == 0.0 {
        return Err(bad());
    }
    Ok(coeff * PI / denom)
}

pub fn require_n(n: Option<usize>) -> Result<usize, CliError> {
    match n {
        Some(0) => Err(usage("--n must be at least 1")),
        Some(n) => Ok(n),
        None => Err(usage("--n is required for this target")),
    }
}
