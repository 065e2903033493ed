use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use fanout_core::explore::{default_time_grid, rational_pi_grid, scan, sort_dedup, uniform_grid};
use fanout_core::hamiltonians::{build_hn, build_kn, build_l2, CouplingMatrix, Hamiltonian};
use fanout_core::report::{render_scan_table, scan_records, to_json_lines};

use super::{parse_time, require_n};
use crate::error::{usage, CliError};
use crate::ExploreTarget;

pub struct Args {
    pub hamiltonian: ExploreTarget,
    pub n: Option<usize>,
    pub grid: String,
    pub coupling: Option<PathBuf>,
    pub j: f64,
    pub tol: f64,
    pub json: bool,
}

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let count = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| usage(format!("grid size must be a positive integer, got `{s}`")))
    };
    let times = if spec == "default" {
        default_time_grid()
    } else if let Some(q) = spec.strip_prefix("rational:") {
        let q = count(q)?;
        let q = u32::try_from(q).map_err(|_| usage("rational grid denominator too large"))?;
        rational_pi_grid(q)
    } else if let Some(points) = spec.strip_prefix("uniform:") {
        uniform_grid(count(points)?)
    } else {
        let list = spec.strip_prefix("list:").unwrap_or(spec);
        let times = list.split(',').map(parse_time).collect::<Result<Vec<_>, _>>()?;
        sort_dedup(times)
    };
    if times.is_empty() {
        return Err(usage("time grid is empty"));
    }
    Ok(times)
}

pub fn run(args: Args) -> Result<ExitCode, CliError> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let times = parse_grid(&args.grid)?;
    let (id, h): (String, Hamiltonian) = match args.hamiltonian {
        ExploreTarget::Hn => ("hn".into(), build_hn(require_n(args.n)?)?.into()),
        ExploreTarget::Ring => {
            ("ring".into(), build_kn(&CouplingMatrix::ring(require_n(args.n)?, args.j)?)?.into())
        }
        ExploreTarget::L2 => ("l2".into(), build_l2(require_n(args.n)?)?.into()),
        ExploreTarget::KnFile => {
            let path = args.coupling.as_ref().ok_or_else(|| usage("kn-file needs --coupling"))?;
            let text = fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            if args.n == Some(0) {
                return Err(usage("--n must be at least 1"));
            }
            ("kn_file".into(), build_kn(&CouplingMatrix::parse(&text, args.n)?)?.into())
        }
    };
    let result = scan(&id, &h, &times, args.tol)?;
    if args.json {
        print!("{}", to_json_lines(&scan_records(&result, args.tol)));
    } else {
        print!("{}", render_scan_table(&result));
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("pi/4,3pi/4,pi/4").unwrap(), vec![PI / 4.0, 3.0 * PI / 4.0]);
        assert_eq!(parse_grid("list:0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_grid("uniform:4").unwrap().len(), 4);
        assert_eq!(parse_grid("rational:2").unwrap().len(), 3);
        assert!(parse_grid("uniform:0").is_err());
        assert!(parse_grid("rational:x").is_err());
        assert!(parse_grid("nope").is_err());
    }
}
