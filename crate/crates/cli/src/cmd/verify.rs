use std::process::ExitCode;

use fanout_core::report::{render_check_table, to_json_lines, ReportRecord};
use fanout_core::verify::{run_suite, CheckStatus, SizeCaps};

use crate::error::{usage, CliError};

pub fn run(filter: Option<&str>, n_max: Option<usize>, json: bool) -> Result<ExitCode, CliError> {
    let caps = match n_max {
        Some(0) => return Err(usage("--n-max must be at least 1")),
        Some(n) => SizeCaps::limited_to(n),
        None => SizeCaps::default(),
    };
    let results = run_suite(filter, &caps);
    if results.is_empty() {
        return Err(usage(format!("no check matches filter `{}`", filter.unwrap_or(""))));
    }
    if json {
        let records: Vec<ReportRecord> = results.iter().map(ReportRecord::from).collect();
        print!("{}", to_json_lines(&records));
    } else {
        print!("{}", render_check_table(&results));
    }
    let ran: Vec<_> = results.iter().filter(|r| r.status != CheckStatus::Skipped).collect();
    let unexpected = ran.iter().filter(|r| !r.as_expected()).count();
    let skipped = results.len() - ran.len();
    if !json {
        println!(
            "\n{} checks: {} as expected, {} unexpected, {} skipped",
            results.len(),
            ran.len() - unexpected,
            unexpected,
            skipped
        );
    }
    Ok(if unexpected == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
