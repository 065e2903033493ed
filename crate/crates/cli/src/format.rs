//! Number formatting for operator dumps.

use fanout_core::report::fmt15;
use fanout_core::Complex64;

/// Short human form: rounded to 12 decimals, trailing zeros dropped.
pub fn compact(z: Complex64) -> String {
    let round = |x: f64| {
        let r = (x * 1e12).round() / 1e12;
        if r == 0.0 { 0.0 } else { r }
    };
    let real = |x: f64| {
        let s = format!("{x:.12}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    };
    let (re, im) = (round(z.re), round(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => real(re),
        (true, false) => format!("{}i", real(im)),
        (false, false) => format!("{}{}{}i", real(re), if im < 0.0 { "" } else { "+" }, real(im)),
    }
}

pub fn csv_pair(z: Complex64) -> String {
    format!("{},{}", fmt15(z.re), fmt15(z.im))
}
