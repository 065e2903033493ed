//! Equality of operators up to a global phase.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::Operator;

/// Verdict of a global-phase equivalence check `u = e^{i theta} v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// The extracted `e^{i theta}`.
    pub phase: Complex64,
    pub max_deviation: f64,
    pub tolerance: f64,
}

/// Compares `u` against `e^{i theta} v`, taking `theta` from the largest
/// magnitude entry of `v` (lowest row-major index wins ties). If `v` is
/// zero everywhere (below `tol`) the phase is 1 and the check reduces to
/// `|u| < tol` elementwise.
pub fn equiv_up_to_global_phase(u: &Operator, v: &Operator, tol: f64) -> Result<EquivalenceReport> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch { left: u.n(), right: v.n() });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }

    let (pivot_row, pivot_col, pivot_mag) = largest_entry(v);
    let phase = if pivot_mag < tol {
        Complex64::new(1.0, 0.0)
    } else {
        let ratio = u.entry(pivot_row, pivot_col) / v.entry(pivot_row, pivot_col);
        let r = ratio.norm();
        if r > 0.0 { ratio / r } else { Complex64::new(1.0, 0.0) }
    };

    let max_deviation = match (u, v) {
        (Operator::Diagonal(a), Operator::Diagonal(b)) => a
            .entries()
            .iter()
            .zip(b.entries())
            .map(|(x, y)| (x - phase * y).norm())
            .fold(0.0, f64::max),
        (Operator::Dense(a), Operator::Dense(b)) => a
            .data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| (x - phase * y).norm())
            .fold(0.0, f64::max),
        _ => {
            let dim = u.dim();
            let mut worst = 0.0f64;
            for i in 0..dim {
                for j in 0..dim {
                    worst = worst.max((u.entry(i, j) - phase * v.entry(i, j)).norm());
                }
            }
            worst
        }
    };

    Ok(EquivalenceReport { equivalent: max_deviation < tol, phase, max_deviation, tolerance: tol })
}

fn largest_entry(v: &Operator) -> (usize, usize, f64) {
    let mut best = (0, 0, -1.0f64);
    match v {
        Operator::Diagonal(d) => {
            // Diagonal positions are increasing in row-major order too.
            for (i, z) in d.entries().iter().enumerate() {
                let m = z.norm();
                if m > best.2 {
                    best = (i, i, m);
                }
            }
        }
        Operator::Dense(d) => {
            let dim = d.dim();
            for (k, z) in d.data().iter().enumerate() {
                let m = z.norm();
                if m > best.2 {
                    best = (k / dim, k % dim, m);
                }
            }
        }
    }
    best
}
