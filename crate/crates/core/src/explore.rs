//! Time scans asking whether evolving a Hamiltonian ever yields a
//! "parity-usable" unitary: diagonal in the computational basis, constant
//! phase on each parity class, and a relative phase of `+-pi/2` between the
//! classes. That is exactly the property the parity construction consumes.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::parity;
use crate::error::{Error, Result};
use crate::hamiltonians::{Hamiltonian, SpectralDecomposition};
use crate::operator::{DenseOperator, Operator};
use crate::verify::SizeCaps;

/// Default classification tolerance for scans. Looser than the equivalence
/// tolerance since dense eigensolves accumulate more rounding.
pub const SCAN_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParityDiagonalVerdict {
    pub is_diagonal: bool,
    pub off_diag_max: f64,
    /// Phase of the even-parity class after normalizing by the `x = 0`
    /// entry (so always 1).
    pub phase_even: Complex64,
    /// Phase of the odd-parity class, taken at `x = 1`.
    pub phase_odd: Complex64,
    /// Largest deviation of any normalized diagonal entry from its class
    /// phase.
    pub class_spread: f64,
    /// `arg(phase_odd / phase_even)` in `(-pi, pi]`.
    pub relative_phase: f64,
    pub parity_usable: bool,
    /// For non-diagonal operators: whether `H^n U H^n` is parity-usable.
    pub hadamard_frame_usable: Option<bool>,
}

impl ParityDiagonalVerdict {
    /// Zero iff parity-usable (up to `tol`).
    pub fn distance_to_usable(&self) -> f64 {
        self.off_diag_max + self.class_spread + (self.relative_phase.abs() - FRAC_PI_2).abs()
    }
}

fn wrap_phase(theta: f64) -> f64 {
    if theta <= -PI {
        theta + 2.0 * PI
    } else {
        theta
    }
}

fn classify_inner(u: &Operator, tol: f64) -> ParityDiagonalVerdict {
    let off_diag_max = u.off_diagonal_max();
    let is_diagonal = off_diag_max < tol;
    let diag = u.diagonal();
    let unit = |z: Complex64| {
        let r = z.norm();
        if r > 0.0 { z / r } else { Complex64::new(0.0, 0.0) }
    };
    let reference = unit(diag[0]).conj();
    let normalized: Vec<Complex64> = diag.iter().map(|&z| unit(z * reference)).collect();
    let phase_even = normalized[0];
    let phase_odd = normalized.get(1).copied().unwrap_or(phase_even);
    let class_spread = normalized
        .iter()
        .enumerate()
        .map(|(x, &z)| (z - if parity(x) { phase_odd } else { phase_even }).norm())
        .fold(0.0, f64::max);
    let relative_phase = wrap_phase((phase_odd / phase_even).arg());
    let parity_usable = u.n() >= 1
        && is_diagonal
        && class_spread < tol
        && (relative_phase.abs() - FRAC_PI_2).abs() < tol;
    ParityDiagonalVerdict {
        is_diagonal,
        off_diag_max,
        phase_even,
        phase_odd,
        class_spread,
        relative_phase,
        parity_usable,
        hadamard_frame_usable: None,
    }
}

/// Classifies `u` against the parity-usable property.
pub fn classify_parity_diagonal(u: &Operator, tol: f64) -> ParityDiagonalVerdict {
    let mut verdict = classify_inner(u, tol);
    if let Operator::Dense(m) = u {
        if !verdict.is_diagonal {
            let rotated = Operator::Dense(hadamard_conjugate(m));
            verdict.hadamard_frame_usable = Some(classify_inner(&rotated, tol).parity_usable);
        }
    }
    verdict
}

/// `H^{(x)n} M H^{(x)n}` via fast Walsh-Hadamard transforms on rows and
/// columns.
fn hadamard_conjugate(m: &DenseOperator) -> DenseOperator {
    let dim = m.dim();
    let scale = 1.0 / dim as f64;
    let mut data = m.data().to_vec();
    for row in data.chunks_mut(dim) {
        walsh_hadamard(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        for i in 0..dim {
            col[i] = data[i * dim + j];
        }
        walsh_hadamard(&mut col);
        for i in 0..dim {
            data[i * dim + j] = col[i] * scale;
        }
    }
    DenseOperator::new(m.n(), data).expect("same size")
}

fn walsh_hadamard(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub hamiltonian_id: String,
    pub n: usize,
    pub times: Vec<f64>,
    pub verdicts: Vec<ParityDiagonalVerdict>,
    /// Index of the time closest to parity-usable (earliest on ties).
    pub best: usize,
}

impl ScanResult {
    pub fn best_time(&self) -> f64 {
        self.times[self.best]
    }

    pub fn best_verdict(&self) -> &ParityDiagonalVerdict {
        &self.verdicts[self.best]
    }

    pub fn usable_times(&self) -> Vec<f64> {
        self.times
            .iter()
            .zip(&self.verdicts)
            .filter(|(_, v)| v.parity_usable)
            .map(|(&t, _)| t)
            .collect()
    }

    pub fn hadamard_frame_near_misses(&self) -> Vec<f64> {
        self.times
            .iter()
            .zip(&self.verdicts)
            .filter(|(_, v)| v.hadamard_frame_usable == Some(true))
            .map(|(&t, _)| t)
            .collect()
    }
}

/// Evolves `h` at every time in `times` (strictly increasing) and
/// classifies the result. Diagonal Hamiltonians never leave the diagonal
/// representation; dense ones are diagonalized once.
pub fn scan(hamiltonian_id: &str, h: &Hamiltonian, times: &[f64], tol: f64) -> Result<ScanResult> {
    scan_with_caps(hamiltonian_id, h, times, tol, &SizeCaps::default())
}

pub fn scan_with_caps(
    hamiltonian_id: &str,
    h: &Hamiltonian,
    times: &[f64],
    tol: f64,
    caps: &SizeCaps,
) -> Result<ScanResult> {
    if times.is_empty() {
        return Err(Error::Invalid("time grid is empty".into()));
    }
    if times.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::Invalid("time grid must be strictly increasing".into()));
    }
    let verdicts: Vec<ParityDiagonalVerdict> = match h {
        Hamiltonian::Diagonal(d) => {
            if d.n() > caps.state_cap {
                return Err(Error::CapExceeded { what: "diagonal scan".into(), n: d.n(), cap: caps.state_cap });
            }
            times
                .par_iter()
                .map(|&t| classify_parity_diagonal(&Operator::Diagonal(d.evolve(t)), tol))
                .collect()
        }
        Hamiltonian::Dense(d) => {
            if d.n() > caps.l2_cap {
                return Err(Error::CapExceeded { what: "dense scan".into(), n: d.n(), cap: caps.l2_cap });
            }
            let spectral = SpectralDecomposition::new(d)?;
            times
                .par_iter()
                .map(|&t| classify_parity_diagonal(&Operator::Dense(spectral.evolve(t)), tol))
                .collect()
        }
    };
    let best = verdicts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.distance_to_usable().total_cmp(&b.1.distance_to_usable()))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    Ok(ScanResult { hamiltonian_id: hamiltonian_id.to_string(), n: h.n(), times: times.to_vec(), verdicts, best })
}

/// Adjacent grid points closer than this are merged.
const GRID_DEDUP_TOL: f64 = 1e-12;

/// `p pi / q` for `1 <= p < 2q`, `q = 1..=16`, plus `2 pi j / 512` for
/// `j = 1..=512`; sorted with near-duplicates removed.
pub fn default_time_grid() -> Vec<f64> {
    let mut times = rational_pi_grid(16);
    times.extend((1..=512).map(|j| 2.0 * PI * j as f64 / 512.0));
    sort_dedup(times)
}

/// `p pi / q` for `1 <= p < 2q` and `q = 1..=max_denominator`.
pub fn rational_pi_grid(max_denominator: u32) -> Vec<f64> {
    let mut times = Vec::new();
    for q in 1..=max_denominator {
        for p in 1..2 * q {
            times.push(p as f64 * PI / q as f64);
        }
    }
    sort_dedup(times)
}

/// `2 pi j / points` for `j = 1..=points`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|j| 2.0 * PI * j as f64 / points as f64).collect()
}

pub fn sort_dedup(mut times: Vec<f64>) -> Vec<f64> {
    times.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(times.len());
    for t in times {
        if out.last().is_none_or(|&last| t - last >= GRID_DEDUP_TOL) {
            out.push(t);
        }
    }
    out
}

/// Renders `t` as `p*pi/q` when it is such a fraction with `q <= 64`.
pub fn rational_pi_label(t: f64) -> Option<String> {
    let ratio = t / PI;
    (1..=64u32).find_map(|q| {
        let p = (ratio * q as f64).round();
        ((ratio * q as f64 - p).abs() < 1e-9).then(|| match (p as i64, q) {
            (0, _) => "0".to_string(),
            (p, 1) => format!("{p}*pi"),
            (p, q) => format!("{p}*pi/{q}"),
        })
    })
}
