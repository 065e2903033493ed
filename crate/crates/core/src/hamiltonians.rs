//! The Hamiltonians `H_n = J (Z_tot)^2`, `K_n = sum J_ij Z_i Z_j`, the
//! total-spin components, `L^2`, the Heisenberg sum `L_n`, and their time
//! evolution.
//!
//! Units follow `hbar = J/2 = 1`, so `H_n` has energies
//! `n^2/2 - 2k(n-k)` on a basis state of Hamming weight `k`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::basis::hamming_weight;
use crate::error::{Error, Result};
use crate::operator::{DenseOperator, DiagonalOperator, Operator};
use crate::verify::SizeCaps;

/// Evolution time producing `U_n`.
pub const QUARTER_PI_TIME: f64 = PI / 4.0;
/// Evolution time producing `U_n^dagger` (since `U_n^4 = I`).
pub const THREE_QUARTER_PI_TIME: f64 = 3.0 * PI / 4.0;

/// Dense inputs to [`evolve`] must be Hermitian to within this.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

impl FromStr for SpinAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "X" => Ok(SpinAxis::X),
            "Y" => Ok(SpinAxis::Y),
            "Z" => Ok(SpinAxis::Z),
            _ => Err(Error::Invalid(format!("unknown spin axis `{s}`"))),
        }
    }
}

impl fmt::Display for SpinAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinAxis::X => "X",
            SpinAxis::Y => "Y",
            SpinAxis::Z => "Z",
        })
    }
}

/// Action of a single Pauli on a basis state: `P_q |x> = phase |x'>`.
#[inline]
fn pauli_action(axis: SpinAxis, qubit: usize, x: usize) -> (Complex64, usize) {
    let sign = if x >> qubit & 1 == 1 { -1.0 } else { 1.0 };
    match axis {
        SpinAxis::X => (Complex64::new(1.0, 0.0), x ^ (1 << qubit)),
        SpinAxis::Y => (Complex64::new(0.0, sign), x ^ (1 << qubit)),
        SpinAxis::Z => (Complex64::new(sign, 0.0), x),
    }
}

/// Adds `coeff * P` to `m` where `P` is the Pauli string `factors`.
fn add_pauli_string(m: &mut DenseOperator, factors: &[(SpinAxis, usize)], coeff: f64) {
    for col in 0..m.dim() {
        let (phase, row) = factors.iter().rev().fold((Complex64::new(1.0, 0.0), col), |(ph, x), &(axis, q)| {
            let (p, y) = pauli_action(axis, q, x);
            (ph * p, y)
        });
        let cur = m.get(row, col);
        m.set(row, col, cur + phase * coeff);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalHamiltonian {
    n: usize,
    energies: Vec<f64>,
}

impl DiagonalHamiltonian {
    pub fn new(n: usize, energies: Vec<f64>) -> Result<Self> {
        if energies.len() != 1 << n {
            return Err(Error::Invalid(format!("{} energies for {n} qubits", energies.len())));
        }
        Ok(Self { n, energies })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, x: usize) -> f64 {
        self.energies[x]
    }

    pub fn evolve(&self, t: f64) -> DiagonalOperator {
        let entries = self.energies.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect();
        DiagonalOperator::new(self.n, entries).expect("same size")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseHamiltonian {
    matrix: DenseOperator,
}

impl DenseHamiltonian {
    /// Wraps a matrix. Hermiticity is checked when the Hamiltonian is
    /// evolved or diagonalized.
    pub fn new(matrix: DenseOperator) -> Self {
        Self { matrix }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &DenseOperator {
        &self.matrix
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.matrix.hermiticity_deviation()
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        SpectralDecomposition::new(self)
    }

    pub fn evolve(&self, t: f64) -> Result<DenseOperator> {
        Ok(self.spectral()?.evolve(t))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Hamiltonian {
    Diagonal(DiagonalHamiltonian),
    Dense(DenseHamiltonian),
}

impl Hamiltonian {
    pub fn n(&self) -> usize {
        match self {
            Hamiltonian::Diagonal(h) => h.n(),
            Hamiltonian::Dense(h) => h.n(),
        }
    }
}

impl From<DiagonalHamiltonian> for Hamiltonian {
    fn from(h: DiagonalHamiltonian) -> Self {
        Hamiltonian::Diagonal(h)
    }
}

impl From<DenseHamiltonian> for Hamiltonian {
    fn from(h: DenseHamiltonian) -> Self {
        Hamiltonian::Dense(h)
    }
}

/// `e^{-iHt}`. Diagonal input stays diagonal; dense input goes through a
/// Hermitian eigendecomposition.
pub fn evolve(h: &Hamiltonian, t: f64) -> Result<Operator> {
    match h {
        Hamiltonian::Diagonal(d) => Ok(Operator::Diagonal(d.evolve(t))),
        Hamiltonian::Dense(d) => {
            check_cap("dense evolution", d.n(), SizeCaps::default().l2_cap)?;
            d.evolve(t).map(Operator::Dense)
        }
    }
}

/// Eigendecomposition of a Hermitian matrix, kept around so repeated
/// evolutions cost one matrix product (or less, when the spectrum is highly
/// degenerate) instead of one eigensolve each.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
    /// Spectral projectors `(lambda, P_lambda)` when there are few distinct
    /// eigenvalues. Row-major.
    projectors: Option<Vec<(f64, Vec<Complex64>)>>,
}

/// Eigenvalue clusters are merged when adjacent values differ by less than
/// this (relative to the spectral radius, floor 1).
const DEGENERACY_TOL: f64 = 1e-10;
const MAX_PROJECTORS: usize = 32;

impl SpectralDecomposition {
    pub fn new(h: &DenseHamiltonian) -> Result<Self> {
        let dev = h.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let dim = h.matrix.dim();
        let m = DMatrix::from_row_slice(dim, dim, h.matrix.data());
        let eig = SymmetricEigen::new(m);
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let eigenvectors = eig.eigenvectors;

        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let radius = eigenvalues.iter().fold(1.0f64, |acc, e| acc.max(e.abs()));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &k in &order {
            match groups.last_mut() {
                Some(g) if (eigenvalues[k] - eigenvalues[*g.last().unwrap()]).abs() < DEGENERACY_TOL * radius => {
                    g.push(k)
                }
                _ => groups.push(vec![k]),
            }
        }

        let projectors = (groups.len() <= MAX_PROJECTORS && groups.len() < dim).then(|| {
            groups
                .iter()
                .map(|g| {
                    let lambda = g.iter().map(|&k| eigenvalues[k]).sum::<f64>() / g.len() as f64;
                    let mut p = vec![Complex64::new(0.0, 0.0); dim * dim];
                    for &k in g {
                        let v = eigenvectors.column(k);
                        for i in 0..dim {
                            let vi = v[i];
                            if vi.norm_sqr() == 0.0 {
                                continue;
                            }
                            for j in 0..dim {
                                p[i * dim + j] += vi * v[j].conj();
                            }
                        }
                    }
                    (lambda, p)
                })
                .collect()
        });

        Ok(Self { n: h.n(), eigenvalues, eigenvectors, projectors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Eigenvalues in the eigensolver's order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut e = self.eigenvalues.clone();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn distinct_eigenvalue_count(&self) -> Option<usize> {
        self.projectors.as_ref().map(Vec::len)
    }

    pub fn evolve(&self, t: f64) -> DenseOperator {
        let dim = 1usize << self.n;
        if let Some(projectors) = &self.projectors {
            let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
            for (lambda, p) in projectors {
                let phase = Complex64::from_polar(1.0, -lambda * t);
                data.iter_mut().zip(p).for_each(|(d, &q)| *d += phase * q);
            }
            return DenseOperator::new(self.n, data).expect("same size");
        }
        let mut scaled = self.eigenvectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= Complex64::from_polar(1.0, -self.eigenvalues[k] * t);
        }
        let u = scaled * self.eigenvectors.adjoint();
        // Column-major storage of the transpose is the row-major layout of u.
        DenseOperator::new(self.n, u.transpose().as_slice().to_vec()).expect("same size")
    }
}

fn check_cap(what: &str, n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize { n, reason: "need at least one qubit" });
    }
    if n > cap {
        return Err(Error::CapExceeded { what: what.to_string(), n, cap });
    }
    Ok(())
}

/// Pairwise coupling energies `J_ij`, symmetric, defined for `i != j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix {
    n: usize,
    values: Vec<f64>,
}

impl CouplingMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, values: vec![0.0; n * n] }
    }

    /// Every pair coupled with strength `j`.
    pub fn uniform(n: usize, j: f64) -> Self {
        let mut c = Self::zeros(n);
        for a in 0..n {
            for b in a + 1..n {
                c.set(a, b, j).expect("in range");
            }
        }
        c
    }

    /// Nearest-neighbour coupling on a cycle: `J_{i,i+1 mod n} = j`.
    pub fn ring(n: usize, j: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize { n, reason: "a ring needs at least 3 qubits" });
        }
        if j.is_nan() || j <= 0.0 {
            return Err(Error::Invalid(format!("ring coupling must be positive, got {j}")));
        }
        let mut c = Self::zeros(n);
        for a in 0..n {
            c.set(a, (a + 1) % n, j)?;
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::QubitOutOfRange { index: i.max(j), n: self.n });
        }
        if i == j {
            return Err(Error::Invalid(format!("self-coupling J_{{{i},{i}}} is not allowed")));
        }
        self.values[i * self.n + j] = value;
        self.values[j * self.n + i] = value;
        Ok(())
    }

    /// `(i, j, J_ij)` for `i < j`, including zero couplings.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn nonzero_count(&self) -> usize {
        self.pairs().filter(|&(_, _, v)| v != 0.0).count()
    }

    /// Parses `i j J_ij` lines with 1-based qubit indices. `#` starts a
    /// comment. Unlisted pairs are zero. Without `n`, the largest index
    /// seen sets the size.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let [a, b, v] = toks.as_slice() else {
                return Err(Error::Parse { line, msg: format!("expected `i j J_ij`, got `{content}`") });
            };
            let index = |tok: &str| match tok.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                _ => Err(Error::Parse { line, msg: format!("expected a 1-based qubit index, got `{tok}`") }),
            };
            let (i, j) = (index(a)?, index(b)?);
            let value = v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse { line, msg: format!("expected a finite coupling, got `{v}`") })?;
            if i == j {
                return Err(Error::Parse { line, msg: format!("self-coupling on qubit {}", i + 1) });
            }
            entries.push((line, i.min(j), i.max(j), value));
        }
        let size = match n {
            Some(n) => n,
            None => entries.iter().map(|e| e.2 + 1).max().ok_or(Error::Parse {
                line: 0,
                msg: "coupling file lists no pairs".into(),
            })?,
        };
        let mut c = Self::zeros(size);
        let mut seen = std::collections::BTreeSet::new();
        for (line, i, j, value) in entries {
            if j >= size {
                return Err(Error::Parse { line, msg: format!("qubit {} exceeds n = {size}", j + 1) });
            }
            if !seen.insert((i, j)) {
                return Err(Error::Parse { line, msg: format!("pair ({}, {}) listed twice", i + 1, j + 1) });
            }
            c.set(i, j, value)?;
        }
        Ok(c)
    }
}

/// `H_n` with energies `scale * (n^2/2 - 2k(n-k))`.
pub fn build_hn_scaled(n: usize, scale: f64) -> Result<DiagonalHamiltonian> {
    check_cap("H_n", n, SizeCaps::default().state_cap)?;
    let nf = n as f64;
    let energies = (0..1usize << n)
        .map(|x| {
            let k = hamming_weight(x) as f64;
            scale * (nf * nf / 2.0 - 2.0 * k * (nf - k))
        })
        .collect();
    DiagonalHamiltonian::new(n, energies)
}

pub fn build_hn(n: usize) -> Result<DiagonalHamiltonian> {
    build_hn_scaled(n, 1.0)
}

/// `H_n` without its basis-independent `n^2/2` term: energies `-2k(n-k)`.
/// Evolving this for `pi/4` gives diagonal entries exactly `i^{k(n-k)}`.
pub fn build_hn_offset_free(n: usize) -> Result<DiagonalHamiltonian> {
    check_cap("H_n", n, SizeCaps::default().state_cap)?;
    let energies = (0..1usize << n)
        .map(|x| {
            let k = hamming_weight(x) as f64;
            -2.0 * k * (n as f64 - k)
        })
        .collect();
    DiagonalHamiltonian::new(n, energies)
}

/// `K_n = sum_{i<j} J_ij Z_i Z_j`.
pub fn build_kn(coupling: &CouplingMatrix) -> Result<DiagonalHamiltonian> {
    let n = coupling.n();
    check_cap("K_n", n, SizeCaps::default().state_cap)?;
    let pairs: Vec<_> = coupling.pairs().filter(|&(_, _, v)| v != 0.0).collect();
    let energies = (0..1usize << n)
        .map(|x| {
            pairs
                .iter()
                .map(|&(i, j, v)| if (x >> i ^ x >> j) & 1 == 1 { -v } else { v })
                .sum()
        })
        .collect();
    DiagonalHamiltonian::new(n, energies)
}

pub fn build_ring(n: usize, j: f64) -> Result<CouplingMatrix> {
    CouplingMatrix::ring(n, j)
}

/// `(1/2) sum_i P_i` for the chosen Pauli `P`.
pub fn build_total_spin_component(n: usize, axis: SpinAxis) -> Result<DenseHamiltonian> {
    check_cap("total spin component", n, SizeCaps::default().dense_cap)?;
    let mut m = DenseOperator::zeros(n)?;
    for q in 0..n {
        add_pauli_string(&mut m, &[(axis, q)], 0.5);
    }
    Ok(DenseHamiltonian::new(m))
}

/// `L^2 = X_tot^2 + Y_tot^2 + Z_tot^2`.
pub fn build_l2(n: usize) -> Result<DenseHamiltonian> {
    check_cap("L^2", n, SizeCaps::default().l2_cap)?;
    let mut total = DenseOperator::zeros(n)?;
    for axis in [SpinAxis::X, SpinAxis::Y, SpinAxis::Z] {
        let c = build_total_spin_component(n, axis)?;
        total = total.add(&c.matrix.matmul(&c.matrix)?)?;
    }
    Ok(DenseHamiltonian::new(total))
}

/// `L_n = sum_{i<j} J_ij (X_i X_j + Y_i Y_j + Z_i Z_j)`.
pub fn build_ln(coupling: &CouplingMatrix) -> Result<DenseHamiltonian> {
    let n = coupling.n();
    check_cap("L_n", n, SizeCaps::default().l2_cap)?;
    let mut m = DenseOperator::zeros(n)?;
    for (i, j, v) in coupling.pairs().filter(|&(_, _, v)| v != 0.0) {
        for axis in [SpinAxis::X, SpinAxis::Y, SpinAxis::Z] {
            add_pauli_string(&mut m, &[(axis, i), (axis, j)], v);
        }
    }
    Ok(DenseHamiltonian::new(m))
}

/// `U_n`: `e^{-i H t}` at `t = pi/4` for the offset-free `H_n`, so the
/// diagonal is exactly `i^{k(n-k)}`.
pub fn un(n: usize) -> Result<DiagonalOperator> {
    Ok(build_hn_offset_free(n)?.evolve(QUARTER_PI_TIME))
}

/// `U_n^dagger`, obtained by evolving for `3 pi / 4`.
pub fn un_dagger(n: usize) -> Result<DiagonalOperator> {
    Ok(build_hn_offset_free(n)?.evolve(THREE_QUARTER_PI_TIME))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::equiv_up_to_global_phase;
    use crate::operator::{compose, max_abs_diff};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coupling_file_parsing() {
        let c = CouplingMatrix::parse("# ring\n1 2 1.0\n2 3 0.5\n\n3 1 2 # wrap\n", None).unwrap();
        assert_eq!(c.n(), 3);
        assert_eq!(c.get(0, 1), 1.0);
        assert_eq!(c.get(2, 1), 0.5);
        assert_eq!(c.get(0, 2), 2.0);
        assert_eq!(CouplingMatrix::parse("1 2 1", Some(5)).unwrap().n(), 5);
        for bad in ["1 2", "0 1 1", "1 1 1", "1 2 x", "1 2 inf", "1 2 1\n2 1 1", ""] {
            assert!(CouplingMatrix::parse(bad, None).is_err(), "{bad:?}");
        }
        assert!(CouplingMatrix::parse("1 4 1", Some(3)).is_err());
    }

    #[test]
    fn hn_energy_examples() {
        let h3 = build_hn(3).unwrap();
        assert_eq!(h3.energy(0b000), 4.5);
        assert_eq!(h3.energy(0b001), 0.5);
        let h2 = build_hn(2).unwrap();
        assert_eq!(h2.energy(0b01), 0.0);
        assert_eq!(h2.energy(0b00), 2.0);
        for n in 1..=8 {
            let h = build_hn(n).unwrap();
            assert_eq!(h.energy((1 << n) - 1), h.energy(0));
            assert_eq!(h.energy(0), (n * n) as f64 / 2.0);
        }
    }

    #[test]
    fn hn_scale_multiplies() {
        let a = build_hn(4).unwrap();
        let b = build_hn_scaled(4, 3.0).unwrap();
        for (x, y) in a.energies().iter().zip(b.energies()) {
            assert_eq!(3.0 * x, *y);
        }
    }

    #[test]
    fn hn_size_errors() {
        assert!(matches!(build_hn(0), Err(Error::InvalidSize { .. })));
        assert!(matches!(build_hn(21), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn zero_coupling_is_zero_hamiltonian() {
        let k = build_kn(&CouplingMatrix::zeros(4)).unwrap();
        assert!(k.energies().iter().all(|&e| e == 0.0));
        let l = build_ln(&CouplingMatrix::zeros(3)).unwrap();
        assert!(l.matrix().data().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn ring_structure() {
        let r3 = build_ring(3, 1.5).unwrap();
        assert_eq!(r3.get(0, 1), 1.5);
        assert_eq!(r3.get(1, 2), 1.5);
        assert_eq!(r3.get(2, 0), 1.5);
        assert_eq!(build_ring(4, 1.0).unwrap().nonzero_count(), 4);
        let r5 = build_ring(5, 1.0).unwrap();
        assert_eq!(r5.nonzero_count(), 5);
        assert_eq!(r5.get(0, 2), 0.0);
        assert!(build_ring(2, 1.0).is_err());
        assert!(build_ring(4, 0.0).is_err());
    }

    #[test]
    fn ring_alternating_state_energy() {
        // Every ring bond of |0101> is anti-aligned.
        let k = build_kn(&build_ring(4, 1.0).unwrap()).unwrap();
        assert_eq!(k.energy(0b1010), -4.0);
        assert_eq!(k.energy(0b0101), -4.0);
        assert_eq!(k.energy(0), 4.0);
    }

    #[test]
    fn coupling_rejects_diagonal() {
        let mut c = CouplingMatrix::zeros(3);
        assert!(c.set(1, 1, 1.0).is_err());
        assert!(c.set(0, 3, 1.0).is_err());
    }

    #[test]
    fn z_component_examples() {
        let z1 = build_total_spin_component(1, SpinAxis::Z).unwrap();
        assert_eq!(z1.matrix().diagonal(), vec![c(0.5, 0.0), c(-0.5, 0.0)]);
        let z2 = build_total_spin_component(2, SpinAxis::Z).unwrap();
        assert_eq!(z2.matrix().get(0b01, 0b01), c(0.0, 0.0));
        assert_eq!(z2.matrix().off_diagonal_max(), 0.0);
        for n in 1..=5 {
            let z = build_total_spin_component(n, SpinAxis::Z).unwrap();
            for x in 0..1usize << n {
                let k = hamming_weight(x) as f64;
                assert_eq!(z.matrix().get(x, x).re, (n as f64 - 2.0 * k) / 2.0);
            }
        }
    }

    #[test]
    fn components_are_traceless_hermitian() {
        for axis in [SpinAxis::X, SpinAxis::Y, SpinAxis::Z] {
            let m = build_total_spin_component(2, axis).unwrap();
            assert!(m.hermiticity_deviation() < 1e-15);
            assert!(m.matrix().trace().norm() < 1e-15);
        }
        // X_tot on 2 qubits: 1/2 (X (x) I + I (x) X).
        let x = build_total_spin_component(2, SpinAxis::X).unwrap();
        assert_eq!(x.matrix().get(0b01, 0b00), c(0.5, 0.0));
        assert_eq!(x.matrix().get(0b10, 0b00), c(0.5, 0.0));
        assert_eq!(x.matrix().get(0b11, 0b00), c(0.0, 0.0));
    }

    #[test]
    fn l2_single_spin() {
        let l = build_l2(1).unwrap();
        let expected = DenseOperator::identity(1).unwrap().scale(c(0.75, 0.0));
        assert!(max_abs_diff(&l.matrix().clone().into(), &expected.into()).unwrap() < 1e-15);
    }

    #[test]
    fn l2_two_spins_singlet_triplet() {
        let e = build_l2(2).unwrap().spectral().unwrap().sorted_eigenvalues();
        let expected = [0.0, 2.0, 2.0, 2.0];
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn l2_commutes_with_z_tot() {
        for n in 1..=6 {
            let l = build_l2(n).unwrap();
            let z = build_total_spin_component(n, SpinAxis::Z).unwrap();
            let lz = l.matrix().matmul(z.matrix()).unwrap();
            let zl = z.matrix().matmul(l.matrix()).unwrap();
            let comm = lz.sub(&zl).unwrap();
            let worst = comm.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(worst < 1e-10, "n={n}: {worst}");
            assert!(l.hermiticity_deviation() < 1e-12);
        }
    }

    #[test]
    fn heisenberg_pair_spectrum() {
        let mut coupling = CouplingMatrix::zeros(2);
        coupling.set(0, 1, 1.0).unwrap();
        let e = build_ln(&coupling).unwrap().spectral().unwrap().sorted_eigenvalues();
        let expected = [-3.0, 1.0, 1.0, 1.0];
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let d = evolve(&build_hn(4).unwrap().into(), 0.0).unwrap();
        assert_eq!(d, Operator::identity_diagonal(4).unwrap());
        let l = evolve(&build_l2(3).unwrap().into(), 0.0).unwrap();
        let id: Operator = DenseOperator::identity(3).unwrap().into();
        assert!(max_abs_diff(&l, &id).unwrap() < 1e-12);
    }

    #[test]
    fn u3_matches_ieq_pattern() {
        let u = evolve(&build_hn(3).unwrap().into(), QUARTER_PI_TIME).unwrap();
        let pattern: Vec<Complex64> = [1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, 1.0]
            .iter()
            .map(|&v| c(v, 0.0))
            .collect();
        let target = DiagonalOperator::new(3, pattern).unwrap().into();
        let r = equiv_up_to_global_phase(&u, &target, 1e-10).unwrap();
        assert!(r.equivalent, "{r:?}");
    }

    #[test]
    fn literal_hn_fourth_power() {
        // With the n^2/2 offset kept, U^4 = e^{-i pi n^2 / 2} I: exactly I for
        // even n, a global phase for odd n.
        for n in 1..=10 {
            let u: Operator = evolve(&build_hn(n).unwrap().into(), QUARTER_PI_TIME).unwrap();
            let u2 = compose(&u, &u).unwrap();
            let u4 = compose(&u2, &u2).unwrap();
            let id = Operator::identity_diagonal(n).unwrap();
            let r = equiv_up_to_global_phase(&u4, &id, 1e-12).unwrap();
            assert!(r.equivalent);
            let expected = Complex64::from_polar(1.0, -PI * (n * n) as f64 / 2.0);
            assert!((r.phase - expected).norm() < 1e-12);
            if n % 2 == 0 {
                assert!(max_abs_diff(&u4, &id).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn un_examples() {
        let id = Operator::identity_diagonal(4).unwrap();
        let p = compose(&un(4).unwrap().into(), &un_dagger(4).unwrap().into()).unwrap();
        assert!(max_abs_diff(&p, &id).unwrap() < 1e-12);

        let u3 = un(3).unwrap();
        let rel = u3.entries()[0b011] / u3.entries()[0];
        assert!((rel - c(-1.0, 0.0)).norm() < 1e-12);

        let u2 = un(2).unwrap();
        let rel = u2.entries()[0b01] / u2.entries()[0];
        assert!((rel - Complex64::i()).norm() < 1e-12);
    }

    #[test]
    fn dense_evolution_requires_hermitian() {
        let mut m = DenseOperator::zeros(1).unwrap();
        m.set(0, 1, c(1.0, 0.0));
        let h = DenseHamiltonian::new(m);
        assert!(matches!(h.evolve(1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn degenerate_spectrum_uses_projectors() {
        let s = build_l2(4).unwrap().spectral().unwrap();
        assert_eq!(s.distinct_eigenvalue_count(), Some(3));
        // e^{-i L^2 pi} = I since every eigenvalue s(s+1) is even.
        let u = s.evolve(PI);
        let id = DenseOperator::identity(4).unwrap();
        assert!(max_abs_diff(&u.into(), &id.into()).unwrap() < 1e-10);
    }

    #[test]
    fn dense_evolve_matches_diagonal_route() {
        // The spectral path on a diagonal matrix must agree with the direct
        // diagonal exponential.
        let h = build_hn(3).unwrap();
        let dense = DenseHamiltonian::new(DiagonalOperator::new(3, h.energies().iter().map(|&e| c(e, 0.0)).collect()).unwrap().to_dense());
        for t in [0.3, QUARTER_PI_TIME, 2.0] {
            let a: Operator = dense.evolve(t).unwrap().into();
            let b: Operator = h.evolve(t).into();
            assert!(max_abs_diff(&a, &b).unwrap() < 1e-12);
        }
    }
}
