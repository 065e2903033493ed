//! Diagonal and dense operator representations.
//!
//! Dense matrices are stored row-major. Diagonal operators stay as entry
//! arrays and are only densified when composed with a dense operator.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{local_offsets, target_mask, validate_targets, MAX_QUBITS};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_size(n: usize) -> Result<usize> {
    if n > MAX_QUBITS {
        return Err(Error::InvalidSize { n, reason: "register too large" });
    }
    Ok(1 << n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalOperator {
    n: usize,
    entries: Vec<Complex64>,
}

impl DiagonalOperator {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        let dim = check_size(n)?;
        if entries.len() != dim {
            return Err(Error::Invalid(format!(
                "diagonal of length {} does not match {n} qubits",
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> Complex64) -> Result<Self> {
        let dim = check_size(n)?;
        Ok(Self { n, entries: (0..dim).map(f).collect() })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |_| ONE)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn dagger(&self) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|z| z.conj()).collect() }
    }

    /// Max over entries of `| |d|^2 - 1 |`, i.e. the elementwise deviation of
    /// `U^dagger U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        self.entries.iter().map(|z| (z.norm_sqr() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DenseOperator {
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for (i, &z) in self.entries.iter().enumerate() {
            data[i * dim + i] = z;
        }
        DenseOperator { n: self.n, data }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        let dim = check_size(n)?;
        if data.len() != dim * dim {
            return Err(Error::Invalid(format!(
                "matrix with {} entries does not match {n} qubits",
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from `f(row, col)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let dim = check_size(n)?;
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        let dim = check_size(n)?;
        Ok(Self { n, data: vec![ZERO; dim * dim] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        let dim = m.dim();
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        let dim = self.dim();
        self.data[row * dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        let dim = self.dim();
        &self.data[row * dim..(row + 1) * dim]
    }

    pub fn dagger(&self) -> Self {
        let dim = self.dim();
        Self::from_fn(self.n, |i, j| self.data[j * dim + i].conj()).expect("same size")
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&z| z * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_n(self.n, other.n)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_n(self.n, other.n)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { n: self.n, data })
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        same_n(self.n, other.n)?;
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        data.par_chunks_mut(dim).enumerate().for_each(|(i, out_row)| {
            let a_row = &self.data[i * dim..(i + 1) * dim];
            for (k, &a) in a_row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * dim..(k + 1) * dim];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        });
        Ok(Self { n: self.n, data })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Largest off-diagonal magnitude.
    pub fn off_diagonal_max(&self) -> f64 {
        let dim = self.dim();
        self.data
            .iter()
            .enumerate()
            .filter(|(k, _)| k / dim != k % dim)
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    /// Max elementwise `|A - A^dagger|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Max elementwise `|U^dagger U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.dim();
        let gram: Vec<f64> = (0..dim)
            .into_par_iter()
            .map(|i| {
                let mut worst = 0.0f64;
                for j in 0..dim {
                    let mut acc = ZERO;
                    for k in 0..dim {
                        acc += self.data[k * dim + i].conj() * self.data[k * dim + j];
                    }
                    let expected = if i == j { ONE } else { ZERO };
                    worst = worst.max((acc - expected).norm());
                }
                worst
            })
            .collect();
        gram.into_iter().fold(0.0, f64::max)
    }

    /// `self <- G * self` where `G` is `gate` embedded on `targets`.
    pub fn left_apply(&mut self, gate: &Operator, targets: &[usize]) -> Result<()> {
        let dim = self.dim();
        apply_on_rows(&mut self.data, dim, self.n, gate, targets)
    }
}

fn same_n(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    Diagonal(DiagonalOperator),
    Dense(DenseOperator),
}

impl From<DiagonalOperator> for Operator {
    fn from(d: DiagonalOperator) -> Self {
        Operator::Diagonal(d)
    }
}

impl From<DenseOperator> for Operator {
    fn from(d: DenseOperator) -> Self {
        Operator::Dense(d)
    }
}

impl Operator {
    pub fn identity_diagonal(n: usize) -> Result<Self> {
        DiagonalOperator::identity(n).map(Operator::Diagonal)
    }

    pub fn n(&self) -> usize {
        match self {
            Operator::Diagonal(d) => d.n(),
            Operator::Dense(d) => d.n(),
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.n()
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Operator::Diagonal(_))
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match self {
            Operator::Diagonal(d) => {
                if row == col {
                    d.entries()[row]
                } else {
                    ZERO
                }
            }
            Operator::Dense(d) => d.get(row, col),
        }
    }

    pub fn dagger(&self) -> Self {
        match self {
            Operator::Diagonal(d) => Operator::Diagonal(d.dagger()),
            Operator::Dense(d) => Operator::Dense(d.dagger()),
        }
    }

    pub fn to_dense(&self) -> DenseOperator {
        match self {
            Operator::Diagonal(d) => d.to_dense(),
            Operator::Dense(d) => d.clone(),
        }
    }

    pub fn unitarity_deviation(&self) -> f64 {
        match self {
            Operator::Diagonal(d) => d.unitarity_deviation(),
            Operator::Dense(d) => d.unitarity_deviation(),
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() < tol
    }

    /// Largest off-diagonal magnitude, computed exactly (zero for diagonals).
    pub fn off_diagonal_max(&self) -> f64 {
        match self {
            Operator::Diagonal(_) => 0.0,
            Operator::Dense(d) => d.off_diagonal_max(),
        }
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        match self {
            Operator::Diagonal(d) => d.entries().to_vec(),
            Operator::Dense(d) => d.diagonal(),
        }
    }
}

/// Returns the operator "apply `b` first, then `a`", i.e. the product `a b`.
pub fn compose(a: &Operator, b: &Operator) -> Result<Operator> {
    same_n(a.n(), b.n())?;
    let out = match (a, b) {
        (Operator::Diagonal(x), Operator::Diagonal(y)) => {
            let entries = x.entries().iter().zip(y.entries()).map(|(p, q)| p * q).collect();
            Operator::Diagonal(DiagonalOperator::new(x.n(), entries)?)
        }
        (Operator::Diagonal(x), Operator::Dense(y)) => {
            let dim = y.dim();
            let mut out = y.clone();
            for (row, &d) in out.data_mut().chunks_mut(dim).zip(x.entries()) {
                row.iter_mut().for_each(|z| *z *= d);
            }
            Operator::Dense(out)
        }
        (Operator::Dense(x), Operator::Diagonal(y)) => {
            let dim = x.dim();
            let mut out = x.clone();
            for row in out.data_mut().chunks_mut(dim) {
                row.iter_mut().zip(y.entries()).for_each(|(z, &d)| *z *= d);
            }
            Operator::Dense(out)
        }
        (Operator::Dense(x), Operator::Dense(y)) => Operator::Dense(x.matmul(y)?),
    };
    Ok(out)
}

/// Applies `gate`, embedded on `targets` of an `n`-qubit register, to a
/// buffer holding `2^n` rows of `row_len` entries each. With `row_len == 1`
/// this is a state-vector update; with `row_len == 2^n` it left-multiplies a
/// row-major matrix.
pub(crate) fn apply_on_rows(
    data: &mut [Complex64],
    row_len: usize,
    n: usize,
    gate: &Operator,
    targets: &[usize],
) -> Result<()> {
    if gate.n() != targets.len() {
        return Err(Error::ArityMismatch { gate: gate.n(), targets: targets.len() });
    }
    validate_targets(targets, n)?;
    debug_assert_eq!(data.len(), row_len << n);
    let offsets = local_offsets(targets);
    let mask = target_mask(targets);
    match gate {
        Operator::Diagonal(d) => {
            let entries = d.entries();
            for (l, &off) in offsets.iter().enumerate() {
                let z = entries[l];
                if z == ONE {
                    continue;
                }
                for base in (0..1usize << n).filter(|b| b & mask == 0) {
                    let r = (base | off) * row_len;
                    data[r..r + row_len].iter_mut().for_each(|v| *v *= z);
                }
            }
        }
        Operator::Dense(g) => {
            let m = offsets.len();
            let mut gathered = vec![ZERO; m];
            for base in (0..1usize << n).filter(|b| b & mask == 0) {
                for c in 0..row_len {
                    for (slot, &off) in gathered.iter_mut().zip(&offsets) {
                        *slot = data[(base | off) * row_len + c];
                    }
                    for (l, &off) in offsets.iter().enumerate() {
                        let row = g.row(l);
                        let acc: Complex64 = row.iter().zip(&gathered).map(|(a, b)| a * b).sum();
                        data[(base | off) * row_len + c] = acc;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Max elementwise `|a - b|`.
pub fn max_abs_diff(a: &Operator, b: &Operator) -> Result<f64> {
    same_n(a.n(), b.n())?;
    let worst = match (a, b) {
        (Operator::Diagonal(x), Operator::Diagonal(y)) => x
            .entries()
            .iter()
            .zip(y.entries())
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max),
        (Operator::Dense(x), Operator::Dense(y)) => x
            .data()
            .iter()
            .zip(y.data())
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max),
        _ => {
            let dim = a.dim();
            let mut worst = 0.0f64;
            for i in 0..dim {
                for j in 0..dim {
                    worst = worst.max((a.entry(i, j) - b.entry(i, j)).norm());
                }
            }
            worst
        }
    };
    Ok(worst)
}
