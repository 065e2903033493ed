use num_complex::Complex64;

use crate::basis::MAX_QUBITS;
use crate::error::{Error, Result};
use crate::operator::{apply_on_rows, Operator};

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The computational-basis state `|x>`.
    pub fn basis(n: usize, x: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::InvalidSize { n, reason: "register too large" });
        }
        if x >= 1 << n {
            return Err(Error::Invalid(format!("basis value {x} does not fit in {n} qubits")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[x] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amplitudes })
    }

    /// Wraps raw amplitudes. The caller is responsible for normalization;
    /// see [`StateVector::normalized`].
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n > MAX_QUBITS || amplitudes.len() != 1 << n {
            return Err(Error::Invalid(format!(
                "{} amplitudes do not describe a {n}-qubit state",
                amplitudes.len()
            )));
        }
        Ok(Self { n, amplitudes })
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::Invalid("cannot normalize the zero vector".into()));
        }
        self.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, x: usize) -> Complex64 {
        self.amplitudes[x]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// In-place version of [`apply_gate`].
    pub fn apply(&mut self, gate: &Operator, targets: &[usize]) -> Result<()> {
        apply_on_rows(&mut self.amplitudes, 1, self.n, gate, targets)
    }

    /// Smaller singular value of the state reshaped across the cut between
    /// `qubit` and the rest of the register. Zero iff the state is a product
    /// state across that cut.
    pub fn schmidt_residual(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { index: qubit, n: self.n });
        }
        // Gram matrix of the two rows (qubit = 0, qubit = 1).
        let (mut g00, mut g11, mut g01) = (0.0, 0.0, Complex64::new(0.0, 0.0));
        for x in (0..self.amplitudes.len()).filter(|x| x >> qubit & 1 == 0) {
            let a = self.amplitudes[x];
            let b = self.amplitudes[x | 1 << qubit];
            g00 += a.norm_sqr();
            g11 += b.norm_sqr();
            g01 += a.conj() * b;
        }
        let tr = g00 + g11;
        let det = g00 * g11 - g01.norm_sqr();
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        // lambda_min = det / lambda_max avoids cancellation in (tr - disc) / 2.
        let lambda_max = 0.5 * (tr + disc);
        let lambda_min = if lambda_max > 0.0 { (det / lambda_max).max(0.0) } else { 0.0 };
        Ok(lambda_min.sqrt())
    }
}

/// Returns `state` with `gate` applied to `targets` (gate-local qubit `j`
/// is register qubit `targets[j]`) and identity on every other qubit.
pub fn apply_gate(state: &StateVector, gate: &Operator, targets: &[usize]) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate, targets)?;
    Ok(out)
}
