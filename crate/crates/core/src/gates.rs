//! Standard gates and exact reference unitaries for fanout, parity and
//! inversion-on-equality.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::equiv::{equiv_up_to_global_phase, EquivalenceReport};
use crate::error::{Error, Result};
use crate::operator::{compose, max_abs_diff, DenseOperator, DiagonalOperator, Operator};
use crate::verify::SizeCaps;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum StandardGate {
    H,
    S,
    Sdag,
    Z,
    X,
    /// Control is the first target, NOT target the second.
    Cnot,
    Cz,
}

impl StandardGate {
    pub const ALL: [StandardGate; 7] = [
        StandardGate::H,
        StandardGate::S,
        StandardGate::Sdag,
        StandardGate::Z,
        StandardGate::X,
        StandardGate::Cnot,
        StandardGate::Cz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StandardGate::H => "H",
            StandardGate::S => "S",
            StandardGate::Sdag => "SDAG",
            StandardGate::Z => "Z",
            StandardGate::X => "X",
            StandardGate::Cnot => "CNOT",
            StandardGate::Cz => "CZ",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            StandardGate::Cnot | StandardGate::Cz => 2,
            _ => 1,
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            StandardGate::S => StandardGate::Sdag,
            StandardGate::Sdag => StandardGate::S,
            g => g,
        }
    }

    pub fn unitary(self) -> Operator {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let diag = |n, e: Vec<Complex64>| Operator::Diagonal(DiagonalOperator::new(n, e).expect("gate size"));
        let dense = |n, e: Vec<Complex64>| Operator::Dense(DenseOperator::new(n, e).expect("gate size"));
        match self {
            StandardGate::H => dense(
                1,
                vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0), Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            ),
            StandardGate::S => diag(1, vec![ONE, Complex64::i()]),
            StandardGate::Sdag => diag(1, vec![ONE, -Complex64::i()]),
            StandardGate::Z => diag(1, vec![ONE, -ONE]),
            StandardGate::X => dense(1, vec![ZERO, ONE, ONE, ZERO]),
            // Local index = control + 2 * target, so |c=1,t=0> (1) <-> |c=1,t=1> (3).
            StandardGate::Cnot => {
                let mut m = DenseOperator::zeros(2).expect("gate size");
                for (row, col) in [(0, 0), (2, 2), (1, 3), (3, 1)] {
                    m.set(row, col, ONE);
                }
                Operator::Dense(m)
            }
            StandardGate::Cz => diag(2, vec![ONE, ONE, ONE, -ONE]),
        }
    }

    pub fn def(self) -> GateDef {
        GateDef { name: self.name().to_string(), arity: self.arity(), unitary: self.unitary() }
    }
}

impl fmt::Display for StandardGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StandardGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "H" => Ok(StandardGate::H),
            "S" => Ok(StandardGate::S),
            "SDAG" | "SDG" | "S_DAG" => Ok(StandardGate::Sdag),
            "Z" => Ok(StandardGate::Z),
            "X" => Ok(StandardGate::X),
            "CNOT" | "CX" => Ok(StandardGate::Cnot),
            "CZ" => Ok(StandardGate::Cz),
            _ => Err(Error::UnknownGate(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateDef {
    pub name: String,
    pub arity: usize,
    pub unitary: Operator,
}

pub fn standard_gate(name: &str) -> Result<GateDef> {
    name.parse::<StandardGate>().map(StandardGate::def)
}

fn check_reference_size(what: &str, qubits: usize) -> Result<()> {
    if qubits < 2 {
        return Err(Error::InvalidSize { n: qubits, reason: "reference gates need at least 2 qubits" });
    }
    let cap = SizeCaps::default().dense_cap;
    if qubits > cap {
        return Err(Error::CapExceeded { what: what.to_string(), n: qubits, cap });
    }
    Ok(())
}

fn permutation(n: usize, map: impl Fn(usize) -> usize) -> DenseOperator {
    let mut m = DenseOperator::zeros(n).expect("checked size");
    for col in 0..1usize << n {
        m.set(map(col), col, ONE);
    }
    m
}

/// Fanout on `qubits` wires: XORs the value of `control` into every other
/// wire.
pub fn fanout_reference_with_control(qubits: usize, control: usize) -> Result<DenseOperator> {
    check_reference_size("fanout reference", qubits)?;
    if control >= qubits {
        return Err(Error::QubitOutOfRange { index: control, n: qubits });
    }
    let others = ((1usize << qubits) - 1) & !(1 << control);
    Ok(permutation(qubits, |x| if x >> control & 1 == 1 { x ^ others } else { x }))
}

/// Fanout with the control on the last wire.
pub fn fanout_reference(qubits: usize) -> Result<DenseOperator> {
    fanout_reference_with_control(qubits, qubits.saturating_sub(1))
}

/// Parity gate on `qubits` wires: XORs the parity of every other wire into
/// `accumulator`.
pub fn parity_reference_with_accumulator(qubits: usize, accumulator: usize) -> Result<DenseOperator> {
    check_reference_size("parity reference", qubits)?;
    if accumulator >= qubits {
        return Err(Error::QubitOutOfRange { index: accumulator, n: qubits });
    }
    let others = ((1usize << qubits) - 1) & !(1 << accumulator);
    Ok(permutation(qubits, |x| {
        let p = (x & others).count_ones() as usize & 1;
        x ^ (p << accumulator)
    }))
}

/// Parity gate with the accumulator on the last wire.
pub fn parity_reference(qubits: usize) -> Result<DenseOperator> {
    parity_reference_with_accumulator(qubits, qubits.saturating_sub(1))
}

/// `|abc> -> (-1)^{[a = b = c]} |abc>`: sign flip exactly on `|000>` and
/// `|111>`.
pub fn ieq_reference() -> DiagonalOperator {
    DiagonalOperator::from_fn(3, |x| if x == 0 || x == 0b111 { -ONE } else { ONE }).expect("3 qubits")
}

/// Result of restricting inversion-on-equality to a fixed third qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct CzFromIeq {
    /// Qubit 2 fixed to `|1>`, compared with CZ.
    pub cz: EquivalenceReport,
    /// Elementwise deviation of `(I (x) H) CZ (I (x) H)` from CNOT.
    pub cnot_deviation: f64,
    /// The 2-qubit diagonal left when qubit 2 is fixed to `|0>`.
    pub complementary_block: DiagonalOperator,
    /// `complementary_block` compared with `(X (x) X) CZ (X (x) X)`.
    pub complementary: EquivalenceReport,
}

pub fn cz_from_ieq(tol: f64) -> Result<CzFromIeq> {
    let ieq = ieq_reference();
    let block = |third: usize| {
        DiagonalOperator::new(2, ieq.entries()[third << 2..(third + 1) << 2].to_vec()).expect("2 qubits")
    };
    let cz = StandardGate::Cz.unitary();
    let cz_report = equiv_up_to_global_phase(&block(1).into(), &cz, tol)?;

    // H on the second qubit (the CNOT target) on both sides.
    let mut conj = DenseOperator::identity(2)?;
    let h = StandardGate::H.unitary();
    conj.left_apply(&h, &[1])?;
    let conj: Operator = conj.into();
    let sandwiched = compose(&conj, &compose(&cz, &conj)?)?;
    let cnot_deviation = max_abs_diff(&sandwiched, &StandardGate::Cnot.unitary())?;

    let mut xx = DenseOperator::identity(2)?;
    xx.left_apply(&StandardGate::X.unitary(), &[0])?;
    xx.left_apply(&StandardGate::X.unitary(), &[1])?;
    let xx: Operator = xx.into();
    let flipped_cz = compose(&xx, &compose(&cz, &xx)?)?;
    let zero_block = block(0);
    let complementary = equiv_up_to_global_phase(&zero_block.clone().into(), &flipped_cz, tol)?;

    Ok(CzFromIeq { cz: cz_report, cnot_deviation, complementary_block: zero_block, complementary })
}
