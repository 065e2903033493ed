//! Exact simulation of parity and fanout gates built from evolution under
//! the squared total-spin Hamiltonian `J (Z_tot)^2`.
//!
//! Everything works on dense 2^n-dimensional representations. Qubit `i` is
//! 0-indexed and lives in bit `i` (value `2^i`) of a basis index, so the
//! first qubit is the least significant bit.
//!
//! The crate is organized bottom-up:
//!
//! * [`basis`], [`operator`], [`state`], [`equiv`]: index arithmetic, the
//!   two operator representations, state vectors and the global-phase
//!   equivalence primitive.
//! * [`hamiltonians`]: `H_n`, `K_n`, total-spin components, `L^2`, `L_n`
//!   and their time evolution.
//! * [`gates`]: standard gates and reference unitaries for fanout, parity
//!   and inversion-on-equality.
//! * [`circuits`]: the circuit model, builders for the parity/fanout
//!   constructions and a line-oriented text format.
//! * [`verify`]: named checks with size caps and structured results.
//! * [`explore`]: time scans that test whether a Hamiltonian yields a
//!   parity-usable diagonal.
//! * [`report`]: the machine-readable and tabular report encodings.

pub mod basis;
pub mod circuits;
pub mod equiv;
pub mod error;
pub mod explore;
pub mod gates;
pub mod hamiltonians;
pub mod operator;
pub mod report;
pub mod state;
pub mod verify;

pub use num_complex::Complex64;

pub use basis::{hamming_weight, parity, BasisIndex};
pub use circuits::{Circuit, Step, StepKind};
pub use equiv::{equiv_up_to_global_phase, EquivalenceReport};
pub use explore::{classify_parity_diagonal, default_time_grid, scan, ParityDiagonalVerdict, ScanResult};
pub use error::{Error, Result};
pub use gates::{GateDef, StandardGate};
pub use hamiltonians::{
    evolve, un, un_dagger, CouplingMatrix, DenseHamiltonian, DiagonalHamiltonian, Hamiltonian,
    SpinAxis, QUARTER_PI_TIME, THREE_QUARTER_PI_TIME,
};
pub use operator::{compose, DenseOperator, DiagonalOperator, Operator};
pub use state::{apply_gate, StateVector};
pub use verify::{run_check, run_suite, CheckParams, CheckResult, CheckStatus, Expectation, SizeCaps};

/// Default tolerance for operator equivalence checks.
pub const EQUIV_TOL: f64 = 1e-10;
/// Default tolerance for norm and unit-modulus checks.
pub const NORM_TOL: f64 = 1e-12;
