use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),
    #[error("dimension mismatch: {left} qubits vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("gate acts on {gate} qubits but {targets} targets were given")]
    ArityMismatch { gate: usize, targets: usize },
    #[error("{what}: {n} qubits exceeds the cap of {cap}")]
    CapExceeded { what: String, n: usize, cap: usize },
    #[error("invalid qubit count {n}: {reason}")]
    InvalidSize { n: usize, reason: &'static str },
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
