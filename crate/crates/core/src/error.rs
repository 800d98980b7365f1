use thiserror::Error;

use crate::states::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("bad preset parameters: {0}")]
    BadParams(String),

    /// `context` is either `line L, column C` or a field path such as `matrix[2]`.
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("invalid density matrix: {0}")]
    Validation(ValidationReport),

    #[error("operation requires every subsystem to be a qubit (dims {0:?})")]
    NotAllQubits(Vec<usize>),

    #[error("basis optimization supports at most {max} qubits, got {got}")]
    TooManyQubits { got: usize, max: usize },

    #[error("no root bracketed for {0}")]
    NoRootBracketed(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),
}

impl Error {
    /// True for errors caused by user input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::NoConvergence { .. } | Error::NoRootBracketed(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
