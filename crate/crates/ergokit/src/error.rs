//! Error type shared across the library and the CLI.

use thiserror::Error;

/// All failure modes of the library.
///
/// The `Display` form starts with a stable machine-parseable code
/// (`E_SOMETHING:`), which the CLI prints on a single line.
#[derive(Debug, Error)]
pub enum ErgoError {
    #[error("E_NOT_HERMITIAN: {0}")]
    NotHermitian(String),
    #[error("E_NOT_UNITARY: {0}")]
    NotUnitary(String),
    #[error("E_DIMENSION_MISMATCH: {0}")]
    DimensionMismatch(String),
    #[error("E_LENGTH_MISMATCH: {0}")]
    LengthMismatch(String),
    #[error("E_NOT_POSITIVE: {0}")]
    NotPositive(String),
    #[error("E_TRACE_NOT_ONE: {0}")]
    TraceNotOne(String),
    #[error("E_INVALID_SPECTRUM: {0}")]
    InvalidSpectrum(String),
    #[error("E_INVALID_BLOCH_PARAMETERS: {0}")]
    InvalidBlochParameters(String),
    #[error("E_INVALID_COEFFICIENTS: {0}")]
    InvalidCoefficients(String),
    #[error("E_NOT_EQUISPACED: {0}")]
    NotEquispaced(String),
    #[error("E_STRUCTURE_MISMATCH: {0}")]
    StructureMismatch(String),
    #[error("E_WRONG_DIMENSION: {0}")]
    WrongDimension(String),
    #[error("E_NOT_PURE: {0}")]
    NotPure(String),
    #[error("E_WCF_REQUIRES_TRIPARTITE: {0}")]
    WcfRequiresTripartite(String),
    #[error("E_ENTROPY_OUT_OF_RANGE: {0}")]
    EntropyOutOfRange(String),
    #[error("E_DEGENERATE_SPECTRUM: {0}")]
    DegenerateSpectrum(String),
    #[error("E_NO_CONVERGENCE: {0}")]
    NoConvergence(String),
    #[error("E_PARSE: {0}")]
    Parse(String),
    #[error("E_IO: {0}")]
    Io(#[from] std::io::Error),
    #[error("E_JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ErgoError>;

impl ErgoError {
    /// CLI process exit code: 1 for invalid input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ErgoError::NoConvergence(_) | ErgoError::DegenerateSpectrum(_) => 2,
            _ => 1,
        }
    }

    /// Stable machine-parseable code, also the prefix of `Display`.
    pub fn code(&self) -> &'static str {
        match self {
            ErgoError::NotHermitian(_) => "E_NOT_HERMITIAN",
            ErgoError::NotUnitary(_) => "E_NOT_UNITARY",
            ErgoError::DimensionMismatch(_) => "E_DIMENSION_MISMATCH",
            ErgoError::LengthMismatch(_) => "E_LENGTH_MISMATCH",
            ErgoError::NotPositive(_) => "E_NOT_POSITIVE",
            ErgoError::TraceNotOne(_) => "E_TRACE_NOT_ONE",
            ErgoError::InvalidSpectrum(_) => "E_INVALID_SPECTRUM",
            ErgoError::InvalidBlochParameters(_) => "E_INVALID_BLOCH_PARAMETERS",
            ErgoError::InvalidCoefficients(_) => "E_INVALID_COEFFICIENTS",
            ErgoError::NotEquispaced(_) => "E_NOT_EQUISPACED",
            ErgoError::StructureMismatch(_) => "E_STRUCTURE_MISMATCH",
            ErgoError::WrongDimension(_) => "E_WRONG_DIMENSION",
            ErgoError::NotPure(_) => "E_NOT_PURE",
            ErgoError::WcfRequiresTripartite(_) => "E_WCF_REQUIRES_TRIPARTITE",
            ErgoError::EntropyOutOfRange(_) => "E_ENTROPY_OUT_OF_RANGE",
            ErgoError::DegenerateSpectrum(_) => "E_DEGENERATE_SPECTRUM",
            ErgoError::NoConvergence(_) => "E_NO_CONVERGENCE",
            ErgoError::Parse(_) => "E_PARSE",
            ErgoError::Io(_) => "E_IO",
            ErgoError::Json(_) => "E_JSON",
        }
    }
}
