//! Crate-wide error type and exit-code mapping.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad user-facing input: unknown names, negative times, malformed files.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The closed-form eigenvalue construction requires a non-degenerate
    /// spectrum (c2 bounded away from zero).
    #[error("degenerate spectrum: c1 = {c1}, c2 = {c2}; eigenvalue pairs coincide")]
    DegenerateSpectrum { c1: f64, c2: f64 },

    /// A caller violated a documented precondition (e.g. non-Hermitian input
    /// to an eigendecomposition).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// A numerically verified identity failed, signalling inconsistent
    /// parameters rather than bad input (e.g. a non-pure spectral projector).
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 input error, 3 degenerate spectrum,
    /// 4 i/o failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::DegenerateSpectrum { .. } => 3,
            Error::ContractViolation(_) => 2,
            Error::InternalConsistency(_) => 2,
            Error::Io { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
