use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max elementwise deviation {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },

    #[error("state is not physical (minimum eigenvalue {min_eigenvalue:.3e})")]
    Unphysical { min_eigenvalue: f64 },

    #[error("pair data for pair ({a}, {b}) is not physical (minimum eigenvalue {min_eigenvalue:.3e})")]
    UnphysicalPair {
        a: usize,
        b: usize,
        min_eigenvalue: f64,
    },

    #[error("site {site} out of range for {num_qubits} qubits")]
    SiteOutOfRange { site: usize, num_qubits: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
