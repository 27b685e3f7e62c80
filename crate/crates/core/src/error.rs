use thiserror::Error;

pub type Result<T> = std::result::Result<T, DiscordError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscordError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("hermiticity violated: max |A - A^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("trace invariant violated: trace = {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("positivity invariant violated: minimum eigenvalue {min_eigenvalue:e} below -{threshold:e}")]
    NotPositive { min_eigenvalue: f64, threshold: f64 },

    #[error("vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("basis is not orthonormal: max deviation {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("simplex invariant violated: max deviation {deviation:e}")]
    InvalidSimplex { deviation: f64 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl DiscordError {
    /// Input and validation errors, as opposed to internal numerical failures.
    pub fn is_validation(&self) -> bool {
        !matches!(self, DiscordError::Numerical(_))
    }
}
