use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("vectors live on different frequency grids")]
    GridMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("analytic transform unavailable for generator kind `{0}`")]
    UnsupportedMode(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("system is numerically zero (no eigenvalue above cutoff {cutoff:e})")]
    ZeroSystem { cutoff: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
