use thiserror::Error;

/// Errors across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("matrix is not unitary: max-norm defect {defect:.3e} exceeds {tol:.3e}")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("rank {rank} out of range for C({m},{n})")]
    RankOutOfRange { rank: u128, n: usize, m: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
