use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at s = {re} + {im}i: {context}")]
    Pole { re: f64, im: f64, context: String },

    #[error("height |Im s| = {0} exceeds the supported range")]
    HeightOutOfRange(f64),

    #[error("order {requested} exceeds the supported maximum {max}")]
    OrderOverflow { requested: usize, max: usize },

    #[error("quadrature did not converge (estimated error {estimate:e}, tolerance {tolerance:e})")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("Hardy Z residue {residue:e} at t = {t} (value {value})")]
    HardyResidue { t: f64, value: f64, residue: f64 },

    #[error("zero count mismatch: found {found}, expected {expected}; worst window ({window_lo}, {window_hi}]")]
    ZeroCount {
        found: usize,
        expected: i64,
        window_lo: f64,
        window_hi: f64,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ordinates not strictly increasing at line {line}: {previous} followed by {next}")]
    Monotonicity {
        line: usize,
        previous: f64,
        next: f64,
    },

    #[error("zero list validation failed: {0}")]
    Validation(String),

    #[error("zero list rejected: {0}")]
    ZeroList(String),

    #[error("height grid mismatch: {0}")]
    GridMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
