use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index ({row}, {col}) out of bounds for a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("n = {n} exceeds the size cap {cap}")]
    SizeCap { n: u32, cap: u32 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A structural property of the reduction did not hold. This always
    /// indicates a bug, never bad input.
    #[error("structural invariant violated: {0}")]
    Structure(String),
}
