use thiserror::Error;

/// Errors raised by the evaluators and parsers in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("compound degree {k} out of range for a {rows}x{cols} matrix")]
    CompoundDegree { k: usize, rows: usize, cols: usize },
    #[error("subsets overlap: {0:?} and {1:?}")]
    OverlappingSubsets(Vec<usize>, Vec<usize>),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("modulus {0} is not a supported prime")]
    BadModulus(u64),
    #[error("base slice is singular")]
    SingularBase,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("enumeration guard exceeded: {count} tuples > {limit}")]
    GuardExceeded { count: u128, limit: u128 },
    #[error("inexact division by (s!)^2 at (s,t)=({s},{t}): raw sum {raw}")]
    InexactNormalization { s: usize, t: usize, raw: String },
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
