use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} is not a supported prime (expected one of 2, 3, 5, 7, 11, 13, 17)")]
    UnsupportedDimension(u32),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tensor product of {rows}x{cols} exceeds the maximum dimension {max}")]
    DimensionTooLarge {
        rows: usize,
        cols: usize,
        max: usize,
    },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("basis is not orthonormal: max Gram deviation = {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error(
        "operator spectrum is not a set of distinct d-th roots of unity (deviation {deviation:e})"
    )]
    BadSpectrum { deviation: f64 },

    #[error("state is not normalized: |norm - 1| = {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("{0}")]
    Unsupported(String),

    #[error("brute-force enumeration is limited to d <= 5 (got d = {0}); use the analytic bounds instead")]
    BruteForceTooLarge(u32),

    #[error("no violation for d = {d}: quantum value {quantum} <= classical bound {classical}")]
    NoViolation {
        d: u32,
        quantum: f64,
        classical: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
