use thiserror::Error;

/// Library-level error type. Usage errors (bad input, mismatched orders)
/// are distinguished from arithmetic errors and broken internal invariants
/// so a caller can map them onto different exit codes.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("galois exponent {k} is not coprime to order {n}")]
    NotCoprime { k: i64, n: u32 },
    #[error("unsupported type: {0} (supported families: A (rank >= 1), D (rank >= 4), E (rank 6, 7, 8))")]
    UnsupportedType(String),
    #[error("tau series truncation too small: requires truncation >= {required}")]
    TruncationTooSmall { required: u32 },
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
