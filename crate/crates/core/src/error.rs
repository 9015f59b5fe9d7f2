use thiserror::Error;

/// Errors raised by the constructors and operations of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("two_j must be nonnegative, got {0}")]
    NegativeSpin(i64),

    #[error("label {label} (doubled) has the wrong parity for two_j = {two_j}")]
    LabelParity { two_j: u32, label: i64 },

    #[error("label {label} (doubled) lies outside -j..j for two_j = {two_j}")]
    LabelOutOfRange { two_j: u32, label: i64 },

    #[error("unsupported base {re}{im:+}i: only -1, i and -i have exact quarter-phase powers")]
    UnsupportedBase { re: i64, im: i64 },

    #[error("hypergeometric series does not terminate: {0}")]
    NonTerminating(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver failed: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, Error>;
