use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular (det = {det})")]
    Singular { det: BigInt },

    #[error("unsupported factor count k = {0} (expected 1..=10)")]
    UnsupportedK(u32),

    #[error("invalid effect label {label:?}: {reason}")]
    InvalidEffect { label: String, reason: String },

    #[error("invalid run label {label:?}: {reason}")]
    InvalidRun { label: String, reason: String },

    #[error("factor index {index} out of range for k = {k}")]
    FactorOutOfRange { index: u32, k: u32 },

    #[error("the general mean F0 cannot be declared negligible")]
    NegligibleMean,

    #[error("deletion set has {found} runs, expected d = {expected}")]
    DeletionSize { expected: usize, found: usize },

    #[error("run {0} listed more than once")]
    DuplicateRun(String),

    #[error("effect {0} listed more than once")]
    DuplicateEffect(String),

    #[error("inadmissible deletion set: C block is singular")]
    Inadmissible,

    #[error("observation vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error(
        "{count} candidate deletion sets exceed the exhaustive cap of {cap}; \
         use the exchange method or force exhaustive search"
    )]
    CapExceeded { count: u128, cap: u128 },

    #[error("spectrum enumeration supports orders 1..=6, got {0}")]
    SpectrumOrder(usize),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
