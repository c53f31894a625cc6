//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by signal construction, decomposition, and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The signal does not carry enough samples for the requested operation.
    #[error("signal too short: need at least {need} samples, got {got}")]
    TooShort { need: usize, got: usize },

    /// A NaN or infinite sample was encountered.
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    /// A component frequency is at or above the Nyquist limit.
    #[error("component at {frequency} Hz is not resolvable at sample rate {sample_rate} Hz")]
    NyquistViolation { frequency: f64, sample_rate: f64 },

    /// Two sequences that must share a length do not.
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    /// Too few extrema to build envelopes or continue sifting.
    #[error("insufficient extrema: {0}")]
    InsufficientExtrema(String),

    /// Fewer than two zero crossings; the dominant frequency is undefined.
    #[error("fewer than two zero crossings; dominant frequency is undefined")]
    NoZeroCrossings,

    /// The autocorrelation has no positive-lag peak above the confidence threshold.
    #[error("no autocorrelation peak above the confidence threshold")]
    NoAutocorrelationPeak,

    /// A logarithm argument left its valid domain.
    #[error("log domain violation: {0}")]
    LogDomain(String),

    /// The reference sequence for a relative measure has zero norm.
    #[error("reference has zero norm")]
    ZeroReference,

    /// CSV input does not satisfy the file contract.
    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
