//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by simulator operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two bit strings that must have equal length do not.
    #[error("bit-string length mismatch: {left} vs {right}")]
    LengthMismatch {
        /// Length of the first operand.
        left: usize,
        /// Length of the second operand.
        right: usize,
    },

    /// A qubit identifier is not present in the register.
    #[error("unknown qubit identifier {0}")]
    UnknownQubit(u32),

    /// `partial_trace` was asked to keep nothing.
    #[error("partial trace requires a non-empty keep set")]
    EmptyKeepSet,

    /// A numeric or structural argument is outside its domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The ensemble has no exact closed-form guessing probability here:
    /// more than two labels with non-commuting conditional states.
    #[error("unsupported ensemble: {0}")]
    UnsupportedEnsemble(String),

    /// A joint outcome table violates no-signalling where a no-signalling
    /// table is required.
    #[error("table violates no-signalling: {0}")]
    SignallingTable(String),

    /// An exhaustive strategy-space search was asked to handle too many
    /// strategies.
    #[error("strategy space too large: {size} exceeds the limit of {limit}")]
    StrategySpaceTooLarge {
        /// Requested number of strategies.
        size: usize,
        /// Maximum supported.
        limit: usize,
    },

    /// A transcript is structurally malformed.
    #[error("malformed transcript: {0}")]
    MalformedTranscript(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
