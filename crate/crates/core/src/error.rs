use thiserror::Error;

/// Errors raised by the entailment engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Inputs built against different attribute universes, or an attribute
    /// set with bits outside its universe.
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),

    /// A numeric argument outside its admissible range (e.g. γ ∉ [0,1]).
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Enumeration over 2^n transactions would exceed the configured cap.
    #[error("resource cap exceeded: {needed} attributes to enumerate, cap is {cap}")]
    ResourceCap { needed: usize, cap: usize },

    /// Malformed rule text.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Malformed command-line value (γ, tolerance, ...).
    #[error("invalid value: {0}")]
    Usage(String),

    /// A post-solve verification failed. Indicates a bug, never bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
