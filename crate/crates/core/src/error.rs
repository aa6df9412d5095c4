//! Error taxonomy shared by the whole engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoenigError {
    /// Operands disagree in branch count, truncation, or field.
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    /// Colon by the zero module, or by a module with an identically zero branch.
    #[error("colon by a zero divisor: {0}")]
    ZeroDivisor(String),

    /// Quotient requested of modules without the stated containment.
    #[error("containment violated: {0}")]
    NotContained(String),

    /// The truncation window is too small for the requested computation.
    #[error("insufficient truncation (advised: raise truncation to at least {advised})")]
    Precision { advised: usize },

    /// Precondition on the mathematical input not met (e.g. sharp of a regular ring).
    #[error("domain error: {0}")]
    Domain(String),

    /// The semisimple quotient does not split over the coefficient field.
    #[error("split-field error: {0}; extend the coefficient field or use rational branch data")]
    SplitField(String),

    /// An identity guaranteed by the theory failed; indicates a bug or precision loss.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// Malformed user input (parsing and validation).
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, KoenigError>;

impl KoenigError {
    pub fn shape(expected: impl Into<String>, found: impl Into<String>) -> Self {
        KoenigError::Shape { expected: expected.into(), found: found.into() }
    }

    /// Exit-code class used by the command line front end:
    /// 1 = mathematical check failure, 2 = input error, 3 = precision error.
    pub fn exit_class(&self) -> i32 {
        match self {
            KoenigError::Precision { .. } => 3,
            KoenigError::Shape { .. } | KoenigError::Input(_) => 2,
            _ => 1,
        }
    }
}
