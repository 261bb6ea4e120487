use thiserror::Error;

/// Errors raised by the library.
///
/// `Precondition` and `Numerical` are refusals: the inputs were well formed but
/// a hypothesis of the requested computation does not hold.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("precondition failed: {what} (defect {defect:.3e} exceeds {tolerance:.3e})")]
    Precondition {
        what: String,
        defect: f64,
        tolerance: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn precondition(what: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        Error::Precondition {
            what: what.into(),
            defect,
            tolerance,
        }
    }

    /// True for errors that mean "the math does not apply here" rather than bad input.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Precondition { .. } | Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}
