//! Crate-wide error type.

use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// The CLI maps these onto process exit codes: precondition and domain
/// failures exit with 2, budget overruns with 3, and numerical
/// verification failures (bad brackets, unreached tolerances, mismatched
/// recomputed expansions) with 4.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A declared precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A root bracket does not contain a sign change.
    #[error("no sign change on bracket [{lo}, {hi}]")]
    Bracket { lo: String, hi: String },

    /// Iteration stopped before the requested tolerance was certified.
    #[error("tolerance not reached after {iterations} iterations (residual {residual})")]
    ToleranceNotReached { iterations: usize, residual: String },

    /// Least-squares fit attempted on degenerate data.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// An enumeration exceeded its configured budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    /// A digit word is not consistent with the transformation it claims
    /// to describe (orbit value escaped the unit interval).
    #[error("inconsistent digits at index {index}: orbit value {value} escaped [0, 1]")]
    InconsistentDigits { index: usize, value: String },

    /// Recomputed expansions did not match the requested ones.
    #[error("verification failed: {0}")]
    Verification(String),

    /// A finite digit word is shorter than a requested shift or prefix.
    #[error("sequence too short: {0}")]
    Length(String),

    /// Command-line or file input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Precondition(_) | Error::Parse(_) | Error::Length(_) => 2,
            Error::Resource(_) => 3,
            Error::Bracket { .. }
            | Error::ToleranceNotReached { .. }
            | Error::DegenerateFit(_)
            | Error::InconsistentDigits { .. }
            | Error::Verification(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
