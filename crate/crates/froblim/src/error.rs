//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by the engine.
///
/// Every variant corresponds to a violated contract or an exhausted budget;
/// none of them is used for ordinary control flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A polynomial image violates the degree contract of a graded map.
    DegreeMismatch(String),
    /// Buchberger exceeded the configured S-pair budget.
    BudgetExceeded { budget: usize },
    /// Group closure exceeded the configured size cap.
    GroupTooLarge { cap: usize },
    /// A user-declared abstract group order does not match the closed group.
    NotFaithful { declared: usize, closed: usize },
    /// A candidate fiber map failed injectivity during projective peeling.
    NotSplit(String),
    /// No regular summand was found below the configured degree cap.
    SearchExhausted(String),
    /// An exact decomposition was requested beyond the exact rank cap.
    ExactCapExceeded { rank: usize, cap: usize },
    /// Scenario configuration is invalid.
    ConfigInvalid(String),
    /// A-side reporting requested for an action not certified small.
    SmallnessRequired(String),
    /// I/O failure while emitting reports.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeMismatch(msg) => write!(f, "degree mismatch: {msg}"),
            Error::BudgetExceeded { budget } => {
                write!(f, "Groebner S-pair budget of {budget} exceeded")
            }
            Error::GroupTooLarge { cap } => write!(f, "group closure exceeded cap {cap}"),
            Error::NotFaithful { declared, closed } => write!(
                f,
                "declared group order {declared} does not match closed order {closed}"
            ),
            Error::NotSplit(msg) => write!(f, "split map failed: {msg}"),
            Error::SearchExhausted(msg) => write!(f, "search exhausted: {msg}"),
            Error::ExactCapExceeded { rank, cap } => {
                write!(f, "exact decomposition of rank {rank} exceeds cap {cap}")
            }
            Error::ConfigInvalid(msg) => write!(f, "invalid configuration: {msg}"),
            Error::SmallnessRequired(msg) => write!(
                f,
                "A-side output refused: {msg} (pass --assert-small to override)"
            ),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
