use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested ±b branch is not admissible for this value of b.
    #[error("branch {branch} is not admissible for b = {b}")]
    Branch { branch: &'static str, b: f64 },

    /// An index (level, quantum number, matrix row) is out of range.
    #[error("index out of range: {0}")]
    Index(String),

    /// A perturbation denominator vanished.
    #[error("degenerate denominator: {0}")]
    Degenerate(String),

    /// The energy lies in a region where the Morse matching has no bound state.
    #[error("no bound state: {0}")]
    NoBoundState(String),

    /// An iterative routine failed to converge or produced a non-finite value.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
