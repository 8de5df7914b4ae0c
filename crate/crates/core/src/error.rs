use thiserror::Error;

/// Errors raised by the analysis modules.
///
/// Every variant is a violated precondition or a refused computation; the
/// command-line front end maps all of them to exit code 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The PMF has no mass at zero, so its left extremity is positive and it
    /// cannot be discretely infinitely divisible as given.
    #[error("left extremity positive: not DID; shift first (p_0 = {p0})")]
    LeftExtremityPositive { p0: f64 },

    #[error("numeric instability: g(theta) increased from {previous} to {current} at theta = {theta}")]
    NumericInstability { theta: f64, previous: f64, current: f64 },

    /// Mass at zero requested for a law whose Lévy measure is infinite.
    #[error("infinite-measure analogue out of scope: F_n(0) = 0 for an infinite Lévy measure")]
    InfiniteLevyMeasure,

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("containment violated: {} realization(s) outside the predicted support, first {:?}", .values.len(), .values.first())]
    Containment { values: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
