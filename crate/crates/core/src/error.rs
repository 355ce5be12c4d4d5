use core::fmt;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input lies on a coordinate singularity or outside the operation's domain.
    Domain(&'static str),
    /// Soliton configuration or numerical option violates its invariants.
    InvalidConfig(&'static str),
    /// Adaptive quadrature ran out of subdivisions before reaching tolerance.
    NoConvergence {
        partial: f64,
        error_estimate: f64,
        intervals: usize,
    },
    /// A bracketed root search was handed an interval without a sign change.
    NoBracket { lower: f64, upper: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
            Error::NoConvergence {
                partial,
                error_estimate,
                intervals,
            } => write!(
                f,
                "quadrature did not converge after {intervals} intervals \
                 (partial value {partial:e}, error estimate {error_estimate:e})"
            ),
            Error::NoBracket { lower, upper } => {
                write!(f, "no sign change on [{lower}, {upper}]")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
