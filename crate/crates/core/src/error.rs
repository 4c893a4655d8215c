//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Errors surfaced by construction, validation and solving.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input contained no points.
    EmptySample,
    /// Distance matrix is not square, not symmetric, has a nonzero diagonal
    /// or a negative entry.
    MalformedDistances(String),
    /// A metric axiom failed during construction.
    MetricViolation(String),
    /// A parameter is outside its documented domain.
    InvalidParameter(String),
    /// An exact (oracle) operation was asked to run beyond its size cap.
    ScaleExceeded {
        /// Operation name.
        what: &'static str,
        /// Hard cap.
        limit: usize,
        /// Requested size.
        actual: usize,
    },
    /// The iterative solver hit its iteration cap without either a feasible
    /// point or a proof of infeasibility.
    NoCertificate(String),
    /// The exact reference solver detected cycling.
    Cycling,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySample => write!(f, "empty sample"),
            Error::MalformedDistances(msg) => write!(f, "malformed distances: {msg}"),
            Error::MetricViolation(msg) => write!(f, "metric violation: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ScaleExceeded { what, limit, actual } => {
                write!(f, "oracle scale exceeded: {what} supports n <= {limit}, got {actual}")
            }
            Error::NoCertificate(msg) => write!(f, "no certificate: {msg}"),
            Error::Cycling => write!(f, "reference solver cycling guard triggered"),
        }
    }
}

impl core::error::Error for Error {}
