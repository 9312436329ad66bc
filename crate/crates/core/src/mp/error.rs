//! Error type shared by every operation in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("precision too low: {bits} bits requested, at least 64 required")]
    PrecisionTooLow { bits: usize },
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("unsupported region: {0}")]
    Unsupported(String),
    #[error("degree {n} exceeds the Bernoulli degree cap {cap}")]
    DegreeCap { n: usize, cap: usize },
    #[error("cannot parse number: {0:?}")]
    Parse(String),
    #[error("no convergence in {what}: term cap {cap} exceeded")]
    Convergence { what: String, cap: usize },
    #[error("non-finite intermediate value in {0}")]
    NonFinite(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("both evaluation paths failed; direct: {direct}; asymptotic: {asymptotic}")]
    BothPathsFailed { direct: Box<Error>, asymptotic: Box<Error> },
}

/// Broad class of an error, used for CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input: outside the domain, at a pole, or unsupported.
    Domain,
    /// A computation did not reach its target.
    Convergence,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::PrecisionTooLow { .. }
            | Error::Domain(_)
            | Error::Pole(_)
            | Error::Unsupported(_)
            | Error::DegreeCap { .. }
            | Error::Parse(_) => ErrorClass::Domain,
            Error::Convergence { .. }
            | Error::NonFinite(_)
            | Error::Inconsistent(_)
            | Error::BothPathsFailed { .. } => ErrorClass::Convergence,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(what: impl Into<String>, cap: usize) -> Self {
        Error::Convergence { what: what.into(), cap }
    }
}
