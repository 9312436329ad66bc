//! Multiprecision numbers, contexts and results.

mod complex;
mod context;
mod error;
mod real;

pub use complex::Complex;
pub use context::{make_context, EvalResult, Method, PrecisionContext, DEFAULT_GUARD_BITS, WORK_GUARD_BITS};
pub use error::{Error, ErrorClass, Result};
pub use real::Real;
