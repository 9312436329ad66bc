//! Arbitrary-precision Lambert series and the q-functions built on them.
//!
//! The Lambert series `L_q(s, x) = Σ_{k≥1} k^s q^(kx)/(1 - q^k)` generates
//! the q-Pochhammer symbol, the q-gamma family, Eisenstein series and the
//! Jacobi theta functions. Each function is available by direct summation
//! and by its expansion at `q = 1`, with an error estimate attached to every
//! value.
//!
//! ```
//! use lambertq::{lambert::lambert_eval, PrecisionContext, QPoint, SParameter};
//!
//! let ctx = PrecisionContext::new(128, 100_000).unwrap();
//! let q = QPoint::parse("0.99", &ctx).unwrap();
//! let r = lambert_eval(&SParameter::int(1), &ctx.real(1), &q, &ctx).unwrap();
//! // Σ σ(n) qⁿ near q = 1 grows like π²/(6 log² q).
//! assert!((r.re().to_f64() - 16_235.276).abs() < 1e-3);
//! ```

pub mod expr;
pub mod harness;
pub mod kernel;
pub mod lambert;
pub mod mp;
pub mod qgamma;
pub mod qpochhammer;
pub mod request;
pub mod series;
pub mod theta;

pub use lambert::{QPoint, SParameter};
pub use mp::{make_context, Complex, Error, ErrorClass, EvalResult, Method, PrecisionContext, Real, Result};
pub use series::TruncationPolicy;

#[cfg(doctest)]
mod book_snippets;
