//! Precision contexts and the universal result record.

use serde::{Deserialize, Serialize};

use super::complex::Complex;
use super::error::{Error, Result};
use super::real::Real;

/// Guard bits folded into `eps`: `eps = 2^(-precision_bits + DEFAULT_GUARD_BITS)`.
pub const DEFAULT_GUARD_BITS: usize = 8;

/// Extra bits carried internally above `precision_bits`.
pub const WORK_GUARD_BITS: usize = 32;

/// Working precision, convergence tolerance and term caps.
///
/// Immutable once built; every operation takes it by reference.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    precision_bits: usize,
    guard_bits: usize,
    max_terms: usize,
    eps: Real,
}

impl PrecisionContext {
    /// Builds a context with the default guard bits.
    pub fn new(precision_bits: usize, max_terms: usize) -> Result<Self> {
        Self::with_guard(precision_bits, DEFAULT_GUARD_BITS, max_terms)
    }

    pub fn with_guard(precision_bits: usize, guard_bits: usize, max_terms: usize) -> Result<Self> {
        if precision_bits < 64 {
            return Err(Error::PrecisionTooLow { bits: precision_bits });
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        if guard_bits >= precision_bits / 2 {
            return Err(Error::domain("guard_bits must be below half the precision"));
        }
        let work = precision_bits + WORK_GUARD_BITS;
        let eps = Real::pow2(-(precision_bits as i64) + guard_bits as i64, work);
        Ok(PrecisionContext { precision_bits, guard_bits, max_terms, eps })
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn guard_bits(&self) -> usize {
        self.guard_bits
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn eps(&self) -> &Real {
        &self.eps
    }

    /// Precision used for intermediate arithmetic.
    pub fn work_bits(&self) -> usize {
        self.precision_bits + WORK_GUARD_BITS
    }

    /// A copy with `extra` more bits of precision and the same caps.
    pub fn elevated(&self, extra: usize) -> Self {
        let precision_bits = self.precision_bits + extra;
        let work = precision_bits + WORK_GUARD_BITS;
        PrecisionContext {
            precision_bits,
            guard_bits: self.guard_bits,
            max_terms: self.max_terms,
            eps: Real::pow2(-(precision_bits as i64) + self.guard_bits as i64, work),
        }
    }

    /// A copy with a different term cap.
    pub fn with_max_terms(&self, max_terms: usize) -> Self {
        PrecisionContext { max_terms: max_terms.max(1), ..self.clone() }
    }

    pub fn real(&self, n: i64) -> Real {
        Real::from_i64(n, self.work_bits())
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Real::ratio(num, den, self.work_bits())
    }

    pub fn parse(&self, s: &str) -> Result<Real> {
        Real::parse(s, self.work_bits())
    }

    pub fn pi(&self) -> Real {
        Real::pi(self.work_bits())
    }

    /// Decimal digits that `precision_bits` resolves.
    pub fn digits(&self) -> usize {
        ((self.precision_bits as f64) * std::f64::consts::LOG10_2).floor() as usize
    }
}

/// Free-function form of [`PrecisionContext::new`].
pub fn make_context(precision_bits: usize, max_terms: usize) -> Result<PrecisionContext> {
    PrecisionContext::new(precision_bits, max_terms)
}

/// Which route produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Asymptotic,
    Auto,
    ClosedForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Asymptotic => "asymptotic",
            Method::Auto => "auto",
            Method::ClosedForm => "closed_form",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "direct" => Ok(Method::Direct),
            "asym" | "asymptotic" => Ok(Method::Asymptotic),
            "auto" => Ok(Method::Auto),
            "closed" | "closed_form" => Ok(Method::ClosedForm),
            _ => Err(format!("unknown method {s:?} (direct, asym, auto, closed)")),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed value with its error estimate and provenance.
///
/// `err_estimate` is an absolute error bound or heuristic. Closed-form
/// asymptotic formulas report `0` as a marker: their accuracy depends on `q`,
/// not on any truncation.
#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Complex,
    pub err_estimate: Real,
    pub terms_used: usize,
    pub method: Method,
}

impl EvalResult {
    pub fn new(value: Complex, err_estimate: Real, terms_used: usize, method: Method) -> Result<Self> {
        if !value.is_finite() || !err_estimate.is_finite() {
            return Err(Error::NonFinite(format!("{method} evaluation")));
        }
        Ok(EvalResult { value, err_estimate: err_estimate.abs(), terms_used, method })
    }

    pub fn real(value: Real, err_estimate: Real, terms_used: usize, method: Method) -> Result<Self> {
        Self::new(Complex::from_real(value), err_estimate, terms_used, method)
    }

    /// A closed-form value, with the zero error marker.
    pub fn closed(value: Complex) -> Result<Self> {
        let p = value.prec();
        Self::new(value, Real::zero(p), 0, Method::ClosedForm)
    }

    /// Real part of the value.
    pub fn re(&self) -> &Real {
        &self.value.re
    }

    /// Rounds value and error to the user-facing precision of `ctx`.
    pub fn rounded(mut self, ctx: &PrecisionContext) -> Self {
        let p = ctx.precision_bits();
        self.value = self.value.with_prec(p);
        self.err_estimate = self.err_estimate.with_prec(p);
        self
    }

    /// `err_estimate / |value|`, or the absolute error when the value is zero.
    pub fn relative_err(&self) -> f64 {
        let a = self.value.abs();
        if a.is_zero() {
            self.err_estimate.to_f64()
        } else {
            (&self.err_estimate / &a).to_f64()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_definition() {
        let ctx = make_context(256, 1_000_000).unwrap();
        assert_eq!(ctx.eps().log2_abs(), -248.0);
        assert!(make_context(64, 1).is_ok());
        assert!(matches!(make_context(32, 10), Err(Error::PrecisionTooLow { bits: 32 })));
        assert!(make_context(128, 0).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        let ctx = make_context(64, 10).unwrap();
        let nan = ctx.real(-1).ln();
        assert!(EvalResult::real(nan, ctx.real(0), 0, Method::Direct).is_err());
    }
}
