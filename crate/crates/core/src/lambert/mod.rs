//! The Lambert series
//!
//! ```text
//! L_q(s, x) = Σ_{k≥1} k^s q^(kx) / (1 - q^k),   0 < q < 1, x > 0,
//! ```
//!
//! by direct summation and by its expansion at `q = 1`, plus the divisor
//! generating functions (`x = 1`) and the Eisenstein series built from them.
//!
//! The expansion has three cases, selected by the *type* of `s` rather than
//! its value. With `t = log(1/q)`:
//!
//! * `s` not a nonpositive integer:
//!   `Γ(1+s) ζ(1+s,x) t^(-1-s) - Σ_{k≥0} ζ(1-s-k) B_k(x) (log q)^(k-1)/k!`
//! * `s = 0`:
//!   `(ψ(x) + log t)/log q - Σ_{k≥1} ζ(1-k) B_k(x) (log q)^(k-1)/k!`
//! * `s = -m`:
//!   `[m ζ'(1-m,x) + (log t - H_{m-1}) B_m(x)] (log q)^(m-1)/m! - Σ_{k≠m} ζ(1+m-k) B_k(x) (log q)^(k-1)/k!`

mod asymptotic;
mod direct;
mod divisor;
mod eisenstein;
mod router;

use std::fmt;

use crate::mp::{Complex, Error, PrecisionContext, Real, Result};

pub use asymptotic::lambert_asymptotic;
pub use direct::lambert_direct;
pub use divisor::divisor_gf_asymptotic;
pub use eisenstein::{eisenstein_asymptotic, eisenstein_direct, eisenstein_modified};
pub use router::{lambert_eval, lambert_shift};
pub(crate) use asymptotic::{vanishing_index, BernoulliAt, LogPowers};
pub(crate) use router::asymptotic_route;

/// Coarse location of `q` inside `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `q < 0.1`
    NearZero,
    /// `0.1 ≤ q ≤ 0.5`
    Mid,
    /// `q > 0.5`
    NearOne,
}

/// A validated nome `0 < q < 1` with its logarithms cached.
#[derive(Clone, Debug)]
pub struct QPoint {
    q: Real,
    log_q: Real,
    log_inv_q: Real,
    loglog_inv_q: Real,
}

impl QPoint {
    pub fn new(q: &Real, ctx: &PrecisionContext) -> Result<Self> {
        let p = ctx.work_bits();
        let q = q.with_prec(p);
        if !q.is_positive() || q >= Real::one(p) {
            return Err(Error::domain("q must satisfy 0 < q < 1"));
        }
        let log_q = q.ln();
        let log_inv_q = -&log_q;
        let loglog_inv_q = log_inv_q.ln();
        Ok(QPoint { q, log_q, log_inv_q, loglog_inv_q })
    }

    /// Builds the point `q = e^(-t)` from `t = log(1/q) > 0`, keeping `t` exact.
    pub fn from_log_inv(t: &Real, ctx: &PrecisionContext) -> Result<Self> {
        let p = ctx.work_bits();
        let t = t.with_prec(p);
        if !t.is_positive() {
            return Err(Error::domain("log(1/q) must be positive"));
        }
        let q = (-&t).exp();
        let loglog_inv_q = t.ln();
        Ok(QPoint { q, log_q: -&t, log_inv_q: t, loglog_inv_q })
    }

    /// Parses a decimal literal.
    pub fn parse(s: &str, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(&ctx.parse(s)?, ctx)
    }

    pub fn q(&self) -> &Real {
        &self.q
    }

    /// `log q < 0`.
    pub fn log_q(&self) -> &Real {
        &self.log_q
    }

    /// `log(1/q) > 0`.
    pub fn log_inv_q(&self) -> &Real {
        &self.log_inv_q
    }

    /// `log log(1/q)`.
    pub fn loglog_inv_q(&self) -> &Real {
        &self.loglog_inv_q
    }

    pub fn prec(&self) -> usize {
        self.q.prec()
    }

    pub fn regime(&self) -> Regime {
        let v = self.q.to_f64();
        if v < 0.1 {
            Regime::NearZero
        } else if v <= 0.5 {
            Regime::Mid
        } else {
            Regime::NearOne
        }
    }

    /// `q^a` for real `a`.
    pub fn pow(&self, a: &Real) -> Real {
        (a * &self.log_q).exp()
    }

    /// The point `q^n` for a positive integer `n`.
    pub fn power_point(&self, n: u32, ctx: &PrecisionContext) -> Result<QPoint> {
        QPoint::from_log_inv(&self.log_inv_q.mul_i(n as i64), ctx)
    }
}

/// The exponent `s` of the Lambert series.
///
/// Nonpositive integers select the special cases of the expansion only when
/// passed as [`SParameter::Integer`]; a complex value that happens to equal
/// `-2` is treated as a general `s`.
#[derive(Clone, Debug)]
pub enum SParameter {
    Integer(i64),
    Complex(Complex),
}

/// Which branch of the expansion applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SCase {
    /// `s` is not a nonpositive integer.
    General,
    /// `s = 0`.
    Zero,
    /// `s = -m`, `m ≥ 1`.
    NegativeInteger(u32),
}

impl SParameter {
    pub fn int(n: i64) -> Self {
        SParameter::Integer(n)
    }

    pub fn real(r: Real) -> Self {
        SParameter::Complex(Complex::from_real(r))
    }

    pub fn case(&self) -> SCase {
        match self {
            SParameter::Integer(0) => SCase::Zero,
            SParameter::Integer(n) if *n < 0 => SCase::NegativeInteger(n.unsigned_abs() as u32),
            _ => SCase::General,
        }
    }

    pub fn to_complex(&self, prec: usize) -> Complex {
        match self {
            SParameter::Integer(n) => Complex::from_real(Real::from_i64(*n, prec)),
            SParameter::Complex(c) => c.with_prec(prec),
        }
    }

    pub(crate) fn as_integer(&self) -> Option<i64> {
        match self {
            SParameter::Integer(n) => Some(*n),
            SParameter::Complex(_) => None,
        }
    }

    pub(crate) fn re_f64(&self) -> f64 {
        match self {
            SParameter::Integer(n) => *n as f64,
            SParameter::Complex(c) => c.re.to_f64(),
        }
    }

    pub(crate) fn im_f64(&self) -> f64 {
        match self {
            SParameter::Integer(_) => 0.0,
            SParameter::Complex(c) => c.im.to_f64(),
        }
    }
}

impl fmt::Display for SParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SParameter::Integer(n) => write!(f, "{n}"),
            SParameter::Complex(c) if c.is_real() => write!(f, "{}", c.re.to_sci(17)),
            SParameter::Complex(c) => write!(f, "{}{:+}i", c.re.to_sci(17), c.im.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qpoint_validation() {
        let ctx = PrecisionContext::new(128, 100).unwrap();
        assert!(QPoint::parse("0", &ctx).is_err());
        assert!(QPoint::parse("1", &ctx).is_err());
        assert!(QPoint::parse("1.5", &ctx).is_err());
        let q = QPoint::parse("0.5", &ctx).unwrap();
        assert!(q.log_q().is_negative());
        assert_eq!(q.log_inv_q(), &-q.log_q());
        assert_eq!(q.regime(), Regime::Mid);
        assert_eq!(QPoint::parse("0.05", &ctx).unwrap().regime(), Regime::NearZero);
        assert_eq!(QPoint::parse("0.95", &ctx).unwrap().regime(), Regime::NearOne);
    }

    #[test]
    fn case_dispatch_by_type() {
        assert_eq!(SParameter::int(0).case(), SCase::Zero);
        assert_eq!(SParameter::int(-3).case(), SCase::NegativeInteger(3));
        assert_eq!(SParameter::int(2).case(), SCase::General);
        let near = SParameter::real(Real::from_i64(-2, 64));
        assert_eq!(near.case(), SCase::General);
    }
}
