//! The q-Pochhammer symbol `(a; q)_∞ = Π_{n≥0} (1 - a qⁿ)`.
//!
//! For `a = q^x` the logarithm is `-L_q(-1, x)`, so the Lambert expansion
//! with `s = -1` gives
//!
//! ```text
//! (q^x; q)_∞ ≃ √(2π)/Γ(x) · (log 1/q)^(1/2 - x) · exp( Σ_{k≠1} ζ(2-k) B_k(x) (log q)^(k-1)/k! )
//! ```
//!
//! At `x = 1` the sum stops after two terms and reproduces the classical
//! form of the Euler function `(q; q)_∞`.

use crate::kernel::{ln_gamma, rational_to_real, zeta_int, zeta_nonpositive_int};
use crate::lambert::{vanishing_index, BernoulliAt, LogPowers};
use crate::lambert::QPoint;
use crate::mp::{Complex, Error, EvalResult, Method, PrecisionContext, Real, Result};
use crate::series::{beyond_all_orders, sum_asymptotic, Term, TruncationPolicy};

fn product_terms_estimate(abs_a: f64, t: f64, bits: usize) -> f64 {
    if abs_a == 0.0 {
        return 0.0;
    }
    // |a| q^n / (1-q) < 2^-bits
    let one_minus_q = -(-t).exp_m1();
    ((abs_a.ln() - one_minus_q.ln() + bits as f64 * std::f64::consts::LN_2) / t).max(1.0)
}

fn check_cap(abs_a: f64, q: &QPoint, ctx: &PrecisionContext) -> Result<()> {
    let est = product_terms_estimate(abs_a, q.log_inv_q().to_f64(), ctx.precision_bits());
    if est > 2.0 * ctx.max_terms() as f64 {
        return Err(Error::convergence(
            format!("q-Pochhammer product (about {est:.3e} factors needed)"),
            ctx.max_terms(),
        ));
    }
    Ok(())
}

/// `Π_{n≥0} (1 - a qⁿ)` for complex `a`.
///
/// Stops once the remaining factors can change the product by less than
/// `eps` in relative terms, i.e. `|a qⁿ| / (1-q) < eps`.
pub fn pochhammer_direct(a: &Complex, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let one = Real::one(p);
    let abs_a = a.abs();
    let one_minus_q = &one - q.q();
    if &abs_a * &one_minus_q >= one {
        return Err(Error::domain("q-Pochhammer requires |a| < 1/(1-q)"));
    }
    if a.is_zero() {
        return EvalResult::real(one, Real::zero(p), 0, Method::Direct);
    }
    check_cap(abs_a.to_f64(), q, ctx)?;
    let eps = ctx.eps().with_prec(p);
    let qq = q.q().with_prec(p);
    let mut aq = a.with_prec(p);
    let mut prod = Complex::one(p);
    for n in 0..ctx.max_terms() {
        let factor = (&Complex::one(p) - &aq).with_prec(p);
        if factor.is_zero() {
            return Err(Error::domain("q-Pochhammer has a zero factor (a qⁿ = 1)"));
        }
        prod = &prod * &factor;
        aq = aq.scale(&qq);
        let tail = aq.abs() / &one_minus_q;
        if tail < eps {
            let err = prod.abs() * tail.mul_i(2);
            return EvalResult::new(prod, err, n + 1, Method::Direct);
        }
    }
    Err(Error::convergence("q-Pochhammer product", ctx.max_terms()))
}

/// `(q^x; q)_∞` for real `x > 0`, forming each factor `1 - q^(x+n)` as
/// `-expm1((x+n) log q)` while it is far from one.
pub fn pochhammer_direct_power(x: &Real, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    let p = ctx.work_bits();
    if !x.is_positive() {
        return Err(Error::domain("(q^x; q) requires x > 0"));
    }
    let x = x.with_prec(p);
    let t = q.log_inv_q().with_prec(p);
    let qx = q.pow(&x);
    check_cap(qx.to_f64(), q, ctx)?;
    let one = Real::one(p);
    let one_minus_q = -(-&t).exp_m1();
    let eps = ctx.eps().with_prec(p);
    let qq = q.q().with_prec(p);
    let tf = t.to_f64();
    let xf = x.to_f64();
    let mut aq = qx;
    let mut prod = one.clone();
    for n in 0..ctx.max_terms() {
        let factor = if (xf + n as f64) * tf < 0.5 {
            -(-(&x.add_i(n as i64) * &t)).exp_m1()
        } else {
            &one - &aq
        };
        prod = &prod * &factor;
        aq = &aq * &qq;
        let tail = &aq / &one_minus_q;
        if tail < eps {
            let err = prod.abs() * tail.mul_i(2);
            return EvalResult::real(prod, err, n + 1, Method::Direct);
        }
    }
    Err(Error::convergence("q-Pochhammer product", ctx.max_terms()))
}

/// Logarithm of the expansion of `(q^x; q)_∞`, with the magnitude of the
/// first omitted term and the number of terms used.
pub(crate) fn log_pochhammer_expansion(
    x: &Real,
    q: &QPoint,
    policy: TruncationPolicy,
    ctx: &PrecisionContext,
) -> Result<(Real, Real, usize)> {
    let p = ctx.work_bits();
    let x = x.with_prec(p);
    let lq = q.log_q().with_prec(p);
    let half = Real::ratio(1, 2, p);
    let two_pi = ctx.pi().mul_i(2);
    let base = &two_pi.ln() * &half - ln_gamma(&x, ctx)? + (&half - &x) * q.loglog_inv_q();
    let bern = BernoulliAt::new(&x, ctx);
    let mut powers = LogPowers::new(&lq);
    let vanish = vanishing_index(2, bern.special());
    let sum = sum_asymptotic(policy, 0, &Complex::from_real(base), vanish, ctx, |k| {
        if k == 1 {
            return Ok(Term::Excluded);
        }
        let z = if k == 0 {
            zeta_int(2, ctx)?
        } else {
            let r = zeta_nonpositive_int(k - 2)?;
            if num_traits::Zero::is_zero(&r) {
                return Ok(Term::Zero);
            }
            rational_to_real(&r, p)
        };
        let Some(b) = bern.get(k)? else { return Ok(Term::Zero) };
        Ok(Term::Value(Complex::from_real(z * b * powers.at(k))))
    })?;
    Ok((sum.total.re, sum.omitted, sum.terms))
}

/// The expansion of `(q^x; q)_∞` at `q = 1` for `x ∈ (0, 1]`.
///
/// `err_estimate` is `|value|` times the first omitted exponent term plus the
/// exponentially small remainder `2 e^(-4π²/log(1/q))`.
pub fn pochhammer_asymptotic(
    x: &Real,
    q: &QPoint,
    policy: TruncationPolicy,
    ctx: &PrecisionContext,
) -> Result<EvalResult> {
    let p = ctx.work_bits();
    if !x.is_positive() || x > &Real::one(p) {
        return Err(Error::domain("the q-Pochhammer expansion needs x in (0, 1]"));
    }
    let (log_v, omitted, terms) = log_pochhammer_expansion(x, q, policy, ctx)?;
    let v = log_v.exp();
    let rel = omitted + beyond_all_orders(q.log_inv_q(), -1.0, 0.0) + ctx.eps().with_prec(p);
    let err = &v * &rel;
    EvalResult::real(v, err, terms + 1, Method::Asymptotic)
}

/// `√(2π / log(1/q)) · e^(π²/(6 log q)) · q^(-1/24)`, the `q → 1` form of `(q; q)_∞`.
pub fn euler_asymptotic(q: &QPoint) -> Result<EvalResult> {
    let p = q.prec();
    let pi = Real::pi(p);
    let t = q.log_inv_q();
    let a = (pi.mul_i(2) / t).sqrt();
    let b = (pi.sqr() / q.log_q().mul_i(6)).exp();
    let c = (t / &Real::from_i64(24, p)).exp();
    EvalResult::closed(Complex::from_real(a * b * c))
}

/// `2 sin(πx) · e^(π²/(3 log q)) · q^(-(1/6 - x + x²)/2)`, the `q → 1` form of
/// `(q^x; q)_∞ (q^(1-x); q)_∞` for `0 < x < 1`.
pub fn pochhammer_reflection(x: &Real, q: &QPoint) -> Result<EvalResult> {
    let p = q.prec();
    let x = x.with_prec(p);
    if !x.is_positive() || x >= Real::one(p) {
        return Err(Error::domain("the reflection formula needs 0 < x < 1"));
    }
    let pi = Real::pi(p);
    let s = (&pi * &x).sin().mul_i(2);
    let e = (pi.sqr() / q.log_q().mul_i(3)).exp();
    let expo = -(Real::ratio(1, 6, p) - &x + x.sqr()).div_i(2);
    let pw = q.pow(&expo);
    EvalResult::closed(Complex::from_real(s * e * pw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambert::{lambert_direct, SParameter};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1_000_000).unwrap()
    }

    fn rel(a: &Real, b: &Real) -> f64 {
        ((a - b) / b).abs().to_f64()
    }

    /// `B_k(x)` in exact rational arithmetic.
    fn bernoulli_exact(k: usize, x: &num_rational::BigRational) -> num_rational::BigRational {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let mut acc = BigRational::from_integer(BigInt::from(0));
        let mut binom = BigInt::from(1);
        for j in 0..=k {
            let b = crate::kernel::bernoulli_number(j).unwrap().clone();
            let xp = num_traits::pow::pow(x.clone(), k - j);
            acc += BigRational::from_integer(binom.clone()) * b * xp;
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
        acc
    }

    #[test]
    fn reflection_factors_vanish_exactly() {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::Zero;
        let one = BigRational::from_integer(BigInt::from(1));
        for (n, d) in [(1, 4), (1, 3), (2, 7), (5, 11)] {
            let x = BigRational::new(BigInt::from(n), BigInt::from(d));
            for k in 3..=12usize {
                // ζ(2-k) [B_k(x) + B_k(1-x)]: one factor is zero for each k.
                let zeta = zeta_nonpositive_int(k - 2).unwrap();
                let sym = bernoulli_exact(k, &x) + bernoulli_exact(k, &(&one - &x));
                if k % 2 == 1 {
                    assert!(sym.is_zero(), "k={k} x={n}/{d}");
                } else {
                    assert!(zeta.is_zero(), "k={k}");
                }
                assert!((zeta * sym).is_zero());
            }
        }
    }

    #[test]
    fn euler_function_value() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        let r = pochhammer_direct(&Complex::from_real(c.ratio(1, 2)), &q, &c).unwrap();
        let want = c.parse("0.28878809508660242127889972192923078008891190484").unwrap();
        assert!(rel(r.re(), &want) < 1e-45);
        let r2 = pochhammer_direct_power(&c.real(1), &q, &c).unwrap();
        assert!(rel(r.re(), r2.re()) < 1e-70);
        let zero = pochhammer_direct(&Complex::zero(c.work_bits()), &q, &c).unwrap();
        assert_eq!(zero.re(), &c.real(1));
    }

    #[test]
    fn log_is_minus_lambert() {
        let c = ctx();
        let q = QPoint::parse("0.3", &c).unwrap();
        let x = c.parse("0.7").unwrap();
        let prod = pochhammer_direct_power(&x, &q, &c).unwrap();
        let l = lambert_direct(&SParameter::int(-1), &x, &q, &c).unwrap();
        assert!((prod.re().ln() + l.re()).abs().to_f64() < 1e-70);
    }

    #[test]
    fn expansion_matches_product() {
        let c = ctx();
        let q = QPoint::parse("0.9", &c).unwrap();
        let x = c.parse("0.3").unwrap();
        let a = pochhammer_asymptotic(&x, &q, TruncationPolicy::Optimal, &c).unwrap();
        let d = pochhammer_direct_power(&x, &q, &c).unwrap();
        assert!(rel(a.re(), d.re()) < 1e-12);
        assert!((a.re() - d.re()).abs() <= a.err_estimate.mul_i(10));
    }

    #[test]
    fn euler_form_is_the_x_one_case() {
        let c = ctx();
        let q = QPoint::parse("0.9", &c).unwrap();
        let a = pochhammer_asymptotic(&c.real(1), &q, TruncationPolicy::Optimal, &c).unwrap();
        let e = euler_asymptotic(&q).unwrap();
        assert!(rel(a.re(), e.re()) < 1e-70);
        let d = pochhammer_direct_power(&c.real(1), &q, &c).unwrap();
        assert!(rel(e.re(), d.re()) < 1e-10);
    }

    #[test]
    fn reflection_symmetry() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        let a = pochhammer_reflection(&c.parse("0.2").unwrap(), &q).unwrap();
        let b = pochhammer_reflection(&c.parse("0.8").unwrap(), &q).unwrap();
        assert!(rel(a.re(), b.re()) < 1e-70);
        assert!(pochhammer_reflection(&c.real(1), &q).is_err());
        let h = pochhammer_reflection(&c.ratio(1, 2), &q).unwrap();
        let d = pochhammer_direct_power(&c.ratio(1, 2), &q, &c).unwrap();
        assert!(rel(h.re(), &d.re().sqr()) < 1e-8);
    }

    #[test]
    fn zero_factor_rejected() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        let a = Complex::from_real(c.real(4));
        assert!(matches!(pochhammer_direct(&a, &q, &c), Err(Error::Domain(_))));
    }
}
