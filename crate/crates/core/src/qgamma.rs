//! The q-gamma function and its logarithmic derivatives.
//!
//! ```text
//! Γ_q(x) = (1-q)^(1-x) (q; q)_∞ / (q^x; q)_∞            0 < q < 1
//! Γ_q(x) = q^((x-1)(x-2)/2) Γ_{1/q}(x)                   q > 1
//! ψ_q(x) = d/dx log Γ_q(x) = -log(1-q) + log q · L_q(0, x)
//! ψ_q^(m)(x) = (log q)^(m+1) L_q(m, x)                   m ≥ 1
//! ```
//!
//! The expansions at `q = 1` are written for `x ∈ (0, 1]`; larger `x` is
//! brought down with `Γ_q(x+1) = [x]_q Γ_q(x)` and its derivatives.

use serde::{Deserialize, Serialize};

use crate::kernel::{
    digamma, ln_gamma, polygamma, polylog_with_err, rational_to_real, zeta_nonpositive_int,
};
use crate::lambert::{lambert_direct, vanishing_index, BernoulliAt, LogPowers, QPoint, SParameter};
use crate::mp::{Complex, Error, EvalResult, Method, PrecisionContext, Real, Result};
use crate::qpochhammer::pochhammer_direct_power;
use crate::series::{sum_asymptotic, Term, TruncationPolicy};

/// A base `q > 0`, `q ≠ 1`, paired with the nome in `(0, 1)` that the
/// evaluation actually uses.
#[derive(Clone, Debug)]
pub struct QBase {
    q: Real,
    ln_q: Real,
    point: QPoint,
    inverted: bool,
}

impl QBase {
    pub fn new(q: &Real, ctx: &PrecisionContext) -> Result<Self> {
        let p = ctx.work_bits();
        let q = q.with_prec(p);
        if !q.is_positive() {
            return Err(Error::domain("q must be positive"));
        }
        let one = Real::one(p);
        if q == one {
            return Err(Error::domain("q = 1 is the classical limit; use the ordinary gamma function"));
        }
        let ln_q = q.ln();
        let inverted = q > one;
        let point = if inverted { QPoint::from_log_inv(&ln_q, ctx)? } else { QPoint::new(&q, ctx)? };
        Ok(QBase { q, ln_q, point, inverted })
    }

    pub fn parse(s: &str, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(&ctx.parse(s)?, ctx)
    }

    pub fn q(&self) -> &Real {
        &self.q
    }

    pub fn ln_q(&self) -> &Real {
        &self.ln_q
    }

    /// The nome in `(0, 1)`: `q` itself or `1/q`.
    pub fn point(&self) -> &QPoint {
        &self.point
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    /// `q^((x-1)(x-2)/2)`, the factor relating `Γ_q` to `Γ_{1/q}`.
    fn inversion_factor(&self, x: &Real) -> Real {
        (&self.ln_q * &(x.add_i(-1) * x.add_i(-2))).div_i(2).exp()
    }
}

impl From<QPoint> for QBase {
    fn from(point: QPoint) -> Self {
        QBase { q: point.q().clone(), ln_q: point.log_q().clone(), point, inverted: false }
    }
}

fn positive_x(x: &Real, p: usize) -> Result<Real> {
    if !x.is_positive() {
        return Err(Error::domain("the q-gamma family is evaluated for x > 0"));
    }
    Ok(x.with_prec(p))
}

/// Splits `x > 0` as `x = xr + n` with `xr ∈ (0, 1]`.
fn reduce(x: &Real, ctx: &PrecisionContext) -> Result<(Real, usize)> {
    let p = ctx.work_bits();
    if x <= &Real::one(p) {
        return Ok((x.clone(), 0));
    }
    let c = x.ceil();
    let n = c.to_i64().filter(|n| (*n as usize) <= ctx.max_terms()).ok_or_else(|| {
        Error::convergence("functional-equation reduction", ctx.max_terms())
    })?;
    Ok((x - &Real::from_i64(n - 1, p), n as usize - 1))
}

fn rel_of(r: &EvalResult) -> Real {
    let a = r.value.abs();
    if a.is_zero() {
        r.err_estimate.clone()
    } else {
        &r.err_estimate / &a
    }
}

/// `Γ_q(x)` from the infinite products.
pub fn qgamma_direct(x: &Real, q: &QBase, ctx: &PrecisionContext) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let x = positive_x(x, p)?;
    let pt = q.point();
    let euler = pochhammer_direct_power(&Real::one(p), pt, ctx)?;
    let shifted = pochhammer_direct_power(&x, pt, ctx)?;
    let one_minus_q = -pt.log_q().exp_m1();
    let mut v = (&one_minus_q.ln() * &(Real::one(p) - &x)).exp() * euler.re() / shifted.re();
    if q.is_inverted() {
        v = v * q.inversion_factor(&x);
    }
    let rel = rel_of(&euler) + rel_of(&shifted) + ctx.eps().with_prec(p);
    let err = v.abs() * rel;
    EvalResult::real(v, err, euler.terms_used + shifted.terms_used, Method::Direct)
}

/// `log Γ_q(x)` by the expansion, for `x ∈ (0, 1]` and any `log q ≠ 0`.
fn log_qgamma_expansion(
    x: &Real,
    lq: &Real,
    policy: TruncationPolicy,
    ctx: &PrecisionContext,
) -> Result<(Real, Real, usize)> {
    let p = ctx.work_bits();
    // log(log q / (q - 1)) + x log q / 4
    let inner = (lq / &lq.exp_m1()).ln() + (lq * x).div_i(4);
    let base = ln_gamma(x, ctx)? + x.add_i(-1) * inner;
    let bern = BernoulliAt::new(x, ctx);
    let mut powers = LogPowers::new(lq);
    let vanish = vanishing_index(2, bern.special());
    let sum = sum_asymptotic(policy, 3, &Complex::from_real(base), vanish, ctx, |k| {
        let r = zeta_nonpositive_int(k - 2)?;
        if num_traits::Zero::is_zero(&r) {
            return Ok(Term::Zero);
        }
        let Some(b) = bern.get(k)? else { return Ok(Term::Zero) };
        Ok(Term::Value(Complex::from_real(-(rational_to_real(&r, p) * b * powers.at(k)))))
    })?;
    Ok((sum.total.re, sum.omitted, sum.terms))
}

/// `[y]_q = (1 - q^y)/(1 - q)`.
fn q_number(y: &Real, lq: &Real) -> Real {
    (y * lq).exp_m1() / lq.exp_m1()
}

/// `Γ_q(x)` by its expansion at `q = 1`.
///
/// `err_estimate` is `|value|` times the first omitted exponent term plus
/// `4 e^(-4π²/log(1/q))`.
pub fn qgamma_asymptotic(x: &Real, q: &QBase, policy: TruncationPolicy, ctx: &PrecisionContext) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let x = positive_x(x, p)?;
    let pt = q.point();
    let lq = pt.log_q().with_prec(p);
    let (xr, n) = reduce(&x, ctx)?;
    let (log_v, omitted, terms) = log_qgamma_expansion(&xr, &lq, policy, ctx)?;
    let mut v = log_v.exp();
    for j in 0..n {
        v = v * q_number(&xr.add_i(j as i64), &lq);
    }
    if q.is_inverted() {
        v = v * q.inversion_factor(&x);
    }
    let remainder = remainder_scale(pt.log_inv_q()).mul_i(4);
    let rel = omitted + remainder + ctx.eps().with_prec(p).mul_i(n as i64 + 1);
    let err = v.abs() * rel;
    EvalResult::real(v, err, terms + 1, Method::Asymptotic)
}

/// The same expansion evaluated with `log q > 0` as written, without the
/// inversion to `1/q`. Only for comparing the two routes when `q > 1`.
pub fn qgamma_asymptotic_unreduced(
    x: &Real,
    q: &QBase,
    policy: TruncationPolicy,
    ctx: &PrecisionContext,
) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let x = positive_x(x, p)?;
    if x > Real::one(p) {
        return Err(Error::domain("the unreduced expansion is only for x in (0, 1]"));
    }
    let (log_v, omitted, terms) = log_qgamma_expansion(&x, &q.ln_q().with_prec(p), policy, ctx)?;
    let v = log_v.exp();
    let err = v.abs() * (omitted + ctx.eps().with_prec(p));
    EvalResult::real(v, err, terms + 1, Method::Asymptotic)
}

/// `e^(-4π²/t)`.
fn remainder_scale(t: &Real) -> Real {
    let two_pi = Real::pi(t.prec()).mul_i(2);
    (-(two_pi.sqr() / t)).exp()
}

/// `π/sin(πx) · (q-1)/log q · q^(x(x-1)/2)`, the `q → 1` form of
/// `Γ_q(x) Γ_q(1-x)` for `0 < x < 1`.
pub fn qgamma_reflection(x: &Real, q: &QBase) -> Result<EvalResult> {
    let p = q.q().prec();
    let x = x.with_prec(p);
    if !x.is_positive() || x >= Real::one(p) {
        return Err(Error::domain("the reflection formula needs 0 < x < 1"));
    }
    let pi = Real::pi(p);
    let lq = q.ln_q();
    let a = &pi / &(&pi * &x).sin();
    let b = lq.exp_m1() / lq;
    let c = (lq * &(&x * &x.add_i(-1))).div_i(2).exp();
    EvalResult::closed(Complex::from_real(a * b * c))
}

/// `Γ_q(1/2) ≃ √(π (q-1) / (q^(1/8) log q))`.
pub fn qgamma_half(q: &QBase) -> Result<EvalResult> {
    let p = q.q().prec();
    let lq = q.ln_q();
    let num = Real::pi(p) * lq.exp_m1();
    let den = lq * &lq.div_i(8).exp();
    EvalResult::closed(Complex::from_real((num / den).sqrt()))
}

/// Which algebraically equivalent form of the q-digamma expansion to sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DigammaForm {
    /// `ψ(x) + log(log q/(q-1)) - Σ_{k≥1} ζ(1-k) B_k(x) (log q)^k/k!`
    #[default]
    Compact,
    /// `ψ(x) + Σ_{k≥1} ζ(1-k) [1 - B_k(x)] (log q)^k/k!`
    Expanded,
}

impl std::str::FromStr for DigammaForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "compact" => Ok(DigammaForm::Compact),
            "expanded" => Ok(DigammaForm::Expanded),
            _ => Err(format!("unknown digamma form {s:?}")),
        }
    }
}

fn direct_terms_estimate(x: f64, t: f64, bits: usize) -> f64 {
    let one_minus_q = -(-t).exp_m1();
    ((bits as f64 * std::f64::consts::LN_2 - one_minus_q.ln()) / t - x).max(1.0)
}

/// `ψ_q(x)` with the sum `Σ_{n≥0} q^(n+x)/(1 - q^(n+x))` taken term by term.
pub fn qdigamma_direct(x: &Real, q: &QBase, ctx: &PrecisionContext) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let x = positive_x(x, p)?;
    let pt = q.point();
    let t = pt.log_inv_q().with_prec(p);
    let tf = t.to_f64();
    let est = direct_terms_estimate(x.to_f64(), tf, ctx.precision_bits());
    if est > 2.0 * ctx.max_terms() as f64 {
        return Err(Error::convergence(
            format!("q-digamma sum (about {est:.3e} terms needed)"),
            ctx.max_terms(),
        ));
    }
    let one = Real::one(p);
    let one_minus_q = -(-&t).exp_m1();
    let qq = pt.q().with_prec(p);
    let eps = ctx.eps().with_prec(p);
    let xf = x.to_f64();
    let mut u = pt.pow(&x);
    let mut sum = Real::zero(p);
    for n in 0..ctx.max_terms() {
        let y = x.add_i(n as i64);
        let denom = if (xf + n as f64) * tf < 0.5 { -(-(&y * &t)).exp_m1() } else { &one - &u };
        let term = &u / &denom;
        sum = &sum + &term;
        let tail = &term * &qq / &one_minus_q;
        if tail <= &eps * &sum {
            let lq = pt.log_q();
            let mut v = -one_minus_q.ln() + lq * &sum;
            let mut err = lq.abs() * tail;
            if q.is_inverted() {
                v = v + x.add_i(-1) * q.ln_q() - q.ln_q().div_i(2);
            }
            err = Real::max_of(&err, &(&eps * &v.abs()));
            return EvalResult::real(v, err, n + 1, Method::Direct);
        }
        u = &u * &qq;
    }
    Err(Error::convergence("q-digamma sum", ctx.max_terms()))
}

/// `ψ_q(x)` by its expansion at `q = 1`.
///
/// `err_estimate` is the first omitted term plus `4π e^(-4π²/log(1/q))`.
pub fn qdigamma_asymptotic(
    x: &Real,
    q: &QBase,
    form: DigammaForm,
    policy: TruncationPolicy,
    ctx: &PrecisionContext,
) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let x = positive_x(x, p)?;
    let pt = q.point();
    let lq = pt.log_q().with_prec(p);
    let (xr, n) = reduce(&x, ctx)?;
    let mut base = digamma(&xr, ctx)?;
    if form == DigammaForm::Compact {
        base = base + (&lq / &lq.exp_m1()).ln();
    }
    let bern = BernoulliAt::new(&xr, ctx);
    let mut powers = LogPowers::new(&lq);
    let vanish = match form {
        DigammaForm::Compact => vanishing_index(1, bern.special()),
        DigammaForm::Expanded => None,
    };
    let sum = sum_asymptotic(policy, 1, &Complex::from_real(base), vanish, ctx, |k| {
        let r = zeta_nonpositive_int(k - 1)?;
        if num_traits::Zero::is_zero(&r) {
            return Ok(Term::Zero);
        }
        let z = rational_to_real(&r, p);
        let c = &lq * &powers.at(k);
        let v = match form {
            DigammaForm::Compact => {
                let Some(b) = bern.get(k)? else { return Ok(Term::Zero) };
                -(z * b * c)
            }
            DigammaForm::Expanded => {
                let b = bern.get(k)?.unwrap_or_else(|| Real::zero(p));
                let f = Real::one(p) - b;
                if f.is_zero() {
                    return Ok(Term::Zero);
                }
                z * f * c
            }
        };
        Ok(Term::Value(Complex::from_real(v)))
    })?;
    let mut v = sum.total.re;
    for j in 0..n {
        let u = pt.pow(&xr.add_i(j as i64));
        v = v - &lq * &(&u / &(Real::one(p) - &u));
    }
    if q.is_inverted() {
        v = v + x.add_i(-1) * q.ln_q() - q.ln_q().div_i(2);
    }
    let two_pi = Real::pi(p).mul_i(2);
    let remainder = two_pi.mul_i(2) * remainder_scale(pt.log_inv_q());
    let floor = ctx.eps().with_prec(p) * v.abs();
    let err = Real::max_of(&(sum.omitted + remainder), &floor);
    EvalResult::real(v, err, sum.terms + 1, Method::Asymptotic)
}

/// `ψ_q^(m)(x) = (log q)^(m+1) L_q(m, x)` by direct summation.
pub fn qpolygamma_direct(m: u32, x: &Real, q: &QBase, ctx: &PrecisionContext) -> Result<EvalResult> {
    if m == 0 {
        return qdigamma_direct(x, q, ctx);
    }
    let p = ctx.work_bits();
    let x = positive_x(x, p)?;
    let pt = q.point();
    let scale = pt.log_q().powi(m as i64 + 1);
    let l = lambert_direct(&SParameter::int(m as i64), &x, pt, ctx)?;
    let mut v = l.re() * &scale;
    if q.is_inverted() && m == 1 {
        v = v + q.ln_q();
    }
    let err = Real::max_of(&(&l.err_estimate * &scale.abs()), &(ctx.eps().with_prec(p) * v.abs()));
    EvalResult::real(v, err, l.terms_used, Method::Direct)
}

/// `ψ_q^(m)(x)` by `ψ^(m)(x) - Σ_{k≥0} ζ(1-m-k) B_k(x) (log q)^(m+k)/k!`.
///
/// `err_estimate` is the first omitted term plus `2 (2π)^(m+1) e^(-4π²/log(1/q))`.
pub fn qpolygamma_asymptotic(
    m: u32,
    x: &Real,
    q: &QBase,
    policy: TruncationPolicy,
    ctx: &PrecisionContext,
) -> Result<EvalResult> {
    if m == 0 {
        return qdigamma_asymptotic(x, q, DigammaForm::Compact, policy, ctx);
    }
    let p = ctx.work_bits();
    let x = positive_x(x, p)?;
    let pt = q.point();
    let lq = pt.log_q().with_prec(p);
    let scale = lq.powi(m as i64 + 1);
    let (xr, n) = reduce(&x, ctx)?;
    let base = polygamma(m, &xr, ctx)?;
    let bern = BernoulliAt::new(&xr, ctx);
    let mut powers = LogPowers::new(&lq);
    let a = 1 - m as i64;
    let vanish = vanishing_index(a, bern.special());
    let sum = sum_asymptotic(policy, 0, &Complex::from_real(base), vanish, ctx, |k| {
        let r = zeta_nonpositive_int(m as usize + k - 1)?;
        if num_traits::Zero::is_zero(&r) {
            return Ok(Term::Zero);
        }
        let Some(b) = bern.get(k)? else { return Ok(Term::Zero) };
        Ok(Term::Value(Complex::from_real(-(rational_to_real(&r, p) * b * powers.at(k) * &scale))))
    })?;
    let mut v = sum.total.re;
    let mut extra_err = Real::zero(p);
    let mut extra_terms = 0;
    let neg_m = Complex::from_real(Real::from_i64(-(m as i64), p));
    for j in 0..n {
        let z = Complex::from_real(pt.pow(&xr.add_i(j as i64)));
        let (li, tail, used) = polylog_with_err(&neg_m, &z, ctx)?;
        v = v - &scale * &li.re;
        extra_err = extra_err + tail * scale.abs();
        extra_terms += used;
    }
    if q.is_inverted() && m == 1 {
        v = v + q.ln_q();
    }
    let two_pi = Real::pi(p).mul_i(2);
    let remainder = two_pi.powi(m as i64 + 1).mul_i(2) * remainder_scale(pt.log_inv_q());
    let floor = ctx.eps().with_prec(p) * v.abs();
    let err = Real::max_of(&(sum.omitted + remainder + extra_err), &floor);
    EvalResult::real(v, err, sum.terms + 1 + extra_terms, Method::Asymptotic)
}

/// The `q → 1` form of `ψ_q^(m)(x) - (-1)^m ψ_q^(m)(1-x)` for `0 < x < 1`:
/// `-π cot(πx) + (x - 1/2) log q` for `m = 0`, `π² csc²(πx) + log q` for
/// `m = 1`, and the classical `ψ^(m)(x) - (-1)^m ψ^(m)(1-x)` beyond.
pub fn qpolygamma_reflection(m: u32, x: &Real, q: &QBase, ctx: &PrecisionContext) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let x = x.with_prec(p);
    if !x.is_positive() || x >= Real::one(p) {
        return Err(Error::domain("the reflection formula needs 0 < x < 1"));
    }
    let pi = ctx.pi();
    let lq = q.ln_q().with_prec(p);
    let v = match m {
        0 => -(&pi / &(&pi * &x).tan()) + (&x - &ctx.ratio(1, 2)) * &lq,
        1 => (&pi / &(&pi * &x).sin()).sqr() + &lq,
        _ => {
            let a = polygamma(m, &x, ctx)?;
            let b = polygamma(m, &(Real::one(p) - &x), ctx)?;
            if m % 2 == 0 {
                a - b
            } else {
                a + b
            }
        }
    };
    EvalResult::closed(Complex::from_real(v))
}

/// Directly evaluated `ψ_q^(m)(x) - (-1)^m ψ_q^(m)(1-x)` minus its `q → 1`
/// reflection form. Exponentially small as `q → 1`.
pub fn reflection_residual(m: u32, x: &Real, q: &QBase, ctx: &PrecisionContext) -> Result<Real> {
    let p = ctx.work_bits();
    let a = qpolygamma_direct(m, x, q, ctx)?;
    let b = qpolygamma_direct(m, &(Real::one(p) - x), q, ctx)?;
    let lhs = if m % 2 == 0 { a.re() - b.re() } else { a.re() + b.re() };
    let rhs = qpolygamma_reflection(m, x, q, ctx)?;
    Ok(lhs - rhs.re())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1_000_000).unwrap()
    }

    fn rel(a: &Real, b: &Real) -> f64 {
        ((a - b) / b).abs().to_f64()
    }

    #[test]
    fn base_validation() {
        let c = ctx();
        assert!(QBase::parse("1", &c).is_err());
        assert!(QBase::parse("-0.5", &c).is_err());
        let b = QBase::parse("2", &c).unwrap();
        assert!(b.is_inverted());
        assert!(rel(b.point().q(), &c.ratio(1, 2)) < 1e-70);
    }

    #[test]
    fn integer_points() {
        let c = ctx();
        let q = QBase::parse("0.5", &c).unwrap();
        let one = qgamma_direct(&c.real(1), &q, &c).unwrap();
        assert!((one.re() - &c.real(1)).abs().to_f64() < 1e-70);
        // Γ_q(3) = [2]_q = 1 + q
        let three = qgamma_direct(&c.real(3), &q, &c).unwrap();
        assert!(rel(three.re(), &c.parse("1.5").unwrap()) < 1e-70);
        let q2 = QBase::parse("2", &c).unwrap();
        let three = qgamma_direct(&c.real(3), &q2, &c).unwrap();
        assert!(rel(three.re(), &c.real(3)) < 1e-70);
    }

    #[test]
    fn expansion_matches_products() {
        let c = ctx();
        let q = QBase::parse("0.9", &c).unwrap();
        for x in ["0.3", "1", "2.7"] {
            let x = c.parse(x).unwrap();
            let a = qgamma_asymptotic(&x, &q, TruncationPolicy::Optimal, &c).unwrap();
            let d = qgamma_direct(&x, &q, &c).unwrap();
            assert!((a.re() - d.re()).abs() <= a.err_estimate.mul_i(10), "{}", rel(a.re(), d.re()));
        }
    }

    #[test]
    fn half_is_exact_in_the_expansion() {
        let c = ctx();
        let q = QBase::parse("0.95", &c).unwrap();
        let a = qgamma_asymptotic(&c.ratio(1, 2), &q, TruncationPolicy::Optimal, &c).unwrap();
        let h = qgamma_half(&q).unwrap();
        assert!(rel(a.re(), h.re()) < 1e-70);
        assert_eq!(a.terms_used, 1);
    }

    #[test]
    fn inversion_agrees_with_unreduced_formula() {
        let c = ctx();
        let q = QBase::parse("1.1", &c).unwrap();
        let x = c.parse("0.4").unwrap();
        let a = qgamma_asymptotic(&x, &q, TruncationPolicy::Optimal, &c).unwrap();
        let u = qgamma_asymptotic_unreduced(&x, &q, TruncationPolicy::Optimal, &c).unwrap();
        assert!(rel(a.re(), u.re()) < 1e-60, "{}", rel(a.re(), u.re()));
    }

    #[test]
    fn digamma_forms_agree() {
        let c = ctx();
        let q = QBase::parse("0.8", &c).unwrap();
        let x = c.parse("0.35").unwrap();
        let d = qdigamma_direct(&x, &q, &c).unwrap();
        for form in [DigammaForm::Compact, DigammaForm::Expanded] {
            let a = qdigamma_asymptotic(&x, &q, form, TruncationPolicy::Optimal, &c).unwrap();
            assert!((a.re() - d.re()).abs() <= a.err_estimate.mul_i(10), "{form:?}");
        }
    }

    #[test]
    fn digamma_matches_lambert_form() {
        let c = ctx();
        let q = QBase::parse("0.4", &c).unwrap();
        let x = c.parse("1.7").unwrap();
        let d = qdigamma_direct(&x, &q, &c).unwrap();
        let l = lambert_direct(&SParameter::int(0), &x, q.point(), &c).unwrap();
        let v = -(Real::one(c.work_bits()) - q.q()).ln() + q.ln_q() * l.re();
        assert!((d.re() - &v).abs().to_f64() < 1e-70);
    }

    #[test]
    fn digamma_inversion_by_difference() {
        // ψ_q(x) for q > 1 against a numerical derivative of log Γ_q.
        let c = ctx();
        let q = QBase::parse("1.5", &c).unwrap();
        let x = c.parse("0.6").unwrap();
        let h = c.parse("1e-20").unwrap();
        let g1 = qgamma_direct(&(&x + &h), &q, &c).unwrap();
        let g0 = qgamma_direct(&(&x - &h), &q, &c).unwrap();
        let fd = (g1.re().ln() - g0.re().ln()) / h.mul_i(2);
        let d = qdigamma_direct(&x, &q, &c).unwrap();
        assert!((d.re() - &fd).abs().to_f64() < 1e-30);
        let a = qdigamma_asymptotic(&x, &q, DigammaForm::Compact, TruncationPolicy::Optimal, &c).unwrap();
        assert!((a.re() - d.re()).abs() <= a.err_estimate.mul_i(10));
    }

    #[test]
    fn polygamma_routes_agree() {
        let c = ctx();
        let q = QBase::parse("0.85", &c).unwrap();
        for (m, x) in [(1, "1"), (2, "0.5"), (3, "0.25"), (1, "2.5")] {
            let x = c.parse(x).unwrap();
            let d = qpolygamma_direct(m, &x, &q, &c).unwrap();
            let a = qpolygamma_asymptotic(m, &x, &q, TruncationPolicy::Optimal, &c).unwrap();
            assert!((a.re() - d.re()).abs() <= a.err_estimate.mul_i(10), "m={m} a={} d={} e={}", (a.re() - d.re()).to_sci(3), d.err_estimate.to_sci(3), a.err_estimate.to_sci(3));
        }
    }

    #[test]
    fn trigamma_at_one_terminates() {
        let c = ctx();
        let q = QBase::parse("0.7", &c).unwrap();
        let a = qpolygamma_asymptotic(1, &c.real(1), &q, TruncationPolicy::Optimal, &c).unwrap();
        assert!(a.terms_used <= 3);
    }

    #[test]
    fn reflection_residuals_are_small() {
        let c = ctx();
        let x = c.parse("0.3").unwrap();
        for m in 0..4 {
            // e^(-4π²/t) is about 1e-25 at q = 1/2 and 1e-48 at q = 0.7.
            let r = reflection_residual(m, &x, &QBase::parse("0.5", &c).unwrap(), &c).unwrap();
            assert!(r.abs().to_f64() < 1e-20, "m={m} {}", r.to_sci(5));
            let r = reflection_residual(m, &x, &QBase::parse("0.7", &c).unwrap(), &c).unwrap();
            assert!(r.abs().to_f64() < 1e-42, "m={m} {}", r.to_sci(5));
        }
    }

    #[test]
    fn gamma_reflection_product() {
        let c = ctx();
        let q = QBase::parse("0.9", &c).unwrap();
        let x = c.parse("0.3").unwrap();
        let a = qgamma_direct(&x, &q, &c).unwrap();
        let b = qgamma_direct(&c.parse("0.7").unwrap(), &q, &c).unwrap();
        let r = qgamma_reflection(&x, &q).unwrap();
        assert!(rel(&(a.re() * b.re()), r.re()) < 1e-65);
    }
}
