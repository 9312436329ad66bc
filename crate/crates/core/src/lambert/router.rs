use super::{lambert_asymptotic, lambert_direct, QPoint, SParameter};
use crate::kernel::polylog_with_err;
use crate::mp::{Complex, Error, EvalResult, Method, PrecisionContext, Real, Result};
use crate::series::TruncationPolicy;

/// Reduces `x > 1` into `(0, 1]`.
///
/// Returns `(x', c)` with `x' = x + 1 - ⌈x⌉` and
/// `c = Σ_{n=1}^{⌈x⌉-1} Li_{-s}(q^(n + x - ⌈x⌉))`, so that
/// `L_q(s, x) = L_q(s, x') - c`. For `x ≤ 1` returns `(x, 0)`.
pub fn lambert_shift(s: &SParameter, x: &Real, q: &QPoint, ctx: &PrecisionContext) -> Result<(Real, Complex)> {
    let (xr, c, _, _) = shift_with_err(s, x, q, ctx)?;
    Ok((xr, c))
}

pub(crate) fn shift_with_err(
    s: &SParameter,
    x: &Real,
    q: &QPoint,
    ctx: &PrecisionContext,
) -> Result<(Real, Complex, Real, usize)> {
    let p = ctx.work_bits();
    if !x.is_positive() {
        return Err(Error::domain("Lambert series requires x > 0"));
    }
    let x = x.with_prec(p);
    if x <= Real::one(p) {
        return Ok((x, Complex::zero(p), Real::zero(p), 0));
    }
    let c = x.ceil();
    let n = c.to_i64().ok_or_else(|| Error::domain("x too large for the shift recursion"))?;
    if n as usize > ctx.max_terms() {
        return Err(Error::convergence("Lambert shift recursion", ctx.max_terms()));
    }
    let xr = &x + &Real::one(p) - &c;
    let neg_s = -s.to_complex(p);
    let mut corr = Complex::zero(p);
    let mut err = Real::zero(p);
    let mut terms = 0;
    for j in 1..n {
        let e = &x + &Real::from_i64(j, p) - &c;
        let z = Complex::from_real(q.pow(&e));
        let (v, tail, used) = polylog_with_err(&neg_s, &z, ctx)?;
        corr = &corr + &v;
        err = &err + &tail;
        terms += used;
    }
    Ok((xr, corr, err, terms))
}

/// Asymptotic route with the shift applied for `x > 1`.
pub(crate) fn asymptotic_route(s: &SParameter, x: &Real, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    let (xr, corr, cerr, cterms) = shift_with_err(s, x, q, ctx)?;
    let a = lambert_asymptotic(s, &xr, q, TruncationPolicy::Optimal, ctx)?;
    let value = &a.value - &corr;
    let floor = ctx.eps().with_prec(ctx.work_bits()) * value.abs();
    let err = Real::max_of(&(&a.err_estimate + &cerr), &floor);
    EvalResult::new(value, err, a.terms_used + cterms, Method::Asymptotic)
}

fn meets_target(r: &EvalResult, ctx: &PrecisionContext) -> bool {
    let target = ctx.eps().mul_i(2) * r.value.abs();
    r.err_estimate <= target
}

/// Evaluates `L_q(s, x)` by whichever route suits `q`.
///
/// Direct summation for `q ≤ 1/2`, the optimally truncated expansion above.
/// If the chosen route fails or misses `2·eps` relative accuracy, the other
/// one is tried; the more accurate successful result is returned.
pub fn lambert_eval(s: &SParameter, x: &Real, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    if !x.is_positive() {
        return Err(Error::domain("Lambert series requires x > 0"));
    }
    let half = ctx.ratio(1, 2);
    let direct_first = q.q() <= &half;
    let run = |direct: bool| if direct { lambert_direct(s, x, q, ctx) } else { asymptotic_route(s, x, q, ctx) };
    let first = run(direct_first);
    if let Ok(r) = &first {
        if meets_target(r, ctx) {
            return first;
        }
    }
    let second = run(!direct_first);
    match (first, second) {
        (Ok(a), Ok(b)) => {
            if meets_target(&b, ctx) || b.err_estimate < a.err_estimate {
                Ok(b)
            } else {
                Ok(a)
            }
        }
        (Ok(a), Err(_)) => Ok(a),
        (Err(_), Ok(b)) => Ok(b),
        (Err(e1), Err(e2)) => {
            let (direct, asymptotic) = if direct_first { (e1, e2) } else { (e2, e1) };
            Err(Error::BothPathsFailed { direct: Box::new(direct), asymptotic: Box::new(asymptotic) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1_000_000).unwrap()
    }

    #[test]
    fn identity_branch() {
        let c = ctx();
        let q = QPoint::parse("0.3", &c).unwrap();
        let (xr, corr) = lambert_shift(&SParameter::int(0), &c.ratio(1, 2), &q, &c).unwrap();
        assert_eq!(xr, c.ratio(1, 2));
        assert!(corr.is_zero());
    }

    #[test]
    fn shift_matches_direct_sums() {
        let c = ctx();
        let q = QPoint::parse("0.3", &c).unwrap();
        let s = SParameter::int(0);
        let x = c.parse("2.5").unwrap();
        let (xr, corr) = lambert_shift(&s, &x, &q, &c).unwrap();
        assert_eq!(xr, c.ratio(1, 2));
        let lhs = lambert_direct(&s, &x, &q, &c).unwrap().value;
        let rhs = &lambert_direct(&s, &xr, &q, &c).unwrap().value - &corr;
        assert!((&lhs - &rhs).abs().to_f64() < 1e-70);

        let q = QPoint::parse("0.5", &c).unwrap();
        let s = SParameter::int(1);
        let (xr, corr) = lambert_shift(&s, &c.real(3), &q, &c).unwrap();
        assert_eq!(xr, c.real(1));
        let lhs = lambert_direct(&s, &c.real(3), &q, &c).unwrap().value;
        let rhs = &lambert_direct(&s, &xr, &q, &c).unwrap().value - &corr;
        assert!((&lhs - &rhs).abs().to_f64() < 1e-70);
    }

    #[test]
    fn routing() {
        let c = ctx();
        let s = SParameter::int(1);
        let r = lambert_eval(&s, &c.real(1), &QPoint::parse("0.3", &c).unwrap(), &c).unwrap();
        assert_eq!(r.method, Method::Direct);
        let r = lambert_eval(&s, &c.real(1), &QPoint::parse("0.95", &c).unwrap(), &c).unwrap();
        assert_eq!(r.method, Method::Asymptotic);
        assert!(lambert_eval(&s, &c.real(-1), &QPoint::parse("0.5", &c).unwrap(), &c).is_err());
    }

    #[test]
    fn both_paths_failing_reports_both() {
        let c = PrecisionContext::new(128, 10).unwrap();
        let s = SParameter::real(c.parse("-1.5").unwrap());
        let e = lambert_eval(&s, &c.real(1), &QPoint::parse("0.99", &c).unwrap(), &c).unwrap_err();
        assert!(matches!(e, Error::BothPathsFailed { .. }));
    }
}
