use num_rational::BigRational;

use super::{QPoint, SCase, SParameter};
use crate::kernel::{
    bernoulli_poly, bernoulli_poly_special, digamma, gamma, gamma_complex, harmonic, hurwitz_zeta,
    hurwitz_zeta_sderiv, rational_to_real, special_x, zeta_int, zeta_nonpositive_int, ReflectedZetaSeq, SpecialX,
};
use crate::mp::{Complex, Error, EvalResult, Method, PrecisionContext, Real, Result};
use crate::series::{beyond_all_orders, sum_asymptotic, Term, TruncationPolicy};

/// `B_k(x)`, exact at `x ∈ {0, 1/2, 1}`, with a flag for exact zeros.
pub(crate) struct BernoulliAt {
    x: Real,
    special: Option<SpecialX>,
    ctx: PrecisionContext,
}

impl BernoulliAt {
    pub(crate) fn new(x: &Real, ctx: &PrecisionContext) -> Self {
        BernoulliAt { x: x.clone(), special: special_x(x), ctx: ctx.clone() }
    }

    pub(crate) fn special(&self) -> Option<SpecialX> {
        self.special
    }

    /// `None` when `B_k(x)` is exactly zero.
    pub(crate) fn get(&self, k: usize) -> Result<Option<Real>> {
        match self.special {
            Some(sx) => {
                let r: BigRational = bernoulli_poly_special(k, sx)?;
                if num_traits::Zero::is_zero(&r) {
                    Ok(None)
                } else {
                    Ok(Some(rational_to_real(&r, self.ctx.work_bits())))
                }
            }
            None => Ok(Some(bernoulli_poly(k, &self.x, &self.ctx)?)),
        }
    }
}

/// `ζ(-n)` for `n ≥ 0`, `None` at the trivial zeros.
fn zeta_nonpos(n: usize, p: usize) -> Result<Option<Real>> {
    let r = zeta_nonpositive_int(n)?;
    if num_traits::Zero::is_zero(&r) {
        Ok(None)
    } else {
        Ok(Some(rational_to_real(&r, p)))
    }
}

/// First index from which every term vanishes, for integer `a` in `ζ(a - k)`
/// and `x ∈ {1/2, 1}`: odd `k ≥ 3` kill `B_k(x)`, even `k > a` kill `ζ(a-k)`
/// when `a` is even.
pub(crate) fn vanishing_index(a: i64, special: Option<SpecialX>) -> Option<usize> {
    match special {
        Some(SpecialX::Half) | Some(SpecialX::One) if a % 2 == 0 => Some((a + 2).max(3) as usize),
        _ => None,
    }
}

/// Running factor `(log q)^(k-1) / k!`, cached by `k`.
pub(crate) struct LogPowers {
    log_q: Real,
    cache: Vec<Real>,
}

impl LogPowers {
    pub(crate) fn new(log_q: &Real) -> Self {
        LogPowers { log_q: log_q.clone(), cache: vec![log_q.recip()] }
    }

    pub(crate) fn at(&mut self, k: usize) -> Real {
        while self.cache.len() <= k {
            let j = self.cache.len();
            let next = &self.cache[j - 1] * &self.log_q / Real::from_u64(j as u64, self.log_q.prec());
            self.cache.push(next);
        }
        self.cache[k].clone()
    }
}

/// The expansion of `L_q(s, x)` at `q = 1` for `x ∈ (0, 1]`.
///
/// Returns `method = asymptotic` and `err_estimate = max(first omitted term,
/// exponentially small remainder, eps·|value|)` under the optimal policy; the
/// last included term replaces the first omitted one under a fixed policy.
pub fn lambert_asymptotic(
    s: &SParameter,
    x: &Real,
    q: &QPoint,
    policy: TruncationPolicy,
    ctx: &PrecisionContext,
) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let one = Real::one(p);
    if !x.is_positive() || x > &one {
        return Err(Error::domain("the expansion needs x in (0, 1]; reduce larger x with lambert_shift"));
    }
    let x = x.with_prec(p);
    let lq = q.log_q().with_prec(p);
    let t = q.log_inv_q().with_prec(p);
    let bern = BernoulliAt::new(&x, ctx);
    let mut powers = LogPowers::new(&lq);

    let (base, start, vanish, excluded): (Complex, usize, Option<usize>, Option<usize>) = match s.case() {
        SCase::General => {
            let sc = s.to_complex(p);
            let one_plus_s = sc.add_real(&one);
            if (!sc.is_real() || s.as_integer().is_none()) && !one_plus_s.re.is_positive() {
                return Err(Error::Unsupported("expansion for non-integer s requires Re(s) > -1".into()));
            }
            let g = match s.as_integer() {
                Some(n) => Complex::from_real(gamma(&Real::from_i64(n + 1, p), ctx)?),
                None => gamma_complex(&one_plus_s, ctx)?,
            };
            let z = hurwitz_zeta(&one_plus_s, &x, ctx)?;
            let tp = Complex::real_pow(&t, &-&one_plus_s);
            let lead = &(&g * &z) * &tp;
            let vanish = s.as_integer().and_then(|n| vanishing_index(1 - n, bern.special()));
            (lead, 0, vanish, None)
        }
        SCase::Zero => {
            let lead = (digamma(&x, ctx)? + q.loglog_inv_q().with_prec(p)) / &lq;
            (Complex::from_real(lead), 1, None, None)
        }
        SCase::NegativeInteger(m) => {
            let dz = hurwitz_zeta_sderiv(m, &x, ctx)?;
            let bm = bern.get(m as usize)?.unwrap_or_else(|| Real::zero(p));
            let h = harmonic(m as u64 - 1, ctx);
            let bracket = dz.mul_i(m as i64) + (q.loglog_inv_q().with_prec(p) - h) * bm;
            let lead = bracket * powers.at(m as usize);
            let vanish = vanishing_index(1 + m as i64, bern.special());
            (Complex::from_real(lead), 0, vanish, Some(m as usize))
        }
    };

    // The k-sum: terms -ζ(a - k) B_k(x) (log q)^(k-1)/k!, with a = 1 - s.
    let mut reflected = match (s.case(), s.as_integer()) {
        (SCase::General, None) => Some(ReflectedZetaSeq::new(&s.to_complex(p), ctx)),
        _ => None,
    };
    let a_int: Option<i64> = match s.case() {
        SCase::General => s.as_integer().map(|n| 1 - n),
        SCase::Zero => Some(1),
        SCase::NegativeInteger(m) => Some(1 + m as i64),
    };
    let term = |k: usize| -> Result<Term> {
        if excluded == Some(k) {
            return Ok(Term::Excluded);
        }
        let zeta: Option<Complex> = match (&mut reflected, a_int) {
            (Some(seq), _) => Some(seq.next_value()?),
            (None, Some(a)) => {
                let arg = a - k as i64;
                if arg <= 0 {
                    zeta_nonpos((-arg) as usize, p)?.map(Complex::from_real)
                } else {
                    Some(Complex::from_real(zeta_int(arg, ctx)?))
                }
            }
            (None, None) => unreachable!("integer s always has an integer zeta argument"),
        };
        let Some(zeta) = zeta else { return Ok(Term::Zero) };
        let Some(b) = bern.get(k)? else { return Ok(Term::Zero) };
        let c = powers.at(k);
        Ok(Term::Value(-zeta.scale(&(b * c))))
    };
    let sum = sum_asymptotic(policy, start, &base, vanish, ctx, term)?;
    let value = sum.total;
    let floor = ctx.eps().with_prec(p) * value.abs();
    let remainder = beyond_all_orders(&t, s.re_f64(), s.im_f64());
    let err = Real::max_of(&Real::max_of(&sum.omitted, &remainder), &floor);
    EvalResult::new(value, err, sum.terms + 1, Method::Asymptotic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambert::lambert_direct;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1_000_000).unwrap()
    }

    fn gap(s: SParameter, x: &str, q: &str) -> (f64, f64) {
        let c = ctx();
        let q = QPoint::parse(q, &c).unwrap();
        let x = c.parse(x).unwrap();
        let a = lambert_asymptotic(&s, &x, &q, TruncationPolicy::Optimal, &c).unwrap();
        let d = lambert_direct(&s, &x, &q, &c).unwrap();
        let g = (&a.value - &d.value).abs();
        let e = Real::max_of(&a.err_estimate, &d.err_estimate);
        ((&g / d.value.abs()).to_f64(), (&g / &e).to_f64())
    }

    #[test]
    fn agrees_with_direct_case_one() {
        let (rel, ratio) = gap(SParameter::int(1), "1", "0.9");
        assert!(rel < 1e-10 && ratio <= 10.0, "{rel} {ratio}");
        let (_, ratio) = gap(SParameter::real(Real::parse("1.5", 300).unwrap()), "0.25", "0.8");
        assert!(ratio <= 10.0, "{ratio}");
    }

    #[test]
    fn agrees_with_direct_case_two_and_three() {
        for (s, x) in [(0, "0.5"), (0, "1"), (-1, "0.75"), (-2, "0.25")] {
            let (_, ratio) = gap(SParameter::int(s), x, "0.85");
            assert!(ratio <= 10.0, "s={s} x={x} ratio={ratio}");
        }
    }

    #[test]
    fn odd_integer_series_terminates() {
        let c = ctx();
        let q = QPoint::parse("0.7", &c).unwrap();
        let r = lambert_asymptotic(&SParameter::int(3), &c.real(1), &q, TruncationPolicy::Optimal, &c).unwrap();
        // ζ(-2) = 0 removes k = 0; only the leading term and k = 1 remain.
        assert_eq!(r.terms_used, 2);
    }

    #[test]
    fn unsupported_region() {
        let c = ctx();
        let q = QPoint::parse("0.9", &c).unwrap();
        let s = SParameter::real(c.parse("-1.5").unwrap());
        assert!(matches!(
            lambert_asymptotic(&s, &c.real(1), &q, TruncationPolicy::Optimal, &c),
            Err(Error::Unsupported(_))
        ));
        assert!(lambert_asymptotic(&SParameter::int(1), &c.real(2), &q, TruncationPolicy::Optimal, &c).is_err());
    }

    #[test]
    fn fixed_policy_reports_last_term() {
        let c = ctx();
        let q = QPoint::parse("0.9", &c).unwrap();
        let r = lambert_asymptotic(&SParameter::int(2), &c.real(1), &q, TruncationPolicy::Fixed(1), &c).unwrap();
        // k = 0 term: -ζ(-1) B_0 / log q = (1/12)/log q
        let want = (c.ratio(1, 12) / q.log_q()).abs();
        assert!((&r.err_estimate - &want).abs().to_f64() < 1e-70);
    }
}
