//! Truncation of divergent asymptotic series.
//!
//! Every expansion in the crate has the shape `base + Σ_k term(k)` where the
//! `k`-sum diverges for generic parameters. [`sum_asymptotic`] sums it under a
//! [`TruncationPolicy`] and reports the magnitude of the first omitted term.

use serde::{Deserialize, Serialize};

use crate::kernel::BERNOULLI_DEGREE_CAP;
use crate::mp::{Complex, PrecisionContext, Real, Result};

/// How the `k`-sum of an asymptotic expansion is cut off.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationPolicy {
    /// Keep the indices `k < K`.
    Fixed(usize),
    /// Stop just before the terms start to grow.
    #[default]
    Optimal,
}

impl std::str::FromStr for TruncationPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "optimal" => Ok(TruncationPolicy::Optimal),
            t => t
                .parse::<usize>()
                .map(TruncationPolicy::Fixed)
                .map_err(|_| format!("truncation must be 'optimal' or a nonnegative integer, got {s:?}")),
        }
    }
}

/// One term of an expansion.
pub(crate) enum Term {
    /// The index is not part of the sum (e.g. `k = 1` in the Pochhammer product).
    Excluded,
    /// The term is structurally zero (a vanishing zeta or Bernoulli factor).
    Zero,
    Value(Complex),
}

pub(crate) struct SeriesSum {
    /// `base + Σ included terms`.
    pub total: Complex,
    /// Nonzero terms included.
    pub terms: usize,
    /// Magnitude of the first omitted nonzero term (zero if the tail vanishes).
    pub omitted: Real,
}

/// Sums `base + Σ_{k ≥ start} term(k)` under `policy`.
///
/// Optimal mode skips exact zeros and excluded indices, stops before a term
/// larger than both of the two previous nonzero terms, stops after two
/// consecutive terms below `eps·|total|`, and stops at `vanish_from` when the
/// caller knows every later term is exactly zero.
pub(crate) fn sum_asymptotic(
    policy: TruncationPolicy,
    start: usize,
    base: &Complex,
    vanish_from: Option<usize>,
    ctx: &PrecisionContext,
    mut term: impl FnMut(usize) -> Result<Term>,
) -> Result<SeriesSum> {
    let p = ctx.work_bits();
    let eps = ctx.eps().with_prec(p);
    let mut total = base.clone();
    let mut used = 0usize;
    let last_k = BERNOULLI_DEGREE_CAP.min(start + ctx.max_terms());
    match policy {
        TruncationPolicy::Fixed(cut) => {
            let mut last = Real::zero(p);
            for k in start..cut.min(last_k + 1) {
                if let Term::Value(t) = term(k)? {
                    last = t.abs();
                    total = &total + &t;
                    used += 1;
                }
            }
            if used == 0 {
                // Nothing included: report the first nonzero term beyond the cut.
                for k in cut.max(start)..=last_k {
                    if vanish_from.is_some_and(|v| k >= v) {
                        break;
                    }
                    if let Term::Value(t) = term(k)? {
                        last = t.abs();
                        break;
                    }
                }
            }
            Ok(SeriesSum { total, terms: used, omitted: last })
        }
        TruncationPolicy::Optimal => {
            let mut recent: Vec<Real> = Vec::new();
            let mut quiet = 0;
            for k in start..=last_k {
                if vanish_from.is_some_and(|v| k >= v) {
                    return Ok(SeriesSum { total, terms: used, omitted: Real::zero(p) });
                }
                let t = match term(k)? {
                    Term::Value(t) => t,
                    Term::Zero | Term::Excluded => continue,
                };
                let mag = t.abs();
                if recent.len() >= 2 {
                    let n = recent.len();
                    let bound = Real::max_of(&recent[n - 1], &recent[n - 2]);
                    if mag > bound {
                        return Ok(SeriesSum { total, terms: used, omitted: mag });
                    }
                }
                total = &total + &t;
                used += 1;
                if mag <= &eps * &total.abs() {
                    quiet += 1;
                    if quiet >= 2 {
                        return Ok(SeriesSum { total, terms: used, omitted: mag });
                    }
                } else {
                    quiet = 0;
                }
                recent.push(mag);
            }
            let omitted = recent.last().cloned().unwrap_or_else(|| Real::zero(p));
            Ok(SeriesSum { total, terms: used, omitted })
        }
    }
}

/// Size of the exponentially small remainder that no truncation of the
/// Lambert expansion can capture: `2 (2π/t)^(1+σ) e^(-4π²/t) e^(π|τ|/2)`
/// for `s = σ + iτ` and `t = log(1/q)`.
pub(crate) fn beyond_all_orders(t: &Real, sigma: f64, tau: f64) -> Real {
    let p = t.prec();
    let two_pi = Real::pi(p).mul_i(2);
    let ratio = &two_pi / t;
    let e = Real::from_f64(1.0 + sigma, p);
    let mut v = ratio.powr(&e) * (-(two_pi.sqr() / t)).exp();
    if tau != 0.0 {
        v = v * Real::from_f64(std::f64::consts::FRAC_PI_2 * tau.abs(), p).exp();
    }
    v.mul_i(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128, 1000).unwrap()
    }

    fn c(v: f64) -> Complex {
        Complex::from_real(Real::from_f64(v, 160))
    }

    #[test]
    fn optimal_stops_before_growth() {
        // Terms k!·10^-k: smallest near k = 10.
        let cx = ctx();
        let mut fact = 1.0f64;
        let r = sum_asymptotic(TruncationPolicy::Optimal, 0, &c(0.0), None, &cx, |k| {
            if k > 0 {
                fact *= k as f64;
            }
            Ok(Term::Value(c(fact * 10f64.powi(-(k as i32)))))
        })
        .unwrap();
        assert!(r.terms >= 10 && r.terms <= 12, "{}", r.terms);
        assert!(r.omitted.to_f64() < 1e-3);
    }

    #[test]
    fn fixed_counts_indices() {
        let cx = ctx();
        let r = sum_asymptotic(TruncationPolicy::Fixed(3), 0, &c(1.0), None, &cx, |k| {
            Ok(if k == 1 { Term::Excluded } else { Term::Value(c(0.5f64.powi(k as i32))) })
        })
        .unwrap();
        assert_eq!(r.terms, 2);
        assert_eq!(r.total.re.to_f64(), 2.25);
        assert_eq!(r.omitted.to_f64(), 0.25);
    }

    #[test]
    fn vanishing_tail_is_exact() {
        let cx = ctx();
        let r = sum_asymptotic(TruncationPolicy::Optimal, 0, &c(0.0), Some(2), &cx, |k| Ok(Term::Value(c(k as f64 + 1.0))))
            .unwrap();
        assert_eq!(r.total.re.to_f64(), 3.0);
        assert!(r.omitted.is_zero());
    }

    #[test]
    fn parse_policy() {
        assert_eq!("optimal".parse::<TruncationPolicy>().unwrap(), TruncationPolicy::Optimal);
        assert_eq!("4".parse::<TruncationPolicy>().unwrap(), TruncationPolicy::Fixed(4));
        assert!("-1".parse::<TruncationPolicy>().is_err());
    }
}
