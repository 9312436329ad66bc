use super::asymptotic::{BernoulliAt, LogPowers};
use super::QPoint;
use crate::kernel::{harmonic, hurwitz_zeta_sderiv, zeta_int};
use crate::mp::{Complex, Error, EvalResult, PrecisionContext, Real, Result};

/// Finite expansions of `Σ σ_m(n) qⁿ = L_q(m, 1)` at `q = 1` for odd `m`.
///
/// * `m ≥ 1`: `m! ζ(1+m)/(log q)^(1+m) - ζ(1-m)/log q - ζ(-m)/2`
/// * `m = -μ`: `[μ ζ'(1-μ) + (log log(1/q) - H_{μ-1}) B_μ(1)] (log q)^(μ-1)/μ!
///   - Σ_{k ≤ μ+1, k ≠ μ} ζ(1+μ-k) B_k(1) (log q)^(k-1)/k!`
///
/// Every omitted term of the general expansion is exactly zero, so the
/// result carries the closed-form marker `err_estimate = 0`. The formulas
/// are not meant for `q → 0`.
pub fn divisor_gf_asymptotic(m: i64, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    if m % 2 == 0 {
        return Err(Error::domain("divisor generating function expansion needs odd m"));
    }
    let p = ctx.work_bits();
    let lq = q.log_q().with_prec(p);
    let value = if m > 0 {
        let mut fact = Real::one(p);
        for j in 2..=m {
            fact = fact.mul_i(j);
        }
        let lead = fact * zeta_int(1 + m, ctx)? / lq.powi(1 + m);
        lead - zeta_int(1 - m, ctx)? / &lq - zeta_int(-m, ctx)?.div_i(2)
    } else {
        let mu = (-m) as usize;
        let one = Real::one(p);
        let bern = BernoulliAt::new(&one, ctx);
        let mut powers = LogPowers::new(&lq);
        let bm = bern.get(mu)?.unwrap_or_else(|| Real::zero(p));
        let bracket = hurwitz_zeta_sderiv(mu as u32, &one, ctx)?.mul_i(mu as i64)
            + (q.loglog_inv_q().with_prec(p) - harmonic(mu as u64 - 1, ctx)) * bm;
        let mut v = bracket * powers.at(mu);
        for k in (0..=mu + 1).filter(|k| *k != mu) {
            if let Some(b) = bern.get(k)? {
                let z = zeta_int(1 + mu as i64 - k as i64, ctx)?;
                v = v - z * b * powers.at(k);
            }
        }
        v
    };
    EvalResult::closed(Complex::from_real(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::divisor_sigma;
    use crate::lambert::{lambert_direct, SParameter};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1_000_000).unwrap()
    }

    #[test]
    fn m_one_against_divisor_sums() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        let a = divisor_gf_asymptotic(1, &q, &c).unwrap();
        let mut s = c.real(0);
        let mut qn = c.real(1);
        for n in 1..400u64 {
            qn = &qn * q.q();
            s = s + divisor_sigma(&c.real(1), n, &c).unwrap() * &qn;
        }
        assert!(((a.re() - &s) / &s).abs().to_f64() < 1e-6);
        assert!(a.err_estimate.is_zero());
    }

    #[test]
    fn m_minus_one_against_direct() {
        let c = ctx();
        let q = QPoint::parse("0.9", &c).unwrap();
        let a = divisor_gf_asymptotic(-1, &q, &c).unwrap();
        let d = lambert_direct(&SParameter::int(-1), &c.real(1), &q, &c).unwrap();
        assert!(((a.re() - d.re()) / d.re()).abs().to_f64() < 1e-8);
        let want = c.parse("13.56392149629453").unwrap();
        assert!((d.re() - &want).abs().to_f64() < 1e-13);
    }

    #[test]
    fn even_m_rejected() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        assert!(divisor_gf_asymptotic(2, &q, &c).is_err());
        assert!(divisor_gf_asymptotic(0, &q, &c).is_err());
    }
}
