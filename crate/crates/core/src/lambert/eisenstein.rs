use super::{lambert_direct, QPoint, SParameter};
use crate::kernel::zeta_int;
use crate::mp::{Complex, Error, EvalResult, Method, PrecisionContext, Real, Result};

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::domain("Eisenstein index k must be at least 1"))
    } else {
        Ok(())
    }
}

/// `E_{2k}(q) = 1 + (2/ζ(1-2k)) L_q(2k-1, 1)` by direct summation.
pub fn eisenstein_direct(k: u32, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    check_k(k)?;
    let p = ctx.work_bits();
    let l = lambert_direct(&SParameter::int(2 * k as i64 - 1), &Real::one(p), q, ctx)?;
    let c = ctx.real(2) / zeta_int(1 - 2 * k as i64, ctx)?;
    let value = l.value.scale(&c).add_real(&Real::one(p));
    EvalResult::new(value, &l.err_estimate * &c.abs(), l.terms_used, Method::Direct)
}

/// `Ẽ_{2k}(q) = E_{2k}(q) + 2 ζ(2-2k) / (ζ(1-2k) log q)`.
///
/// The correction vanishes for `k ≥ 2`; for `k = 1` it is `12/log q`.
pub fn eisenstein_modified(k: u32, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    let e = eisenstein_direct(k, q, ctx)?;
    let z2 = zeta_int(2 - 2 * k as i64, ctx)?;
    if z2.is_zero() {
        return Ok(e);
    }
    let corr = z2.mul_i(2) / (zeta_int(1 - 2 * k as i64, ctx)? * q.log_q());
    EvalResult::new(e.value.add_real(&corr), e.err_estimate, e.terms_used, e.method)
}

/// `(2πi/log q)^{2k} = (-1)^k (2π/log q)^{2k}`, the `q → 1` form of `Ẽ_{2k}`.
pub fn eisenstein_asymptotic(k: u32, q: &QPoint) -> Result<EvalResult> {
    check_k(k)?;
    let p = q.prec();
    let base = Real::pi(p).mul_i(2) / q.log_q();
    let v = base.powu(2 * k as u64);
    EvalResult::closed(Complex::from_real(if k % 2 == 1 { -v } else { v }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::divisor_sigma;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1_000_000).unwrap()
    }

    fn coefficient_sum(c: &PrecisionContext, m: i64, q: &Real, n_max: u64) -> Real {
        let mut s = c.real(0);
        let mut qn = c.real(1);
        for n in 1..n_max {
            qn = &qn * q;
            s = s + divisor_sigma(&c.real(m), n, c).unwrap() * &qn;
        }
        s
    }

    #[test]
    fn q_expansions() {
        let c = ctx();
        let q = QPoint::parse("0.1", &c).unwrap();
        let e4 = eisenstein_direct(2, &q, &c).unwrap();
        let want = coefficient_sum(&c, 3, q.q(), 120).mul_i(240).add_i(1);
        assert!((e4.re() - &want).abs().to_f64() < 1e-30);
        let e2 = eisenstein_direct(1, &q, &c).unwrap();
        let want = c.real(1) - coefficient_sum(&c, 1, q.q(), 120).mul_i(24);
        assert!((e2.re() - &want).abs().to_f64() < 1e-30);
        let q0 = QPoint::parse("1e-80", &c).unwrap();
        assert!((eisenstein_direct(2, &q0, &c).unwrap().re() - &c.real(1)).abs().to_f64() < 1e-70);
    }

    #[test]
    fn modification() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        let e4 = eisenstein_direct(2, &q, &c).unwrap();
        let t4 = eisenstein_modified(2, &q, &c).unwrap();
        assert_eq!(e4.re(), t4.re());
        let e2 = eisenstein_direct(1, &q, &c).unwrap();
        let t2 = eisenstein_modified(1, &q, &c).unwrap();
        let want = e2.re() + &(c.real(12) / q.log_q());
        assert!((t2.re() - &want).abs().to_f64() < 1e-70);
    }

    #[test]
    fn closed_form_sign() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        assert!(eisenstein_asymptotic(2, &q).unwrap().re().is_positive());
        assert!(eisenstein_asymptotic(1, &q).unwrap().re().is_negative());
        let a = eisenstein_asymptotic(1, &q).unwrap();
        let m = eisenstein_modified(1, &q, &c).unwrap();
        assert!(((a.re() - m.re()) / m.re()).abs().to_f64() < 1e-15);
    }
}
