use super::{QPoint, SParameter};
use crate::mp::{Complex, Error, EvalResult, Method, PrecisionContext, Real, Result};

/// Number of terms the direct sum needs, from `k^σ q^(kx) ≈ 2^(-bits)`.
fn estimated_terms(sigma: f64, x: f64, t: f64, bits: usize) -> f64 {
    let rate = x * t;
    let mut k = (bits as f64 * std::f64::consts::LN_2) / rate;
    for _ in 0..4 {
        k = (bits as f64 * std::f64::consts::LN_2 + sigma.max(0.0) * k.max(1.0).ln()) / rate;
    }
    k.max(1.0)
}

/// `Σ_{k≥1} k^s q^(kx) / (1 - q^k)` summed term by term.
///
/// Stops once three consecutive terms, times `q^x/(1-q^x)`, fall below
/// `eps·|sum|`; the remaining tail is bounded by a geometric series with
/// ratio `q^x (1 + 1/K)^max(σ,0)`.
/// Fails fast when the a-priori term count exceeds twice the context cap.
pub fn lambert_direct(s: &SParameter, x: &Real, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    let p = ctx.work_bits();
    if !x.is_positive() {
        return Err(Error::domain("Lambert series requires x > 0"));
    }
    let sigma = s.re_f64();
    let t = q.log_inv_q();
    let est = estimated_terms(sigma, x.to_f64(), t.to_f64(), ctx.precision_bits());
    if est > 2.0 * ctx.max_terms() as f64 {
        return Err(Error::convergence(
            format!("direct Lambert series (about {est:.3e} terms needed)"),
            ctx.max_terms(),
        ));
    }
    let x = x.with_prec(p);
    let one = Real::one(p);
    let qx = q.pow(&x);
    let qq = q.q().with_prec(p);
    let sc = s.to_complex(p);
    let int_s = s.as_integer();
    let eps = ctx.eps().with_prec(p);
    let mut qkx = qx.clone();
    let mut qk = qq.clone();
    let mut sum = Complex::zero(p);
    let mut quiet = 0;
    // Terms shrink roughly like q^(kx); scale the stopping test by the tail factor.
    let tail_factor = Real::max_of(&one, &(&qx / &(&one - &qx)));
    for k in 1..=ctx.max_terms() {
        let kr = Real::from_u64(k as u64, p);
        // 1 - q^k, without cancellation while k·t is small.
        let denom = if (k as f64) * t.to_f64() < 0.5 { -(t.mul_i(-(k as i64))).exp_m1() } else { &one - &qk };
        let base = &qkx / &denom;
        let term = match int_s {
            Some(n) => Complex::from_real(base * kr.powi(n)),
            None => Complex::real_pow(&kr, &sc).scale(&base),
        };
        sum = &sum + &term;
        let mag = term.abs();
        if &mag * &tail_factor <= &eps * &sum.abs() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 {
            let grow = Real::from_f64((1.0 + 1.0 / k as f64).powf(sigma.max(0.0)), p);
            let r = &qx * &grow;
            if r < one {
                let tail = &mag * &r / (&one - &r);
                return EvalResult::new(sum, tail, k, Method::Direct);
            }
        }
        qkx = &qkx * &qx;
        qk = &qk * &qq;
    }
    Err(Error::convergence("direct Lambert series", ctx.max_terms()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1_000_000).unwrap()
    }

    #[test]
    fn erdos_borwein_constant() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        let r = lambert_direct(&SParameter::int(0), &c.real(1), &q, &c).unwrap();
        let want = c.parse("1.6066951524152917637833015231909245804805796715057564357780795536").unwrap();
        assert!((r.re() - &want).abs().to_f64() < 1e-60);
        assert!(r.err_estimate.to_f64() < 1e-70);
        assert_eq!(r.method, Method::Direct);
    }

    #[test]
    fn tiny_q() {
        let c = PrecisionContext::new(64, 1000).unwrap();
        let q = QPoint::parse("1e-30", &c).unwrap();
        let r = lambert_direct(&SParameter::int(0), &c.real(1), &q, &c).unwrap();
        assert!(r.re().to_f64() <= 2e-30 && r.re().to_f64() > 0.0);
    }

    #[test]
    fn cap_fails_fast() {
        let c = PrecisionContext::new(128, 1000).unwrap();
        let q = QPoint::parse("0.999", &c).unwrap();
        let e = lambert_direct(&SParameter::int(1), &c.real(1), &q, &c).unwrap_err();
        assert!(matches!(e, Error::Convergence { cap: 1000, .. }));
    }

    #[test]
    fn rejects_nonpositive_x() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        assert!(lambert_direct(&SParameter::int(0), &c.real(-1), &q, &c).is_err());
    }
}
