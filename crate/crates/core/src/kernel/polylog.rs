//! Polylogarithm inside the unit disk, harmonic numbers and divisor sums.

use crate::mp::{Complex, Error, PrecisionContext, Real, Result};

/// `Li_s(z) = Σ_{k≥1} z^k / k^s` for `|z| < 1`.
///
/// Nonpositive integer orders use the rational form
/// `Li_{-m}(z) = Σ_{k=0}^{m} k! S(m+1, k+1) w^(k+1)`, `w = z/(1-z)`, with `S`
/// the Stirling numbers of the second kind. Other orders are summed directly;
/// the sum stops once three consecutive terms fall below `eps·|sum|` while the term
/// ratio is below one; the geometric tail `|t|·r/(1-r)` is the error.
pub fn polylog(s: &Complex, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(polylog_with_err(s, z, ctx)?.0)
}

/// [`polylog`] together with its tail bound and term count.
pub fn polylog_with_err(s: &Complex, z: &Complex, ctx: &PrecisionContext) -> Result<(Complex, Real, usize)> {
    let p = ctx.work_bits();
    let r = z.abs();
    if r >= Real::one(p) {
        return Err(Error::domain("polylog requires |z| < 1"));
    }
    if z.is_zero() {
        return Ok((Complex::zero(p), Real::zero(p), 0));
    }
    let int_s = if s.is_real() && s.re.is_integer() { s.re.to_i64() } else { None };
    if let Some(n) = int_s.filter(|n| *n <= 0) {
        return Ok(negative_order(n.unsigned_abs() as usize, z, ctx));
    }
    let neg_s = -s;
    let eps = ctx.eps().with_prec(p);
    let mut zk = z.with_prec(p);
    let mut sum = Complex::zero(p);
    let mut quiet = 0;
    let mut prev_mag: Option<Real> = None;
    for k in 1..=ctx.max_terms() {
        let kr = Real::from_i64(k as i64, p);
        let ks = match int_s {
            Some(n) => Complex::from_real(kr.powi(-n)),
            None => Complex::real_pow(&kr, &neg_s),
        };
        let term = &zk * &ks;
        sum = &sum + &term;
        let mag = term.abs();
        let ratio = prev_mag.as_ref().map(|pm| if pm.is_zero() { Real::zero(p) } else { &mag / pm });
        if mag <= &eps * &sum.abs() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 {
            if let Some(rt) = ratio.filter(|rt| rt < &Real::one(p)) {
                let tail = &mag * &rt / (Real::one(p) - &rt);
                return Ok((sum, tail, k));
            }
        }
        prev_mag = Some(mag);
        zk = &zk * z;
    }
    Err(Error::convergence("polylog series", ctx.max_terms()))
}

fn negative_order(m: usize, z: &Complex, ctx: &PrecisionContext) -> (Complex, Real, usize) {
    let p = ctx.work_bits();
    let z = z.with_prec(p);
    let w = &z * &(Complex::one(p) - &z).recip();
    // Row m+1 of the Stirling triangle, built in place.
    let mut row = vec![Real::zero(p); m + 2];
    row[0] = Real::one(p);
    for n in 1..=m + 1 {
        for k in (1..=n).rev() {
            row[k] = row[k].mul_i(k as i64) + &row[k - 1];
        }
        row[0] = Real::zero(p);
    }
    let mut sum = Complex::zero(p);
    let mut abs_sum = Real::zero(p);
    let mut wk = w.clone();
    let mut fact = Real::one(p);
    for k in 0..=m {
        if k > 0 {
            fact = fact.mul_i(k as i64);
        }
        let term = wk.scale(&(&fact * &row[k + 1]));
        abs_sum = abs_sum + term.abs();
        sum = &sum + &term;
        wk = &wk * &w;
    }
    let err = ctx.eps().with_prec(p).mul_i(m as i64 + 2) * abs_sum;
    (sum, err, m + 1)
}

/// `H_m = Σ_{j=1}^m 1/j`.
pub fn harmonic(m: u64, ctx: &PrecisionContext) -> Real {
    let p = ctx.work_bits();
    let mut h = Real::zero(p);
    for j in 1..=m {
        h = &h + &Real::from_u64(j, p).recip();
    }
    h
}

/// `σ_s(n) = Σ_{d | n} d^s` by trial division up to `√n`.
pub fn divisor_sigma(s: &Real, n: u64, ctx: &PrecisionContext) -> Result<Real> {
    if n == 0 {
        return Err(Error::domain("divisor_sigma requires n >= 1"));
    }
    let p = ctx.work_bits();
    let s = s.with_prec(p);
    let pw = |d: u64| Real::from_u64(d, p).powr(&s);
    let mut acc = Real::zero(p);
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            acc = &acc + &pw(d);
            let e = n / d;
            if e != d {
                acc = &acc + &pw(e);
            }
        }
        d += 1;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1_000_000).unwrap()
    }

    #[test]
    fn polylog_classical() {
        let c = ctx();
        let half = Complex::from_real(c.ratio(1, 2));
        let l1 = polylog(&Complex::from_real(c.real(1)), &half, &c).unwrap();
        assert!((&l1.re - &c.real(2).ln()).abs().to_f64() < 1e-72);
        let l2 = polylog(&Complex::from_real(c.real(2)), &half, &c).unwrap();
        let ln2 = c.real(2).ln();
        let want = c.pi().sqr().div_i(12) - ln2.sqr().div_i(2);
        assert!((&l2.re - &want).abs().to_f64() < 1e-72);
        let z = polylog(&Complex::from_real(c.real(2)), &Complex::zero(c.work_bits()), &c).unwrap();
        assert!(z.is_zero());
        // Li_{-1}(z) = z/(1-z)^2
        let zz = c.parse("0.3").unwrap();
        let lm1 = polylog(&Complex::from_real(c.real(-1)), &Complex::from_real(zz.clone()), &c).unwrap();
        let want = &zz / (c.real(1) - &zz).sqr();
        assert!((&lm1.re - &want).abs().to_f64() < 1e-72);
    }

    #[test]
    fn negative_orders_near_one() {
        let c = ctx();
        let one = c.real(1);
        for zs in ["0.99995", "-0.6", "0.2"] {
            let z = c.parse(zs).unwrap();
            let zc = Complex::from_real(z.clone());
            let l2 = polylog(&Complex::from_real(c.real(-2)), &zc, &c).unwrap().re;
            let want2 = &z * &(&one + &z) / (&one - &z).powi(3);
            assert!(((&l2 - &want2) / &want2).abs().to_f64() < 1e-70, "{zs}");
            let l3 = polylog(&Complex::from_real(c.real(-3)), &zc, &c).unwrap().re;
            let want3 = &z * &(&one + z.mul_i(4) + z.sqr()) / (&one - &z).powi(4);
            assert!(((&l3 - &want3) / &want3).abs().to_f64() < 1e-70, "{zs}");
        }
    }

    #[test]
    fn polylog_domain() {
        let c = ctx();
        let one = Complex::one(c.work_bits());
        assert!(matches!(polylog(&one, &one, &c), Err(Error::Domain(_))));
    }

    #[test]
    fn harmonic_values() {
        let c = ctx();
        assert!(harmonic(0, &c).is_zero());
        assert_eq!(harmonic(1, &c), c.real(1));
        assert!((harmonic(4, &c) - c.ratio(25, 12)).abs().to_f64() < 1e-75);
    }

    #[test]
    fn divisor_sums() {
        let c = ctx();
        assert_eq!(divisor_sigma(&c.real(1), 6, &c).unwrap(), c.real(12));
        assert_eq!(divisor_sigma(&c.real(0), 12, &c).unwrap(), c.real(6));
        assert_eq!(divisor_sigma(&c.real(-1), 4, &c).unwrap(), c.ratio(7, 4));
        assert_eq!(divisor_sigma(&c.real(3), 1, &c).unwrap(), c.real(1));
    }
}
