//! Gamma, log-gamma, digamma and polygamma.
//!
//! Arguments are shifted up to `Re ≥ 0.15·bits + 10` and the Stirling series
//! is applied there; the shift is undone with a product (for `Γ`) or a sum
//! of reciprocals (for `ψ`).

use super::bernoulli::bernoulli_real;
use super::zeta::hurwitz_zeta_real;
use crate::mp::{Complex, Error, PrecisionContext, Real, Result};

fn stirling_radius(bits: usize) -> f64 {
    0.15 * bits as f64 + 10.0
}

fn shift_for(re: f64, bits: usize) -> usize {
    let r = stirling_radius(bits);
    if re >= r {
        0
    } else {
        (r - re).ceil() as usize
    }
}

/// Stirling series for `ln Γ(w)` at large `|w|`.
fn ln_gamma_stirling(w: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.work_bits();
    let half = Real::ratio(1, 2, p);
    let two_pi = ctx.pi().mul_i(2);
    let mut sum = &(&w.add_real(&-&half) * &w.ln()) - w;
    sum = sum.add_real(&(&two_pi.ln() * &half));
    let winv = w.recip();
    let winv2 = &winv * &winv;
    let mut pw = winv.clone();
    let eps = Real::pow2(-(p as i64), p);
    for i in 1..255usize {
        let b = bernoulli_real(2 * i, p)?;
        let den = Real::from_i64((2 * i * (2 * i - 1)) as i64, p);
        let term = pw.scale(&(&b / &den));
        sum = &sum + &term;
        if term.abs() <= &eps * &sum.abs() {
            return Ok(sum);
        }
        pw = &pw * &winv2;
    }
    Err(Error::convergence("Stirling series for log-gamma", 255))
}

/// `Γ(z)` for complex `z` with `Re z > 0`.
pub fn gamma_complex(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if !z.re.is_positive() {
        return Err(Error::Unsupported("complex gamma requires Re z > 0".into()));
    }
    if z.is_real() {
        return Ok(Complex::from_real(gamma(&z.re, ctx)?));
    }
    let p = ctx.work_bits();
    let n = shift_for(z.re.to_f64(), p);
    let mut prod = Complex::one(p);
    for j in 0..n {
        prod = &prod * &z.add_real(&Real::from_i64(j as i64, p));
    }
    let w = z.add_real(&Real::from_i64(n as i64, p));
    let lg = ln_gamma_stirling(&w, ctx)?;
    Ok(&lg.exp() / &prod)
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !x.is_positive() {
        return Err(Error::domain("gamma requires x > 0"));
    }
    let p = ctx.work_bits();
    let x = x.with_prec(p);
    let n = shift_for(x.to_f64(), p);
    let mut prod = Real::one(p);
    for j in 0..n {
        prod = &prod * &x.add_i(j as i64);
    }
    let w = Complex::from_real(x.add_i(n as i64));
    Ok(ln_gamma_stirling(&w, ctx)?.re - prod.ln())
}

/// `Γ(x)` for real `x > 0`.
pub fn gamma(x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !x.is_positive() {
        return Err(Error::domain("gamma requires x > 0"));
    }
    let p = ctx.work_bits();
    if x.is_integer() {
        if let Some(n) = x.to_i64().filter(|n| *n <= 1000) {
            let mut f = Real::one(p);
            for j in 2..n {
                f = f.mul_i(j);
            }
            return Ok(f);
        }
    }
    Ok(ln_gamma(x, ctx)?.exp())
}

/// Digamma `ψ(x)` for real `x > 0`.
pub fn digamma(x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !x.is_positive() {
        return Err(Error::domain("digamma requires x > 0"));
    }
    let p = ctx.work_bits();
    let x = x.with_prec(p);
    let n = shift_for(x.to_f64(), p);
    let mut shift_sum = Real::zero(p);
    for j in 0..n {
        shift_sum = &shift_sum + &x.add_i(j as i64).recip();
    }
    let w = x.add_i(n as i64);
    let winv = w.recip();
    let winv2 = winv.sqr();
    let mut sum = w.ln() - winv.div_i(2);
    let mut pw = winv2.clone();
    let eps = Real::pow2(-(p as i64), p);
    for i in 1..255usize {
        let b = bernoulli_real(2 * i, p)?;
        let term = &pw * &b.div_i(2 * i as i64);
        sum = &sum - &term;
        if term.abs() <= &eps * &sum.abs() {
            return Ok(sum - shift_sum);
        }
        pw = &pw * &winv2;
    }
    Err(Error::convergence("asymptotic series for digamma", 255))
}

/// `ψ^(m)(x)`; `m = 0` is the digamma function, `m ≥ 1` uses
/// `ψ^(m)(x) = (-1)^(m+1) m! ζ(m+1, x)`.
pub fn polygamma(m: u32, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !x.is_positive() {
        return Err(Error::domain("polygamma requires x > 0"));
    }
    if m == 0 {
        return digamma(x, ctx);
    }
    let p = ctx.work_bits();
    let z = hurwitz_zeta_real(&Real::from_i64(m as i64 + 1, p), x, ctx)?;
    let mut f = Real::one(p);
    for j in 2..=m as i64 {
        f = f.mul_i(j);
    }
    let v = z * f;
    Ok(if m % 2 == 1 { v } else { -v })
}
