//! Hurwitz and Riemann zeta functions.
//!
//! `ζ(s, x)` is computed by Euler–Maclaurin summation:
//!
//! ```text
//! ζ(s,x) = Σ_{j<N} (j+x)^(-s) + (N+x)^(1-s)/(s-1) + (N+x)^(-s)/2
//!        + Σ_{i≥1} B_{2i}/(2i)! (s)_{2i-1} (N+x)^(-s-2i+1)
//! ```
//!
//! with `N = max(⌈0.35·bits⌉, ⌈|s|⌉ + 10)`. The partial sums are kept in a
//! [`HurwitzLadder`], which can step `s → s+1` with one multiplication per
//! summand. That makes long runs `ζ(s+k, x)`, `k = 0, 1, 2, …` cheap.

use num_bigint::BigInt;
use num_rational::BigRational;
#[cfg(test)]
use num_traits::{Signed, ToPrimitive, Zero};

use super::bernoulli::{bernoulli_number, bernoulli_poly, bernoulli_real, rational_to_real, BERNOULLI_DEGREE_CAP};
use super::gamma::{gamma_complex, ln_gamma};
use crate::mp::{Complex, Error, PrecisionContext, Real, Result};

/// Largest correction index `i` used (needs `B_{2i}`).
const MAX_CORRECTIONS: usize = BERNOULLI_DEGREE_CAP / 2 - 1;

fn shift_count(s: &Complex, bits: usize) -> usize {
    let by_bits = (0.35 * bits as f64).ceil() as usize;
    let mag = s.abs().to_f64();
    by_bits.max(mag.ceil() as usize + 10)
}

/// Extra bits that compensate cancellation in `Σ (j+x)^(-s)` when `Re s < 0`.
fn cancellation_bits(s: &Complex, n: usize, x: &Real) -> usize {
    let re = s.re.to_f64();
    if re >= 0.0 {
        return 0;
    }
    let top = (n as f64 + x.to_f64().max(1.0)).log2();
    (-re * top).ceil() as usize + 8
}

fn small_integer(s: &Complex) -> Option<i64> {
    if s.is_real() && s.re.is_integer() {
        s.re.to_i64().filter(|n| n.unsigned_abs() < 1 << 20)
    } else {
        None
    }
}

/// `b^(-s)` for a positive real base.
fn neg_power(b: &Real, s: &Complex) -> Complex {
    match small_integer(s) {
        Some(n) => Complex::from_real(b.powi(-n)),
        None => Complex::real_pow(b, &-s),
    }
}

/// Euler–Maclaurin state for `ζ(s, x)` that can advance `s` by one.
pub(crate) struct HurwitzLadder {
    s: Complex,
    prec: usize,
    terms: Vec<Complex>,
    recips: Vec<Real>,
    tail_base: Real,
    tail_recip: Real,
    tail_pow: Complex,
    eps: Real,
}

impl HurwitzLadder {
    pub(crate) fn new(s: &Complex, x: &Real, ctx: &PrecisionContext) -> Result<Self> {
        if !x.is_positive() {
            return Err(Error::domain("Hurwitz zeta requires x > 0"));
        }
        let bits = ctx.work_bits();
        let n = shift_count(s, bits);
        if n > ctx.max_terms() {
            return Err(Error::convergence("Hurwitz zeta (Euler-Maclaurin shift)", ctx.max_terms()));
        }
        let prec = bits + cancellation_bits(s, n, x);
        let s = s.with_prec(prec);
        let x = x.with_prec(prec);
        let mut terms = Vec::with_capacity(n);
        let mut recips = Vec::with_capacity(n);
        for j in 0..n {
            let b = x.add_i(j as i64);
            terms.push(neg_power(&b, &s));
            recips.push(b.recip());
        }
        let tail_base = x.add_i(n as i64);
        let tail_recip = tail_base.recip();
        let tail_pow = neg_power(&tail_base, &s);
        let eps = Real::pow2(-(prec as i64) + 2, prec);
        Ok(HurwitzLadder { s, prec, terms, recips, tail_base, tail_recip, tail_pow, eps })
    }

    /// Advances `s` to `s + 1`.
    pub(crate) fn step(&mut self) {
        for (t, r) in self.terms.iter_mut().zip(&self.recips) {
            *t = t.scale(r);
        }
        self.tail_pow = self.tail_pow.scale(&self.tail_recip);
        self.s = self.s.add_real(&Real::one(self.prec));
    }

    /// `ζ(s, x)` at the current `s`.
    pub(crate) fn value(&self) -> Result<Complex> {
        let p = self.prec;
        let one = Real::one(p);
        let s_minus_1 = self.s.add_real(&-&one);
        if s_minus_1.is_zero() {
            return Err(Error::Pole("Hurwitz zeta at s = 1".into()));
        }
        let mut sum = Complex::zero(p);
        for t in self.terms.iter().rev() {
            sum = &sum + t;
        }
        sum = &sum + &(&self.tail_pow.scale(&self.tail_base) / &s_minus_1);
        sum = &sum + &self.tail_pow.scale(&Real::ratio(1, 2, p));
        // Corrections.
        let r2 = self.tail_recip.sqr();
        let mut poch = self.s.clone(); // (s)_{2i-1}
        let mut pw = self.tail_pow.scale(&self.tail_recip); // (N+x)^(-s-2i+1)
        let mut fact = Real::from_i64(2, p); // (2i)!
        let mut prev: Option<Real> = None;
        for i in 1..=MAX_CORRECTIONS {
            let b = bernoulli_real(2 * i, p)?;
            let term = (&poch * &pw).scale(&(&b / &fact));
            let mag = term.abs();
            sum = &sum + &term;
            if mag <= &self.eps * &sum.abs() {
                return Ok(sum);
            }
            if let Some(pm) = &prev {
                if &mag > pm && i > 4 {
                    break;
                }
            }
            prev = Some(mag);
            let a = self.s.add_real(&Real::from_i64(2 * i as i64 - 1, p));
            let b2 = self.s.add_real(&Real::from_i64(2 * i as i64, p));
            poch = &(&poch * &a) * &b2;
            pw = pw.scale(&r2);
            fact = fact.mul_i((2 * i + 1) as i64).mul_i((2 * i + 2) as i64);
        }
        Err(Error::convergence("Hurwitz zeta (Euler-Maclaurin corrections)", MAX_CORRECTIONS))
    }
}

/// `ζ(-n)` for `n ≥ 0` as an exact rational.
pub fn zeta_nonpositive_int(n: usize) -> Result<BigRational> {
    let b = bernoulli_number(n + 1)?;
    // ζ(-n) = (-1)^n B_{n+1}/(n+1)
    let r = b / BigRational::from_integer(BigInt::from(n + 1));
    Ok(if n % 2 == 1 { -r } else { r })
}

/// `ζ(2k)` for `k ≥ 1` via `(-1)^(k+1) B_{2k} (2π)^{2k} / (2 (2k)!)`.
fn zeta_even(k: usize, prec: usize) -> Result<Real> {
    let b = bernoulli_real(2 * k, prec)?.abs();
    let two_pi = Real::pi(prec).mul_i(2);
    let mut fact = Real::one(prec);
    for j in 2..=(2 * k as i64) {
        fact = fact.mul_i(j);
    }
    Ok(b * two_pi.powu(2 * k as u64) / fact.mul_i(2))
}

/// Riemann `ζ(n)` at an integer, exact where a closed form exists.
pub fn zeta_int(n: i64, ctx: &PrecisionContext) -> Result<Real> {
    let p = ctx.work_bits();
    if n == 1 {
        return Err(Error::Pole("Riemann zeta at s = 1".into()));
    }
    if n <= 0 {
        return Ok(rational_to_real(&zeta_nonpositive_int((-n) as usize)?, p));
    }
    if n % 2 == 0 && (n as usize) <= BERNOULLI_DEGREE_CAP {
        return zeta_even(n as usize / 2, p);
    }
    Ok(HurwitzLadder::new(&Complex::from_real(ctx.real(n)), &ctx.real(1), ctx)?.value()?.re.with_prec(p))
}

/// Hurwitz zeta `ζ(s, x)` for complex `s ≠ 1` and real `x > 0`.
pub fn hurwitz_zeta(s: &Complex, x: &Real, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.work_bits();
    if !x.is_positive() {
        return Err(Error::domain("Hurwitz zeta requires x > 0"));
    }
    if let Some(n) = small_integer(s) {
        if n == 1 {
            return Err(Error::Pole("Hurwitz zeta at s = 1".into()));
        }
        if n <= 0 {
            // ζ(-n, x) = -B_{n+1}(x)/(n+1)
            let m = (1 - n) as usize;
            let b = bernoulli_poly(m, x, ctx)?;
            return Ok(Complex::from_real(-(b.div_i(m as i64))));
        }
        if *x == Real::one(x.prec()) {
            return Ok(Complex::from_real(zeta_int(n, ctx)?));
        }
    }
    let v = HurwitzLadder::new(s, x, ctx)?.value()?;
    Ok(v.with_prec(p))
}

/// Real-argument convenience wrapper.
pub fn hurwitz_zeta_real(s: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    Ok(hurwitz_zeta(&Complex::from_real(s.clone()), x, ctx)?.re)
}

/// Riemann `ζ(s)`; uses the functional equation for `Re s < 0`.
pub fn riemann_zeta(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if small_integer(s).is_some() || !s.re.is_negative() {
        return hurwitz_zeta(s, &ctx.real(1), ctx);
    }
    // ζ(s) = 2 (2π)^(s-1) sin(πs/2) Γ(1-s) ζ(1-s)
    let p = ctx.work_bits();
    let one = Complex::one(p);
    let w = &one - s;
    let two_pi = ctx.pi().mul_i(2);
    let a = Complex::real_pow(&two_pi, &(s - &one));
    let sn = s.scale(&ctx.pi().div_i(2)).sin();
    let g = gamma_complex(&w, ctx)?;
    let z = hurwitz_zeta(&w, &ctx.real(1), ctx)?;
    Ok((&(&a * &sn) * &(&g * &z)).scale(&ctx.real(2)))
}

/// `∂ζ(s, x)/∂s` at `s = 1 - m`, `m ≥ 1`.
///
/// Central differences with step `h = 2^(-bits/3)` and two Richardson
/// levels, run at `bits + 2·bits/3`.
pub fn hurwitz_zeta_sderiv(m: u32, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if m == 0 {
        return Err(Error::domain("hurwitz_zeta_sderiv requires m >= 1"));
    }
    if !x.is_positive() {
        return Err(Error::domain("Hurwitz zeta requires x > 0"));
    }
    let bits = ctx.precision_bits();
    let hi = ctx.elevated(2 * bits / 3);
    let p = hi.work_bits();
    let s0 = hi.real(1 - m as i64);
    let xh = x.with_prec(p);
    let h0 = Real::pow2(-((bits / 3) as i64), p);
    let diff = |h: &Real| -> Result<Real> {
        let a = hurwitz_zeta_real(&(&s0 + h), &xh, &hi)?;
        let b = hurwitz_zeta_real(&(&s0 - h), &xh, &hi)?;
        Ok((a - b) / h.mul_i(2))
    };
    let d0 = diff(&h0)?;
    let h1 = h0.div_i(2);
    let d1 = diff(&h1)?;
    let d2 = diff(&h1.div_i(2))?;
    let r0 = (d1.mul_i(4) - &d0).div_i(3);
    let r1 = (d2.mul_i(4) - &d1).div_i(3);
    let r = (r1.mul_i(16) - &r0).div_i(15);
    Ok(r.with_prec(ctx.work_bits()))
}

/// `ζ(1-s-k)` for `k = 0, 1, 2, …` and complex non-integer `s`.
///
/// Small `k` use Euler–Maclaurin directly. Once `Re(s+k) ≥ 3/2`, the values
/// come from `ζ(1-v) = 2 (2π)^(-v) cos(πv/2) Γ(v) ζ(v)` with `v = s + k`,
/// and every factor is advanced incrementally in `k`.
pub(crate) struct ReflectedZetaSeq {
    s: Complex,
    k: usize,
    ctx: PrecisionContext,
    state: Option<ReflectedState>,
}

struct ReflectedState {
    v: Complex,
    gamma: Complex,
    two_pi_pow: Complex,
    cos_cycle: [Complex; 4],
    phase: usize,
    ladder: HurwitzLadder,
    two_pi: Real,
}

impl ReflectedZetaSeq {
    pub(crate) fn new(s: &Complex, ctx: &PrecisionContext) -> Self {
        ReflectedZetaSeq { s: s.clone(), k: 0, ctx: ctx.clone(), state: None }
    }

    pub(crate) fn next_value(&mut self) -> Result<Complex> {
        let p = self.ctx.work_bits();
        let v = self.s.add_real(&Real::from_i64(self.k as i64, p));
        self.k += 1;
        if v.re.to_f64() < 1.5 && self.state.is_none() {
            let w = &Complex::one(p) - &v;
            return riemann_zeta(&w, &self.ctx);
        }
        if let Some(st) = self.state.as_mut() {
            st.gamma = &st.gamma * &st.v;
            st.v = st.v.add_real(&Real::one(p));
            st.two_pi_pow = st.two_pi_pow.scale(&st.two_pi.recip());
            st.phase = (st.phase + 1) % 4;
            st.ladder.step();
        } else {
            let two_pi = self.ctx.pi().mul_i(2);
            let half_pi = self.ctx.pi().div_i(2);
            let arg = v.scale(&half_pi);
            let c = arg.cos();
            let s = arg.sin();
            self.state = Some(ReflectedState {
                gamma: gamma_complex(&v, &self.ctx)?,
                two_pi_pow: Complex::real_pow(&two_pi, &-&v),
                cos_cycle: [c.clone(), -&s, -&c, s],
                phase: 0,
                ladder: HurwitzLadder::new(&v, &self.ctx.real(1), &self.ctx)?,
                v,
                two_pi,
            });
        }
        let st = self.state.as_ref().expect("state present");
        let z = st.ladder.value()?;
        let r = &(&st.two_pi_pow * &st.cos_cycle[st.phase]) * &(&st.gamma * &z);
        Ok(r.scale(&Real::from_i64(2, p)).with_prec(p))
    }
}

/// `ln Γ(x) - ½ ln 2π`, the Lerch value of `ζ'(0, x)`.
pub fn lerch_value(x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let two_pi = ctx.pi().mul_i(2);
    Ok(ln_gamma(x, ctx)? - two_pi.ln().div_i(2))
}

/// Converts an exact rational to `f64` for diagnostics.
#[cfg(test)]
pub(crate) fn rational_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        let s = if r.is_negative() { -1.0 } else { 1.0 };
        s * f64::INFINITY
    }
}
