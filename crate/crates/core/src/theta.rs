//! Jacobi theta functions in the nome convention
//!
//! ```text
//! θ₁(z, q) = 2 Σ_{n≥0} (-1)^n q^((n+1/2)²) sin((2n+1)z)
//! θ₂(z, q) = 2 Σ_{n≥0} q^((n+1/2)²) cos((2n+1)z)
//! θ₃(z, q) = 1 + 2 Σ_{n≥1} q^(n²) cos(2nz)
//! θ₄(z, q) = 1 + 2 Σ_{n≥1} (-1)^n q^(n²) cos(2nz)
//! ```
//!
//! with `θ₂(z) = θ₁(z + π/2)`, `θ₃(z) = θ₄(z + π/2)` and the triple product
//! `θ₄(z) = (q²; q²)_∞ (q e^(2iz); q²)_∞ (q e^(-2iz); q²)_∞`.
//!
//! The `q → 1` forms depend on `z` only through `z_π = z mod π` and the
//! parity of `⌊z/π⌋`.

use serde::{Deserialize, Serialize};

use crate::lambert::QPoint;
use crate::mp::{Complex, Error, EvalResult, Method, PrecisionContext, Real, Result};
use crate::qpochhammer::pochhammer_direct;

/// Which defining formula [`theta_direct`] uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaRoute {
    #[default]
    Series,
    TripleProduct,
}

impl std::str::FromStr for ThetaRoute {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "series" => Ok(ThetaRoute::Series),
            "triple_product" | "triple-product" => Ok(ThetaRoute::TripleProduct),
            _ => Err(format!("unknown theta route {s:?}")),
        }
    }
}

fn check_j(j: u8) -> Result<()> {
    if (1..=4).contains(&j) {
        Ok(())
    } else {
        Err(Error::domain(format!("theta index must be 1..4, got {j}")))
    }
}

/// A real argument `z = π·⌊z/π⌋ + z_π` with `0 ≤ z_π < π`.
#[derive(Clone, Debug)]
pub struct ThetaArgument {
    pub j: u8,
    pub z: Real,
    pub z_pi: Real,
    pub floor_z_pi: i64,
}

impl ThetaArgument {
    /// Reduces `z` modulo `π` with enough extra bits that `z_π` is correct
    /// to working precision for `|z|` up to about `2^64`.
    pub fn new(j: u8, z: &Real, ctx: &PrecisionContext) -> Result<Self> {
        check_j(j)?;
        if !z.is_finite() {
            return Err(Error::domain("theta argument must be finite"));
        }
        let p = ctx.work_bits();
        let extra = z.exponent().unwrap_or(0).max(0) as usize + 16;
        let hp = p + extra;
        let pi = Real::pi(hp);
        let zh = z.with_prec(hp);
        let mut n = (&zh / &pi).floor();
        let mut r = &zh - &(&n * &pi);
        if r.is_negative() {
            r = &r + &pi;
            n = n.add_i(-1);
        } else if r >= pi {
            r = &r - &pi;
            n = n.add_i(1);
        }
        let floor_z_pi = n.to_i64().ok_or_else(|| Error::domain("theta argument too large"))?;
        let mut z_pi = r.with_prec(p);
        if z_pi >= Real::pi(p) {
            z_pi = Real::zero(p);
        }
        Ok(ThetaArgument { j, z: z.with_prec(p), z_pi, floor_z_pi })
    }
}

/// Number of series terms until `q^(n²) e^(2n|y|)` drops below `2^-bits`.
fn series_terms_needed(t: f64, y: f64, bits: usize) -> f64 {
    let b = bits as f64 * std::f64::consts::LN_2;
    (2.0 * y + ((2.0 * y).powi(2) + 4.0 * t * b).sqrt()) / (2.0 * t) + 1.0
}

fn theta_series(j: u8, z: &Complex, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let t = q.log_inv_q().with_prec(p);
    let y = z.im.abs();
    let est = series_terms_needed(t.to_f64(), y.to_f64(), ctx.precision_bits());
    if !est.is_finite() || est > ctx.max_terms() as f64 {
        return Err(Error::convergence(
            format!("theta series with |Im z| = {} (about {est:.3e} terms)", y.to_sci(6)),
            ctx.max_terms(),
        ));
    }
    let eps = ctx.eps().with_prec(p);
    let odd = j <= 2;
    let alternating = j == 1 || j == 4;
    let qq = q.q().with_prec(p);
    // Exponents e_n = n² (even) or (n + 1/2)² (odd); weights w_n = q^(e_n).
    let (mut w, mut step, n0, mut sum) = if odd {
        let w0 = q.pow(&Real::ratio(1, 4, p));
        (w0, qq.sqr(), 0i64, Complex::zero(p))
    } else {
        (qq.clone(), qq.powi(3), 1i64, Complex::one(p))
    };
    let two_y = y.mul_i(2);
    let mut prev_bound: Option<Real> = None;
    let mut n = n0;
    loop {
        let k = if odd { 2 * n + 1 } else { 2 * n };
        let arg = z.scale(&Real::from_i64(k, p));
        let f = if j == 1 { arg.sin() } else { arg.cos() };
        let mut term = f.scale(&w.mul_i(2));
        if alternating && n % 2 == 1 {
            term = -term;
        }
        sum = &sum + &term;
        let bound = w.mul_i(2) * (&two_y * &Real::from_i64(n + 1, p)).exp();
        let decreasing = prev_bound.as_ref().is_some_and(|pb| &bound < pb) || y.is_zero();
        let scale = Real::max_of(&sum.abs(), &w);
        if decreasing && bound <= &eps * &scale {
            // Later bounds shrink at least geometrically with ratio q^2.
            let err = &bound * &qq;
            let terms = (n - n0 + 1) as usize;
            let value = if z.is_real() { Complex::from_real(sum.re) } else { sum };
            return EvalResult::new(value, err, terms, Method::Direct);
        }
        prev_bound = Some(bound);
        w = &w * &step;
        step = &step * &qq.sqr();
        n += 1;
        if (n - n0) as usize > ctx.max_terms() {
            return Err(Error::convergence("theta series", ctx.max_terms()));
        }
    }
}

fn rel_err(r: &EvalResult) -> Real {
    let a = r.value.abs();
    if a.is_zero() {
        r.err_estimate.clone()
    } else {
        &r.err_estimate / &a
    }
}

fn theta_triple(j: u8, z: &Complex, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    let p = ctx.work_bits();
    let q2 = q.power_point(2, ctx)?;
    let e2 = Complex::new(Real::zero(p), Real::from_i64(2, p));
    let ep = (&e2 * z).exp();
    let em = ep.recip();
    let euler = pochhammer_direct(&Complex::from_real(q2.q().clone()), &q2, ctx)?;
    // θ₃, θ₂ follow from θ₄, θ₁ by z → z + π/2, which flips the sign of e^(±2iz).
    let (a_scale, prefactor) = match j {
        4 => (q.q().clone(), Complex::one(p)),
        3 => (-q.q(), Complex::one(p)),
        1 => (q2.q().clone(), z.sin().scale(&q.pow(&Real::ratio(1, 4, p)).mul_i(2))),
        _ => (-q2.q(), z.cos().scale(&q.pow(&Real::ratio(1, 4, p)).mul_i(2))),
    };
    let plus = pochhammer_direct(&ep.scale(&a_scale), &q2, ctx)?;
    let minus = pochhammer_direct(&em.scale(&a_scale), &q2, ctx)?;
    let mut value = &(&(&prefactor * &euler.value) * &plus.value) * &minus.value;
    if z.is_real() {
        value = Complex::from_real(value.re);
    }
    let rel = rel_err(&euler) + rel_err(&plus) + rel_err(&minus) + ctx.eps().with_prec(p).mul_i(4);
    let err = value.abs() * rel;
    let terms = euler.terms_used + plus.terms_used + minus.terms_used;
    EvalResult::new(value, err, terms, Method::Direct)
}

/// `θ_j(z, q)` for complex `z` from the defining series or the triple product.
pub fn theta_direct(j: u8, z: &Complex, q: &QPoint, ctx: &PrecisionContext, route: ThetaRoute) -> Result<EvalResult> {
    check_j(j)?;
    let z = z.with_prec(ctx.work_bits());
    match route {
        ThetaRoute::Series => theta_series(j, &z, q, ctx),
        ThetaRoute::TripleProduct => theta_triple(j, &z, q, ctx),
    }
}

/// Both direct routes, failing with [`Error::Inconsistent`] when they differ
/// by more than ten times their combined error estimates.
pub fn theta_checked(j: u8, z: &Complex, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    let a = theta_direct(j, z, q, ctx, ThetaRoute::Series)?;
    let b = theta_direct(j, z, q, ctx, ThetaRoute::TripleProduct)?;
    let gap = (&a.value - &b.value).abs();
    let floor = ctx.eps().with_prec(ctx.work_bits()) * a.value.abs();
    let tol = (&a.err_estimate + &b.err_estimate + floor).mul_i(10);
    if gap > tol {
        return Err(Error::Inconsistent(format!(
            "theta_{j}: series and triple product differ by {}",
            gap.to_sci(4)
        )));
    }
    Ok(a)
}

/// `√(π/log(1/q)) · [e^(z_π²/log q) ± e^((π - z_π)²/log q)]`.
fn bracket(arg: &ThetaArgument, q: &QPoint, plus: bool) -> Real {
    let p = q.prec();
    let pi = Real::pi(p);
    let lq = q.log_q();
    let a = (arg.z_pi.sqr() / lq).exp();
    let b = ((&pi - &arg.z_pi).sqr() / lq).exp();
    let pre = (&pi / q.log_inv_q()).sqrt();
    pre * if plus { a + b } else { a - b }
}

fn shifted(j: u8, z: &Real, half_periods: i64, ctx: &PrecisionContext) -> Result<ThetaArgument> {
    let p = ctx.work_bits();
    let zs = z.with_prec(p + 16) + Real::pi(p + 16).div_i(2).mul_i(half_periods);
    ThetaArgument::new(j, &zs, ctx)
}

/// The `q → 1` form of `θ_j(z, q)` for real `z`, as a closed-form value.
pub fn theta_asymptotic(j: u8, z: &Real, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    check_j(j)?;
    let v = match j {
        3 => bracket(&ThetaArgument::new(3, z, ctx)?, q, true),
        4 => bracket(&shifted(4, z, 1, ctx)?, q, true),
        2 => {
            let a = ThetaArgument::new(2, z, ctx)?;
            let b = bracket(&a, q, false);
            if a.floor_z_pi % 2 == 0 {
                b
            } else {
                -b
            }
        }
        _ => {
            let a = shifted(1, z, -1, ctx)?;
            let b = bracket(&a, q, false);
            if a.floor_z_pi % 2 == 0 {
                b
            } else {
                -b
            }
        }
    };
    EvalResult::closed(Complex::from_real(v))
}

/// `θ_j'(z, q)/θ_j(z, q)` for real `z` from the Lambert-type series
///
/// ```text
/// θ₁'/θ₁ =  cot z + 4 Σ q^(2n)/(1 - q^(2n)) sin 2nz
/// θ₂'/θ₂ = -tan z + 4 Σ (-1)^n q^(2n)/(1 - q^(2n)) sin 2nz
/// θ₃'/θ₃ =          4 Σ (-1)^n q^n/(1 - q^(2n)) sin 2nz
/// θ₄'/θ₄ =          4 Σ q^n/(1 - q^(2n)) sin 2nz
/// ```
pub fn theta_logderiv_direct(j: u8, z: &Real, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    check_j(j)?;
    let p = ctx.work_bits();
    let z = z.with_prec(p);
    let eps = ctx.eps().with_prec(p);
    let t = q.log_inv_q().with_prec(p);
    let tf = t.to_f64();
    let rate = if j <= 2 { 2.0 * tf } else { tf };
    let est = ctx.precision_bits() as f64 * std::f64::consts::LN_2 / rate - (-(-rate).exp_m1()).ln() / rate;
    if est > 2.0 * ctx.max_terms() as f64 {
        return Err(Error::convergence(
            format!("theta log-derivative series (about {est:.3e} terms)"),
            ctx.max_terms(),
        ));
    }
    let mut sum = match j {
        1 => {
            let s = z.sin();
            if s.abs() <= eps {
                return Err(Error::Pole("θ₁ vanishes at z ≡ 0 mod π".into()));
            }
            z.cos() / s
        }
        2 => {
            let c = z.cos();
            if c.abs() <= eps {
                return Err(Error::Pole("θ₂ vanishes at z ≡ π/2 mod π".into()));
            }
            -(z.sin() / c)
        }
        _ => Real::zero(p),
    };
    let one = Real::one(p);
    let qq = q.q().with_prec(p);
    let q2 = qq.sqr();
    // Coefficients decay like q^(2n) or q^n.
    let one_minus_r = if j <= 2 { -(-t.mul_i(2)).exp_m1() } else { -(-&t).exp_m1() };
    let mut qn = one.clone();
    let mut q2n = one.clone();
    for n in 1..=ctx.max_terms() {
        qn = &qn * &qq;
        q2n = &q2n * &q2;
        let denom = if 2.0 * n as f64 * tf < 0.5 { -(-(t.mul_i(2 * n as i64))).exp_m1() } else { &one - &q2n };
        let num = if j <= 2 { &q2n } else { &qn };
        let mut c = (num / &denom).mul_i(4);
        if (j == 2 || j == 3) && n % 2 == 1 {
            c = -c;
        }
        let s = (&z * &Real::from_u64(2 * n as u64, p)).sin();
        sum = &sum + &(&c * &s);
        let tail = c.abs() / &one_minus_r;
        if tail <= &eps * &Real::max_of(&sum.abs(), &one) {
            return EvalResult::real(sum, tail, n, Method::Direct);
        }
    }
    Err(Error::convergence("theta log-derivative series", ctx.max_terms()))
}

/// `(1/log q) [2(z_π - π/2) + π f(π (z_π - π/2)/log q)]` with `f = coth`
/// (`θ₂`) or `f = tanh` (`θ₃`).
fn logderiv_rule(arg: &ThetaArgument, q: &QPoint, coth: bool) -> Result<Real> {
    let p = q.prec();
    let pi = Real::pi(p);
    let lq = q.log_q();
    let d = &arg.z_pi - &pi.div_i(2);
    let u = &(&pi * &d) / lq;
    let f = if coth {
        if d.abs() <= Real::pow2(-(p as i64) + 40, p) {
            return Err(Error::Pole("coth pole at z ≡ π/2 mod π".into()));
        }
        u.tanh().recip()
    } else {
        u.tanh()
    };
    Ok((d.mul_i(2) + &pi * &f) / lq)
}

/// The `q → 1` form of `θ_j'/θ_j` for real `z`, as a closed-form value.
pub fn theta_logderiv_asymptotic(j: u8, z: &Real, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    check_j(j)?;
    let v = match j {
        2 => logderiv_rule(&ThetaArgument::new(2, z, ctx)?, q, true)?,
        1 => logderiv_rule(&shifted(1, z, -1, ctx)?, q, true)?,
        3 => logderiv_rule(&ThetaArgument::new(3, z, ctx)?, q, false)?,
        _ => logderiv_rule(&shifted(4, z, 1, ctx)?, q, false)?,
    };
    EvalResult::closed(Complex::from_real(v))
}

/// `[(θ₂(0, q^(1/2)) + θ₃(0, q^(1/2))) / (2√i)]^(4k)` with `√i = e^(iπ/4)`,
/// which equals the Eisenstein series `E_{2k}(q)` only up to exponentially
/// small terms. The imaginary residue is checked against `10·eps` and dropped.
pub fn eisenstein_from_theta(k: u32, q: &QPoint, ctx: &PrecisionContext) -> Result<EvalResult> {
    if k == 0 {
        return Err(Error::domain("Eisenstein index k must be at least 1"));
    }
    let p = ctx.work_bits();
    let root = QPoint::from_log_inv(&q.log_inv_q().div_i(2), ctx)?;
    let zero = Complex::zero(p);
    let a = theta_direct(2, &zero, &root, ctx, ThetaRoute::Series)?;
    let b = theta_direct(3, &zero, &root, ctx, ThetaRoute::Series)?;
    let sum = &a.value + &b.value;
    let quarter_pi = Real::pi(p).div_i(4);
    let sqrt_i = Complex::new(quarter_pi.cos(), quarter_pi.sin());
    let w = &sum / &sqrt_i.scale(&Real::from_i64(2, p));
    let v = w.powu(4 * k as u64);
    let eps = ctx.eps().with_prec(p);
    if v.im.abs() > eps.mul_i(10) * v.abs() {
        return Err(Error::Inconsistent(format!(
            "theta Eisenstein form has imaginary part {}",
            v.im.to_sci(4)
        )));
    }
    let rel = (rel_err(&a) + rel_err(&b)).mul_i(4 * k as i64) + &eps;
    let re = v.re;
    let err = re.abs() * rel;
    EvalResult::real(re, err, a.terms_used + b.terms_used, Method::Direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambert::{eisenstein_asymptotic, eisenstein_modified};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1_000_000).unwrap()
    }

    fn rel(a: &Real, b: &Real) -> f64 {
        ((a - b) / b).abs().to_f64()
    }

    fn re(c: &PrecisionContext, v: &str) -> Complex {
        Complex::from_real(c.parse(v).unwrap())
    }

    #[test]
    fn trivial_values() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        let z = Complex::zero(c.work_bits());
        let t1 = theta_direct(1, &z, &q, &c, ThetaRoute::Series).unwrap();
        assert!(t1.value.is_zero());
        let t1 = theta_direct(1, &z, &q, &c, ThetaRoute::TripleProduct).unwrap();
        assert!(t1.value.is_zero());
        let tiny = QPoint::parse("1e-40", &c).unwrap();
        let t3 = theta_direct(3, &z, &tiny, &c, ThetaRoute::Series).unwrap();
        assert!((t3.re() - &c.real(1)).abs().to_f64() < 1e-39);
    }

    #[test]
    fn routes_agree() {
        let c = ctx();
        for qs in ["0.2", "0.6", "0.9"] {
            let q = QPoint::parse(qs, &c).unwrap();
            for zs in ["0", "0.4", "2.8"] {
                for j in 1..=4 {
                    let z = re(&c, zs);
                    let a = theta_direct(j, &z, &q, &c, ThetaRoute::Series).unwrap();
                    let b = theta_direct(j, &z, &q, &c, ThetaRoute::TripleProduct).unwrap();
                    let gap = (&a.value - &b.value).abs();
                    let tol = c.eps().mul_i(10) * Real::max_of(&a.value.abs(), &c.real(1));
                    assert!(gap <= tol, "j={j} z={zs} q={qs} gap={}", gap.to_sci(3));
                }
            }
        }
    }

    #[test]
    fn complex_argument_routes_agree() {
        let c = ctx();
        let q = QPoint::parse("0.4", &c).unwrap();
        let z = Complex::new(c.parse("0.3").unwrap(), c.parse("0.2").unwrap());
        for j in 1..=4 {
            theta_checked(j, &z, &q, &c).unwrap();
        }
    }

    #[test]
    fn quasi_period() {
        let c = ctx();
        let p = c.work_bits();
        for qs in ["0.4", "0.7"] {
            let q = QPoint::parse(qs, &c).unwrap();
            for zs in ["0.3", "1.0"] {
                let z = re(&c, zs);
                let lhs = theta_direct(1, &z, &q, &c, ThetaRoute::Series).unwrap();
                // z + log q/(2i) = z - i log q / 2
                let shift = Complex::new(Real::zero(p), -q.log_q().div_i(2));
                let t4 = theta_direct(4, &(&z + &shift), &q, &c, ThetaRoute::Series).unwrap();
                let iz = Complex::new(Real::zero(p), z.re.clone());
                let pre = (&Complex::new(Real::zero(p), -q.pow(&c.ratio(1, 4)))) * &iz.exp();
                let rhs = &pre * &t4.value;
                let gap = (&lhs.value - &rhs).abs();
                assert!(gap <= c.eps().mul_i(10), "{}", gap.to_sci(3));
                assert!(rhs.im.abs() <= c.eps().mul_i(10));
            }
        }
    }

    #[test]
    fn shift_and_period_relations() {
        let c = ctx();
        let p = c.work_bits();
        let q = QPoint::parse("0.6", &c).unwrap();
        let half_pi = Real::pi(p).div_i(2);
        for zs in ["0.1", "0.9", "2.2"] {
            let z = c.parse(zs).unwrap();
            let zh = Complex::from_real(&z + &half_pi);
            let zc = Complex::from_real(z.clone());
            let t = |j, w: &Complex| theta_direct(j, w, &q, &c, ThetaRoute::Series).unwrap().value.re;
            assert!((t(2, &zc) - t(1, &zh)).abs() <= c.eps().mul_i(10));
            assert!((t(3, &zc) - t(4, &zh)).abs() <= c.eps().mul_i(10));
            let zp = Complex::from_real(&z + &Real::pi(p));
            assert!((t(3, &zp) - t(3, &zc)).abs() <= c.eps().mul_i(10));
            assert!((t(1, &zp) + t(1, &zc)).abs() <= c.eps().mul_i(10));
        }
    }

    #[test]
    fn argument_reduction() {
        let c = ctx();
        let p = c.work_bits();
        let a = ThetaArgument::new(3, &c.parse("-1").unwrap(), &c).unwrap();
        assert_eq!(a.floor_z_pi, -1);
        assert!(rel(&a.z_pi, &(Real::pi(p) - c.real(1))) < 1e-70);
        let big = c.parse("1000000").unwrap();
        let a = ThetaArgument::new(3, &big, &c).unwrap();
        let back = Real::pi(p) * Real::from_i64(a.floor_z_pi, p) + &a.z_pi;
        assert!(rel(&back, &big) < 1e-70);
    }

    #[test]
    fn abstract_constant_shape() {
        let c = ctx();
        let p = c.work_bits();
        let pi = Real::pi(p);
        let q = QPoint::from_log_inv(&pi.recip(), &c).unwrap();
        let a = theta_asymptotic(4, &Real::zero(p), &q, &c).unwrap();
        let want = pi.mul_i(2) * (-(pi.powi(3).div_i(4))).exp();
        assert!(rel(a.re(), &want) < 1e-70);
        let d = theta_direct(4, &Complex::zero(p), &q, &c, ThetaRoute::Series).unwrap();
        let r = rel(a.re(), d.re());
        assert!(r > 1e-28 && r < 1e-26, "{r}");
    }

    #[test]
    fn asymptotic_forms_track_direct() {
        let c = ctx();
        let q = QPoint::parse("0.8", &c).unwrap();
        let z = c.parse("0.4").unwrap();
        for j in 1..=4 {
            let a = theta_asymptotic(j, &z, &q, &c).unwrap();
            let d = theta_direct(j, &Complex::from_real(z.clone()), &q, &c, ThetaRoute::Series).unwrap();
            assert!(rel(a.re(), d.re()) < 1e-8, "j={j} {}", rel(a.re(), d.re()));
        }
        let p = c.work_bits();
        let zp = &z + &Real::pi(p);
        let a = theta_asymptotic(3, &z, &q, &c).unwrap();
        let b = theta_asymptotic(3, &zp, &q, &c).unwrap();
        assert!(rel(a.re(), b.re()) < 1e-70);
    }

    #[test]
    fn theta1_rule_across_periods() {
        let c = ctx();
        let q = QPoint::parse("0.9", &c).unwrap();
        for zs in ["0.4", "2.0", "3.5", "5.0", "-1.2", "-4.4"] {
            let z = c.parse(zs).unwrap();
            let a = theta_asymptotic(1, &z, &q, &c).unwrap();
            let d = theta_direct(1, &Complex::from_real(z.clone()), &q, &c, ThetaRoute::Series).unwrap();
            assert!(rel(a.re(), d.re()) < 1e-30, "z={zs} {}", rel(a.re(), d.re()));
        }
    }

    #[test]
    fn logderiv_matches_difference() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        let z = c.parse("0.7").unwrap();
        let h = c.parse("1e-20").unwrap();
        for j in 1..=4 {
            let f = |w: &Real| theta_direct(j, &Complex::from_real(w.clone()), &q, &c, ThetaRoute::Series).unwrap().value.re;
            let fd = (f(&(&z + &h)).ln() - f(&(&z - &h)).ln()) / h.mul_i(2);
            let d = theta_logderiv_direct(j, &z, &q, &c).unwrap();
            assert!(rel(d.re(), &fd) < 1e-30, "j={j}");
        }
    }

    #[test]
    fn logderiv_trivial_points() {
        let c = ctx();
        let p = c.work_bits();
        let q = QPoint::parse("0.5", &c).unwrap();
        let half_pi = Real::pi(p).div_i(2);
        let v = theta_logderiv_direct(1, &half_pi, &q, &c).unwrap();
        assert!(v.re().abs().to_f64() < 1e-70);
        let v = theta_logderiv_direct(3, &Real::zero(p), &q, &c).unwrap();
        assert!(v.re().is_zero());
        assert!(matches!(theta_logderiv_direct(1, &Real::zero(p), &q, &c), Err(Error::Pole(_))));
        let v = theta_logderiv_asymptotic(3, &half_pi, &q, &c).unwrap();
        assert!(v.re().abs().to_f64() < 1e-70);
        assert!(theta_logderiv_asymptotic(2, &half_pi, &q, &c).is_err());
    }

    #[test]
    fn logderiv_asymptotic_close() {
        let c = ctx();
        let q = QPoint::parse("0.9", &c).unwrap();
        let z = c.parse("0.7").unwrap();
        for j in 1..=4 {
            let a = theta_logderiv_asymptotic(j, &z, &q, &c).unwrap();
            let d = theta_logderiv_direct(j, &z, &q, &c).unwrap();
            assert!(rel(a.re(), d.re()) < 1e-6, "j={j} {}", rel(a.re(), d.re()));
        }
    }

    #[test]
    fn eisenstein_bridge() {
        let c = ctx();
        let q = QPoint::parse("0.5", &c).unwrap();
        let t = eisenstein_from_theta(1, &q, &c).unwrap();
        let m = eisenstein_modified(1, &q, &c).unwrap();
        assert!(t.re().is_negative());
        assert!(rel(t.re(), m.re()) < 1e-12);
        let q = QPoint::parse("0.3", &c).unwrap();
        let t = eisenstein_from_theta(2, &q, &c).unwrap();
        let a = eisenstein_asymptotic(2, &q).unwrap();
        assert!(rel(t.re(), a.re()) < 1e-10);
    }
}
