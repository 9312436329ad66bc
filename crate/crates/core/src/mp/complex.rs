//! Arbitrary-precision complex numbers over [`Real`].
//!
//! Operations check for exactly-zero imaginary parts and fall back to real
//! arithmetic, so real-valued computations routed through `Complex` pay
//! little for the generality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::Real;

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Complex { re, im: Real::zero(p) }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_real(Real::zero(prec))
    }

    pub fn one(prec: usize) -> Self {
        Self::from_real(Real::one(prec))
    }

    /// `i` at precision `prec`.
    pub fn i(prec: usize) -> Self {
        Complex { re: Real::zero(prec), im: Real::one(prec) }
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        Complex { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Complex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Real {
        if self.is_real() {
            self.re.sqr()
        } else {
            self.re.sqr() + self.im.sqr()
        }
    }

    pub fn abs(&self) -> Real {
        if self.is_real() {
            self.re.abs()
        } else if self.re.is_zero() {
            self.im.abs()
        } else {
            self.norm_sqr().sqrt()
        }
    }

    pub fn arg(&self) -> Real {
        self.im.atan2(&self.re)
    }

    pub fn scale(&self, r: &Real) -> Self {
        if self.is_real() {
            Complex::from_real(&self.re * r)
        } else {
            Complex { re: &self.re * r, im: &self.im * r }
        }
    }

    pub fn add_real(&self, r: &Real) -> Self {
        Complex { re: &self.re + r, im: self.im.clone() }
    }

    pub fn recip(&self) -> Self {
        if self.is_real() {
            return Complex::from_real(self.re.recip());
        }
        let d = self.norm_sqr();
        Complex { re: &self.re / &d, im: -(&self.im / &d) }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        if self.is_real() {
            return Complex::from_real(m);
        }
        Complex { re: &m * &self.im.cos(), im: &m * &self.im.sin() }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        if self.is_real() && self.re.is_positive() {
            return Complex::from_real(self.re.ln());
        }
        Complex { re: self.abs().ln(), im: self.arg() }
    }

    pub fn sqrt(&self) -> Self {
        if self.is_real() && !self.re.is_negative() {
            return Complex::from_real(self.re.sqrt());
        }
        let half = Complex::from_real(Real::ratio(1, 2, self.prec()));
        (&self.ln() * &half).exp()
    }

    pub fn sin(&self) -> Self {
        if self.is_real() {
            return Complex::from_real(self.re.sin());
        }
        Complex { re: &self.re.sin() * &self.im.cosh(), im: &self.re.cos() * &self.im.sinh() }
    }

    pub fn cos(&self) -> Self {
        if self.is_real() {
            return Complex::from_real(self.re.cos());
        }
        Complex { re: &self.re.cos() * &self.im.cosh(), im: -(&self.re.sin() * &self.im.sinh()) }
    }

    /// `self^n` by repeated squaring.
    pub fn powu(&self, mut n: u64) -> Self {
        if self.is_real() {
            return Complex::from_real(self.re.powu(n));
        }
        let mut base = self.clone();
        let mut acc = Complex::one(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, n: i64) -> Self {
        let r = self.powu(n.unsigned_abs());
        if n < 0 {
            r.recip()
        } else {
            r
        }
    }

    /// `b^e` for a positive real base `b` and complex exponent `e`.
    pub fn real_pow(b: &Real, e: &Complex) -> Self {
        if e.is_real() {
            return Complex::from_real(b.powr(&e.re));
        }
        let l = b.ln();
        Complex::new(&e.re * &l, &e.im * &l).exp()
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn to_sci(&self, digits: usize) -> (String, String) {
        (self.re.to_sci(digits), self.im.to_sci(digits))
    }
}

impl From<Real> for Complex {
    fn from(r: Real) -> Self {
        Complex::from_real(r)
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex({} + {}i)", self.re.to_sci(24), self.im.to_sci(24))
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -self.re, im: -self.im }
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -&self.re, im: -&self.im }
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, r: &Complex) -> Complex {
        Complex { re: &self.re + &r.re, im: &self.im + &r.im }
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, r: &Complex) -> Complex {
        Complex { re: &self.re - &r.re, im: &self.im - &r.im }
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, r: &Complex) -> Complex {
        match (self.is_real(), r.is_real()) {
            (true, true) => Complex::from_real(&self.re * &r.re),
            (true, false) => r.scale(&self.re),
            (false, true) => self.scale(&r.re),
            (false, false) => Complex {
                re: &self.re * &r.re - &self.im * &r.im,
                im: &self.re * &r.im + &self.im * &r.re,
            },
        }
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, r: &Complex) -> Complex {
        if r.is_real() {
            if self.is_real() {
                return Complex::from_real(&self.re / &r.re);
            }
            return Complex { re: &self.re / &r.re, im: &self.im / &r.re };
        }
        let d = r.norm_sqr();
        Complex {
            re: (&self.re * &r.re + &self.im * &r.im) / &d,
            im: (&self.im * &r.re - &self.re * &r.im) / &d,
        }
    }
}

macro_rules! owned_variants {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, r: Complex) -> Complex {
                (&self).$m(&r)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $m(self, r: &Complex) -> Complex {
                (&self).$m(r)
            }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $m(self, r: Complex) -> Complex {
                self.$m(&r)
            }
        }
    };
}

owned_variants!(Add, add);
owned_variants!(Sub, sub);
owned_variants!(Mul, mul);
owned_variants!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(Real::from_f64(re, 128), Real::from_f64(im, 128))
    }

    #[test]
    fn field_ops() {
        let a = c(1.0, 2.0);
        let b = c(-0.5, 0.25);
        let p = &a * &b;
        assert_eq!((p.re.to_f64(), p.im.to_f64()), (-1.0, -0.75));
        let q = &p / &b;
        assert!((q.re.to_f64() - 1.0).abs() < 1e-30 && (q.im.to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn exp_log_roundtrip() {
        let a = c(-0.3, 2.9);
        let r = a.ln().exp();
        assert!((&r - &a).abs().to_f64() < 1e-35);
        assert!((a.arg().to_f64() - 2.9f64.atan2(-0.3)).abs() < 1e-15);
    }

    #[test]
    fn sqrt_branch() {
        let m = c(-4.0, 0.0).sqrt();
        assert!(m.re.abs().to_f64() < 1e-35 && (m.im.to_f64() - 2.0).abs() < 1e-35);
        let z = c(0.0, 2.0).sqrt();
        assert!((z.re.to_f64() - 1.0).abs() < 1e-30 && (z.im.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn integer_powers() {
        let a = c(0.0, 1.0);
        let r = a.powu(4);
        assert!((r.re.to_f64() - 1.0).abs() < 1e-35 && r.im.abs().to_f64() < 1e-35);
        let s = c(2.0, 0.0).powi(-3);
        assert_eq!(s.re.to_f64(), 0.125);
    }
}
