//! Arbitrary-precision real numbers.
//!
//! [`Real`] wraps an `astro_float::BigFloat` together with the precision (in
//! bits) that arithmetic on it should be carried out at. Binary operations run
//! at the larger of the two operand precisions, rounding to nearest-even.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};

use super::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// An arbitrary-precision binary floating-point real.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Real { v, prec }
    }

    /// Zero at precision `prec`.
    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    /// One at precision `prec`.
    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(n, prec), prec)
    }

    pub fn from_u64(n: u64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_u64(n, prec), prec)
    }

    /// The rational `num / den`, rounded once.
    pub fn ratio(num: i64, den: i64, prec: usize) -> Self {
        Self::from_i64(num, prec) / &Self::from_i64(den, prec)
    }

    /// Exact conversion of a machine double. Only for heuristics and tests;
    /// user-facing literals go through [`Real::parse`].
    pub fn from_f64(f: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(f, prec), prec)
    }

    /// `2^e` exactly.
    pub fn pow2(e: i64, prec: usize) -> Self {
        let mut v = BigFloat::from_words(&[1 << (Word::BITS - 1)], Sign::Pos, 0);
        let e = (e + 1).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
        v.set_exponent(e);
        let mut r = Self::wrap(v, prec);
        r.round_to(prec);
        r
    }

    /// Builds a value from little-endian 64-bit magnitude words of an integer.
    pub(crate) fn from_integer_words(words: &[u64], negative: bool, prec: usize) -> Self {
        if words.iter().all(|w| *w == 0) {
            return Self::zero(prec);
        }
        let ws: Vec<Word> = words.iter().map(|w| *w as Word).collect();
        let sign = if negative { Sign::Neg } else { Sign::Pos };
        let e = (ws.len() * Word::BITS as usize) as i32;
        let mut r = Self::wrap(BigFloat::from_words(&ws, sign, e), prec);
        r.round_to(prec);
        r
    }

    /// Parses a decimal literal at full precision.
    pub fn parse(s: &str, prec: usize) -> Result<Self> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
            && t.chars().any(|c| c.is_ascii_digit());
        if !ok {
            return Err(Error::Parse(s.to_string()));
        }
        let v = with_consts(|cc| BigFloat::parse(t, Radix::Dec, prec, RM, cc));
        if v.is_nan() || v.is_inf() {
            return Err(Error::Parse(s.to_string()));
        }
        Ok(Self::wrap(v, prec))
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn ln2(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.ln_2(prec, RM)), prec)
    }

    /// Euler's number e.
    pub fn e(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.e(prec, RM)), prec)
    }

    /// Precision in bits that operations on this value use.
    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Rounds to `prec` bits and adopts that precision.
    pub fn with_prec(&self, prec: usize) -> Self {
        let mut r = self.clone();
        r.round_to(prec);
        r
    }

    fn round_to(&mut self, prec: usize) {
        if !self.v.is_nan() && !self.v.is_inf() && !self.v.is_zero() {
            // Only fails for precisions beyond the library maximum.
            let _ = self.v.set_precision(prec, RM);
        }
        self.prec = prec;
    }

    fn un(&self, v: BigFloat) -> Self {
        Self::wrap(v, self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn is_integer(&self) -> bool {
        self.is_finite() && self.v.is_int()
    }

    /// Returns `Err(NonFinite)` naming `what` if the value is NaN or infinite.
    pub fn finite(self, what: &str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(what.to_string()))
        }
    }

    pub fn abs(&self) -> Self {
        self.un(self.v.abs())
    }

    pub fn recip(&self) -> Self {
        self.un(self.v.reciprocal(self.prec, RM))
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    pub fn sqrt(&self) -> Self {
        self.un(self.v.sqrt(self.prec, RM))
    }

    pub fn exp(&self) -> Self {
        self.un(with_consts(|cc| self.v.exp(self.prec, RM, cc)))
    }

    /// Natural logarithm; NaN for negative input, -inf at zero.
    pub fn ln(&self) -> Self {
        self.un(with_consts(|cc| self.v.ln(self.prec, RM, cc)))
    }

    /// `ln(1 + self)` without cancellation when `self` is tiny.
    pub fn ln_1p(&self) -> Self {
        match self.exponent() {
            Some(e) if e < -((self.prec as i64) / 8) => {
                // Taylor: x - x^2/2 + x^3/3 - ...
                let eps = Real::pow2(-(self.prec as i64) - 4, self.prec);
                let mut sum = Real::zero(self.prec);
                let mut pw = self.clone();
                let mut k = 1i64;
                loop {
                    let term = pw.div_i(k);
                    sum = if k % 2 == 1 { &sum + &term } else { &sum - &term };
                    if term.abs() <= &eps * &sum.abs() || k > 4096 {
                        break;
                    }
                    pw = &pw * self;
                    k += 1;
                }
                sum
            }
            _ => {
                let p = self.prec + 64;
                (Real::one(p) + &self.with_prec(p)).ln().with_prec(self.prec)
            }
        }
    }

    /// `exp(self) - 1` without cancellation when `self` is tiny.
    pub fn exp_m1(&self) -> Self {
        let p = self.prec + 64 + self.exponent().map_or(0, |e| (-e).max(0) as usize).min(4096);
        (self.with_prec(p).exp() - &Real::one(p)).with_prec(self.prec)
    }

    pub fn sin(&self) -> Self {
        self.un(with_consts(|cc| self.v.sin(self.prec, RM, cc)))
    }

    pub fn cos(&self) -> Self {
        self.un(with_consts(|cc| self.v.cos(self.prec, RM, cc)))
    }

    pub fn tan(&self) -> Self {
        self.un(with_consts(|cc| self.v.tan(self.prec, RM, cc)))
    }

    pub fn sinh(&self) -> Self {
        self.un(with_consts(|cc| self.v.sinh(self.prec, RM, cc)))
    }

    pub fn cosh(&self) -> Self {
        self.un(with_consts(|cc| self.v.cosh(self.prec, RM, cc)))
    }

    pub fn tanh(&self) -> Self {
        self.un(with_consts(|cc| self.v.tanh(self.prec, RM, cc)))
    }

    pub fn atan(&self) -> Self {
        self.un(with_consts(|cc| self.v.atan(self.prec, RM, cc)))
    }

    /// Four-quadrant arctangent of `self / x`.
    pub fn atan2(&self, x: &Real) -> Self {
        let y = self;
        let p = self.prec.max(x.prec);
        if x.is_zero() {
            let half_pi = Real::pi(p).div_i(2);
            return if y.is_negative() {
                -half_pi
            } else if y.is_zero() {
                Real::zero(p)
            } else {
                half_pi
            };
        }
        let base = (y / x).atan();
        if x.is_positive() {
            base
        } else if y.is_negative() {
            base - &Real::pi(p)
        } else {
            base + &Real::pi(p)
        }
    }

    /// `self^n` for a nonnegative machine integer.
    pub fn powu(&self, n: u64) -> Self {
        self.un(self.v.powi(n as usize, self.prec, RM))
    }

    /// `self^n` for any machine integer.
    pub fn powi(&self, n: i64) -> Self {
        let r = self.powu(n.unsigned_abs());
        if n < 0 {
            r.recip()
        } else {
            r
        }
    }

    /// `self^e` for `self > 0`.
    pub fn powr(&self, e: &Real) -> Self {
        if e.is_integer() {
            if let Some(n) = e.to_i64() {
                if n.unsigned_abs() < 1 << 20 {
                    return self.powi(n);
                }
            }
        }
        (e * &self.ln()).exp()
    }

    pub fn floor(&self) -> Self {
        self.un(self.v.floor())
    }

    pub fn ceil(&self) -> Self {
        self.un(self.v.ceil())
    }

    /// Binary exponent `e` with `self = 0.1xxx₂ · 2^e`; `None` at zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.v.is_zero() || !self.is_finite() {
            None
        } else {
            self.v.exponent().map(|e| e as i64)
        }
    }

    /// Nearest-ish machine double, for heuristics and reporting.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if self.v.is_zero() {
            return 0.0;
        }
        let e = self.v.exponent().unwrap_or(0) as i64;
        let words = self.v.mantissa_digits().unwrap_or(&[]);
        let n = words.len();
        let mut m = 0.0f64;
        for (i, w) in words.iter().rev().take(2).enumerate() {
            m += (*w as f64) * 2f64.powi(-(Word::BITS as i32) * (i as i32 + 1));
        }
        let _ = n;
        let mag = if e > 1100 {
            f64::INFINITY
        } else if e < -1100 {
            0.0
        } else {
            m * 2f64.powi(e as i32)
        };
        if self.v.is_negative() {
            -mag
        } else {
            mag
        }
    }

    /// `log2 |self|` approximately; `-inf` at zero.
    pub fn log2_abs(&self) -> f64 {
        match self.exponent() {
            None => f64::NEG_INFINITY,
            Some(e) => {
                let words = self.v.mantissa_digits().unwrap_or(&[]);
                let top = words.last().copied().unwrap_or(0) as f64 / 2f64.powi(Word::BITS as i32);
                e as f64 + top.log2()
            }
        }
    }

    /// Truncates toward zero to an `i64`, if it fits.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_finite() {
            return None;
        }
        let t = self.v.int();
        let f = Real::wrap(t, self.prec).to_f64();
        if f.abs() < 9.0e15 {
            Some(f as i64)
        } else {
            None
        }
    }

    pub fn mul_i(&self, n: i64) -> Self {
        self * &Real::from_i64(n, self.prec)
    }

    pub fn div_i(&self, n: i64) -> Self {
        self / &Real::from_i64(n, self.prec)
    }

    pub fn add_i(&self, n: i64) -> Self {
        self + &Real::from_i64(n, self.prec)
    }

    pub fn max_of(a: &Real, b: &Real) -> Real {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Decimal scientific notation with `digits` significant digits,
    /// e.g. `-1.2345e-7`. Zero prints as `0`.
    pub fn to_sci(&self, digits: usize) -> String {
        if !self.is_finite() {
            return "nan".into();
        }
        if self.is_zero() {
            return "0".into();
        }
        let digits = digits.max(1);
        let (sign, mant, exp) = match with_consts(|cc| self.v.convert_to_radix(Radix::Dec, RM, cc)) {
            Ok(t) => t,
            Err(_) => return "nan".into(),
        };
        // value = 0.d1 d2 d3 ... * 10^exp
        let mut ds: Vec<u8> = mant.clone();
        while ds.len() < digits + 1 {
            ds.push(0);
        }
        let mut exp10 = exp as i64 - 1;
        let mut kept: Vec<u8> = ds[..digits].to_vec();
        let round_up = ds[digits] > 5
            || (ds[digits] == 5 && (ds[digits + 1..].iter().any(|d| *d != 0) || kept[digits - 1] % 2 == 1));
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    kept.insert(0, 1);
                    kept.pop();
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if kept[i] == 9 {
                    kept[i] = 0;
                } else {
                    kept[i] += 1;
                    break;
                }
            }
        }
        let mut s = String::new();
        if sign == Sign::Neg {
            s.push('-');
        }
        s.push((b'0' + kept[0]) as char);
        if digits > 1 {
            s.push('.');
            for d in &kept[1..] {
                s.push((b'0' + d) as char);
            }
        }
        s.push('e');
        s.push_str(&exp10.to_string());
        s
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_sci(digits))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_sci(24))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.neg(), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$m(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let x = Real::parse("0.1", 128).unwrap();
        assert_eq!(x.to_sci(5), "1.0000e-1");
        let y = Real::parse("-123.456", 128).unwrap();
        assert_eq!(y.to_sci(4), "-1.235e2");
        assert_eq!(Real::parse("9.9996", 128).unwrap().to_sci(4), "1.000e1");
        assert!(Real::parse("abc", 64).is_err());
        assert!(Real::parse("", 64).is_err());
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(Real::pow2(0, 64).to_f64(), 1.0);
        assert_eq!(Real::pow2(-3, 64).to_f64(), 0.125);
        assert_eq!(Real::pow2(10, 64).to_f64(), 1024.0);
    }

    #[test]
    fn integer_words() {
        let r = Real::from_integer_words(&[5, 1], true, 128);
        assert_eq!(r.to_f64(), -(5.0 + 2f64.powi(64)));
    }

    #[test]
    fn transcendental_sanity() {
        let p = 128;
        let two = Real::from_i64(2, p);
        assert!((two.ln().to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((Real::one(p).exp().to_f64() - std::f64::consts::E).abs() < 1e-15);
        let third = Real::ratio(1, 3, p);
        assert!((third.atan2(&Real::from_i64(-1, p)).to_f64() - (1f64 / 3.0).atan2(-1.0)).abs() < 1e-15);
    }

    #[test]
    fn small_argument_log1p() {
        let p = 256;
        let x = Real::pow2(-200, p);
        let l = x.ln_1p();
        let rel = ((&l - &x) / &x).to_f64();
        assert!((rel + 2f64.powi(-201)).abs() < 1e-70);
    }

    #[test]
    fn to_f64_and_log2() {
        let x = Real::parse("3.5e-300", 256).unwrap();
        assert!((x.to_f64() / 3.5e-300 - 1.0).abs() < 1e-14);
        assert!((x.log2_abs() - (3.5e-300f64).log2()).abs() < 1e-9);
        assert_eq!(Real::parse("-7.9", 64).unwrap().to_i64(), Some(-7));
    }
}
