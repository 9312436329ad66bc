//! Bernoulli numbers and polynomials.
//!
//! The even-index numbers come from the tangent-number recurrence, which
//! stays in integer arithmetic until one final division. The rational table
//! is built once per process; rounded copies are cached per precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::mp::{Error, PrecisionContext, Real, Result};

/// Largest supported index for Bernoulli numbers and polynomials.
pub const BERNOULLI_DEGREE_CAP: usize = 512;

fn rational_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| build_table(BERNOULLI_DEGREE_CAP))
}

fn build_table(cap: usize) -> Vec<BigRational> {
    let half = cap / 2;
    // Tangent numbers T_1..T_half.
    let mut t: Vec<BigInt> = vec![BigInt::zero(); half + 1];
    if half >= 1 {
        t[1] = BigInt::one();
    }
    for k in 2..=half {
        t[k] = &t[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=half {
        for j in k..=half {
            t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
        }
    }
    let mut b = vec![BigRational::zero(); cap + 1];
    b[0] = BigRational::one();
    if cap >= 1 {
        b[1] = BigRational::new(BigInt::from(-1), BigInt::from(2));
    }
    for k in 1..=half {
        let n = 2 * k;
        let four_k = BigInt::one() << (2 * k);
        let num = BigInt::from(n) * &t[k];
        let den = &four_k * (&four_k - BigInt::one());
        let mut r = BigRational::new(num, den);
        if k % 2 == 0 {
            r = -r;
        }
        b[n] = r;
    }
    b
}

/// The exact Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli_number(n: usize) -> Result<&'static BigRational> {
    rational_table().get(n).ok_or(Error::DegreeCap { n, cap: BERNOULLI_DEGREE_CAP })
}

pub(crate) fn bigint_to_real(n: &BigInt, prec: usize) -> Real {
    let (sign, words) = n.to_u64_digits();
    Real::from_integer_words(&words, sign == Sign::Minus, prec)
}

/// Rounds an exact rational to `prec` bits.
pub fn rational_to_real(r: &BigRational, prec: usize) -> Real {
    let p = prec + 16;
    (bigint_to_real(r.numer(), p) / bigint_to_real(r.denom(), p)).with_prec(prec)
}

fn real_table(prec: usize) -> Arc<Vec<Real>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Real>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("bernoulli cache poisoned").get(&prec) {
        return t.clone();
    }
    let table: Arc<Vec<Real>> = Arc::new(rational_table().iter().map(|r| rational_to_real(r, prec)).collect());
    let mut guard = cache.lock().expect("bernoulli cache poisoned");
    guard.entry(prec).or_insert(table).clone()
}

/// `B_n` rounded to `prec` bits.
pub fn bernoulli_real(n: usize, prec: usize) -> Result<Real> {
    if n > BERNOULLI_DEGREE_CAP {
        return Err(Error::DegreeCap { n, cap: BERNOULLI_DEGREE_CAP });
    }
    Ok(real_table(prec)[n].clone())
}

/// Recognised special arguments of Bernoulli polynomials with exact values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SpecialX {
    Zero,
    Half,
    One,
}

pub(crate) fn special_x(x: &Real) -> Option<SpecialX> {
    if x.is_zero() {
        Some(SpecialX::Zero)
    } else if *x == Real::one(x.prec()) {
        Some(SpecialX::One)
    } else if *x == Real::ratio(1, 2, x.prec()) {
        Some(SpecialX::Half)
    } else {
        None
    }
}

/// `B_n(x)` exactly, for `x` in {0, 1/2, 1}.
pub(crate) fn bernoulli_poly_special(n: usize, x: SpecialX) -> Result<BigRational> {
    let b = bernoulli_number(n)?.clone();
    Ok(match x {
        SpecialX::Zero => b,
        SpecialX::One => {
            if n == 1 {
                -b
            } else {
                b
            }
        }
        SpecialX::Half => {
            // B_n(1/2) = (2^(1-n) - 1) B_n
            let factor = BigRational::new(BigInt::one(), BigInt::one() << n) * BigInt::from(2) - BigRational::one();
            factor * b
        }
    })
}

/// `B_n(x) = Σ C(n,j) B_j x^(n-j)`, evaluated by Horner's rule.
pub fn bernoulli_poly(n: usize, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let p = ctx.work_bits();
    if n > BERNOULLI_DEGREE_CAP {
        return Err(Error::DegreeCap { n, cap: BERNOULLI_DEGREE_CAP });
    }
    if let Some(sx) = special_x(x) {
        return Ok(rational_to_real(&bernoulli_poly_special(n, sx)?, p));
    }
    // Horner's rule loses ~log2(n) bits to cancellation for large n.
    let pp = p + 2 * (usize::BITS - n.leading_zeros()) as usize + 8;
    let table = real_table(pp);
    let x = x.with_prec(pp);
    let mut acc = Real::zero(pp);
    let mut binom = BigInt::one();
    for j in 0..=n {
        // coefficient of x^(n-j) is C(n,j) B_j
        let c = bigint_to_real(&binom, pp) * &table[j];
        acc = &acc * &x + &c;
        binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Ok(acc.with_prec(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_numbers() {
        assert_eq!(*bernoulli_number(0).unwrap(), q(1, 1));
        assert_eq!(*bernoulli_number(1).unwrap(), q(-1, 2));
        assert_eq!(*bernoulli_number(2).unwrap(), q(1, 6));
        assert_eq!(*bernoulli_number(3).unwrap(), q(0, 1));
        assert_eq!(*bernoulli_number(4).unwrap(), q(-1, 30));
        assert_eq!(*bernoulli_number(12).unwrap(), q(-691, 2730));
        assert_eq!(*bernoulli_number(20).unwrap(), q(-174611, 330));
    }

    #[test]
    fn recurrence_holds() {
        // Σ_{j<n} C(n+1, j) B_j = -(n+1) B_n for n >= 1.
        let t = rational_table();
        for n in 1..60usize {
            let mut s = BigRational::zero();
            let mut c = BigInt::one();
            for j in 0..=n {
                if j < n {
                    s += BigRational::from_integer(c.clone()) * &t[j];
                }
                c = c * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
            }
            assert_eq!(s, -BigRational::from_integer(BigInt::from(n + 1)) * &t[n], "n = {n}");
        }
    }

    #[test]
    fn cap_enforced() {
        assert!(bernoulli_number(BERNOULLI_DEGREE_CAP).is_ok());
        assert!(matches!(bernoulli_number(BERNOULLI_DEGREE_CAP + 1), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn polynomial_values() {
        let ctx = PrecisionContext::new(128, 100).unwrap();
        let x = ctx.parse("0.37").unwrap();
        assert_eq!(bernoulli_poly(0, &x, &ctx).unwrap().to_f64(), 1.0);
        assert!(bernoulli_poly(1, &ctx.ratio(1, 2), &ctx).unwrap().is_zero());
        assert!((bernoulli_poly(2, &ctx.real(0), &ctx).unwrap() - ctx.ratio(1, 6)).abs().to_f64() < 1e-45);
        let b3 = bernoulli_poly(3, &x, &ctx).unwrap().to_f64();
        let xf = 0.37f64;
        assert!((b3 - (xf.powi(3) - 1.5 * xf * xf + 0.5 * xf)).abs() < 1e-15);
    }

    #[test]
    fn real_cache_is_consistent() {
        let a = bernoulli_real(30, 200).unwrap();
        let b = bernoulli_real(30, 200).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, rational_to_real(bernoulli_number(30).unwrap(), 200));
    }
}
