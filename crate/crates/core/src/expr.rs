//! A small arithmetic grammar for parameters such as `exp(-1/pi)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func   := 'exp' | 'log' | 'ln' | 'sqrt'
//! ```
//!
//! Literals are converted at full working precision, so `0.1` is the
//! nearest binary value to one tenth at that precision, not a double.

use crate::mp::{Error, PrecisionContext, Real, Result};

/// Evaluates `src` at the working precision of `ctx`.
///
/// ```
/// use lambertq::{expr::eval_real, PrecisionContext};
/// let ctx = PrecisionContext::new(128, 1000).unwrap();
/// let q = eval_real("exp(-1/pi)", &ctx).unwrap();
/// assert!((q.to_f64() - 0.727_377_349_0).abs() < 1e-9);
/// ```
pub fn eval_real(src: &str, ctx: &PrecisionContext) -> Result<Real> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ctx };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    if !v.is_finite() {
        return Err(Error::Parse(format!("{src:?} does not evaluate to a finite number")));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a PrecisionContext,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Real> {
        let mut v = self.term()?;
        loop {
            if self.eat(b'+') {
                v = v + self.term()?;
            } else if self.eat(b'-') {
                v = v - self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<Real> {
        let mut v = self.unary()?;
        loop {
            if self.eat(b'*') {
                v = v * self.unary()?;
            } else if self.eat(b'/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(self.error("division by zero"));
                }
                v = v / d;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Real> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Real> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let e = self.unary()?;
        if e.is_integer() {
            if let Some(n) = e.to_i64() {
                if base.is_zero() && n < 0 {
                    return Err(self.error("zero to a negative power"));
                }
                return Ok(base.powi(n));
            }
        }
        if !base.is_positive() {
            return Err(self.error("non-integer power of a nonpositive number"));
        }
        Ok(base.powr(&e))
    }

    fn atom(&mut self) -> Result<Real> {
        let p = self.ctx.work_bits();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match name {
                    "pi" => Ok(Real::pi(p)),
                    "e" => Ok(Real::e(p)),
                    "exp" | "log" | "ln" | "sqrt" => {
                        if !self.eat(b'(') {
                            return Err(self.error("expected '(' after function name"));
                        }
                        let a = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.error("expected ')'"));
                        }
                        match name {
                            "exp" => Ok(a.exp()),
                            "sqrt" if !a.is_negative() => Ok(a.sqrt()),
                            "log" | "ln" if a.is_positive() => Ok(a.ln()),
                            _ => Err(self.error("argument outside the function's domain")),
                        }
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error(&format!("unknown name {name:?}")))
                    }
                }
            }
            _ => Err(self.error("expected a number, name or '('")),
        }
    }

    fn number(&mut self) -> Result<Real> {
        let start = self.pos;
        let digits = |s: &mut Self| {
            while s.pos < s.src.len() && s.src[s.pos].is_ascii_digit() {
                s.pos += 1;
            }
        };
        digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            digits(self);
        }
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if self.pos == exp_start {
                // `2e` is not an exponent; leave the `e` for the caller.
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        self.ctx.parse(text).map(|v| v.with_prec(self.ctx.work_bits())).map_err(|_| self.error("bad number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128, 1000).unwrap()
    }

    fn ev(s: &str) -> f64 {
        eval_real(s, &ctx()).unwrap().to_f64()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(ev("1 + 2*3"), 7.0);
        assert_eq!(ev("-2^2"), -4.0);
        assert_eq!(ev("2^-1"), 0.5);
        assert_eq!(ev("2^3^2"), 512.0);
        assert_eq!(ev("(1 - 3) / 4"), -0.5);
        assert_eq!(ev("1.5e2"), 150.0);
        assert!((ev("log(e)") - 1.0).abs() < 1e-30);
        assert!((ev("sqrt(2)^2") - 2.0).abs() < 1e-30);
    }

    #[test]
    fn full_precision_literals() {
        let c = ctx();
        let a = eval_real("0.1", &c).unwrap();
        let b = c.parse("0.1").unwrap().with_prec(c.work_bits());
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        let c = ctx();
        for bad in ["", "1 +", "foo", "log(-1)", "(2", "1/0", "2 3", "(-2)^0.5"] {
            assert!(matches!(eval_real(bad, &c), Err(Error::Parse(_))), "{bad}");
        }
    }
}
