//! One entry point for every evaluable function.
//!
//! A [`FunctionRequest`] names a function, its parameters as text, a method
//! and an output precision. [`FunctionRequest::evaluate`] validates the
//! combination and dispatches to exactly one module operation;
//! [`FunctionRequest::run`] also times it and renders a [`ResultRecord`].
//!
//! ```
//! use lambertq::request::{FunctionId, FunctionRequest};
//! use lambertq::Method;
//!
//! let rec = FunctionRequest::new(FunctionId::Lambert)
//!     .s("1").x("1").q("0.5")
//!     .method(Method::Auto)
//!     .run()
//!     .unwrap();
//! assert_eq!(rec.method, Method::Direct);
//! assert!(rec.value.re.starts_with("2.7440338"));
//! ```

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::expr::eval_real;
use crate::lambert::{
    asymptotic_route, divisor_gf_asymptotic, eisenstein_asymptotic, eisenstein_direct, lambert_asymptotic,
    lambert_direct, lambert_eval, QPoint, SParameter,
};
use crate::mp::{Complex, Error, EvalResult, Method, PrecisionContext, Real, Result};
use crate::qgamma::{
    qdigamma_asymptotic, qdigamma_direct, qgamma_asymptotic, qgamma_direct, qgamma_half, qpolygamma_asymptotic,
    qpolygamma_direct, DigammaForm, QBase,
};
use crate::qpochhammer::{euler_asymptotic, pochhammer_asymptotic, pochhammer_direct_power};
use crate::series::TruncationPolicy;
use crate::theta::{theta_asymptotic, theta_direct, theta_logderiv_asymptotic, theta_logderiv_direct, ThetaRoute};

/// Default cap on summed terms for requests.
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Default decimal digits in rendered output.
pub const DEFAULT_DIGITS: usize = 30;

/// Working precision for `digits` output digits: at least 256 bits.
pub fn bits_for_digits(digits: usize) -> usize {
    let need = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32;
    need.max(256)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionId {
    Lambert,
    Pochhammer,
    Euler,
    Qgamma,
    Qdigamma,
    Qpolygamma,
    Eisenstein,
    Theta,
    ThetaLogderiv,
    DivisorGf,
}

impl FunctionId {
    pub const ALL: [FunctionId; 10] = [
        FunctionId::Lambert,
        FunctionId::Pochhammer,
        FunctionId::Euler,
        FunctionId::Qgamma,
        FunctionId::Qdigamma,
        FunctionId::Qpolygamma,
        FunctionId::Eisenstein,
        FunctionId::Theta,
        FunctionId::ThetaLogderiv,
        FunctionId::DivisorGf,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FunctionId::Lambert => "lambert",
            FunctionId::Pochhammer => "pochhammer",
            FunctionId::Euler => "euler",
            FunctionId::Qgamma => "qgamma",
            FunctionId::Qdigamma => "qdigamma",
            FunctionId::Qpolygamma => "qpolygamma",
            FunctionId::Eisenstein => "eisenstein",
            FunctionId::Theta => "theta",
            FunctionId::ThetaLogderiv => "theta_logderiv",
            FunctionId::DivisorGf => "divisor_gf",
        }
    }

    /// Parameters the function needs, besides `q`.
    fn required(&self) -> &'static [Param] {
        use Param::*;
        match self {
            FunctionId::Lambert => &[S, X],
            FunctionId::Pochhammer | FunctionId::Qgamma | FunctionId::Qdigamma => &[X],
            FunctionId::Euler => &[],
            FunctionId::Qpolygamma => &[M, X],
            FunctionId::Eisenstein => &[K],
            FunctionId::Theta | FunctionId::ThetaLogderiv => &[J, Z],
            FunctionId::DivisorGf => &[M],
        }
    }

    fn has_closed_form(&self) -> bool {
        !matches!(self, FunctionId::Lambert | FunctionId::Pochhammer | FunctionId::Qdigamma | FunctionId::Qpolygamma)
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let norm = s.replace('-', "_");
        FunctionId::ALL
            .iter()
            .copied()
            .find(|f| f.as_str() == norm)
            .ok_or_else(|| format!("unknown function {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Param {
    S,
    M,
    X,
    Z,
    J,
    K,
}

impl Param {
    fn name(&self) -> &'static str {
        match self {
            Param::S => "s",
            Param::M => "m",
            Param::X => "x",
            Param::Z => "z",
            Param::J => "j",
            Param::K => "k",
        }
    }
}

/// A function evaluation request with textual parameters.
///
/// Real parameters accept the grammar of [`crate::expr`]; `s` and `z` also
/// accept `re,im` for complex values. An `s` written as a bare integer
/// selects the integer cases of the Lambert expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionRequest {
    pub function: FunctionId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_expr: Option<String>,
    pub method: Method,
    pub digits: usize,
    pub truncation: TruncationPolicy,
}

impl FunctionRequest {
    pub fn new(function: FunctionId) -> Self {
        FunctionRequest {
            function,
            s: None,
            m: None,
            x: None,
            z: None,
            j: None,
            k: None,
            q: None,
            q_expr: None,
            method: Method::Auto,
            digits: DEFAULT_DIGITS,
            truncation: TruncationPolicy::Optimal,
        }
    }

    pub fn s(mut self, v: &str) -> Self {
        self.s = Some(v.into());
        self
    }

    pub fn m(mut self, v: i64) -> Self {
        self.m = Some(v);
        self
    }

    pub fn x(mut self, v: &str) -> Self {
        self.x = Some(v.into());
        self
    }

    pub fn z(mut self, v: &str) -> Self {
        self.z = Some(v.into());
        self
    }

    pub fn j(mut self, v: u8) -> Self {
        self.j = Some(v);
        self
    }

    pub fn k(mut self, v: u32) -> Self {
        self.k = Some(v);
        self
    }

    pub fn q(mut self, v: &str) -> Self {
        self.q = Some(v.into());
        self
    }

    pub fn q_expr(mut self, v: &str) -> Self {
        self.q_expr = Some(v.into());
        self
    }

    pub fn method(mut self, m: Method) -> Self {
        self.method = m;
        self
    }

    pub fn digits(mut self, d: usize) -> Self {
        self.digits = d;
        self
    }

    pub fn truncation(mut self, t: TruncationPolicy) -> Self {
        self.truncation = t;
        self
    }

    fn has(&self, p: Param) -> bool {
        match p {
            Param::S => self.s.is_some(),
            Param::M => self.m.is_some(),
            Param::X => self.x.is_some(),
            Param::Z => self.z.is_some(),
            Param::J => self.j.is_some(),
            Param::K => self.k.is_some(),
        }
    }

    /// Rejects missing, superfluous or contradictory parameters.
    pub fn validate(&self) -> Result<()> {
        let f = self.function;
        let req = f.required();
        for p in [Param::S, Param::M, Param::X, Param::Z, Param::J, Param::K] {
            let needed = req.contains(&p);
            if needed && !self.has(p) {
                return Err(Error::domain(format!("{f} needs --{}", p.name())));
            }
            if !needed && self.has(p) {
                return Err(Error::domain(format!("{f} does not take --{}", p.name())));
            }
        }
        match (&self.q, &self.q_expr) {
            (None, None) => return Err(Error::domain("one of --q or --q-expr is required")),
            (Some(_), Some(_)) => return Err(Error::domain("give only one of --q and --q-expr")),
            _ => {}
        }
        if self.method == Method::ClosedForm && !f.has_closed_form() {
            return Err(Error::domain(format!("{f} has no closed form; use direct, asym or auto")));
        }
        if self.digits == 0 || self.digits > 10_000 {
            return Err(Error::domain("digits must be between 1 and 10000"));
        }
        if let Some(j) = self.j {
            if !(1..=4).contains(&j) {
                return Err(Error::domain("j must be 1..4"));
            }
        }
        match (f, self.m) {
            (FunctionId::Qpolygamma, Some(m)) if m < 0 => return Err(Error::domain("m must be nonnegative")),
            _ => {}
        }
        if f == FunctionId::Eisenstein && self.k == Some(0) {
            return Err(Error::domain("k must be at least 1"));
        }
        Ok(())
    }

    /// The evaluation context: [`bits_for_digits`] bits, [`DEFAULT_MAX_TERMS`] terms.
    pub fn context(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(bits_for_digits(self.digits), DEFAULT_MAX_TERMS)
    }

    fn q_value(&self, ctx: &PrecisionContext) -> Result<Real> {
        match (&self.q, &self.q_expr) {
            (Some(q), None) => ctx.parse(q.trim()).or_else(|_| eval_real(q, ctx)),
            (None, Some(e)) => eval_real(e, ctx),
            _ => Err(Error::domain("exactly one of q or q_expr is required")),
        }
    }

    fn real_param(&self, v: &Option<String>, name: &str, ctx: &PrecisionContext) -> Result<Real> {
        let text = v.as_deref().ok_or_else(|| Error::domain(format!("missing {name}")))?;
        eval_real(text, ctx)
    }

    fn complex_param(text: &str, ctx: &PrecisionContext) -> Result<Complex> {
        match text.split_once(',') {
            Some((re, im)) => Ok(Complex::new(eval_real(re, ctx)?, eval_real(im, ctx)?)),
            None => Ok(Complex::from_real(eval_real(text, ctx)?)),
        }
    }

    fn s_param(&self, ctx: &PrecisionContext) -> Result<SParameter> {
        let text = self.s.as_deref().unwrap_or("").trim();
        if let Ok(n) = text.parse::<i64>() {
            return Ok(SParameter::int(n));
        }
        Ok(SParameter::Complex(Self::complex_param(text, ctx)?))
    }

    /// Validates and evaluates, returning the raw result at working precision.
    pub fn evaluate(&self) -> Result<EvalResult> {
        self.validate()?;
        let ctx = self.context()?;
        self.evaluate_in(&ctx)
    }

    /// Evaluates in a caller-supplied context.
    pub fn evaluate_in(&self, ctx: &PrecisionContext) -> Result<EvalResult> {
        self.validate()?;
        let q = self.q_value(ctx)?;
        let policy = self.truncation;
        let method = self.method;
        match self.function {
            FunctionId::Lambert => {
                let s = self.s_param(ctx)?;
                let x = self.real_param(&self.x, "x", ctx)?;
                let qp = QPoint::new(&q, ctx)?;
                match method {
                    Method::Direct => lambert_direct(&s, &x, &qp, ctx),
                    Method::Asymptotic if policy == TruncationPolicy::Optimal => asymptotic_route(&s, &x, &qp, ctx),
                    Method::Asymptotic => lambert_asymptotic(&s, &x, &qp, policy, ctx),
                    _ => lambert_eval(&s, &x, &qp, ctx),
                }
            }
            FunctionId::Pochhammer => {
                let x = self.real_param(&self.x, "x", ctx)?;
                let qp = QPoint::new(&q, ctx)?;
                auto_or(
                    method,
                    &qp,
                    ctx,
                    || pochhammer_direct_power(&x, &qp, ctx),
                    || pochhammer_asymptotic(&x, &qp, policy, ctx),
                )
            }
            FunctionId::Euler => {
                let qp = QPoint::new(&q, ctx)?;
                let one = ctx.real(1);
                match method {
                    Method::ClosedForm => euler_asymptotic(&qp),
                    _ => auto_or(
                        method,
                        &qp,
                        ctx,
                        || pochhammer_direct_power(&one, &qp, ctx),
                        || pochhammer_asymptotic(&one, &qp, policy, ctx),
                    ),
                }
            }
            FunctionId::Qgamma => {
                let x = self.real_param(&self.x, "x", ctx)?;
                let qb = QBase::new(&q, ctx)?;
                match method {
                    Method::ClosedForm if x == ctx.ratio(1, 2) => qgamma_half(&qb),
                    Method::ClosedForm => Err(Error::Unsupported("the q-gamma closed form is for x = 1/2".into())),
                    _ => auto_or(
                        method,
                        qb.point(),
                        ctx,
                        || qgamma_direct(&x, &qb, ctx),
                        || qgamma_asymptotic(&x, &qb, policy, ctx),
                    ),
                }
            }
            FunctionId::Qdigamma => {
                let x = self.real_param(&self.x, "x", ctx)?;
                let qb = QBase::new(&q, ctx)?;
                auto_or(
                    method,
                    qb.point(),
                    ctx,
                    || qdigamma_direct(&x, &qb, ctx),
                    || qdigamma_asymptotic(&x, &qb, DigammaForm::Compact, policy, ctx),
                )
            }
            FunctionId::Qpolygamma => {
                let m = self.m.unwrap_or(1) as u32;
                let x = self.real_param(&self.x, "x", ctx)?;
                let qb = QBase::new(&q, ctx)?;
                auto_or(
                    method,
                    qb.point(),
                    ctx,
                    || qpolygamma_direct(m, &x, &qb, ctx),
                    || qpolygamma_asymptotic(m, &x, &qb, policy, ctx),
                )
            }
            FunctionId::Eisenstein => {
                let k = self.k.unwrap_or(1);
                let qp = QPoint::new(&q, ctx)?;
                match method {
                    Method::Direct | Method::Auto => eisenstein_direct(k, &qp, ctx),
                    _ => eisenstein_asymptotic(k, &qp),
                }
            }
            FunctionId::Theta | FunctionId::ThetaLogderiv => {
                let j = self.j.unwrap_or(1);
                let qp = QPoint::new(&q, ctx)?;
                let z = Self::complex_param(self.z.as_deref().unwrap_or(""), ctx)?;
                let real_z = || {
                    if z.is_real() {
                        Ok(z.re.clone())
                    } else {
                        Err(Error::Unsupported("the q → 1 theta forms are for real z".into()))
                    }
                };
                let direct = matches!(method, Method::Direct | Method::Auto);
                match (self.function, direct) {
                    (FunctionId::Theta, true) => theta_direct(j, &z, &qp, ctx, ThetaRoute::Series),
                    (FunctionId::Theta, false) => theta_asymptotic(j, &real_z()?, &qp, ctx),
                    (_, true) => theta_logderiv_direct(j, &real_z()?, &qp, ctx),
                    (_, false) => theta_logderiv_asymptotic(j, &real_z()?, &qp, ctx),
                }
            }
            FunctionId::DivisorGf => {
                let m = self.m.unwrap_or(1);
                let qp = QPoint::new(&q, ctx)?;
                let one = ctx.real(1);
                let s = SParameter::int(m);
                match method {
                    Method::Direct => lambert_direct(&s, &one, &qp, ctx),
                    Method::Auto => lambert_eval(&s, &one, &qp, ctx),
                    _ => divisor_gf_asymptotic(m, &qp, ctx),
                }
            }
        }
    }

    /// Evaluates, times, and renders at the requested digits.
    pub fn run(&self) -> Result<ResultRecord> {
        self.validate()?;
        let ctx = self.context()?;
        let start = Instant::now();
        let r = self.evaluate_in(&ctx)?;
        let wall = start.elapsed().as_nanos() as u64;
        Ok(ResultRecord::from_result(self.clone(), &r, wall))
    }
}

/// Direct for `q ≤ 1/2`, asymptotic above; the other route is tried when the
/// first fails or misses `2·eps` relative accuracy, and the better result wins.
fn auto_or(
    method: Method,
    q: &QPoint,
    ctx: &PrecisionContext,
    direct: impl Fn() -> Result<EvalResult>,
    asym: impl Fn() -> Result<EvalResult>,
) -> Result<EvalResult> {
    match method {
        Method::Direct => return direct(),
        Method::Asymptotic | Method::ClosedForm => return asym(),
        Method::Auto => {}
    }
    let direct_first = q.q() <= &ctx.ratio(1, 2);
    let run = |d: bool| if d { direct() } else { asym() };
    let good = |r: &EvalResult| r.err_estimate <= ctx.eps().mul_i(2) * r.value.abs();
    let first = run(direct_first);
    if let Ok(r) = &first {
        if good(r) {
            return first;
        }
    }
    let second = run(!direct_first);
    match (first, second) {
        (Ok(a), Ok(b)) => Ok(if good(&b) || b.err_estimate < a.err_estimate { b } else { a }),
        (Ok(a), Err(_)) => Ok(a),
        (Err(_), Ok(b)) => Ok(b),
        (Err(e1), Err(e2)) => {
            let (d, a) = if direct_first { (e1, e2) } else { (e2, e1) };
            Err(Error::BothPathsFailed { direct: Box::new(d), asymptotic: Box::new(a) })
        }
    }
}

/// Real and imaginary parts as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordValue {
    pub re: String,
    pub im: String,
}

/// One evaluation, rendered for output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub request: FunctionRequest,
    pub value: RecordValue,
    pub err_estimate: String,
    pub terms_used: usize,
    pub method: Method,
    pub wall_time_ns: u64,
}

impl ResultRecord {
    pub fn from_result(request: FunctionRequest, r: &EvalResult, wall_time_ns: u64) -> Self {
        let d = request.digits;
        ResultRecord {
            value: RecordValue { re: r.value.re.to_sci(d), im: r.value.im.to_sci(d) },
            err_estimate: r.err_estimate.to_sci(3),
            terms_used: r.terms_used,
            method: r.method,
            wall_time_ns,
            request,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let base = FunctionRequest::new(FunctionId::Lambert).s("1").x("1");
        assert!(base.clone().validate().is_err());
        assert!(base.clone().q("0.5").validate().is_ok());
        assert!(base.clone().q("0.5").q_expr("1/2").validate().is_err());
        assert!(base.clone().q("0.5").j(2).validate().is_err());
        assert!(base.clone().q("0.5").method(Method::ClosedForm).validate().is_err());
        let t = FunctionRequest::new(FunctionId::Theta).j(5).z("0").q("0.5");
        assert!(t.validate().is_err());
    }

    #[test]
    fn domain_errors_classified() {
        let r = FunctionRequest::new(FunctionId::Lambert).s("0").x("-1").q("0.5").evaluate();
        assert_eq!(r.unwrap_err().class(), crate::mp::ErrorClass::Domain);
        let r = FunctionRequest::new(FunctionId::Lambert).s("1").x("1").q("1.5").evaluate();
        assert_eq!(r.unwrap_err().class(), crate::mp::ErrorClass::Domain);
    }

    #[test]
    fn theta_constant_closed_form() {
        let r = FunctionRequest::new(FunctionId::Theta)
            .j(4)
            .z("0")
            .q_expr("exp(-1/pi)")
            .method(Method::ClosedForm)
            .digits(40)
            .evaluate()
            .unwrap();
        let ctx = PrecisionContext::new(256, 10).unwrap();
        let pi = ctx.pi();
        let want = pi.mul_i(2) * (-(pi.powi(3).div_i(4))).exp();
        assert!(((r.re() - &want) / &want).abs().to_f64() < 1e-70);
    }

    #[test]
    fn inversion_through_requests() {
        let r = FunctionRequest::new(FunctionId::Qgamma).x("3").q("2").method(Method::Direct).evaluate().unwrap();
        assert!((r.re().to_f64() - 3.0).abs() < 1e-15);
        assert!(FunctionRequest::new(FunctionId::Lambert).s("1").x("1").q("2").evaluate().is_err());
    }

    #[test]
    fn complex_theta_argument() {
        let r = FunctionRequest::new(FunctionId::Theta).j(3).z("0.3,0.1").q("0.5").evaluate().unwrap();
        assert!(!r.value.im.is_zero());
        let a = FunctionRequest::new(FunctionId::Theta).j(3).z("0.3,0.1").q("0.5").method(Method::Asymptotic);
        assert!(matches!(a.evaluate(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn record_round_trip() {
        let rec = FunctionRequest::new(FunctionId::Qdigamma).x("0.5").q("0.9").digits(25).run().unwrap();
        let text = serde_json::to_string(&rec).unwrap();
        let back: ResultRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(rec, back);
        assert!(rec.value.re.contains('e'));
    }

    #[test]
    fn every_function_evaluates() {
        let cases = [
            FunctionRequest::new(FunctionId::Pochhammer).x("0.3").q("0.7"),
            FunctionRequest::new(FunctionId::Euler).q("0.9").method(Method::ClosedForm),
            FunctionRequest::new(FunctionId::Qgamma).x("0.5").q("0.9").method(Method::ClosedForm),
            FunctionRequest::new(FunctionId::Qpolygamma).m(2).x("0.3").q("0.8"),
            FunctionRequest::new(FunctionId::Eisenstein).k(2).q("0.3"),
            FunctionRequest::new(FunctionId::ThetaLogderiv).j(1).z("0.7").q("0.9").method(Method::Asymptotic),
            FunctionRequest::new(FunctionId::DivisorGf).m(1).q("0.9").method(Method::ClosedForm),
        ];
        for c in cases {
            c.evaluate().unwrap_or_else(|e| panic!("{:?}: {e}", c.function));
        }
    }
}
