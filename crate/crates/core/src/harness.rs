//! Reproduction tables, property suites and direct-versus-asymptotic timings.
//!
//! These drive the `table`, `verify` and `bench` subcommands and the
//! acceptance tests. Every row compares a `q → 1` formula against an
//! independent direct evaluation.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::kernel::{bernoulli_poly, polylog, hurwitz_zeta_sderiv, lerch_value, zeta_nonpositive_int};
use crate::lambert::{
    eisenstein_asymptotic, eisenstein_modified, lambert_asymptotic, lambert_direct, QPoint, SParameter,
};
use crate::mp::{Complex, Error, ErrorClass, EvalResult, PrecisionContext, Real, Result};
use crate::qgamma::{
    qdigamma_direct, qgamma_asymptotic, qgamma_direct, qgamma_reflection, qpolygamma_direct, reflection_residual,
    QBase,
};
use crate::qpochhammer::{pochhammer_asymptotic, pochhammer_direct_power, pochhammer_reflection};
use crate::request::{FunctionRequest, DEFAULT_MAX_TERMS};
use crate::series::TruncationPolicy;
use crate::theta::{theta_asymptotic, theta_direct, ThetaRoute};

fn ctx_bits(bits: usize) -> PrecisionContext {
    PrecisionContext::new(bits, DEFAULT_MAX_TERMS).expect("static precision is valid")
}

fn rel_gap(a: &Real, b: &Real) -> Real {
    ((a - b) / b).abs()
}

fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

// ---------------------------------------------------------------- tables

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    AbstractConstants,
    EisensteinRemark,
    Example34,
    TwoTermClaim,
    ReflectionSuite,
}

impl TableId {
    pub const ALL: [TableId; 5] = [
        TableId::AbstractConstants,
        TableId::EisensteinRemark,
        TableId::Example34,
        TableId::TwoTermClaim,
        TableId::ReflectionSuite,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TableId::AbstractConstants => "abstract_constants",
            TableId::EisensteinRemark => "eisenstein_remark",
            TableId::Example34 => "example_3_4",
            TableId::TwoTermClaim => "two_term_claim",
            TableId::ReflectionSuite => "reflection_suite",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        TableId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown table {s:?}"))
    }
}

/// One comparison of an asymptotic value against its oracle.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub label: String,
    pub params: String,
    pub asymptotic: String,
    pub oracle: String,
    pub rel_err: String,
    pub claimed_order: String,
    pub pass: bool,
    pub error: String,
    #[serde(skip)]
    pub rel: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub id: TableId,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn any_errors(&self) -> bool {
        self.rows.iter().any(|r| !r.error.is_empty())
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

const TABLE_DIGITS: usize = 30;

fn make_row(
    label: &str,
    params: String,
    asym: Result<Real>,
    oracle: Result<Real>,
    claimed: Option<f64>,
    judge: impl Fn(f64) -> bool,
) -> TableRow {
    let claimed_order = claimed.map(|c| format!("{c:.0e}")).unwrap_or_default();
    match (asym, oracle) {
        (Ok(a), Ok(o)) => {
            let rel = rel_gap(&a, &o).to_f64();
            TableRow {
                label: label.into(),
                params,
                asymptotic: a.to_sci(TABLE_DIGITS),
                oracle: o.to_sci(TABLE_DIGITS),
                rel_err: sci(rel),
                claimed_order,
                pass: judge(rel),
                error: String::new(),
                rel: Some(rel),
            }
        }
        (a, o) => {
            let msg = [a.err(), o.err()].into_iter().flatten().map(|e| e.to_string()).collect::<Vec<_>>().join("; ");
            TableRow {
                label: label.into(),
                params,
                asymptotic: String::new(),
                oracle: String::new(),
                rel_err: String::new(),
                claimed_order,
                pass: false,
                error: msg,
                rel: None,
            }
        }
    }
}

/// Within a factor of ten of `claimed`, either way.
pub fn within_decade(rel: f64, claimed: f64) -> bool {
    rel >= claimed / 10.0 && rel <= claimed * 10.0
}

fn val(r: Result<EvalResult>) -> Result<Real> {
    r.map(|e| e.value.re)
}

/// Builds one of the reproduction tables. Rows come out in a fixed order.
pub fn build_table(id: TableId) -> Table {
    let rows = match id {
        TableId::AbstractConstants => abstract_constants(),
        TableId::EisensteinRemark => eisenstein_remark(),
        TableId::Example34 => example_3_4(),
        TableId::TwoTermClaim => two_term_claim(),
        TableId::ReflectionSuite => reflection_suite_table(),
    };
    Table { id, rows }
}

/// `Γ₂(1/4) Γ₂(3/4)` from the products against `2^(13/32) π / log 2`.
pub fn qgamma_constant_row(ctx: &PrecisionContext) -> TableRow {
    let run = || -> Result<(Real, Real)> {
        let q = QBase::new(&ctx.real(2), ctx)?;
        let a = qgamma_direct(&ctx.ratio(1, 4), &q, ctx)?;
        let b = qgamma_direct(&ctx.ratio(3, 4), &q, ctx)?;
        let closed = qgamma_reflection(&ctx.ratio(1, 4), &q)?;
        Ok((closed.value.re, a.re() * b.re()))
    };
    let (a, o) = match run() {
        Ok((a, o)) => (Ok(a), Ok(o)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    make_row("qgamma_product", "q=2 x=1/4".into(), a, o, Some(1e-25), |r| within_decade(r, 1e-25))
}

/// `θ₄(0, e^(-1/π))` from the series against `2π e^(-π³/4)`.
pub fn theta_constant_row(ctx: &PrecisionContext) -> TableRow {
    let p = ctx.work_bits();
    let run = || -> Result<(Real, Real)> {
        let q = QPoint::from_log_inv(&ctx.pi().recip(), ctx)?;
        let d = theta_direct(4, &Complex::zero(p), &q, ctx, ThetaRoute::Series)?;
        let a = theta_asymptotic(4, &Real::zero(p), &q, ctx)?;
        Ok((a.value.re, d.value.re))
    };
    let (a, o) = match run() {
        Ok((a, o)) => (Ok(a), Ok(o)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    make_row("theta_constant", "j=4 z=0 q=exp(-1/pi)".into(), a, o, Some(1e-27), |r| within_decade(r, 1e-27))
}

fn abstract_constants() -> Vec<TableRow> {
    let ctx = ctx_bits(512);
    vec![qgamma_constant_row(&ctx), theta_constant_row(&ctx)]
}

/// Expected error orders for the Eisenstein closed form at `q = 0.1, 0.3, 0.5`.
pub const EISENSTEIN_CLAIMS: [(&str, f64); 3] = [("0.1", 1e-5), ("0.3", 1e-12), ("0.5", 1e-15)];

fn eisenstein_remark() -> Vec<TableRow> {
    let ctx = ctx_bits(256);
    let mut rows = Vec::new();
    for k in 1..=5u32 {
        for (qs, claim) in EISENSTEIN_CLAIMS {
            let q = QPoint::parse(qs, &ctx);
            let (a, o) = match q {
                Ok(q) => (val(eisenstein_asymptotic(k, &q)), val(eisenstein_modified(k, &q, &ctx))),
                Err(e) => (Err(e.clone()), Err(e)),
            };
            rows.push(make_row("eisenstein", format!("k={k} q={qs}"), a, o, Some(claim), |r| r <= claim * 10.0));
        }
    }
    rows
}

/// Expected error orders for the `x = 1/4` Pochhammer reflection.
pub const EXAMPLE_34_CLAIMS: [(&str, f64); 3] = [("0.001", 1e-5), ("0.01", 1e-8), ("0.1", 1e-15)];

fn pochhammer_pair(x: &Real, q: &QPoint, ctx: &PrecisionContext) -> Result<Real> {
    let one = Real::one(ctx.work_bits());
    let a = pochhammer_direct_power(x, q, ctx)?;
    let b = pochhammer_direct_power(&(&one - x), q, ctx)?;
    Ok(a.re() * b.re())
}

fn example_3_4() -> Vec<TableRow> {
    let ctx = ctx_bits(256);
    let x = ctx.ratio(1, 4);
    EXAMPLE_34_CLAIMS
        .iter()
        .map(|(qs, claim)| {
            let (a, o) = match QPoint::parse(qs, &ctx) {
                Ok(q) => (val(pochhammer_reflection(&x, &q)), pochhammer_pair(&x, &q, &ctx)),
                Err(e) => (Err(e.clone()), Err(e)),
            };
            make_row("pochhammer_reflection", format!("x=1/4 q={qs}"), a, o, Some(*claim), |r| {
                within_decade(r, *claim)
            })
        })
        .collect()
}

/// Grid for the two-term claim.
pub const TWO_TERM_QS: [&str; 5] = ["0.1", "0.3", "0.5", "0.7", "0.9"];

/// Leading term plus the first `kept` corrections of the `s = 1, x = 1`
/// expansion, against direct summation.
pub fn truncated_lambert_row(qs: &str, kept: usize, ctx: &PrecisionContext) -> TableRow {
    let one = ctx.real(1);
    let s = SParameter::int(1);
    let (a, o) = match QPoint::parse(qs, ctx) {
        Ok(q) => (
            val(lambert_asymptotic(&s, &one, &q, TruncationPolicy::Fixed(kept), ctx)),
            val(lambert_direct(&s, &one, &q, ctx)),
        ),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    let label = if kept == 1 { "two_term" } else { "three_term" };
    make_row(label, format!("s=1 x=1 q={qs}"), a, o, Some(1e-7), |r| r <= 1e-7)
}

fn two_term_claim() -> Vec<TableRow> {
    let ctx = ctx_bits(256);
    let mut rows: Vec<TableRow> = TWO_TERM_QS.iter().map(|q| truncated_lambert_row(q, 1, &ctx)).collect();
    rows.extend(TWO_TERM_QS.iter().map(|q| truncated_lambert_row(q, 2, &ctx)));
    rows
}

/// Bound on the relative error of a reflection formula: a generous multiple
/// of `(2π/t)^3 e^(-4π²/t)`, floored by working precision.
fn reflection_bound(q: &QPoint, ctx: &PrecisionContext) -> f64 {
    let t = q.log_inv_q().to_f64();
    let two_pi = 2.0 * std::f64::consts::PI;
    let e = (-(two_pi * two_pi) / t).exp() * (two_pi / t).powi(3) * 1e4;
    e.max(1e4 * ctx.eps().to_f64())
}

fn reflection_suite_table() -> Vec<TableRow> {
    let ctx = ctx_bits(256);
    let p = ctx.work_bits();
    let x = ctx.ratio(1, 4);
    let one = Real::one(p);
    let mut rows = Vec::new();
    for qs in ["0.5", "0.9"] {
        let q = match QPoint::parse(qs, &ctx) {
            Ok(q) => q,
            Err(e) => {
                rows.push(make_row("setup", format!("q={qs}"), Err(e.clone()), Err(e), None, |_| false));
                continue;
            }
        };
        let qb = QBase::from(q.clone());
        let bound = reflection_bound(&q, &ctx);
        let params = format!("x=1/4 q={qs}");
        rows.push(make_row(
            "pochhammer",
            params.clone(),
            val(pochhammer_reflection(&x, &q)),
            pochhammer_pair(&x, &q, &ctx),
            Some(bound),
            |r| r <= bound,
        ));
        let gamma_pair = (|| {
            let a = qgamma_direct(&x, &qb, &ctx)?;
            let b = qgamma_direct(&(&one - &x), &qb, &ctx)?;
            Ok(a.re() * b.re())
        })();
        rows.push(make_row(
            "qgamma",
            params.clone(),
            val(qgamma_reflection(&x, &qb)),
            gamma_pair,
            Some(bound),
            |r| r <= bound,
        ));
        for m in 0..3u32 {
            let direct = (|| {
                let a = qpolygamma_direct(m, &x, &qb, &ctx)?;
                let b = qpolygamma_direct(m, &(&one - &x), &qb, &ctx)?;
                Ok(if m % 2 == 0 { a.re() - b.re() } else { a.re() + b.re() })
            })();
            rows.push(make_row(
                &format!("qpolygamma_m{m}"),
                params.clone(),
                val(crate::qgamma::qpolygamma_reflection(m, &x, &qb, &ctx)),
                direct,
                Some(bound),
                |r| r <= bound,
            ));
        }
    }
    rows
}

// ---------------------------------------------------------------- verify

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Overlap,
    Reflections,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "identities" => Ok(Suite::Identities),
            "overlap" => Ok(Suite::Overlap),
            "reflections" => Ok(Suite::Reflections),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

/// Outcome of one named invariant over its grid.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub name: String,
    pub cases: usize,
    /// Largest `residual / tolerance` seen; a case fails above one.
    pub worst_ratio: f64,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Check {
    report: CheckReport,
}

impl Check {
    fn new(suite: &str, name: &str) -> Self {
        Check {
            report: CheckReport {
                suite: suite.into(),
                name: name.into(),
                cases: 0,
                worst_ratio: 0.0,
                failures: Vec::new(),
            },
        }
    }

    /// Records `|residual| ≤ tol` for one case.
    fn case(&mut self, label: impl fmt::Display, outcome: Result<(Real, Real)>) {
        self.report.cases += 1;
        match outcome {
            Ok((res, tol)) => {
                let ratio = if tol.is_zero() {
                    if res.is_zero() {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (res.abs() / &tol).to_f64()
                };
                self.report.worst_ratio = self.report.worst_ratio.max(ratio);
                if ratio.is_nan() || ratio > 1.0 {
                    self.report.failures.push(format!("{label}: residual {} > {}", res.abs().to_sci(3), tol.to_sci(3)));
                }
            }
            Err(e) => self.report.failures.push(format!("{label}: {e}")),
        }
    }

    fn done(self) -> CheckReport {
        self.report
    }
}

fn ten_eps(ctx: &PrecisionContext, scale: &Real) -> Real {
    ctx.eps().mul_i(10) * Real::max_of(&scale.abs(), &Real::one(ctx.work_bits()))
}

/// Runs the named invariant suites at 256 bits.
pub fn verify(suite: Suite) -> Vec<CheckReport> {
    let ctx = ctx_bits(256);
    let mut out = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        out.extend(identity_checks(&ctx));
    }
    if matches!(suite, Suite::Overlap | Suite::All) {
        out.extend(overlap_checks(&ctx));
    }
    if matches!(suite, Suite::Reflections | Suite::All) {
        out.extend(reflection_checks(&ctx));
    }
    out
}

fn qp(s: &str, ctx: &PrecisionContext) -> Result<QPoint> {
    QPoint::parse(s, ctx)
}

/// The identity suite: each relation holds to `10·eps` on its grid.
pub fn identity_checks(ctx: &PrecisionContext) -> Vec<CheckReport> {
    let p = ctx.work_bits();
    let one = Real::one(p);
    let mut out = Vec::new();

    let mut c = Check::new("identities", "pochhammer_lambert_round_trip");
    for qs in ["0.2", "0.5", "0.8"] {
        for xs in ["0.25", "0.5", "1"] {
            c.case(format!("q={qs} x={xs}"), (|| {
                let q = qp(qs, ctx)?;
                let x = ctx.parse(xs)?;
                let lp = pochhammer_direct_power(&x, &q, ctx)?.re().ln();
                let l = lambert_direct(&SParameter::int(-1), &x, &q, ctx)?;
                Ok((&lp + l.re(), ten_eps(ctx, &lp)))
            })());
        }
    }
    out.push(c.done());

    let mut c = Check::new("identities", "qdigamma_lambert_identity");
    for qs in ["0.3", "0.7"] {
        for xs in ["0.5", "1.5"] {
            c.case(format!("q={qs} x={xs}"), (|| {
                let q = qp(qs, ctx)?;
                let x = ctx.parse(xs)?;
                let d = qdigamma_direct(&x, &QBase::from(q.clone()), ctx)?;
                let l = lambert_direct(&SParameter::int(0), &x, &q, ctx)?;
                let v = -(&one - q.q()).ln() + q.log_q() * l.re();
                Ok((d.re() - &v, ten_eps(ctx, &v)))
            })());
        }
    }
    out.push(c.done());

    // Differentiating the digamma series term by term gives
    // `ψ^(m) = (log q)^(m+1) Σ_k Li_{-m}(q^(x+k))`, a reordering of the
    // Lambert double sum that shares no code with it.
    let mut c = Check::new("identities", "qpolygamma_lambert_identity");
    for m in 1..=3u32 {
        c.case(format!("m={m} q=0.6 x=0.4"), (|| {
            let q = qp("0.6", ctx)?;
            let x = ctx.parse("0.4")?;
            let l = lambert_direct(&SParameter::int(m as i64), &x, &q, ctx)?;
            let d = qpolygamma_direct(m, &x, &QBase::from(q.clone()), ctx)?;
            let order = Complex::from_real(ctx.real(-(m as i64)));
            let mut sum = Real::zero(p);
            let mut u = q.pow(&x);
            for _ in 0..ctx.max_terms() {
                let t = polylog(&order, &Complex::from_real(u.clone()), ctx)?.re;
                sum = &sum + &t;
                if t.abs() <= ctx.eps() * &sum.abs() {
                    break;
                }
                u = &u * q.q();
            }
            let v = q.log_q().powi(m as i64 + 1) * &sum;
            let r = Real::max_of(&(d.re() - &v).abs(), &(q.log_q().powi(m as i64 + 1) * l.re() - &v).abs());
            Ok((r, ten_eps(ctx, &v)))
        })());
    }
    out.push(c.done());

    let mut c = Check::new("identities", "theta_quasi_period");
    for qs in ["0.4", "0.7"] {
        for zs in ["0.3", "1.0"] {
            c.case(format!("q={qs} z={zs}"), (|| {
                let q = qp(qs, ctx)?;
                let z = Complex::from_real(ctx.parse(zs)?);
                let lhs = theta_direct(1, &z, &q, ctx, ThetaRoute::Series)?;
                let shift = Complex::new(Real::zero(p), -q.log_q().div_i(2));
                let t4 = theta_direct(4, &(&z + &shift), &q, ctx, ThetaRoute::Series)?;
                let iz = Complex::new(Real::zero(p), z.re.clone());
                let pre = &Complex::new(Real::zero(p), -q.pow(&ctx.ratio(1, 4))) * &iz.exp();
                let rhs = &pre * &t4.value;
                let res = Real::max_of(&(&lhs.value - &rhs).abs(), &rhs.im.abs());
                Ok((res, ten_eps(ctx, &lhs.value.abs())))
            })());
        }
    }
    out.push(c.done());

    let mut c = Check::new("identities", "theta_shift_relations");
    let half_pi = Real::pi(p).div_i(2);
    for zs in ["0.1", "0.9", "2.2", "-1.3"] {
        c.case(format!("z={zs}"), (|| {
            let q = qp("0.6", ctx)?;
            let z = ctx.parse(zs)?;
            let t = |j, w: &Real| -> Result<Real> {
                Ok(theta_direct(j, &Complex::from_real(w.clone()), &q, ctx, ThetaRoute::Series)?.value.re)
            };
            let zh = &z + &half_pi;
            let zp = &z + &Real::pi(p);
            let r1 = (t(2, &z)? - t(1, &zh)?).abs();
            let r2 = (t(3, &z)? - t(4, &zh)?).abs();
            let r3 = (t(3, &zp)? - t(3, &z)?).abs();
            let r4 = (t(1, &zp)? + t(1, &z)?).abs();
            let res = Real::max_of(&Real::max_of(&r1, &r2), &Real::max_of(&r3, &r4));
            Ok((res, ten_eps(ctx, &one)))
        })());
    }
    out.push(c.done());

    let mut c = Check::new("identities", "theta_triple_product");
    for qs in ["0.2", "0.6", "0.9"] {
        for zs in ["0", "0.4", "2.8"] {
            for j in 1..=4u8 {
                c.case(format!("j={j} q={qs} z={zs}"), (|| {
                    let q = qp(qs, ctx)?;
                    let z = Complex::from_real(ctx.parse(zs)?);
                    let a = theta_direct(j, &z, &q, ctx, ThetaRoute::Series)?;
                    let b = theta_direct(j, &z, &q, ctx, ThetaRoute::TripleProduct)?;
                    Ok(((&a.value - &b.value).abs(), ten_eps(ctx, &a.value.abs())))
                })());
            }
        }
    }
    out.push(c.done());

    let mut c = Check::new("identities", "qgamma_functional_equation");
    for qs in ["0.3", "0.7", "0.9"] {
        for xs in ["0.5", "1", "1.5"] {
            c.case(format!("q={qs} x={xs}"), (|| {
                let q = QBase::new(&ctx.parse(qs)?, ctx)?;
                let x = ctx.parse(xs)?;
                let g1 = qgamma_direct(&x.add_i(1), &q, ctx)?;
                let g0 = qgamma_direct(&x, &q, ctx)?;
                let lq = q.ln_q();
                let qx = (&x * lq).exp_m1() / lq.exp_m1();
                let rhs = qx * g0.re();
                Ok(((g1.re() - &rhs) / &rhs, ctx.eps().mul_i(10)))
            })());
        }
    }
    out.push(c.done());

    let mut c = Check::new("identities", "qgamma_inversion_round_trip");
    for xs in ["0.25", "0.5", "0.75"] {
        c.case(format!("q=0.4 x={xs}"), (|| {
            let q = ctx.parse("0.4")?;
            let x = ctx.parse(xs)?;
            let small = qgamma_direct(&x, &QBase::new(&q, ctx)?, ctx)?;
            let big = qgamma_direct(&x, &QBase::new(&q.recip(), ctx)?, ctx)?;
            let factor = (q.ln() * (x.add_i(-1) * x.add_i(-2))).div_i(2).exp();
            let rhs = factor * big.re();
            Ok(((small.re() - &rhs) / &rhs, ctx.eps().mul_i(10)))
        })());
    }
    out.push(c.done());

    out
}

/// The overlap suite: direct and asymptotic routes agree within their error
/// estimates, and derivative relations hold to `10⁻⁶`.
pub fn overlap_checks(ctx: &PrecisionContext) -> Vec<CheckReport> {
    let p = ctx.work_bits();
    let mut out = Vec::new();

    let mut c = Check::new("overlap", "lambert_direct_vs_asymptotic");
    let s_values: [(&str, SParameter); 6] = [
        ("-2", SParameter::int(-2)),
        ("-1", SParameter::int(-1)),
        ("0", SParameter::int(0)),
        ("1", SParameter::int(1)),
        ("1.5", SParameter::real(Real::ratio(3, 2, p))),
        ("2", SParameter::int(2)),
    ];
    for qs in ["0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9"] {
        for xs in ["0.25", "0.5", "0.75", "1"] {
            for (sl, s) in &s_values {
                c.case(format!("s={sl} x={xs} q={qs}"), (|| {
                    let q = qp(qs, ctx)?;
                    let x = ctx.parse(xs)?;
                    let a = lambert_asymptotic(s, &x, &q, TruncationPolicy::Optimal, ctx)?;
                    let d = lambert_direct(s, &x, &q, ctx)?;
                    let tol = Real::max_of(&a.err_estimate, &d.err_estimate).mul_i(10);
                    let tol = Real::max_of(&tol, &ten_eps(ctx, &d.value.abs()));
                    Ok(((&a.value - &d.value).abs(), tol))
                })());
            }
        }
    }
    out.push(c.done());

    let mut c = Check::new("overlap", "pochhammer_direct_vs_asymptotic");
    for qs in ["0.8", "0.9", "0.95"] {
        for xs in ["0.1", "0.5", "1"] {
            c.case(format!("q={qs} x={xs}"), (|| {
                let q = qp(qs, ctx)?;
                let x = ctx.parse(xs)?;
                let a = pochhammer_asymptotic(&x, &q, TruncationPolicy::Optimal, ctx)?;
                let d = pochhammer_direct_power(&x, &q, ctx)?;
                let tol = Real::max_of(&a.err_estimate, &(Real::from_f64(1e-10, p) * d.re().abs()));
                Ok((a.re() - d.re(), tol))
            })());
        }
    }
    out.push(c.done());

    let mut c = Check::new("overlap", "qgamma_direct_vs_asymptotic");
    for qs in ["0.8", "0.9", "2"] {
        for xs in ["0.3", "0.5", "1.7"] {
            c.case(format!("q={qs} x={xs}"), (|| {
                let q = QBase::new(&ctx.parse(qs)?, ctx)?;
                let x = ctx.parse(xs)?;
                let a = qgamma_asymptotic(&x, &q, TruncationPolicy::Optimal, ctx)?;
                let d = qgamma_direct(&x, &q, ctx)?;
                let tol = Real::max_of(&a.err_estimate, &d.err_estimate).mul_i(10);
                Ok((a.re() - d.re(), Real::max_of(&tol, &ten_eps(ctx, d.re()))))
            })());
        }
    }
    out.push(c.done());

    let mut c = Check::new("overlap", "qdigamma_vs_log_qgamma_derivative");
    let h = Real::from_f64(1e-12, p);
    for (qs, xs) in [("0.5", "0.7"), ("0.9", "0.3"), ("1.5", "0.6")] {
        c.case(format!("q={qs} x={xs}"), (|| {
            let q = QBase::new(&ctx.parse(qs)?, ctx)?;
            let x = ctx.parse(xs)?;
            let up = qgamma_direct(&(&x + &h), &q, ctx)?.re().ln();
            let dn = qgamma_direct(&(&x - &h), &q, ctx)?.re().ln();
            let fd = (up - dn) / h.mul_i(2);
            let d = qdigamma_direct(&x, &q, ctx)?;
            Ok(((d.re() - &fd) / d.re(), Real::from_f64(1e-6, p)))
        })());
    }
    out.push(c.done());

    let mut c = Check::new("overlap", "qpolygamma_vs_difference");
    for m in 1..=3u32 {
        c.case(format!("m={m} q=0.7 x=0.45"), (|| {
            let q = QBase::new(&ctx.parse("0.7")?, ctx)?;
            let x = ctx.parse("0.45")?;
            let up = qpolygamma_direct(m - 1, &(&x + &h), &q, ctx)?;
            let dn = qpolygamma_direct(m - 1, &(&x - &h), &q, ctx)?;
            let fd = (up.re() - dn.re()) / h.mul_i(2);
            let d = qpolygamma_direct(m, &x, &q, ctx)?;
            Ok(((d.re() - &fd) / d.re(), Real::from_f64(1e-6, p)))
        })());
    }
    out.push(c.done());

    let mut c = Check::new("overlap", "zeta_derivative_vs_lerch");
    for xs in ["0.25", "0.5", "0.9", "1"] {
        c.case(format!("x={xs}"), (|| {
            let x = ctx.parse(xs)?;
            let d = hurwitz_zeta_sderiv(1, &x, ctx)?;
            let l = lerch_value(&x, ctx)?;
            Ok((d - &l, Real::from_f64(1e-6, p) * l.abs()))
        })());
    }
    out.push(c.done());

    out
}

/// The reflection suite: residuals of the reflection formulas shrink like
/// `e^(-4π²/t)` and the `k ≥ 3` factors of the Pochhammer reflection vanish.
pub fn reflection_checks(ctx: &PrecisionContext) -> Vec<CheckReport> {
    let p = ctx.work_bits();
    let mut out = Vec::new();

    let mut c = Check::new("reflections", "q_polygamma_reflection_residual");
    for qs in ["0.5", "0.7", "0.9"] {
        for xs in ["0.25", "0.3"] {
            for m in 0..=3u32 {
                c.case(format!("m={m} x={xs} q={qs}"), (|| {
                    let qb = QBase::new(&ctx.parse(qs)?, ctx)?;
                    let x = ctx.parse(xs)?;
                    let res = reflection_residual(m, &x, &qb, ctx)?;
                    let scale = crate::qgamma::qpolygamma_reflection(m, &x, &qb, ctx)?.value.abs();
                    let bound = Real::from_f64(reflection_bound(qb.point(), ctx), p) * Real::max_of(&scale, &Real::one(p));
                    Ok((res, bound))
                })());
            }
        }
    }
    c.case("m=0 x=1/2 q=0.9", (|| {
        let qb = QBase::new(&ctx.parse("0.9")?, ctx)?;
        Ok((reflection_residual(0, &ctx.ratio(1, 2), &qb, ctx)?, ctx.eps().mul_i(10)))
    })());
    out.push(c.done());

    let mut c = Check::new("reflections", "pochhammer_and_qgamma_reflection");
    for qs in ["0.1", "0.5", "0.9"] {
        for xs in ["0.2", "0.25", "0.5"] {
            c.case(format!("q={qs} x={xs}"), (|| {
                let q = qp(qs, ctx)?;
                let x = ctx.parse(xs)?;
                let bound = Real::from_f64(reflection_bound(&q, ctx), p);
                let a = pochhammer_reflection(&x, &q)?;
                let d = pochhammer_pair(&x, &q, ctx)?;
                let r1 = rel_gap(a.re(), &d);
                let qb = QBase::from(q.clone());
                let g = qgamma_reflection(&x, &qb)?;
                let one = Real::one(p);
                let gd = qgamma_direct(&x, &qb, ctx)?.re() * qgamma_direct(&(&one - &x), &qb, ctx)?.re();
                let r2 = rel_gap(g.re(), &gd);
                Ok((Real::max_of(&r1, &r2), bound))
            })());
        }
    }
    out.push(c.done());

    let mut c = Check::new("reflections", "pochhammer_reflection_cancellation");
    for k in 3..=12usize {
        c.case(format!("k={k}"), (|| {
            if k % 2 == 0 {
                let z = zeta_nonpositive_int(k - 2)?;
                let zero = num_traits::Zero::is_zero(&z);
                return Ok((if zero { Real::zero(p) } else { Real::one(p) }, Real::zero(p)));
            }
            let mut worst = Real::zero(p);
            for xs in ["0.1", "0.25", "0.3", "0.45"] {
                let x = ctx.parse(xs)?;
                let s = bernoulli_poly(k, &x, ctx)? + bernoulli_poly(k, &(Real::one(p) - &x), ctx)?;
                worst = Real::max_of(&worst, &s.abs());
            }
            Ok((worst, ctx.eps().mul_i(10)))
        })());
    }
    out.push(c.done());

    out
}

// ---------------------------------------------------------------- bench

/// Working precision that resolves `digits` decimal digits.
pub fn bits_for_target(digits: usize) -> usize {
    ((digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 8).max(64)
}

/// Direct and asymptotic evaluation of one request at one `q`.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub q: String,
    pub direct_terms: Option<usize>,
    pub direct_ns: Option<u64>,
    pub direct_status: String,
    pub asym_terms: Option<usize>,
    pub asym_ns: Option<u64>,
    pub asym_status: String,
    /// `direct_terms / asym_terms` when both succeeded.
    pub term_ratio: Option<String>,
}

fn status(r: &Result<EvalResult>, target: &Real) -> String {
    match r {
        Ok(e) if e.err_estimate <= target * &e.value.abs() => "ok".into(),
        Ok(e) => format!("ok (relative error {})", sci(e.relative_err())),
        Err(e) if e.class() == ErrorClass::Convergence => match e {
            Error::Convergence { .. } => "cap exceeded".into(),
            other => format!("failed: {other}"),
        },
        Err(e) => format!("error: {e}"),
    }
}

/// Times `template` at each `q` by both routes at a `digits`-digit target.
pub fn bench(template: &FunctionRequest, q_list: &[String], digits: usize) -> Result<Vec<BenchRow>> {
    template.clone().q("0.5").validate().or_else(|e| match template.validate() {
        Ok(()) => Ok(()),
        Err(_) => Err(e),
    })?;
    let ctx = PrecisionContext::new(bits_for_target(digits), DEFAULT_MAX_TERMS)?;
    let target = Real::from_f64(10f64.powi(-(digits as i32)), ctx.work_bits());
    let mut rows = Vec::new();
    for qs in q_list {
        let mut req = template.clone();
        req.q = Some(qs.clone());
        req.q_expr = None;
        let timed = |m: crate::mp::Method| {
            let r = req.clone().method(m);
            let start = Instant::now();
            let out = r.evaluate_in(&ctx);
            (out, start.elapsed().as_nanos() as u64)
        };
        let (d, dns) = timed(crate::mp::Method::Direct);
        let (a, ans) = timed(crate::mp::Method::Asymptotic);
        let term_ratio = match (&d, &a) {
            (Ok(d), Ok(a)) if a.terms_used > 0 => Some(format!("{:.1}", d.terms_used as f64 / a.terms_used as f64)),
            _ => None,
        };
        rows.push(BenchRow {
            q: qs.clone(),
            direct_terms: d.as_ref().ok().map(|e| e.terms_used),
            direct_ns: d.is_ok().then_some(dns),
            direct_status: status(&d, &target),
            asym_terms: a.as_ref().ok().map(|e| e.terms_used),
            asym_ns: a.is_ok().then_some(ans),
            asym_status: status(&a, &target),
            term_ratio,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::request::FunctionId;

    #[test]
    fn table_ids_round_trip() {
        for t in TableId::ALL {
            assert_eq!(t.as_str().parse::<TableId>().unwrap(), t);
        }
    }

    #[test]
    fn decade_window() {
        assert!(within_decade(3e-25, 1e-25));
        assert!(!within_decade(3e-27, 1e-25));
    }

    #[test]
    fn example_table_shape() {
        let t = build_table(TableId::Example34);
        assert_eq!(t.rows.len(), 3);
        assert!(t.all_pass(), "{:?}", t.rows);
    }

    #[test]
    fn bench_records_cap() {
        let req = FunctionRequest::new(FunctionId::Lambert).s("1").x("1");
        let rows = bench(&req, &["0.2".into(), "0.999999".into()], 30).unwrap();
        assert_eq!(rows[0].direct_status, "ok");
        assert!(rows[0].direct_terms.unwrap() < 300);
        assert_eq!(rows[1].direct_status, "cap exceeded");
        assert_eq!(rows[1].asym_status, "ok");
    }
}
