//! Empirical embedding checks: the oscillation functional, reports over a
//! corpus, the pointwise oscillation bound, the m-function with its weights,
//! and the regime table for Lorentz–Zygmund spaces.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::NamedFunction;
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::powerlog::PowerLog;
use crate::quad::{integrate_dt_over_t, interval_sup, Quad, Tolerance};
use crate::rearrange::{check_alpha, StepDecreasing};
use crate::rispace::{Exponent, RISpaceSpec};
use crate::smoothness::{besov_seminorm, GradientField};
use crate::space::Space;

const REL_TOL: f64 = 1e-12;

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("smoothness s must lie in (0,1), got {s}")))
    }
}

fn check_q(q: Exponent) -> Result<()> {
    if q.0 > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("q must be positive, got {}", q.0)))
    }
}

fn check_dim(q_dim: f64) -> Result<()> {
    if q_dim > 0.0 && q_dim.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("upper dimension must be positive, got {q_dim}")))
    }
}

fn space_dim(space: &Space) -> Result<f64> {
    let q_dim = space.upper_dimension();
    check_dim(q_dim)?;
    Ok(q_dim)
}

fn close(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

fn quad_tol() -> Tolerance {
    Tolerance { rel: 1e-10, ..Tolerance::default() }
}

/// `(∫_0^T (O(|f|^α,t)^{1/α} φ_{X^{(α)}}(t) / t^{s/Q})^q dt/t)^{1/q}` with
/// `T = min(1, μ(Ω))`, or the supremum over `(0, T)` when `q = ∞`.
pub fn oscillation_functional(space: &Space, f: &[f64], spec: &RISpaceSpec, alpha: f64, s: f64, q: Exponent) -> Result<f64> {
    Ok(oscillation_functional_estimate(space, f, spec, alpha, s, q)?.value)
}

/// [`oscillation_functional`] together with its quadrature error estimate.
pub fn oscillation_functional_estimate(
    space: &Space,
    f: &[f64],
    spec: &RISpaceSpec,
    alpha: f64,
    s: f64,
    q: Exponent,
) -> Result<Quad> {
    check_alpha(alpha)?;
    check_s(s)?;
    check_q(q)?;
    let fstar = StepDecreasing::from_function(space, f)?;
    let q_dim = space_dim(space)?;
    let x_alpha = spec.convexify(alpha)?;
    let top = space.total_mass().min(1.0);
    oscillation_integral(&fstar, &x_alpha, alpha, s / q_dim, q, top)
}

fn oscillation_integral(
    fstar: &StepDecreasing,
    x_alpha: &RISpaceSpec,
    alpha: f64,
    sq: f64,
    q: Exponent,
    top: f64,
) -> Result<Quad> {
    x_alpha.fundamental_function(top)?;
    let exact = x_alpha.fundamental_shape_is_exact();
    let shape = x_alpha.fundamental_shape()?;
    let phi = |t: f64| {
        if exact {
            shape.eval(t)
        } else {
            x_alpha.fundamental_function(t).unwrap_or(f64::NAN)
        }
    };
    let pieces = fstar.oscillation_pieces(alpha);
    if q.is_inf() {
        let mut best: f64 = 0.0;
        for piece in pieces.iter().filter(|p| p.c > 0.0 && p.lo < top) {
            let c = piece.c;
            let g = |t: f64| (c / t).powf(1.0 / alpha) * phi(t) * t.powf(-sq);
            best = best.max(interval_sup(g, piece.lo, piece.hi.min(top)));
        }
        return Ok(Quad { value: best, error: 0.0 });
    }
    let q = q.0;
    let mut total = Quad::ZERO;
    for piece in pieces.iter().filter(|p| p.c > 0.0 && p.lo < top) {
        let (lo, hi, c) = (piece.lo, piece.hi.min(top), piece.c);
        let part = if exact {
            let w = shape.powf(q).mul(&PowerLog::new(c.powf(q / alpha), -q / alpha - q * sq, 0.0, 0.0));
            w.integral_dt_over_t(lo, hi)
        } else {
            integrate_dt_over_t(|t: f64| ((c / t).powf(1.0 / alpha) * phi(t) * t.powf(-sq)).powf(q), lo, hi, quad_tol())
        };
        total += part;
    }
    if total.value == 0.0 {
        return Ok(Quad::ZERO);
    }
    let value = total.value.powf(1.0 / q);
    Ok(Quad { value, error: value * total.error / (q * total.value) })
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Parameters echoed in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub spec: String,
    pub alpha: f64,
    pub s: f64,
    pub q: Exponent,
    pub q_dim: f64,
    pub b: f64,
}

impl ReportParams {
    pub fn new(space: &Space, spec: &RISpaceSpec, alpha: f64, s: f64, q: Exponent) -> ReportParams {
        ReportParams {
            spec: spec.label(),
            alpha,
            s,
            q,
            q_dim: space.upper_dimension(),
            b: space.noncollapsing_constant(),
        }
    }
}

/// Both sides of an inequality over a corpus, with the largest ratio as the
/// empirical constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub theorem_id: String,
    pub rows: Vec<ReportRow>,
    pub empirical_constant: f64,
    pub params: ReportParams,
}

impl EmbeddingReport {
    /// Builds the report; `rhs = 0` with `lhs > 0` is an inconsistency.
    pub fn from_sides(
        theorem_id: &str,
        params: ReportParams,
        sides: impl IntoIterator<Item = (String, f64, f64)>,
    ) -> Result<EmbeddingReport> {
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for (label, lhs, rhs) in sides {
            let ratio = if rhs > 0.0 {
                lhs / rhs
            } else if lhs > 0.0 {
                return Err(Error::Inconsistent(format!("{label}: right side vanishes while left side is {lhs}")));
            } else {
                0.0
            };
            worst = worst.max(ratio);
            rows.push(ReportRow { label, lhs, rhs, ratio });
        }
        Ok(EmbeddingReport { theorem_id: theorem_id.to_string(), rows, empirical_constant: worst, params })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One CSV row per function: `label,lhs,rhs,ratio`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Oscillation inequality over a corpus: `lhs` is the oscillation
/// functional, `rhs = ‖f‖_{Ḃ^s_{X^{(α)},q}} + ‖f‖_{L^α+L^∞}`.
pub fn embedding_report(
    space: &Space,
    corpus: &[NamedFunction],
    spec: &RISpaceSpec,
    alpha: f64,
    s: f64,
    q: Exponent,
) -> Result<EmbeddingReport> {
    nonempty(corpus)?;
    let sides = corpus_sides(corpus, |f| {
        let lhs = oscillation_functional(space, f, spec, alpha, s, q)?;
        let rhs = besov_seminorm(space, f, s, q, spec, alpha)? + sum_plus_linf(space, f, alpha)?;
        Ok((lhs, rhs))
    })?;
    EmbeddingReport::from_sides("k1", ReportParams::new(space, spec, alpha, s, q), sides)
}

/// Evaluates both sides for every function, in parallel, keeping order.
pub(crate) fn corpus_sides<F>(corpus: &[NamedFunction], sides: F) -> Result<Vec<(String, f64, f64)>>
where
    F: Fn(&[f64]) -> Result<(f64, f64)> + Sync,
{
    par_map(corpus, |nf| sides(&nf.values).map(|(l, r)| (nf.label.clone(), l, r))).into_iter().collect()
}

fn nonempty(corpus: &[NamedFunction]) -> Result<()> {
    if corpus.is_empty() {
        Err(Error::Domain("corpus is empty".into()))
    } else {
        Ok(())
    }
}

fn sum_plus_linf(space: &Space, f: &[f64], alpha: f64) -> Result<f64> {
    StepDecreasing::from_function(space, f)?.sum_plus_linf_norm(alpha)
}

/// Empirical constant of the pointwise bound
/// `O(|f|^α, t) ≤ c t^{α/Q} (g^α)**(t)`: the largest ratio over `points`
/// log-spaced `t` from half the first breakpoint of `f*` to `μ(Ω)/2`.
/// Returns `0` when `f` is constant.
pub fn teomo1_check(space: &Space, f: &[f64], alpha: f64, gradient: &GradientField, points: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if gradient.g.len() != space.n() {
        return Err(Error::Domain("gradient length does not match the space".into()));
    }
    if points < 2 {
        return Err(Error::Domain("need at least two grid points".into()));
    }
    let fstar = StepDecreasing::from_function(space, f)?;
    let gstar = StepDecreasing::from_function(space, &gradient.g)?.powf(alpha);
    let q_dim = space_dim(space)?;
    let lo = fstar.breakpoints()[0] / 2.0;
    let hi = space.total_mass() / 2.0;
    if fstar.values().len() < 2 || !(hi > lo) {
        return Ok(0.0);
    }
    let mut best: f64 = 0.0;
    for k in 0..points {
        let t = (lo.ln() + (hi / lo).ln() * k as f64 / (points - 1) as f64).exp();
        let o = fstar.oscillation(alpha, t)?;
        if o == 0.0 {
            continue;
        }
        let den = t.powf(alpha / q_dim) * gstar.maximal_average(t)?;
        if den == 0.0 {
            return Err(Error::Inconsistent(format!("oscillation {o} at t = {t} with a vanishing gradient")));
        }
        best = best.max(o / den);
    }
    Ok(best)
}

/// `u_{x0}`: `1` on `B(x0,1)`, `2 − d(x0,y)` on `B(x0,2) ∖ B(x0,1)`, `0`
/// outside.
pub fn tent_function(space: &Space, x0: usize) -> Result<Vec<f64>> {
    check_point(space, x0)?;
    Ok((0..space.n()).map(|y| (2.0 - space.d(x0, y)).clamp(0.0, 1.0)).collect())
}

/// `χ_{B(x0,2)}`, certified as a 1-gradient of `u_{x0}`.
pub fn tent_gradient(space: &Space, x0: usize) -> Result<GradientField> {
    check_point(space, x0)?;
    let g = (0..space.n()).map(|y| if space.d(x0, y) < 2.0 { 1.0 } else { 0.0 }).collect();
    GradientField { g }.certify(space, &tent_function(space, x0)?)
}

fn check_point(space: &Space, x0: usize) -> Result<()> {
    if x0 < space.n() {
        Ok(())
    } else {
        Err(Error::Domain(format!("point {x0} out of range for {} points", space.n())))
    }
}

/// How the m-function aggregates `1/v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MKind {
    /// `∫_t^1 (1/v)^κ dz/z`.
    Integral { kappa: f64 },
    /// `sup_{[t,1)} 1/v`.
    Sup,
}

/// The m-function built from `1/v(t) = t^{s/Q} / φ_{X^{(α)}}(t)`, with
/// `κ = αq/(q−α)` for `α < q < ∞`, `κ = α` for `q = ∞` and a supremum for
/// `q ≤ α`. `φ` enters through its power-log model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MFunction {
    pub inv_v: PowerLog,
    pub alpha: f64,
    pub q: Exponent,
    pub kind: MKind,
}

impl MFunction {
    pub fn new(spec: &RISpaceSpec, alpha: f64, s: f64, q: Exponent, q_dim: f64) -> Result<MFunction> {
        check_alpha(alpha)?;
        check_s(s)?;
        check_dim(q_dim)?;
        spec.validate()?;
        let shape = spec.convexify(alpha)?.fundamental_shape()?;
        if !(shape.coef > 0.0 && shape.coef.is_finite()) {
            return Err(Error::Symbolic(format!("fundamental function model has coefficient {}", shape.coef)));
        }
        Self::from_inverse_weight(PowerLog::power(s / q_dim).div(&shape), alpha, q)
    }

    pub fn from_inverse_weight(inv_v: PowerLog, alpha: f64, q: Exponent) -> Result<MFunction> {
        check_alpha(alpha)?;
        check_q(q)?;
        let kind = if q.is_inf() {
            MKind::Integral { kappa: alpha }
        } else if q.0 > alpha {
            MKind::Integral { kappa: alpha * q.0 / (q.0 - alpha) }
        } else {
            MKind::Sup
        };
        Ok(MFunction { inv_v, alpha, q, kind })
    }

    /// `1/v(t)`.
    pub fn inverse_weight(&self, t: f64) -> f64 {
        self.inv_v.eval(t)
    }

    /// Decided from the exponents of the power-log integrand.
    pub fn finite_at_zero(&self) -> bool {
        match self.kind {
            MKind::Integral { kappa } => self.inv_v.powf(kappa).integrable_at_zero(),
            MKind::Sup => self.inv_v.bounded_at_zero(),
        }
    }

    /// `m(t)` for `0 ≤ t < 1`; `m(0)` may be infinite.
    pub fn value(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t < 1.0) {
            return Err(Error::Domain(format!("m(t) needs 0 <= t < 1, got {t}")));
        }
        match self.kind {
            MKind::Integral { kappa } => {
                if t == 0.0 && !self.finite_at_zero() {
                    return Ok(f64::INFINITY);
                }
                Ok(self.inv_v.powf(kappa).integral_dt_over_t(t, 1.0).value)
            }
            MKind::Sup => {
                let g = |z: f64| self.inv_v.eval(z);
                if t > 0.0 {
                    return Ok(interval_sup(g, t, 1.0));
                }
                if !self.finite_at_zero() {
                    return Ok(f64::INFINITY);
                }
                Ok(interval_sup(g, 1e-300, 1.0).max(self.inv_v.limit_at_zero()))
            }
        }
    }

    /// Weight `w` with `w^q(t)/t = d/dt (1 + m(t))^{1−q/α}`:
    /// `w(t) = (q/α − 1)^{1/q} (1 + m(t))^{−1/α} (1/v(t))^{α/(q−α)}`.
    /// Defined for `α < q < ∞` when `m(0) = ∞`.
    pub fn pesos(&self, t: f64) -> Result<f64> {
        let (q, alpha) = (self.q.0, self.alpha);
        if self.q.is_inf() || q <= alpha {
            return Err(Error::Domain(format!(
                "the weight needs alpha < q < inf (alpha = {alpha}, q = {}); use the supremum form for q = inf or a weight u for q <= alpha",
                self.q
            )));
        }
        if self.finite_at_zero() {
            return Err(Error::Domain("m(0) is finite: the L-infinity embedding applies instead".into()));
        }
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(format!("weight needs 0 < t < 1, got {t}")));
        }
        let m = self.value(t)?;
        Ok((q / alpha - 1.0).powf(1.0 / q) * (1.0 + m).powf(-1.0 / alpha) * self.inverse_weight(t).powf(alpha / (q - alpha)))
    }
}

/// `m_{X,s,α,q}(t)`.
pub fn m_function(spec: &RISpaceSpec, alpha: f64, s: f64, q: Exponent, q_dim: f64, t: f64) -> Result<f64> {
    MFunction::new(spec, alpha, s, q, q_dim)?.value(t)
}

/// The weight `w(t)` of the case `α < q < ∞`.
pub fn pesos_weight(spec: &RISpaceSpec, alpha: f64, s: f64, q: Exponent, q_dim: f64, t: f64) -> Result<f64> {
    MFunction::new(spec, alpha, s, q, q_dim)?.pesos(t)
}

/// Left sides offered by the embedding theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeCase {
    Linf,
    LorentzTarget,
    LogTarget,
    LoglogTarget,
}

/// Target `(∫_0^1 (f*(t) u(t))^q dt/t)^{1/q}`, or `sup f* u` for `q = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetWeight {
    pub u: PowerLog,
    pub q: Exponent,
}

impl TargetWeight {
    pub fn describe(&self) -> String {
        let u = describe_weight(&self.u);
        if self.q.is_inf() {
            format!("sup_{{0<t<1}} f*(t) {u}")
        } else {
            format!("(int_0^1 (f*(t) {u})^{q} dt/t)^(1/{q})", q = self.q)
        }
    }

    /// The target norm of `f*` over `(0, top)`.
    pub fn norm(&self, fstar: &StepDecreasing, top: f64) -> f64 {
        let steps = fstar.steps().filter(|&(lo, _, v)| v > 0.0 && lo < top);
        if self.q.is_inf() {
            let mut best: f64 = 0.0;
            for (lo, hi, v) in steps {
                let hi = hi.min(top);
                let s = if lo == 0.0 {
                    if !self.u.bounded_at_zero() {
                        return f64::INFINITY;
                    }
                    interval_sup(|t| self.u.eval(t), 1e-300, hi).max(self.u.limit_at_zero())
                } else {
                    interval_sup(|t| self.u.eval(t), lo, hi)
                };
                best = best.max(v * s);
            }
            return best;
        }
        let q = self.q.0;
        let uq = self.u.powf(q);
        let total: f64 = steps.map(|(lo, hi, v)| v.powf(q) * uq.integral_dt_over_t(lo, hi.min(top)).value).sum();
        total.powf(1.0 / q)
    }
}

fn describe_weight(u: &PowerLog) -> String {
    let mut parts = Vec::new();
    if u.a != 0.0 {
        parts.push(format!("t^{}", fmt_num(u.a)));
    }
    if u.b != 0.0 {
        parts.push(format!("(1+ln 1/t)^{}", fmt_num(u.b)));
    }
    if u.c != 0.0 {
        parts.push(format!("(1+ln(1+ln 1/t))^{}", fmt_num(u.c)));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn fmt_num(x: f64) -> String {
    let mut s = String::new();
    let _ = write!(s, "{}", (x * 1e9).round() / 1e9);
    if x < 0.0 {
        format!("({s})")
    } else {
        s
    }
}

/// Classification of `L^{p,r}(log L)^β` embeddings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub case_id: RegimeCase,
    /// Which line of the case table applies.
    pub row: String,
    pub alpha_used: f64,
    pub target: Option<TargetWeight>,
    pub target_description: String,
}

/// The α for `L^{p,r}(log L)^β`: some `α < p` when `p ≤ 1, p < r` or
/// `p = r ≤ 1, β < 0`, and `min(1, r)` otherwise. Inside the first branch
/// α is taken as large as the parameters allow the m-function to stay
/// bounded, and `0.9p` when no choice does.
pub fn lz_alpha(p: f64, r: Exponent, beta: f64, q: Exponent) -> f64 {
    if !small_alpha_branch(p, r, beta) {
        return r.0.min(1.0);
    }
    if !q.is_inf() && q.0 < p && beta >= 0.0 {
        return 0.5 * (q.0 + p);
    }
    let level = beta + if q.is_inf() { 0.0 } else { 1.0 / q.0 };
    if level > 0.0 && 1.0 / level < p * (1.0 - REL_TOL) {
        return 0.5 * (1.0 / level + p);
    }
    0.9 * p
}

fn small_alpha_branch(p: f64, r: Exponent, beta: f64) -> bool {
    (p <= 1.0 && p < r.0 && !close(p, r.0)) || (close(p, r.0) && p <= 1.0 && beta < 0.0)
}

/// The m-function of `L^{p,r}(log L)^β` at the α of [`lz_alpha`], built on
/// the Banach space `X^{(1/α)}`.
pub fn lz_m_function(p: f64, r: Exponent, beta: f64, s: f64, q: Exponent, q_dim: f64) -> Result<MFunction> {
    let alpha = lz_alpha(p, r, beta, q);
    let banach = RISpaceSpec::lorentz_zygmund(p, r.0, beta).convexify(1.0 / alpha)?;
    MFunction::new(&banach, alpha, s, q, q_dim)
}

/// The stated conditions for `‖f‖_∞ ⪯ ‖f‖_{Ḃ} + ‖f‖_{L^{min(1,p,r)}+L^∞}`:
/// `s > Q/p`, or `s = Q/p` with `β > 1/a − 1/q` for `a < q ≤ ∞` and
/// `β ≥ 0` for `q ≤ a`, where `a = min(1, p, r)`.
pub fn lz_linf_condition(p: f64, r: Exponent, beta: f64, s: f64, q: Exponent, q_dim: f64) -> bool {
    let crit = q_dim / p;
    if s > crit && !close(s, crit) {
        return true;
    }
    if s < crit && !close(s, crit) {
        return false;
    }
    let a = p.min(r.0).min(1.0);
    if q.is_inf() || (q.0 > a && !close(q.0, a)) {
        let bound = 1.0 / a - if q.is_inf() { 0.0 } else { 1.0 / q.0 };
        beta > bound && !close(beta, bound)
    } else {
        beta >= 0.0
    }
}

/// Total classification of `(p, r, β, s, q, Q)`.
///
/// `Linf` is returned exactly when the m-function at the chosen α is
/// bounded at zero. Otherwise `s < Q/p` gives the weight
/// `t^{1/p − s/Q}(1 + ln 1/t)^β`, and `s = Q/p` follows the critical table.
pub fn regime_classify(p: f64, r: Exponent, beta: f64, s: f64, q: Exponent, q_dim: f64) -> Result<Regime> {
    if !(p > 0.0 && p.is_finite()) || !(r.0 > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("need 0 < p < inf, r > 0 and finite beta (p = {p}, r = {r}, beta = {beta})")));
    }
    check_s(s)?;
    check_q(q)?;
    check_dim(q_dim)?;
    let alpha = lz_alpha(p, r, beta, q);
    let m = lz_m_function(p, r, beta, s, q, q_dim)?;
    let make = |case_id, row: &str, u: Option<PowerLog>| {
        let target = u.map(|u| TargetWeight { u, q });
        let target_description = match &target {
            Some(t) => t.describe(),
            None => "||f||_inf".to_string(),
        };
        Regime { case_id, row: row.to_string(), alpha_used: alpha, target, target_description }
    };
    if m.finite_at_zero() {
        let crit = q_dim / p;
        let row = if close(s, crit) { "critical-bounded" } else { "supercritical" };
        return Ok(make(RegimeCase::Linf, row, None));
    }
    let crit = q_dim / p;
    if s < crit && !close(s, crit) {
        return Ok(make(RegimeCase::LorentzTarget, "subcritical", Some(PowerLog::new(1.0, 1.0 / p - s / q_dim, beta, 0.0))));
    }
    let inv_q = if q.is_inf() { 0.0 } else { 1.0 / q.0 };
    let log = |b: f64| Some(PowerLog::new(1.0, 0.0, b, 0.0));
    let m1r = r.0.min(1.0);
    let group_a = (m1r < p && !close(m1r, p)) || (close(m1r, p) && beta >= 0.0);
    if group_a {
        let a = m1r;
        let q_above = q.is_inf() || (q.0 > a && !close(q.0, a));
        let bound = 1.0 / a - inv_q;
        if q_above && close(beta, bound) {
            return Ok(make(RegimeCase::LoglogTarget, "critical-loglog", Some(PowerLog::new(1.0, 0.0, -inv_q, -1.0 / a))));
        }
        if q_above && beta < bound {
            return Ok(make(RegimeCase::LogTarget, "critical-log", log(beta - 1.0 / a)));
        }
        if !q_above && beta < 0.0 {
            return Ok(make(RegimeCase::LogTarget, "critical-log-negative-beta", log(beta - inv_q)));
        }
    } else {
        let q_at_least_p = q.is_inf() || q.0 >= p || close(q.0, p);
        if q_at_least_p && (beta <= 1.0 / p - inv_q || close(beta, 1.0 / p - inv_q)) {
            return Ok(make(RegimeCase::LogTarget, "critical-small-alpha", log(beta - 1.0 / alpha)));
        }
        if !q_at_least_p && beta < 0.0 {
            return Ok(make(RegimeCase::LogTarget, "critical-small-alpha-negative-beta", log(beta - inv_q)));
        }
    }
    // unbounded m-function outside every table line: the bound with the
    // α actually used
    Ok(make(RegimeCase::LogTarget, "critical-edge", log(beta - 1.0 / alpha)))
}

/// Inputs of [`target_norm_check`]. `u` is required when `q ≤ α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetParams {
    pub spec: RISpaceSpec,
    pub alpha: f64,
    pub s: f64,
    pub q: Exponent,
    #[serde(default)]
    pub u: Option<PowerLog>,
}

/// Checks `∫_0^t u^q dz/z ⪯ v^q(t)` with `v = φ_{X^{(α)}}/t^{s/Q}` on a
/// logarithmic grid of `(10^{-30}, 1]`: the ratio must be finite and must
/// not grow towards zero. Returns the largest ratio seen.
pub fn check_case3_weight(u: &PowerLog, m: &MFunction) -> Result<f64> {
    let q = m.q.0;
    let uq = u.powf(q);
    if !uq.integrable_at_zero() {
        return Err(Error::Precondition(format!(
            "weight u = {} is not q-integrable at 0 (violated for every t > 0)",
            describe_weight(u)
        )));
    }
    let grid: Vec<f64> = (0..=150).map(|k| 10f64.powf(-30.0 + 0.2 * k as f64)).collect();
    let mut near: f64 = 0.0;
    let mut far: f64 = 0.0;
    let mut worst_t = 1.0;
    for &t in &grid {
        let lhs = uq.integral_dt_over_t(0.0, t).value;
        let vq = m.inverse_weight(t).powf(-q);
        let ratio = lhs / vq;
        if !ratio.is_finite() {
            return Err(Error::Precondition(format!("weight condition fails at t = {t:e}: ratio {ratio}")));
        }
        if t < 1e-10 {
            if ratio > near {
                near = ratio;
                worst_t = t;
            }
        } else {
            far = far.max(ratio);
        }
    }
    if near > 2.0 * far {
        return Err(Error::Precondition(format!(
            "weight condition grows towards 0: ratio {near:e} at t = {worst_t:e} against {far:e} on [1e-10, 1]"
        )));
    }
    Ok(near.max(far))
}

/// Weighted bounds for `F = ((|f|^α)**)^{1/α}` when `m(0) = ∞`:
/// `(∫_0^T (F w)^q dt/t)^{1/q}` for `α < q < ∞`,
/// `sup F (1 + m)^{−1/α}` for `q = ∞`, and `(∫_0^T (F u)^q dt/t)^{1/q}`
/// for `q ≤ α`, each against `‖f‖_{Ḃ} + ‖f‖_{L^α+L^∞}`.
pub fn target_norm_check(space: &Space, corpus: &[NamedFunction], params: &TargetParams) -> Result<EmbeddingReport> {
    nonempty(corpus)?;
    let q_dim = space_dim(space)?;
    let TargetParams { spec, alpha, s, q, u } = params;
    let (alpha, s, q) = (*alpha, *s, *q);
    let m = MFunction::new(spec, alpha, s, q, q_dim)?;
    let top = space.total_mass().min(1.0);
    let case3_u = match m.kind {
        MKind::Sup => {
            let u = u.ok_or_else(|| Error::Precondition("q <= alpha needs a weight u".into()))?;
            check_case3_weight(&u, &m)?;
            Some(u)
        }
        MKind::Integral { .. } if !q.is_inf() && m.finite_at_zero() => {
            return Err(Error::Precondition("m(0) is finite: use the L-infinity check".into()));
        }
        MKind::Integral { .. } => None,
    };
    let sides = corpus_sides(corpus, |f| {
        let fstar = StepDecreasing::from_function(space, f)?;
        let lhs = match case3_u {
            Some(u) => weighted_maximal_norm(&fstar, alpha, q.0, top, |t| u.eval(t), |hi| {
                u.powf(q.0).integral_dt_over_t(0.0, hi).value
            })?,
            None if q.is_inf() => sup_maximal(&fstar, alpha, top, &m)?,
            None => {
                let q = q.0;
                weighted_maximal_norm(&fstar, alpha, q, top, |t| m.pesos(t).unwrap_or(f64::NAN), |hi| {
                    (1.0 + m.value(hi).unwrap_or(f64::NAN)).powf(1.0 - q / alpha)
                })?
            }
        };
        let rhs = besov_seminorm(space, f, s, q, spec, alpha)? + fstar.sum_plus_linf_norm(alpha)?;
        Ok((lhs, rhs))
    })?;
    EmbeddingReport::from_sides("pesos", ReportParams::new(space, spec, alpha, s, q), sides)
}

/// `(∫_0^top (F(t) w(t))^q dt/t)^{1/q}` with `F = ((|f|^α)**)^{1/α}`. On the
/// first step `F` is constant and `first(hi) = ∫_0^hi w^q dt/t` is supplied
/// in closed form.
fn weighted_maximal_norm<W: Fn(f64) -> f64, I: Fn(f64) -> f64>(
    fstar: &StepDecreasing,
    alpha: f64,
    q: f64,
    top: f64,
    w: W,
    first: I,
) -> Result<f64> {
    let g = fstar.powf(alpha);
    let mut total = 0.0;
    let mut area = 0.0;
    for (lo, hi, v) in g.steps() {
        if lo >= top {
            break;
        }
        let h = hi.min(top);
        if lo == 0.0 {
            total += v.powf(q / alpha) * first(h);
        } else {
            let a = area;
            let f = |t: f64| (((a + v * (t - lo)) / t).powf(1.0 / alpha) * w(t)).powf(q);
            total += integrate_dt_over_t(f, lo, h, quad_tol()).value;
        }
        area += v * (hi - lo);
    }
    if top > g.mass() {
        let f = |t: f64| ((area / t).powf(1.0 / alpha) * w(t)).powf(q);
        total += integrate_dt_over_t(f, g.mass(), top, quad_tol()).value;
    }
    if !total.is_finite() {
        return Err(Error::Evaluation(format!("weighted norm did not converge ({total})")));
    }
    Ok(total.powf(1.0 / q))
}

/// `sup_{0<t<top} F(t) (1 + m(t))^{−1/α}`.
fn sup_maximal(fstar: &StepDecreasing, alpha: f64, top: f64, m: &MFunction) -> Result<f64> {
    let g = fstar.powf(alpha);
    let damp = |t: f64| (1.0 + m.value(t).unwrap_or(f64::NAN)).powf(-1.0 / alpha);
    let mut best: f64 = 0.0;
    let mut area = 0.0;
    for (lo, hi, v) in g.steps() {
        if lo >= top {
            break;
        }
        let h = hi.min(top);
        let cand = if lo == 0.0 {
            // F is constant and the damping increases
            v.powf(1.0 / alpha) * damp(h.min(1.0 - 1e-15))
        } else {
            let a = area;
            interval_sup(|t| ((a + v * (t - lo)) / t).powf(1.0 / alpha) * damp(t), lo, h.min(1.0 - 1e-15))
        };
        best = best.max(cand);
        area += v * (hi - lo);
    }
    if !best.is_finite() {
        return Err(Error::Evaluation("supremum did not converge".into()));
    }
    Ok(best)
}

/// `‖f‖_∞` against the oscillation functional plus `‖f‖_{L^α+L^∞}`; refuses
/// when `m(0) = ∞`.
pub fn linf_embedding_check(
    space: &Space,
    corpus: &[NamedFunction],
    spec: &RISpaceSpec,
    alpha: f64,
    s: f64,
    q: Exponent,
) -> Result<EmbeddingReport> {
    nonempty(corpus)?;
    let q_dim = space_dim(space)?;
    let m = MFunction::new(spec, alpha, s, q, q_dim)?;
    if !m.finite_at_zero() {
        return Err(Error::Precondition(format!(
            "m(0) = inf for {} with alpha = {alpha}, s = {s}, q = {q}, Q = {q_dim:.6}: the L-infinity embedding is not available",
            spec.label()
        )));
    }
    let sides = corpus_sides(corpus, |f| {
        let fstar = StepDecreasing::from_function(space, f)?;
        let rhs = oscillation_functional(space, f, spec, alpha, s, q)? + fstar.sum_plus_linf_norm(alpha)?;
        Ok((fstar.sup(), rhs))
    })?;
    EmbeddingReport::from_sides("infinito", ReportParams::new(space, spec, alpha, s, q), sides)
}

/// The regime target of `L^{p,r}(log L)^β` over a corpus: `lhs` is the
/// target norm of `f*` (or `‖f‖_∞`), `rhs = ‖f‖_{Ḃ^s_{X,q}} + ‖f‖_{L^α+L^∞}`
/// with α from [`lz_alpha`].
pub fn lorentz_log_report(
    space: &Space,
    corpus: &[NamedFunction],
    p: f64,
    r: Exponent,
    beta: f64,
    s: f64,
    q: Exponent,
) -> Result<(Regime, EmbeddingReport)> {
    nonempty(corpus)?;
    let q_dim = space_dim(space)?;
    let regime = regime_classify(p, r, beta, s, q, q_dim)?;
    let alpha = regime.alpha_used;
    let banach = RISpaceSpec::lorentz_zygmund(p, r.0, beta).convexify(1.0 / alpha)?;
    let top = space.total_mass().min(1.0);
    let sides = corpus_sides(corpus, |f| {
        let fstar = StepDecreasing::from_function(space, f)?;
        let lhs = match &regime.target {
            Some(t) => t.norm(&fstar, top),
            None => fstar.sup(),
        };
        let rhs = besov_seminorm(space, f, s, q, &banach, alpha)? + fstar.sum_plus_linf_norm(alpha)?;
        Ok((lhs, rhs))
    })?;
    let params = ReportParams::new(space, &RISpaceSpec::lorentz_zygmund(p, r.0, beta), alpha, s, q);
    let report = EmbeddingReport::from_sides("lorentzlog", params, sides)?;
    Ok((regime, report))
}
