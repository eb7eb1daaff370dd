//! Rearrangement-invariant quasi-norms evaluated on step rearrangements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powerlog::{log_l, PowerLog};
use crate::quad::interval_sup;
use crate::rearrange::StepDecreasing;
use crate::space::Space;

/// An exponent in `(0, ∞]`. Serialized as a number, or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "ExponentRepr", into = "ExponentRepr")]
pub struct Exponent(pub f64);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExponentRepr {
    Num(f64),
    Text(String),
}

impl TryFrom<ExponentRepr> for Exponent {
    type Error = String;
    fn try_from(r: ExponentRepr) -> std::result::Result<Self, String> {
        match r {
            ExponentRepr::Num(v) => Ok(Exponent(v)),
            ExponentRepr::Text(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "∞" => Ok(Exponent(f64::INFINITY)),
                other => other.parse().map(Exponent).map_err(|_| format!("bad exponent {s:?}")),
            },
        }
    }
}

impl From<Exponent> for ExponentRepr {
    fn from(e: Exponent) -> Self {
        if e.0.is_infinite() {
            ExponentRepr::Text("inf".into())
        } else {
            ExponentRepr::Num(e.0)
        }
    }
}

impl Exponent {
    pub const INF: Exponent = Exponent(f64::INFINITY);
    pub fn is_inf(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inf() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Young functions for Orlicz spaces: `x^p` or `x^p (1 + ln(1 + x))^b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Young {
    Power { p: f64 },
    PowerLog { p: f64, b: f64 },
}

impl Young {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Young::Power { p } => x.powf(p),
            Young::PowerLog { p, b } => x.powf(p) * (1.0 + x.ln_1p()).powf(b),
        }
    }

    /// `Φ^{-1}(y)` by bisection.
    pub fn inverse(&self, y: f64) -> f64 {
        if let Young::Power { p } = *self {
            return y.powf(1.0 / p);
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.eval(hi) < y {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// `max Φ(2x)/Φ(x)` over a log grid on `[1e-6, 1e6]`.
    pub fn delta2_constant(&self) -> f64 {
        (0..=240)
            .map(|k| 10f64.powf(-6.0 + k as f64 * 0.05))
            .map(|x| self.eval(2.0 * x) / self.eval(x))
            .fold(0.0, f64::max)
    }
}

/// The quasi-norm families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `(∫ (f*)^p)^{1/p}`.
    Lp { p: f64 },
    /// `(∫ (t^{1/p} f*)^q dt/t)^{1/q}`, or `sup t^{1/p} f*` when `q = ∞`.
    Lorentz { p: f64, q: Exponent },
    /// `L^{p,r}(log L)^β`: weight `t^{1/p}(1 + ln⁺ 1/t)^β` in place of `t^{1/p}`.
    LorentzZygmund { p: f64, r: Exponent, beta: f64 },
    /// `Λ^q(w)`: `(∫ (f*)^q w dt)^{1/q}`.
    LambdaW { q: f64, w: PowerLog },
    /// `M_φ`: `sup φ(t) f**(t)`.
    Marcinkiewicz { phi: PowerLog },
    /// `M̃_φ`: `sup φ(t) f*(t)`.
    MarcinkiewiczTilde { phi: PowerLog },
    /// Luxemburg norm `inf{λ : ∫ Φ(|f|/λ) ≤ 1}`.
    Orlicz { phi: Young },
}

fn one() -> f64 {
    1.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

/// A family together with a convexification power: the spec denotes
/// `X^{(convexify)}`, normed by `‖|f|^r‖_X^{1/r}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RISpaceSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub convexify: f64,
}

impl From<Family> for RISpaceSpec {
    fn from(family: Family) -> Self {
        RISpaceSpec { family, convexify: 1.0 }
    }
}

impl RISpaceSpec {
    pub fn lp(p: f64) -> Self {
        Family::Lp { p }.into()
    }

    pub fn lorentz(p: f64, q: f64) -> Self {
        Family::Lorentz { p, q: Exponent(q) }.into()
    }

    pub fn lorentz_zygmund(p: f64, r: f64, beta: f64) -> Self {
        Family::LorentzZygmund { p, r: Exponent(r), beta }.into()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: RISpaceSpec = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    /// Short human-readable label, e.g. `L^{2,inf}`.
    pub fn label(&self) -> String {
        let base = match &self.family {
            Family::Lp { p } => format!("L^{p}"),
            Family::Lorentz { p, q } => format!("L^{{{p},{q}}}"),
            Family::LorentzZygmund { p, r, beta } => format!("L^{{{p},{r}}}(log L)^{beta}"),
            Family::LambdaW { q, w } => format!("Lambda^{q}(t^{} L^{} LL^{})", w.a, w.b, w.c),
            Family::Marcinkiewicz { phi } => format!("M(t^{} L^{} LL^{})", phi.a, phi.b, phi.c),
            Family::MarcinkiewiczTilde { phi } => format!("M~(t^{} L^{} LL^{})", phi.a, phi.b, phi.c),
            Family::Orlicz { phi } => match phi {
                Young::Power { p } => format!("L^Phi(x^{p})"),
                Young::PowerLog { p, b } => format!("L^Phi(x^{p} log^{b})"),
            },
        };
        if self.convexify == 1.0 {
            base
        } else {
            format!("({base})^({})", self.convexify)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        let pos = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")))
            }
        };
        pos("convexify", self.convexify)?;
        if !self.convexify.is_finite() {
            return bad("convexify must be finite".into());
        }
        match &self.family {
            Family::Lp { p } => {
                pos("p", *p)?;
                if p.is_infinite() {
                    return bad("L^inf is not supported; use the sup of f* directly".into());
                }
            }
            Family::Lorentz { p, q } => {
                pos("p", *p)?;
                pos("q", q.0)?;
                if p.is_infinite() {
                    return bad("Lorentz p must be finite".into());
                }
            }
            Family::LorentzZygmund { p, r, beta } => {
                pos("p", *p)?;
                pos("r", r.0)?;
                if p.is_infinite() || !beta.is_finite() {
                    return bad("Lorentz-Zygmund needs finite p and beta".into());
                }
            }
            Family::LambdaW { q, w } => {
                pos("q", *q)?;
                pos("w.coef", w.coef)?;
                if !(w.a > -1.0) {
                    return bad(format!("weight t^{} is not integrable at 0", w.a));
                }
                if !q.is_finite() {
                    return bad("Lambda^q(w) needs finite q".into());
                }
            }
            Family::Marcinkiewicz { phi } | Family::MarcinkiewiczTilde { phi } => {
                pos("phi.coef", phi.coef)?;
                if phi.limit_at_zero() != 0.0 {
                    return bad("phi must vanish at 0+".into());
                }
                let grid: Vec<f64> = (0..=300).map(|k| 10f64.powf(-12.0 + 0.05 * k as f64)).collect();
                if grid.windows(2).any(|w| phi.eval(w[1]) < phi.eval(w[0]) * (1.0 - 1e-12)) {
                    return bad("phi must be nondecreasing".into());
                }
            }
            Family::Orlicz { phi } => {
                let (p, b) = match *phi {
                    Young::Power { p } => (p, 0.0),
                    Young::PowerLog { p, b } => (p, b),
                };
                pos("Young exponent p", p)?;
                if b < 0.0 {
                    return bad("Young log exponent must be >= 0".into());
                }
                let c = phi.delta2_constant();
                if !(c.is_finite() && c < 1e6) {
                    return bad(format!("Young function fails the doubling condition (constant {c})"));
                }
            }
        }
        Ok(())
    }

    /// `X^{(r)}` composed with the existing convexification. Lebesgue,
    /// Lorentz and Lorentz–Zygmund specs are renormalized:
    /// `(L^{p,q})^{(r)} = L^{rp,rq}` and
    /// `(L^{p,q}(log L)^β)^{(r)} = L^{rp,rq}(log L)^{β/r}`.
    pub fn convexify(&self, r: f64) -> Result<RISpaceSpec> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidSpec(format!("convexification power must be positive, got {r}")));
        }
        let total = self.convexify * r;
        let family = match &self.family {
            Family::Lp { p } => Family::Lp { p: p * total },
            Family::Lorentz { p, q } => Family::Lorentz { p: p * total, q: Exponent(q.0 * total) },
            Family::LorentzZygmund { p, r, beta } => {
                Family::LorentzZygmund { p: p * total, r: Exponent(r.0 * total), beta: beta / total }
            }
            other => return Ok(RISpaceSpec { family: other.clone(), convexify: total }),
        };
        Ok(RISpaceSpec { family, convexify: 1.0 })
    }

    /// `‖f‖_X` from the rearrangement of `f`.
    pub fn quasi_norm(&self, fstar: &StepDecreasing) -> Result<f64> {
        if fstar.sup() == 0.0 {
            return Ok(0.0);
        }
        let r = self.convexify;
        let g = if r == 1.0 { fstar.clone() } else { fstar.powf(r) };
        let v = base_norm(&self.family, &g)?;
        Ok(if r == 1.0 { v } else { v.powf(1.0 / r) })
    }

    /// Convenience: `‖f‖_X` for a function on a space.
    pub fn norm_of(&self, space: &Space, f: &[f64]) -> Result<f64> {
        self.quasi_norm(&StepDecreasing::from_function(space, f)?)
    }

    /// `φ_X(t) = ‖χ_E‖_X` with `μ(E) = t`.
    pub fn fundamental_function(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("fundamental function needs t > 0, got {t}")));
        }
        let base = match &self.family {
            Family::Lp { p } => t.powf(1.0 / p),
            Family::Lorentz { p, q } => {
                if q.is_inf() {
                    t.powf(1.0 / p)
                } else {
                    (p / q.0).powf(1.0 / q.0) * t.powf(1.0 / p)
                }
            }
            Family::LorentzZygmund { .. } => {
                base_norm(&self.family, &StepDecreasing::from_steps(vec![t], vec![1.0])?)?
            }
            Family::LambdaW { q, w } => lambda_w_primitive(w, t).powf(1.0 / q),
            Family::Marcinkiewicz { phi } | Family::MarcinkiewiczTilde { phi } => phi.eval(t),
            Family::Orlicz { phi } => 1.0 / phi.inverse(1.0 / t),
        };
        Ok(if self.convexify == 1.0 { base } else { base.powf(1.0 / self.convexify) })
    }

    /// `φ_{X'}(t) = t / φ_X(t)`.
    pub fn dual_fundamental_function(&self, t: f64) -> Result<f64> {
        Ok(t / self.fundamental_function(t)?)
    }

    /// Power-log model `≍ φ_X(t)` for `0 < t < 1`, used by the symbolic
    /// analysis of the embedding weights. Exact for Lebesgue, Lorentz,
    /// Marcinkiewicz and power Orlicz specs; up to constants otherwise.
    pub fn fundamental_shape(&self) -> Result<PowerLog> {
        let base = match &self.family {
            Family::Lp { p } => PowerLog::power(1.0 / p),
            Family::Lorentz { p, q } => {
                let coef = if q.is_inf() { 1.0 } else { (p / q.0).powf(1.0 / q.0) };
                PowerLog::new(coef, 1.0 / p, 0.0, 0.0)
            }
            Family::LorentzZygmund { p, beta, .. } => PowerLog::new(1.0, 1.0 / p, *beta, 0.0),
            Family::LambdaW { q, w } => {
                PowerLog::new(w.coef / (w.a + 1.0), w.a + 1.0, w.b, w.c).powf(1.0 / q)
            }
            Family::Marcinkiewicz { phi } | Family::MarcinkiewiczTilde { phi } => *phi,
            Family::Orlicz { phi } => match *phi {
                Young::Power { p } => PowerLog::power(1.0 / p),
                Young::PowerLog { p, b } => PowerLog::new(1.0, 1.0 / p, b / p, 0.0),
            },
        };
        Ok(base.powf(1.0 / self.convexify))
    }

    /// Whether [`RISpaceSpec::fundamental_shape`] equals `φ_X` on `(0, 1)`.
    pub fn fundamental_shape_is_exact(&self) -> bool {
        match &self.family {
            Family::Lp { .. } | Family::Lorentz { .. } => true,
            Family::Marcinkiewicz { .. } | Family::MarcinkiewiczTilde { .. } => true,
            Family::LambdaW { w, .. } => w.b == 0.0 && w.c == 0.0,
            Family::Orlicz { phi } => matches!(phi, Young::Power { .. }),
            Family::LorentzZygmund { .. } => false,
        }
    }

    /// Lorentz space `Λ(X)`: `∫ f* dφ_X`.
    pub fn lambda_norm(&self, fstar: &StepDecreasing) -> Result<f64> {
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (_, hi, v) in fstar.steps() {
            let ph = self.fundamental_function(hi)?;
            acc += v * (ph - prev);
            prev = ph;
        }
        Ok(acc)
    }

    /// Marcinkiewicz space `M(X)`: `sup φ_X(t) f**(t)`.
    pub fn m_norm(&self, fstar: &StepDecreasing) -> Result<f64> {
        self.fundamental_function(1.0)?;
        Ok(sup_phi_fss(|t| self.fundamental_function(t).unwrap_or(f64::NAN), None, fstar))
    }

    /// Largest observed `‖(Σ|f_j|^α)^{1/α}‖ / (Σ‖f_j‖^α)^{1/α}` over the
    /// sampled tuples: an empirical lower bound for the α-convexity
    /// constant. Single-function tuples give exactly one.
    pub fn alpha_convexity_defect(&self, alpha: f64, samples: &[Vec<Vec<f64>>], space: &Space) -> Result<f64> {
        if samples.is_empty() {
            return Err(Error::Domain("no sample tuples".into()));
        }
        if !(alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        let mut worst: f64 = 0.0;
        for tuple in samples {
            if tuple.is_empty() {
                continue;
            }
            let rhs: f64 = tuple
                .iter()
                .map(|f| self.norm_of(space, f).map(|v| v.powf(alpha)))
                .sum::<Result<f64>>()?
                .powf(1.0 / alpha);
            if rhs == 0.0 {
                continue;
            }
            if tuple.len() == 1 {
                worst = worst.max(1.0);
                continue;
            }
            let n = space.n();
            let combined: Vec<f64> = (0..n)
                .map(|x| tuple.iter().map(|f| f[x].abs().powf(alpha)).sum::<f64>().powf(1.0 / alpha))
                .collect();
            worst = worst.max(self.norm_of(space, &combined)? / rhs);
        }
        Ok(worst)
    }
}

/// `∫_0^t w(s) ds` for a power-log weight.
fn lambda_w_primitive(w: &PowerLog, t: f64) -> f64 {
    w.mul(&PowerLog::power(1.0)).integral_dt_over_t(0.0, t).value
}

fn base_norm(family: &Family, g: &StepDecreasing) -> Result<f64> {
    Ok(match family {
        Family::Lp { p } => g.steps().map(|(lo, hi, v)| v.powf(*p) * (hi - lo)).sum::<f64>().powf(1.0 / p),
        Family::Lorentz { p, q } => {
            if q.is_inf() {
                g.steps().map(|(_, hi, v)| v * hi.powf(1.0 / p)).fold(0.0, f64::max)
            } else {
                let q = q.0;
                let e = q / p;
                g.steps().map(|(lo, hi, v)| v.powf(q) * (hi.powf(e) - lo.powf(e)) / e).sum::<f64>().powf(1.0 / q)
            }
        }
        Family::LorentzZygmund { p, r, beta } => {
            if r.is_inf() {
                lz_sup(*p, *beta, g)
            } else {
                let r = r.0;
                let weight = PowerLog::new(1.0, r / p, beta * r, 0.0);
                let mut acc = 0.0;
                for (lo, hi, v) in g.steps() {
                    if v > 0.0 {
                        acc += v.powf(r) * weight.integral_dt_over_t(lo, hi).value;
                    }
                }
                acc.powf(1.0 / r)
            }
        }
        Family::LambdaW { q, w } => {
            let mut acc = 0.0;
            let mut prev = 0.0;
            for (_, hi, v) in g.steps() {
                let wh = lambda_w_primitive(w, hi);
                acc += v.powf(*q) * (wh - prev);
                prev = wh;
            }
            acc.powf(1.0 / q)
        }
        Family::Marcinkiewicz { phi } => {
            sup_phi_fss(|t| phi.eval(t), phi.is_pure_power().then_some((phi.coef, phi.a)), g)
        }
        Family::MarcinkiewiczTilde { phi } => g.steps().map(|(_, hi, v)| v * phi.eval(hi)).fold(0.0, f64::max),
        Family::Orlicz { phi } => orlicz_norm(phi, g)?,
    })
}

/// `sup_t t^{1/p} L(t)^β g(t)`. On a step the weight's logarithmic
/// derivative is `1/p − β/L(t)`, so besides the right end the only
/// candidate is the interior maximum at `L = βp` (when `βp > 1`).
fn lz_sup(p: f64, beta: f64, g: &StepDecreasing) -> f64 {
    let h = |t: f64| t.powf(1.0 / p) * log_l(t).powf(beta);
    let t_star = if beta * p > 1.0 { Some((1.0 - beta * p).exp()) } else { None };
    let mut best: f64 = 0.0;
    for (lo, hi, v) in g.steps() {
        best = best.max(v * h(hi));
        if let Some(ts) = t_star {
            if ts > lo && ts < hi {
                best = best.max(v * h(ts));
            }
        }
    }
    best
}

/// `sup_{t>0} φ(t) g**(t)` for nondecreasing `φ`. On a step `[lo, hi)`
/// with value `v` and `K = ∫_0^lo g − v·lo`, the objective is
/// `(K + v t) φ(t)/t`. For a pure power `φ = c t^a` its only stationary
/// point `t = (1−a)K/(a v)` is a minimum, so endpoints suffice; general
/// weights are maximized numerically per step.
fn sup_phi_fss<P: Fn(f64) -> f64>(phi: P, pure: Option<(f64, f64)>, g: &StepDecreasing) -> f64 {
    let mut best: f64 = 0.0;
    let mut area = 0.0;
    for (lo, hi, v) in g.steps() {
        let k = area - v * lo;
        let obj = |t: f64| (k + v * t) * phi(t) / t;
        best = best.max(obj(hi));
        if lo > 0.0 && pure.is_none() {
            best = best.max(interval_sup(&obj, lo, hi));
        }
        area += v * (hi - lo);
    }
    // beyond the support g** = area / t
    let mass = g.mass();
    match pure {
        Some((_, a)) if a > 1.0 => f64::INFINITY,
        Some(_) => best,
        None => {
            let tail = |t: f64| area * phi(t) / t;
            let far = tail(mass * 1e9);
            let near = interval_sup(tail, mass, mass * 1e3);
            if far > near * (1.0 + 1e-9) && far > best {
                f64::INFINITY
            } else {
                best.max(near)
            }
        }
    }
}

fn orlicz_norm(phi: &Young, g: &StepDecreasing) -> Result<f64> {
    if let Young::Power { p } = *phi {
        return Ok(g.steps().map(|(lo, hi, v)| v.powf(p) * (hi - lo)).sum::<f64>().powf(1.0 / p));
    }
    let modular = |lambda: f64| g.steps().map(|(lo, hi, v)| phi.eval(v / lambda) * (hi - lo)).sum::<f64>();
    let mut hi = g.sup().max(f64::MIN_POSITIVE);
    let mut guard = 0;
    while modular(hi) > 1.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Evaluation("Orlicz modular does not drop below 1".into()));
        }
    }
    let mut lo = hi / 2.0;
    guard = 0;
    while modular(lo) <= 1.0 {
        lo /= 2.0;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Evaluation("Orlicz modular does not exceed 1".into()));
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            return Ok(hi);
        }
        let mid = 0.5 * (lo + hi);
        if modular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Evaluation("Orlicz bisection did not converge".into()))
}
