//! Named theorem checks over a space and a corpus.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::NamedFunction;
use crate::embed::{
    corpus_sides, embedding_report, linf_embedding_check, lorentz_log_report, oscillation_functional, target_norm_check,
    teomo1_check, EmbeddingReport, MFunction, Regime, ReportParams, TargetParams,
};
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::powerlog::PowerLog;
use crate::rearrange::StepDecreasing;
use crate::rispace::{Exponent, Family, RISpaceSpec};
use crate::smoothness::{hajlasz_seminorm_l1, k_bounds_from_steps, ModulusSteps};
use crate::space::Space;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Oscillation inequality for `X^{(α)}`.
    K1,
    /// The Lebesgue version with the classical modulus `𝓔_p`.
    TeoLp,
    /// The K-functional sandwich for `(L¹, Ṁ^{1,1})`.
    TeoInterpol,
    /// Pointwise oscillation bound by a gradient.
    TeoMo1,
    /// `L^∞` bound when `m(0) < ∞`.
    Infinito,
    /// Weighted bounds when `m(0) = ∞`.
    Pesos,
    /// `Infinito` or `Pesos`, whichever the m-function allows.
    EmbTeo,
    /// The Lorentz–Zygmund regime table.
    LorentzLog,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::K1,
        Theorem::TeoLp,
        Theorem::TeoInterpol,
        Theorem::TeoMo1,
        Theorem::Infinito,
        Theorem::Pesos,
        Theorem::EmbTeo,
        Theorem::LorentzLog,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::K1 => "k1",
            Theorem::TeoLp => "teolp",
            Theorem::TeoInterpol => "teointerpol",
            Theorem::TeoMo1 => "teomo1",
            Theorem::Infinito => "infinito",
            Theorem::Pesos => "pesos",
            Theorem::EmbTeo => "embteo",
            Theorem::LorentzLog => "lorentzlog",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Theorem> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown theorem '{s}'")))
    }
}

/// Parameters shared by the checks; each check reads what it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyParams {
    pub spec: RISpaceSpec,
    pub alpha: f64,
    pub s: f64,
    pub q: Exponent,
    /// Weight `u` for the case `q ≤ α`.
    #[serde(default)]
    pub weight: Option<PowerLog>,
    /// Number of `t` values for the K-functional sandwich.
    #[serde(default = "default_t_points")]
    pub t_points: usize,
    /// Grid size for the pointwise oscillation bound.
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

fn default_t_points() -> usize {
    20
}

fn default_grid_points() -> usize {
    64
}

impl VerifyParams {
    pub fn new(spec: RISpaceSpec, alpha: f64, s: f64, q: Exponent) -> VerifyParams {
        VerifyParams { spec, alpha, s, q, weight: None, t_points: default_t_points(), grid_points: default_grid_points() }
    }
}

/// Reports produced by a check, plus the regime when one was classified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub theorem: Theorem,
    pub reports: Vec<EmbeddingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn verify(theorem: Theorem, space: &Space, corpus: &[NamedFunction], params: &VerifyParams) -> Result<VerifyOutcome> {
    let VerifyParams { spec, alpha, s, q, .. } = params;
    let (alpha, s, q) = (*alpha, *s, *q);
    let single = |r: EmbeddingReport| VerifyOutcome { theorem, reports: vec![r], regime: None, notes: vec![] };
    match theorem {
        Theorem::K1 => embedding_report(space, corpus, spec, alpha, s, q).map(single),
        Theorem::TeoLp => teolp_report(space, corpus, spec, s, q).map(single),
        Theorem::TeoInterpol => interpolation_reports(space, corpus, spec, alpha, params.t_points),
        Theorem::TeoMo1 => teomo1_report(space, corpus, spec, alpha, params.grid_points),
        Theorem::Infinito => linf_embedding_check(space, corpus, spec, alpha, s, q).map(single),
        Theorem::Pesos => {
            let tp = TargetParams { spec: spec.clone(), alpha, s, q, u: params.weight };
            target_norm_check(space, corpus, &tp).map(single)
        }
        Theorem::EmbTeo => {
            let m = MFunction::new(spec, alpha, s, q, space.upper_dimension())?;
            let mut report = if m.finite_at_zero() {
                linf_embedding_check(space, corpus, spec, alpha, s, q)?
            } else {
                let tp = TargetParams { spec: spec.clone(), alpha, s, q, u: params.weight };
                target_norm_check(space, corpus, &tp)?
            };
            report.theorem_id = "embteo".into();
            let note = if m.finite_at_zero() { "m(0) < inf: L-infinity bound" } else { "m(0) = inf: weighted bound" };
            Ok(VerifyOutcome { theorem, reports: vec![report], regime: None, notes: vec![note.into()] })
        }
        Theorem::LorentzLog => {
            let (p, r, beta) = lorentz_zygmund_parameters(spec)?;
            let (regime, report) = lorentz_log_report(space, corpus, p, r, beta, s, q)?;
            Ok(VerifyOutcome { theorem, reports: vec![report], regime: Some(regime), notes: vec![] })
        }
    }
}

/// `(p, r, β)` of a Lebesgue, Lorentz or Lorentz–Zygmund spec.
pub fn lorentz_zygmund_parameters(spec: &RISpaceSpec) -> Result<(f64, Exponent, f64)> {
    let spec = spec.convexify(1.0)?;
    match spec.family {
        Family::Lp { p } => Ok((p, Exponent(p), 0.0)),
        Family::Lorentz { p, q } => Ok((p, q, 0.0)),
        Family::LorentzZygmund { p, r, beta } => Ok((p, r, beta)),
        _ => Err(Error::Precondition(format!("{} is not a Lorentz-Zygmund space", spec.label()))),
    }
}

/// `X = L^p, α = 1` for `p ≥ 1` and `X = L¹, α = p` for `p < 1`; in both
/// cases `φ_{X^{(α)}}(t) = t^{1/p}`.
pub fn teolp_space(p: f64) -> (RISpaceSpec, f64) {
    if p >= 1.0 {
        (RISpaceSpec::lp(p), 1.0)
    } else {
        (RISpaceSpec::lp(1.0), p)
    }
}

fn teolp_report(space: &Space, corpus: &[NamedFunction], spec: &RISpaceSpec, s: f64, q: Exponent) -> Result<EmbeddingReport> {
    let p = match spec.convexify(1.0)?.family {
        Family::Lp { p } => p,
        _ => return Err(Error::Precondition("the Lebesgue version needs an L^p spec".into())),
    };
    let (x, alpha) = teolp_space(p);
    let sides = corpus_sides(corpus, |f| {
        let lhs = oscillation_functional(space, f, &x, alpha, s, q)?;
        let besov = ModulusSteps::compute_classical(space, f, p)?.besov(s, q)?;
        Ok((lhs, besov + StepDecreasing::from_function(space, f)?.sum_plus_linf_norm(alpha)?))
    })?;
    EmbeddingReport::from_sides("teolp", ReportParams::new(space, spec, alpha, s, q), sides)
}

/// `t` values `r_min/2 · ρ^k` up to `2·diameter`, `points` of them.
pub fn sandwich_t_grid(space: &Space, points: usize) -> Vec<f64> {
    let (lo, hi) = (space.r_min() / 2.0, 2.0 * space.diameter());
    if points < 2 || !(hi > lo && lo > 0.0) {
        return vec![hi.max(1.0)];
    }
    (0..points).map(|k| (lo.ln() + (hi / lo).ln() * k as f64 / (points - 1) as f64).exp()).collect()
}

/// Two reports over `(function, t)` pairs: `lower`: `E(f,t)` against the
/// exact `K`; `upper`: `K` against the dyadic upper sum.
fn interpolation_reports(
    space: &Space,
    corpus: &[NamedFunction],
    spec: &RISpaceSpec,
    alpha: f64,
    t_points: usize,
) -> Result<VerifyOutcome> {
    if !(alpha == 1.0 && spec.convexify(1.0)? == RISpaceSpec::lp(1.0)) {
        return Err(Error::Precondition("the exact K-functional is available for X = L^1, alpha = 1 only".into()));
    }
    let ts = sandwich_t_grid(space, t_points);
    let rows = par_map(corpus, |nf| -> Result<Vec<(String, f64, f64, f64)>> {
        let steps = ModulusSteps::compute(space, &nf.values, spec, alpha)?;
        ts.iter()
            .map(|&t| {
                let kb = k_bounds_from_steps(space, &nf.values, t, spec, alpha, &steps)?;
                let exact = kb.exact.expect("L1 couple carries the exact value");
                Ok((format!("{}@t={t:.6e}", nf.label), kb.lower, exact, kb.upper))
            })
            .collect()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?
    .concat();
    let params = ReportParams::new(space, spec, alpha, 0.5, Exponent(1.0));
    let lower = EmbeddingReport::from_sides(
        "teointerpol-lower",
        params.clone(),
        rows.iter().map(|(l, e, k, _)| (l.clone(), *e, *k)),
    )?;
    let upper = EmbeddingReport::from_sides("teointerpol-upper", params, rows.iter().map(|(l, _, k, u)| (l.clone(), *k, *u)))?;
    let c1 = lower.empirical_constant;
    let c2 = c1 * upper.empirical_constant;
    Ok(VerifyOutcome {
        theorem: Theorem::TeoInterpol,
        reports: vec![lower, upper],
        regime: None,
        notes: vec![format!("C1 = {c1:e}, C2 = {c2:e}")],
    })
}

/// `lhs` is the empirical constant for each function with its L¹-optimal
/// gradient, `rhs = 1`.
fn teomo1_report(
    space: &Space,
    corpus: &[NamedFunction],
    spec: &RISpaceSpec,
    alpha: f64,
    points: usize,
) -> Result<VerifyOutcome> {
    let sides = corpus_sides(corpus, |f| {
        let (_, g) = hajlasz_seminorm_l1(space, f)?;
        Ok((teomo1_check(space, f, alpha, &g, points)?, 1.0))
    })?;
    let q_dim = space.upper_dimension();
    let report = EmbeddingReport::from_sides("teomo1", ReportParams::new(space, spec, alpha, 0.5, Exponent(1.0)), sides)?;
    Ok(VerifyOutcome {
        theorem: Theorem::TeoMo1,
        reports: vec![report],
        regime: None,
        notes: vec![format!("lower mass constant c with mu(B(x,r)) >= c r^Q, r <= 1: {:e}", space.lower_mass_constant(q_dim))],
    })
}
