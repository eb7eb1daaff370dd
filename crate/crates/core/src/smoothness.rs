//! Ball-average moduli, Besov and Hajłasz seminorms, and K-functional
//! bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, VarKind};
use crate::rearrange::{check_alpha, StepDecreasing};
use crate::rispace::{Exponent, Family, RISpaceSpec};
use crate::space::Space;

/// Relative duality gap accepted when certifying an LP optimum.
pub const GAP_TOL: f64 = 1e-9;

/// `∇_r^α f(x) = (⨍_{B(x,r)} |f(x) − f(y)|^α dμ(y))^{1/α}`.
pub fn nabla(space: &Space, f: &[f64], r: f64, alpha: f64) -> Result<Vec<f64>> {
    check_inputs(space, f, alpha)?;
    positive_radius(r)?;
    Ok(nabla_sweep(space, f, alpha, &[r]).pop().unwrap())
}

/// `T_r^α f(x) = (⨍_{B(x,r)} |f(y)|^α dμ(y))^{1/α}`.
pub fn t_r_operator(space: &Space, f: &[f64], r: f64, alpha: f64) -> Result<Vec<f64>> {
    check_inputs(space, f, alpha)?;
    positive_radius(r)?;
    Ok(t_r_sweep(space, f, alpha, &[r]).pop().unwrap())
}

/// `∇_r^α f` for each radius in `radii` (ascending), sharing one pass over
/// the neighbour lists per point.
pub fn nabla_sweep(space: &Space, f: &[f64], alpha: f64, radii: &[f64]) -> Vec<Vec<f64>> {
    ball_average_sweep(space, alpha, radii, |x, y| (f[x] - f[y]).abs())
}

/// `T_r^α f` for each radius in `radii` (ascending).
pub fn t_r_sweep(space: &Space, f: &[f64], alpha: f64, radii: &[f64]) -> Vec<Vec<f64>> {
    ball_average_sweep(space, alpha, radii, |_, y| f[y].abs())
}

fn ball_average_sweep<K: Fn(usize, usize) -> f64>(space: &Space, alpha: f64, radii: &[f64], kernel: K) -> Vec<Vec<f64>> {
    debug_assert!(radii.windows(2).all(|w| w[0] <= w[1]));
    let n = space.n();
    let w = space.weights();
    let mut out = vec![vec![0.0; n]; radii.len()];
    for x in 0..n {
        let order = space.by_distance(x);
        let mut k = 0;
        let (mut mass, mut acc) = (0.0, 0.0);
        for (ri, &r) in radii.iter().enumerate() {
            while k < n && space.d(x, order[k]) < r {
                let y = order[k];
                mass += w[y];
                acc += w[y] * kernel(x, y).powf(alpha);
                k += 1;
            }
            out[ri][x] = (acc / mass).powf(1.0 / alpha);
        }
    }
    out
}

/// `E_{X^{(α)}}(f, r) = ‖∇_r^α f‖_{X^{(α)}}` with `X` given by `spec`.
pub fn modulus(space: &Space, f: &[f64], r: f64, spec: &RISpaceSpec, alpha: f64) -> Result<f64> {
    let g = nabla(space, f, r, alpha)?;
    spec.convexify(alpha)?.norm_of(space, &g)
}

/// The modulus as an exact step function of `r`. Every ball is constant
/// for `r` in `(d_k, d_{k+1}]` between consecutive distinct distances, so
/// `E(f, r)` is `0` on `(0, d_1]`, `values[k]` on `(d_{k+1}, d_{k+2}]`,
/// and `tail` beyond the diameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusSteps {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
    pub tail: f64,
}

impl ModulusSteps {
    pub fn compute(space: &Space, f: &[f64], spec: &RISpaceSpec, alpha: f64) -> Result<ModulusSteps> {
        check_inputs(space, f, alpha)?;
        let x_alpha = spec.convexify(alpha)?;
        let breaks = space.distinct_distances();
        let mut radii: Vec<f64> = breaks.iter().skip(1).copied().collect();
        radii.push(f64::INFINITY);
        let grads = nabla_sweep(space, f, alpha, &radii);
        let mut values = grads.iter().map(|g| x_alpha.norm_of(space, g)).collect::<Result<Vec<f64>>>()?;
        let tail = values.pop().unwrap_or(0.0);
        Ok(ModulusSteps { breaks, values, tail })
    }

    /// `E(f, r)`.
    pub fn eval(&self, r: f64) -> f64 {
        let k = self.breaks.partition_point(|&d| d < r);
        match k {
            0 => 0.0,
            k if k == self.breaks.len() => self.tail,
            k => self.values[k - 1],
        }
    }

    /// Homogeneous Besov seminorm `(∫_0^∞ (r^{−s} E(f,r))^q dr/r)^{1/q}`,
    /// integrated exactly over the steps:
    /// `∫_a^b r^{−sq} dr/r = (a^{−sq} − b^{−sq})/(sq)`.
    pub fn besov(&self, s: f64, q: Exponent) -> Result<f64> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain(format!("smoothness s must lie in (0,1), got {s}")));
        }
        if !(q.0 > 0.0) {
            return Err(Error::Domain(format!("q must be positive, got {}", q.0)));
        }
        let last = match self.breaks.last() {
            Some(&d) => d,
            None => return Ok(0.0),
        };
        if q.is_inf() {
            let mut best = self.tail * last.powf(-s);
            for (k, &e) in self.values.iter().enumerate() {
                best = best.max(e * self.breaks[k].powf(-s));
            }
            return Ok(best);
        }
        let (q, sq) = (q.0, s * q.0);
        let mut acc = self.tail.powf(q) * last.powf(-sq) / sq;
        for (k, &e) in self.values.iter().enumerate() {
            if e > 0.0 {
                let (a, b) = (self.breaks[k], self.breaks[k + 1]);
                acc += e.powf(q) * (a.powf(-sq) - b.powf(-sq)) / sq;
            }
        }
        Ok(acc.powf(1.0 / q))
    }
}

impl ModulusSteps {
    /// The classical `𝓔_p(f, r) = ‖∇_r^p f‖_{L^p}` for any `0 < p < ∞`, as a
    /// step function of `r`.
    pub fn compute_classical(space: &Space, f: &[f64], p: f64) -> Result<ModulusSteps> {
        check_len(space, f)?;
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Domain(format!("p must be positive and finite, got {p}")));
        }
        let lp = RISpaceSpec::lp(p);
        let breaks = space.distinct_distances();
        let mut radii: Vec<f64> = breaks.iter().skip(1).copied().collect();
        radii.push(f64::INFINITY);
        let grads = ball_average_sweep(space, p, &radii, |x, y| (f[x] - f[y]).abs());
        let mut values = grads.iter().map(|g| lp.norm_of(space, g)).collect::<Result<Vec<f64>>>()?;
        let tail = values.pop().unwrap_or(0.0);
        Ok(ModulusSteps { breaks, values, tail })
    }
}

/// Samples of `E(f, r)` on the geometric grid `r_min·ρ^k ≤ 2·diameter`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub tail_value: f64,
}

impl ModulusProfile {
    pub fn compute(space: &Space, f: &[f64], spec: &RISpaceSpec, alpha: f64, ratio: f64) -> Result<ModulusProfile> {
        if !(ratio > 1.0) {
            return Err(Error::Domain(format!("grid ratio must exceed 1, got {ratio}")));
        }
        let steps = ModulusSteps::compute(space, f, spec, alpha)?;
        let top = 2.0 * space.diameter();
        let mut radii = Vec::new();
        let mut r = space.r_min();
        if r > 0.0 {
            while r <= top * (1.0 + 1e-12) {
                radii.push(r);
                r *= ratio;
            }
        }
        let values = radii.iter().map(|&r| steps.eval(r)).collect();
        Ok(ModulusProfile { radii, values, tail_value: steps.tail })
    }
}

/// `‖f‖_{Ḃ^s_{X^{(α)},q}}`.
pub fn besov_seminorm(space: &Space, f: &[f64], s: f64, q: Exponent, spec: &RISpaceSpec, alpha: f64) -> Result<f64> {
    ModulusSteps::compute(space, f, spec, alpha)?.besov(s, q)
}

/// A nonnegative `g` with `|f(x) − f(y)| ≤ d(x,y)(g(x) + g(y))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientField {
    pub g: Vec<f64>,
}

impl GradientField {
    /// Largest violation `|f(x)−f(y)|/d(x,y) − g(x) − g(y)` over pairs.
    pub fn max_violation(&self, space: &Space, f: &[f64]) -> f64 {
        let mut worst: f64 = self.g.iter().fold(0.0, |m, &v| m.max(-v));
        for x in 0..space.n() {
            for y in (x + 1)..space.n() {
                worst = worst.max(slope(space, f, x, y) - self.g[x] - self.g[y]);
            }
        }
        worst
    }

    /// Checks the 1-gradient condition up to relative rounding.
    pub fn certify(self, space: &Space, f: &[f64]) -> Result<GradientField> {
        if self.g.len() != space.n() {
            return Err(Error::Domain("gradient length does not match the space".into()));
        }
        let scale = self.g.iter().fold(1.0f64, |m, &v| m.max(v.abs()));
        let v = self.max_violation(space, f);
        if v > 1e-12 * scale {
            return Err(Error::Domain(format!("not a 1-gradient: violation {v:e}")));
        }
        Ok(self)
    }

    pub fn l1(&self, space: &Space) -> f64 {
        self.g.iter().zip(space.weights()).map(|(g, w)| g * w).sum()
    }

    /// Lowers each entry to the least value compatible with the others,
    /// `g(x) = max(0, max_y |f(x)−f(y)|/d(x,y) − g(y))`, repeating until
    /// nothing moves. Feasible inputs stay feasible.
    pub fn tighten(&mut self, space: &Space, f: &[f64]) {
        for _ in 0..100 {
            let mut moved = false;
            for x in 0..space.n() {
                let need = (0..space.n())
                    .filter(|&y| y != x)
                    .map(|y| slope(space, f, x, y) - self.g[y])
                    .fold(0.0, f64::max);
                if need < self.g[x] {
                    self.g[x] = need;
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }

    /// Raises entries until every pair constraint holds.
    fn repair(&mut self, space: &Space, f: &[f64]) {
        for v in &mut self.g {
            *v = v.max(0.0);
        }
        for x in 0..space.n() {
            let need = (0..space.n())
                .filter(|&y| y != x)
                .map(|y| slope(space, f, x, y) - self.g[y])
                .fold(0.0, f64::max);
            self.g[x] = self.g[x].max(need);
        }
    }
}

#[inline]
fn slope(space: &Space, f: &[f64], x: usize, y: usize) -> f64 {
    (f[x] - f[y]).abs() / space.d(x, y)
}

/// `g(x) = max_{y≠x} |f(x) − f(y)| / d(x,y)`.
pub fn canonical_gradient(space: &Space, f: &[f64]) -> Result<GradientField> {
    check_len(space, f)?;
    let n = space.n();
    let g = (0..n)
        .map(|x| (0..n).filter(|&y| y != x).map(|y| slope(space, f, x, y)).fold(0.0, f64::max))
        .collect();
    Ok(GradientField { g })
}

fn relative_gap(primal: f64, dual: f64) -> f64 {
    (primal - dual).abs() / primal.abs().max(dual.abs()).max(1e-300)
}

/// `‖f‖_{Ṁ^{1,1}} = min Σ μ(x) g(x)` over 1-gradients, by linear
/// programming. The returned gradient is feasible and its value is
/// certified against the dual bound.
pub fn hajlasz_seminorm_l1(space: &Space, f: &[f64]) -> Result<(f64, GradientField)> {
    check_len(space, f)?;
    let n = space.n();
    let mut lp = LinearProgram::new(n);
    lp.cost = space.weights().to_vec();
    for x in 0..n {
        for y in (x + 1)..n {
            let c = slope(space, f, x, y);
            if c > 0.0 {
                lp.add_row(vec![(x, 1.0), (y, 1.0)], c);
            }
        }
    }
    if lp.rows.is_empty() {
        return Ok((0.0, GradientField { g: vec![0.0; n] }));
    }
    let sol = lp.solve()?;
    let mut field = GradientField { g: sol.x };
    field.repair(space, f);
    let value = field.l1(space);
    // Σ_x λ_xy ≤ μ(x) may be off by rounding; rescale into feasibility
    let mut excess: f64 = 1.0;
    let mut load = vec![0.0; n];
    for (row, &yj) in lp.rows.iter().zip(&sol.y) {
        for &(i, _) in row {
            load[i] += yj;
        }
    }
    for (l, w) in load.iter().zip(space.weights()) {
        excess = excess.max(l / w);
    }
    let dual = sol.dual / excess;
    if relative_gap(value, dual) > GAP_TOL {
        return Err(Error::Solver {
            message: format!("duality gap {:e} exceeds {GAP_TOL:e} (primal {value}, dual {dual})", relative_gap(value, dual)),
            dump: lp.dump(),
        });
    }
    Ok((value, field))
}

/// Upper bound for `inf_g ‖g‖_{X^{(α)}}` over 1-gradients: the best of the
/// canonical gradient, the L¹-optimal gradient and the half-slope start,
/// each tightened coordinatewise.
pub fn hajlasz_seminorm_upper(space: &Space, f: &[f64], spec: &RISpaceSpec, alpha: f64) -> Result<(f64, GradientField)> {
    check_inputs(space, f, alpha)?;
    let x_alpha = spec.convexify(alpha)?;
    let n = space.n();
    let mut candidates = vec![canonical_gradient(space, f)?, hajlasz_seminorm_l1(space, f)?.1];
    let half = (0..n)
        .map(|x| (0..n).filter(|&y| y != x).map(|y| slope(space, f, x, y) / 2.0).fold(0.0, f64::max))
        .collect();
    let mut half = GradientField { g: half };
    half.repair(space, f);
    candidates.push(half);
    let mut best: Option<(f64, GradientField)> = None;
    for mut c in candidates {
        c.tighten(space, f);
        let v = x_alpha.norm_of(space, &c.g)?;
        if best.as_ref().map_or(true, |b| v < b.0) {
            best = Some((v, c));
        }
    }
    Ok(best.unwrap())
}

/// Lower bound for `inf_g ‖g‖_{X^{(α)}}` when `X^{(α)}` is a Banach
/// Lebesgue or Lorentz space: by Hölder with the associate space,
/// `‖g‖_{L¹} ≤ ‖g‖_X φ_{X'}(μ(Ω))`, so the L¹ optimum divided by
/// `φ_{X'}(μ(Ω))` bounds every gradient from below.
pub fn hajlasz_seminorm_lower(space: &Space, f: &[f64], spec: &RISpaceSpec, alpha: f64) -> Result<Option<f64>> {
    let x_alpha = spec.convexify(alpha)?;
    let banach = x_alpha.convexify == 1.0
        && match &x_alpha.family {
            Family::Lp { p } => *p >= 1.0,
            Family::Lorentz { p, q } => (*p > 1.0 && q.0 >= 1.0) || (*p == 1.0 && q.0 == 1.0),
            _ => false,
        };
    if !banach {
        return Ok(None);
    }
    let (l1, _) = hajlasz_seminorm_l1(space, f)?;
    Ok(Some(l1 / x_alpha.dual_fundamental_function(space.total_mass())?))
}

/// Which K-functional to compute exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Couple {
    /// `(L¹, Ṁ^{1,1})`.
    Homogeneous,
    /// `(L¹, M^{1,1})` with `‖h‖_{M^{1,1}} = ‖h‖_{L¹} + ‖h‖_{Ṁ^{1,1}}`.
    Inhomogeneous,
}

/// `K(f, t; L¹, Ṁ^{1,1}) = inf_h ‖f − h‖_{L¹} + t ‖h‖_{Ṁ^{1,1}}` by one
/// joint linear program in `(h, |f − h|, g)`.
pub fn k_functional_l1(space: &Space, f: &[f64], t: f64) -> Result<f64> {
    k_functional(space, f, t, Couple::Homogeneous)
}

pub fn k_functional(space: &Space, f: &[f64], t: f64, couple: Couple) -> Result<f64> {
    check_len(space, f)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("K-functional needs t > 0, got {t}")));
    }
    let n = space.n();
    let w = space.weights();
    let inhom = couple == Couple::Inhomogeneous;
    // variables: h (free) | e = |f − h| | g | a = |h| (inhomogeneous only)
    let (h0, e0, g0, a0) = (0, n, 2 * n, 3 * n);
    let nv = if inhom { 4 * n } else { 3 * n };
    let mut lp = LinearProgram::new(nv);
    for x in 0..n {
        lp.kinds[h0 + x] = VarKind::Free;
        lp.cost[e0 + x] = w[x];
        lp.cost[g0 + x] = t * w[x];
        lp.add_row(vec![(e0 + x, 1.0), (h0 + x, 1.0)], f[x]);
        lp.add_row(vec![(e0 + x, 1.0), (h0 + x, -1.0)], -f[x]);
        if inhom {
            lp.cost[a0 + x] = t * w[x];
            lp.add_row(vec![(a0 + x, 1.0), (h0 + x, 1.0)], 0.0);
            lp.add_row(vec![(a0 + x, 1.0), (h0 + x, -1.0)], 0.0);
        }
    }
    for x in 0..n {
        for y in (x + 1)..n {
            let inv = 1.0 / space.d(x, y);
            lp.add_row(vec![(g0 + x, 1.0), (g0 + y, 1.0), (h0 + x, -inv), (h0 + y, inv)], 0.0);
            lp.add_row(vec![(g0 + x, 1.0), (g0 + y, 1.0), (h0 + x, inv), (h0 + y, -inv)], 0.0);
        }
    }
    let sol = lp.solve()?;
    let h = &sol.x[h0..h0 + n];
    let mut field = GradientField { g: sol.x[g0..g0 + n].to_vec() };
    field.repair(space, h);
    let mut value = 0.0;
    for x in 0..n {
        value += w[x] * (f[x] - h[x]).abs() + t * w[x] * field.g[x];
        if inhom {
            value += t * w[x] * h[x].abs();
        }
    }
    let dual_bad = lp.dual_violation(&sol.y);
    let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs())) * w.iter().fold(0.0f64, |m, &v| m.max(v)) * (1.0 + t);
    let gap = relative_gap(value, sol.dual);
    if gap > GAP_TOL || dual_bad > 1e-9 * scale.max(1e-300) {
        if value <= 1e-14 * scale {
            return Ok(value.max(0.0));
        }
        return Err(Error::Solver {
            message: format!("K-functional LP not certified: gap {gap:e}, dual violation {dual_bad:e}"),
            dump: lp.dump(),
        });
    }
    Ok(value)
}

/// Two-sided bounds for `K(f, t; X^{(α)}, Ṁ^{1,X^{(α)}})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KBounds {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<f64>,
}

/// `lower = E(f, t)` and
/// `upper = (Σ_{j≥0} 2^{−jα} E(f, 2^j t)^α)^{1/α}`; the terms with
/// `2^j t ≥ 2·diameter` all equal the tail value and are summed as a
/// geometric series. For `X = L¹, α = 1` the exact K-functional is attached.
pub fn k_bounds(space: &Space, f: &[f64], t: f64, spec: &RISpaceSpec, alpha: f64) -> Result<KBounds> {
    let steps = ModulusSteps::compute(space, f, spec, alpha)?;
    k_bounds_from_steps(space, f, t, spec, alpha, &steps)
}

/// [`k_bounds`] with a precomputed modulus.
pub fn k_bounds_from_steps(
    space: &Space,
    f: &[f64],
    t: f64,
    spec: &RISpaceSpec,
    alpha: f64,
    steps: &ModulusSteps,
) -> Result<KBounds> {
    check_alpha(alpha)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let top = 2.0 * space.diameter();
    let mut sum = 0.0;
    let mut j = 0;
    let mut r = t;
    while r < top {
        sum += 2f64.powf(-(j as f64) * alpha) * steps.eval(r).powf(alpha);
        j += 1;
        r *= 2.0;
    }
    let ratio = 2f64.powf(-alpha);
    sum += ratio.powi(j) * steps.tail.powf(alpha) / (1.0 - ratio);
    let exact = if alpha == 1.0 && spec.convexify(1.0)? == RISpaceSpec::lp(1.0) {
        Some(k_functional_l1(space, f, t)?)
    } else {
        None
    };
    Ok(KBounds { t, lower: steps.eval(t), upper: sum.powf(1.0 / alpha), exact })
}

fn check_len(space: &Space, f: &[f64]) -> Result<()> {
    if f.len() != space.n() {
        return Err(Error::Domain(format!("function has {} values for {} points", f.len(), space.n())));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("function values must be finite".into()));
    }
    Ok(())
}

fn check_inputs(space: &Space, f: &[f64], alpha: f64) -> Result<()> {
    check_len(space, f)?;
    check_alpha(alpha)
}

fn positive_radius(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be positive, got {r}")))
    }
}

/// Rearrangement of `∇_r^α f`, handy for oscillation checks.
pub fn nabla_rearranged(space: &Space, f: &[f64], r: f64, alpha: f64) -> Result<StepDecreasing> {
    StepDecreasing::from_function(space, &nabla(space, f, r, alpha)?)
}
