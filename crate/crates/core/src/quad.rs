//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Integrals in this crate mostly carry a `dt/t` measure, so the helpers
//! here integrate in the logarithmic variable `x = ln t`, and map
//! `(0, b]` onto a finite interval when the lower limit is zero.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Result of a quadrature: value and an estimate of the absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

impl Quad {
    pub const ZERO: Quad = Quad { value: 0.0, error: 0.0 };
}

impl std::ops::Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        Quad { value: self.value + rhs.value, error: self.error + rhs.error }
    }
}

impl std::ops::AddAssign for Quad {
    fn add_assign(&mut self, rhs: Quad) {
        *self = *self + rhs;
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-300, rel: 1e-11, max_intervals: 4000 }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Quad {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Quad { value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

struct Piece {
    lo: f64,
    hi: f64,
    q: Quad,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q.error.total_cmp(&other.q.error)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Quad {
    if !(b > a) {
        return Quad::ZERO;
    }
    let first = gk15(&f, a, b);
    let mut heap = BinaryHeap::from([Piece { lo: a, hi: b, q: first }]);
    let mut done: Vec<Quad> = Vec::new();
    let mut total = first;
    while heap.len() + done.len() < tol.max_intervals {
        let target = tol.abs.max(tol.rel * total.value.abs());
        if total.error <= target {
            break;
        }
        let Some(Piece { lo, hi, q }) = heap.pop() else { break };
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            // interval no longer splittable in floating point
            total.error -= q.error;
            done.push(Quad { value: q.value, error: 0.0 });
            continue;
        }
        let left = gk15(&f, lo, mid);
        let right = gk15(&f, mid, hi);
        total.value += left.value + right.value - q.value;
        total.error += left.error + right.error - q.error;
        heap.push(Piece { lo, hi: mid, q: left });
        heap.push(Piece { lo: mid, hi, q: right });
    }
    // re-sum to shed accumulated cancellation
    done.extend(heap.into_iter().map(|p| p.q));
    let value = done.iter().map(|q| q.value).sum();
    let error = done.iter().map(|q| q.error).sum();
    Quad { value, error }
}

/// `∫_a^b g(t) dt/t` for `0 <= a < b`.
///
/// With `a > 0` the integral is taken in `x = ln t`; with `a = 0` the
/// substitution `t = b·exp(-u/(1-u))` maps `(0, b]` onto `[0, 1)`. The
/// integrand must decay fast enough at `0` for the integral to exist.
pub fn integrate_dt_over_t<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, tol: Tolerance) -> Quad {
    if !(b > a) {
        return Quad::ZERO;
    }
    if a > 0.0 {
        integrate(|x: f64| g(x.exp()), a.ln(), b.ln(), tol)
    } else {
        integrate(
            |u: f64| {
                let y = u / (1.0 - u);
                let t = b * (-y).exp();
                if t == 0.0 {
                    return 0.0;
                }
                let jac = 1.0 / ((1.0 - u) * (1.0 - u));
                g(t) * jac
            },
            0.0,
            1.0,
            tol,
        )
    }
}

/// `∫_a^∞ f(x) dx` through `x = a + y/(1-y)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: Tolerance) -> Quad {
    integrate(
        |y: f64| {
            let s = 1.0 - y;
            let x = a + y / s;
            if !x.is_finite() {
                return 0.0;
            }
            let v = f(x) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Maximum of a continuous function on `[a, b]`: dense sampling in the
/// logarithmic variable (linear when `a = 0`) followed by golden-section
/// refinement around the best sample. Endpoints are always included.
pub fn interval_sup<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    const SAMPLES: usize = 64;
    if !(b > a) {
        return f(a);
    }
    let log_scale = a > 0.0;
    let at = |k: usize| -> f64 {
        let s = k as f64 / SAMPLES as f64;
        if log_scale {
            (a.ln() + s * (b.ln() - a.ln())).exp()
        } else {
            a + s * (b - a)
        }
    };
    let mut best = (0usize, f(a));
    for k in 1..=SAMPLES {
        let v = f(at(k));
        if v > best.1 {
            best = (k, v);
        }
    }
    let lo = at(best.0.saturating_sub(1));
    let hi = at((best.0 + 1).min(SAMPLES));
    let refined = golden_max(&f, lo, hi);
    best.1.max(refined)
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo <= 1e-15 * (lo.abs() + hi.abs()) {
            break;
        }
    }
    f1.max(f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, Tolerance::default());
        assert_relative_eq!(q.value, 64.0 / 6.0 - 6.0, max_relative = 1e-14);
    }

    #[test]
    fn sqrt_singularity() {
        let q = integrate(|x: f64| x.sqrt(), 0.0, 1.0, Tolerance::default());
        assert_relative_eq!(q.value, 2.0 / 3.0, max_relative = 1e-10);
    }

    #[test]
    fn log_measure_from_zero() {
        // ∫_0^b t^a dt/t = b^a / a
        let q = integrate_dt_over_t(|t: f64| t.powf(0.3), 0.0, 0.7, Tolerance::default());
        assert_relative_eq!(q.value, 0.7f64.powf(0.3) / 0.3, max_relative = 1e-9);
        let q = integrate_dt_over_t(|t: f64| t.powf(-0.5), 0.01, 1.0, Tolerance::default());
        assert_relative_eq!(q.value, (0.01f64.powf(-0.5) - 1.0) / 0.5, max_relative = 1e-10);
    }

    #[test]
    fn sup_interior_max() {
        // t(1 - ln t) on [0.01, 2] peaks at t = 1
        let s = interval_sup(|t: f64| t * (1.0 - t.ln()), 0.01, 2.0);
        assert_relative_eq!(s, 1.0, max_relative = 1e-12);
    }
}
