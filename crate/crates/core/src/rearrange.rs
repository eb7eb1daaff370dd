//! Decreasing rearrangements of functions on finite spaces, held exactly as
//! step functions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::Space;

/// `f*` as a right-continuous decreasing step function on `[0, mass)`:
/// `f*(t) = values[i]` for `t` in `[breakpoints[i-1], breakpoints[i])`,
/// with `breakpoints[-1] = 0`. Beyond the last breakpoint `f* = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDecreasing {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepDecreasing {
    /// Rearranges `|f|` with respect to the measure given by `weights`.
    /// Equal values are merged into one step.
    pub fn from_weighted(f: &[f64], weights: &[f64]) -> Result<StepDecreasing> {
        if f.len() != weights.len() {
            return Err(Error::Domain(format!("function has {} values for {} points", f.len(), weights.len())));
        }
        if let Some(i) = f.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("f({i}) = {} is not finite", f[i])));
        }
        let mut pairs: Vec<(f64, f64)> = f.iter().map(|v| v.abs()).zip(weights.iter().copied()).collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut breakpoints = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut acc = 0.0;
        for (v, w) in pairs {
            acc += w;
            if values.last() == Some(&v) {
                *breakpoints.last_mut().unwrap() = acc;
            } else {
                values.push(v);
                breakpoints.push(acc);
            }
        }
        Ok(StepDecreasing { breakpoints, values })
    }

    pub fn from_function(space: &Space, f: &[f64]) -> Result<StepDecreasing> {
        Self::from_weighted(f, space.weights())
    }

    /// Validated construction from explicit steps.
    pub fn from_steps(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<StepDecreasing> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::Domain("need equally many (>0) breakpoints and values".into()));
        }
        let mut prev_t = 0.0;
        let mut prev_v = f64::INFINITY;
        for (&t, &v) in breakpoints.iter().zip(&values) {
            if !(t > prev_t) || !(v < prev_v) || !(v >= 0.0) || !t.is_finite() {
                return Err(Error::Domain(
                    "breakpoints must increase strictly and values decrease strictly to >= 0".into(),
                ));
            }
            prev_t = t;
            prev_v = v;
        }
        Ok(StepDecreasing { breakpoints, values })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// `(lo, hi, value)` for every step.
    pub fn steps(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .iter()
            .zip(&self.values)
            .scan(0.0, |lo, (&hi, &v)| {
                let s = (*lo, hi, v);
                *lo = hi;
                Some(s)
            })
    }

    /// `f*(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= t);
        self.values.get(i).copied().unwrap_or(0.0)
    }

    /// `‖f‖_∞ = f*(0)`.
    pub fn sup(&self) -> f64 {
        self.values[0]
    }

    /// `|{t : f*(t) > s}|`, which equals `μ{|f| > s}`.
    pub fn distribution(&self, s: f64) -> f64 {
        let k = self.values.partition_point(|&v| v > s);
        if k == 0 {
            0.0
        } else {
            self.breakpoints[k - 1]
        }
    }

    /// `∫_0^t f*` computed step by step.
    pub fn integral(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (lo, hi, v) in self.steps() {
            if t <= lo {
                break;
            }
            acc += v * (hi.min(t) - lo);
        }
        acc
    }

    /// `f**(t) = (1/t) ∫_0^t f*`.
    pub fn maximal_average(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("f** needs t > 0, got {t}")));
        }
        Ok(self.integral(t) / t)
    }

    /// `(f*)^α`, which is the rearrangement of `|f|^α`.
    pub fn powf(&self, alpha: f64) -> StepDecreasing {
        StepDecreasing {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v.powf(alpha)).collect(),
        }
    }

    pub fn scale(&self, lambda: f64) -> StepDecreasing {
        let lambda = lambda.abs();
        if lambda == 0.0 {
            return StepDecreasing { breakpoints: vec![self.mass()], values: vec![0.0] };
        }
        StepDecreasing { breakpoints: self.breakpoints.clone(), values: self.values.iter().map(|v| v * lambda).collect() }
    }

    /// `O(|f|^α, t) = (|f|^α)**(t) − (|f|^α)*(t)`.
    pub fn oscillation(&self, alpha: f64, t: f64) -> Result<f64> {
        check_alpha(alpha)?;
        let g = self.powf(alpha);
        Ok((g.maximal_average(t)? - g.eval(t)).max(0.0))
    }

    /// Closed form of the oscillation: on each step `[lo, hi)` of `(f*)^α`,
    /// `O(t) = c / t`. The last entry covers `[mass, ∞)` where `f* = 0`.
    pub fn oscillation_pieces(&self, alpha: f64) -> Vec<OscPiece> {
        let g = self.powf(alpha);
        let mut out = Vec::with_capacity(g.values.len() + 1);
        let mut area = 0.0;
        for (lo, hi, u) in g.steps() {
            out.push(OscPiece { lo, hi, c: (area - u * lo).max(0.0) });
            area += u * (hi - lo);
        }
        out.push(OscPiece { lo: g.mass(), hi: f64::INFINITY, c: area });
        out
    }

    /// `‖f‖_{L^α + L^∞}` surrogate: `(∫_0^{min(1, mass)} (f*)^α)^{1/α}`.
    pub fn sum_plus_linf_norm(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.powf(alpha).integral(self.mass().min(1.0)).powf(1.0 / alpha))
    }
}

/// One piece of the oscillation `O(t) = c / t` on `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscPiece {
    pub lo: f64,
    pub hi: f64,
    pub c: f64,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}
