//! Power-log weights `c · t^a · L(t)^b · LL(t)^c` with
//! `L(t) = 1 + ln⁺(1/t)` and `LL(t) = 1 + ln L(t)`.
//!
//! These are the symbolic presets behind weights, fundamental functions and
//! Young functions. For `t ≥ 1` both logarithmic factors equal one.

use serde::{Deserialize, Serialize};

use crate::quad::{integrate, integrate_to_infinity, Quad, Tolerance};

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLog {
    #[serde(default = "one")]
    pub coef: f64,
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub c: f64,
}

/// `1 + ln⁺(1/t)`.
pub fn log_l(t: f64) -> f64 {
    if t >= 1.0 {
        1.0
    } else {
        1.0 - t.ln()
    }
}

/// `1 + ln(1 + ln⁺(1/t))`.
pub fn log_ll(t: f64) -> f64 {
    1.0 + log_l(t).ln()
}

impl PowerLog {
    pub fn power(a: f64) -> PowerLog {
        PowerLog { coef: 1.0, a, b: 0.0, c: 0.0 }
    }

    pub fn new(coef: f64, a: f64, b: f64, c: f64) -> PowerLog {
        PowerLog { coef, a, b, c }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut v = self.coef * t.powf(self.a);
        if t < 1.0 {
            if self.b != 0.0 {
                v *= log_l(t).powf(self.b);
            }
            if self.c != 0.0 {
                v *= log_ll(t).powf(self.c);
            }
        }
        v
    }

    pub fn is_pure_power(&self) -> bool {
        self.b == 0.0 && self.c == 0.0
    }

    pub fn powf(&self, e: f64) -> PowerLog {
        PowerLog { coef: self.coef.powf(e), a: self.a * e, b: self.b * e, c: self.c * e }
    }

    pub fn mul(&self, o: &PowerLog) -> PowerLog {
        PowerLog { coef: self.coef * o.coef, a: self.a + o.a, b: self.b + o.b, c: self.c + o.c }
    }

    pub fn div(&self, o: &PowerLog) -> PowerLog {
        PowerLog { coef: self.coef / o.coef, a: self.a - o.a, b: self.b - o.b, c: self.c - o.c }
    }

    /// Whether `∫_0^1 self(t) dt/t` is finite: the exponents are compared
    /// lexicographically, `(a > 0)`, then `(a = 0, b < −1)`, then
    /// `(a = 0, b = −1, c < −1)`.
    pub fn integrable_at_zero(&self) -> bool {
        const TOL: f64 = 1e-12;
        if self.a > TOL {
            true
        } else if self.a < -TOL {
            false
        } else if self.b < -1.0 - TOL {
            true
        } else if self.b > -1.0 + TOL {
            false
        } else {
            self.c < -1.0 - TOL
        }
    }

    /// Whether `sup_{0<t<1} self(t)` is finite.
    pub fn bounded_at_zero(&self) -> bool {
        const TOL: f64 = 1e-12;
        if self.a.abs() > TOL {
            self.a > 0.0
        } else if self.b.abs() > TOL {
            self.b < 0.0
        } else {
            self.c <= TOL
        }
    }

    /// `lim_{t→0} self(t)` (may be `0`, `coef` or `∞`).
    pub fn limit_at_zero(&self) -> f64 {
        const TOL: f64 = 1e-12;
        let sign = if self.a.abs() > TOL {
            -self.a
        } else if self.b.abs() > TOL {
            self.b
        } else if self.c.abs() > TOL {
            self.c
        } else {
            return self.coef;
        };
        if sign > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }

    /// `∫_lo^hi self(t) dt/t` for `0 ≤ lo < hi ≤ ∞`.
    ///
    /// Above `t = 1` the weight is a pure power and integrates in closed
    /// form. Below `1` the substitution `u = L(t)` gives
    /// `∫ coef · e^{a(1−u)} u^b (1 + ln u)^c du`, taken by quadrature unless
    /// the weight is a pure power; a zero lower limit is mapped through
    /// `w = 1 + ln u` to a half line. Divergent integrals return `∞`.
    pub fn integral_dt_over_t(&self, lo: f64, hi: f64) -> Quad {
        if !(hi > lo) {
            return Quad::ZERO;
        }
        let mut total = Quad::ZERO;
        if hi > 1.0 {
            let l = lo.max(1.0);
            let v = if self.a == 0.0 {
                if hi.is_infinite() {
                    f64::INFINITY
                } else {
                    self.coef * (hi / l).ln()
                }
            } else if hi.is_infinite() {
                if self.a < 0.0 {
                    -self.coef * l.powf(self.a) / self.a
                } else {
                    f64::INFINITY
                }
            } else {
                self.coef * (hi.powf(self.a) - l.powf(self.a)) / self.a
            };
            total += Quad { value: v, error: 0.0 };
        }
        if lo < 1.0 {
            let h = hi.min(1.0);
            total += self.below_one(lo, h);
        }
        total
    }

    fn below_one(&self, lo: f64, hi: f64) -> Quad {
        let tol = Tolerance { rel: 1e-12, ..Tolerance::default() };
        if lo == 0.0 && !self.integrable_at_zero() {
            return Quad { value: f64::INFINITY, error: 0.0 };
        }
        if self.is_pure_power() {
            let v = if lo == 0.0 {
                self.coef * hi.powf(self.a) / self.a
            } else if self.a == 0.0 {
                self.coef * (hi / lo).ln()
            } else {
                self.coef * (hi.powf(self.a) - lo.powf(self.a)) / self.a
            };
            return Quad { value: v, error: 0.0 };
        }
        let (a, b, c, coef) = (self.a, self.b, self.c, self.coef);
        let in_u = move |u: f64| coef * (a * (1.0 - u)).exp() * u.powf(b) * (1.0 + u.ln()).powf(c);
        let u_lo = log_l(hi);
        if lo > 0.0 {
            return integrate(in_u, u_lo, log_l(lo), tol);
        }
        if a == 0.0 && c == 0.0 && b < -1.0 {
            // ∫_{u0}^∞ u^b du
            return Quad { value: -coef * u_lo.powf(b + 1.0) / (b + 1.0), error: 0.0 };
        }
        let w_lo = 1.0 + u_lo.ln();
        integrate_to_infinity(
            move |w: f64| {
                let u = (w - 1.0).exp();
                if !u.is_finite() {
                    return 0.0;
                }
                coef * (a * (1.0 - u)).exp() * u.powf(b + 1.0) * w.powf(c)
            },
            w_lo,
            tol,
        )
    }
}
