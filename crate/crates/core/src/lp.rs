//! A small dense revised-simplex solver for the covering-type programs used
//! by the seminorm and K-functional computations.
//!
//! Problems are stated as
//!
//! ```text
//! minimize  cᵀx   subject to  a_j·x ≥ b_j  (j = 1..m),   x_i free or x_i ≥ 0
//! ```
//!
//! with `c ≥ 0` on the nonnegative variables and `c = 0` on the free ones.
//! The dual `max bᵀy, Aᵀy (=|≤) c, y ≥ 0` is then feasible at `y = 0`, so
//! the primal simplex runs on the dual from a slack basis without a phase
//! one. The primal solution is read off the simplex multipliers.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Free,
    NonNeg,
}

/// `min cᵀx` subject to `rows[j]·x ≥ rhs[j]`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub cost: Vec<f64>,
    pub kinds: Vec<VarKind>,
    pub rows: Vec<Vec<(usize, f64)>>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    /// Primal minimizer.
    pub x: Vec<f64>,
    /// Dual maximizer, one entry per constraint.
    pub y: Vec<f64>,
    /// `cᵀx`.
    pub primal: f64,
    /// `bᵀy`.
    pub dual: f64,
    /// Largest constraint violation of `x` (0 when feasible).
    pub violation: f64,
    pub iterations: usize,
}

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_SWITCH: usize = 30;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Col {
    // dual variable y_j
    Y(usize),
    // slack of the dual row of a nonnegative primal variable
    Slack(usize),
    // artificial of the dual row of a free primal variable; pinned at zero
    Art(usize),
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram { cost: vec![0.0; n_vars], kinds: vec![VarKind::NonNeg; n_vars], ..Default::default() }
    }

    pub fn n_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    /// Plain-text LP format, for failure reports.
    pub fn dump(&self) -> String {
        let mut s = String::from("Minimize\n obj:");
        for (i, c) in self.cost.iter().enumerate() {
            if *c != 0.0 {
                let _ = write!(s, " {c:+e} x{i}");
            }
        }
        s.push_str("\nSubject To\n");
        for (j, (row, b)) in self.rows.iter().zip(&self.rhs).enumerate() {
            let _ = write!(s, " c{j}:");
            for (i, a) in row {
                let _ = write!(s, " {a:+e} x{i}");
            }
            let _ = writeln!(s, " >= {b:e}");
        }
        s.push_str("Bounds\n");
        for (i, k) in self.kinds.iter().enumerate() {
            if *k == VarKind::Free {
                let _ = writeln!(s, " x{i} free");
            }
        }
        s.push_str("End\n");
        s
    }

    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Solver { message: message.into(), dump: self.dump() }
    }

    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (row, &b) in self.rows.iter().zip(&self.rhs) {
            let lhs: f64 = row.iter().map(|&(i, a)| a * x[i]).sum();
            worst = worst.max(b - lhs);
        }
        for (i, k) in self.kinds.iter().enumerate() {
            if *k == VarKind::NonNeg {
                worst = worst.max(-x[i]);
            }
        }
        worst
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Solves the program; fails with the instance dump if the dual cannot
    /// be started from `y = 0`, is unbounded (primal infeasible), or the
    /// iteration cap is reached.
    pub fn solve(&self) -> Result<LpSolution> {
        let m = self.n_vars();
        let ncon = self.rows.len();
        for (i, (&c, k)) in self.cost.iter().zip(&self.kinds).enumerate() {
            let ok = match k {
                VarKind::Free => c == 0.0,
                VarKind::NonNeg => c >= 0.0,
            };
            if !ok {
                return Err(self.fail(format!("variable x{i} has cost {c}; need 0 (free) or >= 0")));
            }
        }
        if m == 0 {
            return Ok(LpSolution { x: vec![], y: vec![0.0; ncon], primal: 0.0, dual: 0.0, violation: 0.0, iterations: 0 });
        }
        let mut st = State::new(self);
        st.run(self)?;
        let x: Vec<f64> = st.pi.iter().map(|p| -p).collect();
        let mut y = vec![0.0; ncon];
        for (i, col) in st.basis.iter().enumerate() {
            if let Col::Y(j) = col {
                y[*j] = st.xb[i].max(0.0);
            }
        }
        let primal = self.objective(&x);
        let dual: f64 = y.iter().zip(&self.rhs).map(|(a, b)| a * b).sum();
        let violation = self.max_violation(&x);
        Ok(LpSolution { x, y, primal, dual, violation, iterations: st.iterations })
    }

    /// Largest violation of the dual constraints `Aᵀy (=|≤) c` by `y`.
    pub fn dual_violation(&self, y: &[f64]) -> f64 {
        let mut aty = vec![0.0; self.n_vars()];
        for (row, &yj) in self.rows.iter().zip(y) {
            for &(i, a) in row {
                aty[i] += a * yj;
            }
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.n_vars() {
            let gap = aty[i] - self.cost[i];
            worst = worst.max(match self.kinds[i] {
                VarKind::Free => gap.abs(),
                VarKind::NonNeg => gap,
            });
        }
        worst
    }
}

/// Revised simplex state on the dual `min −bᵀy` subject to `Aᵀy + s = c`.
struct State {
    m: usize,
    binv: Vec<f64>,
    basis: Vec<Col>,
    // position in `basis` of each dual column, if basic
    y_pos: Vec<Option<usize>>,
    slack_pos: Vec<Option<usize>>,
    xb: Vec<f64>,
    pi: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
    degenerate_run: usize,
}

impl State {
    fn new(lp: &LinearProgram) -> State {
        let m = lp.n_vars();
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let basis: Vec<Col> = (0..m)
            .map(|i| match lp.kinds[i] {
                VarKind::Free => Col::Art(i),
                VarKind::NonNeg => Col::Slack(i),
            })
            .collect();
        let slack_pos = (0..m).map(|i| (lp.kinds[i] == VarKind::NonNeg).then_some(i)).collect();
        State {
            m,
            binv,
            basis,
            y_pos: vec![None; lp.rows.len()],
            slack_pos,
            xb: lp.cost.clone(),
            pi: vec![0.0; m],
            iterations: 0,
            since_refactor: 0,
            degenerate_run: 0,
        }
    }

    fn col_cost(lp: &LinearProgram, c: Col) -> f64 {
        match c {
            Col::Y(j) => -lp.rhs[j],
            _ => 0.0,
        }
    }

    fn update_pi(&mut self, lp: &LinearProgram) {
        let m = self.m;
        self.pi.iter_mut().for_each(|p| *p = 0.0);
        for (i, &col) in self.basis.iter().enumerate() {
            let cb = Self::col_cost(lp, col);
            if cb != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (p, b) in self.pi.iter_mut().zip(row) {
                    *p += cb * b;
                }
            }
        }
    }

    fn reduced_cost(&self, lp: &LinearProgram, c: Col) -> f64 {
        match c {
            Col::Y(j) => -lp.rhs[j] - lp.rows[j].iter().map(|&(i, a)| self.pi[i] * a).sum::<f64>(),
            Col::Slack(i) => -self.pi[i],
            Col::Art(_) => 0.0,
        }
    }

    fn column(&self, lp: &LinearProgram, c: Col) -> Vec<f64> {
        let m = self.m;
        let mut u = vec![0.0; m];
        match c {
            Col::Y(j) => {
                for &(i, a) in &lp.rows[j] {
                    for (k, uk) in u.iter_mut().enumerate() {
                        *uk += self.binv[k * m + i] * a;
                    }
                }
            }
            Col::Slack(i) | Col::Art(i) => {
                for (k, uk) in u.iter_mut().enumerate() {
                    *uk = self.binv[k * m + i];
                }
            }
        }
        u
    }

    fn choose_entering(&self, lp: &LinearProgram, bland: bool) -> Option<Col> {
        let y_cols = (0..lp.rows.len()).filter(|&j| self.y_pos[j].is_none()).map(Col::Y);
        let s_cols = (0..self.m)
            .filter(|&i| lp.kinds[i] == VarKind::NonNeg && self.slack_pos[i].is_none())
            .map(Col::Slack);
        let mut best: Option<(Col, f64)> = None;
        for c in y_cols.chain(s_cols) {
            let d = self.reduced_cost(lp, c);
            if d >= -COST_TOL {
                continue;
            }
            if bland {
                return Some(c);
            }
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((c, d));
            }
        }
        best.map(|b| b.0)
    }

    fn run(&mut self, lp: &LinearProgram) -> Result<()> {
        let max_iter = 50 * (self.m + lp.rows.len()) + 1000;
        self.update_pi(lp);
        loop {
            if self.iterations > max_iter {
                return Err(lp.fail(format!("iteration limit {max_iter} reached")));
            }
            let bland = self.degenerate_run > DEGENERATE_SWITCH;
            let Some(enter) = self.choose_entering(lp, bland) else {
                return Ok(());
            };
            let u = self.column(lp, enter);
            // ratio test; artificial rows block as soon as they would move
            let mut leave: Option<(usize, f64, f64)> = None;
            for (i, &ui) in u.iter().enumerate() {
                let ratio = match self.basis[i] {
                    Col::Art(_) if ui.abs() > PIVOT_TOL => 0.0,
                    _ if ui > PIVOT_TOL => self.xb[i].max(0.0) / ui,
                    _ => continue,
                };
                let better = match leave {
                    None => true,
                    Some((li, lr, lu)) => {
                        ratio < lr - 1e-12
                            || (ratio <= lr + 1e-12
                                && if bland { basis_key(self.basis[i]) < basis_key(self.basis[li]) } else { ui.abs() > lu })
                    }
                };
                if better {
                    leave = Some((i, ratio, ui.abs()));
                }
            }
            let Some((r, ratio, _)) = leave else {
                return Err(lp.fail("dual unbounded: the primal constraints are infeasible"));
            };
            if ratio <= 1e-14 {
                self.degenerate_run += 1;
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(r, enter, &u);
            self.iterations += 1;
            self.since_refactor += 1;
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor(lp)?;
            }
            self.update_pi(lp);
        }
    }

    fn pivot(&mut self, r: usize, enter: Col, u: &[f64]) {
        let m = self.m;
        let piv = u[r];
        let theta = self.xb[r] / piv;
        for i in 0..m {
            if i != r {
                self.xb[i] -= theta * u[i];
            }
        }
        self.xb[r] = theta;
        let (head, rest) = self.binv.split_at_mut(r * m);
        let (prow, tail) = rest.split_at_mut(m);
        for v in prow.iter_mut() {
            *v /= piv;
        }
        for (i, row) in head.chunks_mut(m).chain(tail.chunks_mut(m)).enumerate() {
            let i = if i < r { i } else { i + 1 };
            let f = u[i];
            if f != 0.0 {
                for (a, b) in row.iter_mut().zip(prow.iter()) {
                    *a -= f * b;
                }
            }
        }
        match self.basis[r] {
            Col::Y(j) => self.y_pos[j] = None,
            Col::Slack(i) => self.slack_pos[i] = None,
            Col::Art(_) => {}
        }
        match enter {
            Col::Y(j) => self.y_pos[j] = Some(r),
            Col::Slack(i) => self.slack_pos[i] = Some(r),
            Col::Art(_) => {}
        }
        self.basis[r] = enter;
    }

    /// Recomputes `B⁻¹` and the basic values from scratch.
    fn refactor(&mut self, lp: &LinearProgram) -> Result<()> {
        let m = self.m;
        // B column-major in a row-major buffer: b[i*m + k] = B[i][k]
        let mut b = vec![0.0; m * m];
        for (k, &col) in self.basis.iter().enumerate() {
            match col {
                Col::Y(j) => {
                    for &(i, a) in &lp.rows[j] {
                        b[i * m + k] += a;
                    }
                }
                Col::Slack(i) | Col::Art(i) => b[i * m + k] = 1.0,
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m)
                .max_by(|&x, &y| b[x * m + c].abs().total_cmp(&b[y * m + c].abs()))
                .expect("nonempty");
            if b[p * m + c].abs() < 1e-13 {
                return Err(lp.fail("basis matrix became singular"));
            }
            if p != c {
                for k in 0..m {
                    b.swap(p * m + k, c * m + k);
                    inv.swap(p * m + k, c * m + k);
                }
            }
            let d = b[c * m + c];
            for k in 0..m {
                b[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for i in 0..m {
                if i != c {
                    let f = b[i * m + c];
                    if f != 0.0 {
                        for k in 0..m {
                            b[i * m + k] -= f * b[c * m + k];
                            inv[i * m + k] -= f * inv[c * m + k];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        for i in 0..m {
            self.xb[i] = (0..m).map(|k| self.binv[i * m + k] * lp.cost[k]).sum();
        }
        self.since_refactor = 0;
        Ok(())
    }
}

fn basis_key(c: Col) -> (u8, usize) {
    match c {
        Col::Y(j) => (0, j),
        Col::Slack(i) => (1, i),
        Col::Art(i) => (2, i),
    }
}
