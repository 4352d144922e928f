//! Bounded-variable primal simplex.
//!
//! Solves `min cᵀx  s.t.  A x = b,  l ≤ x ≤ u` with finite bounds. Phase 1
//! starts from an all-artificial basis; once a feasible basis exists it is
//! kept, so [`Simplex::minimize`] can be called repeatedly with different
//! objectives (support functions in many directions share one phase 1).
//!
//! Pricing is Dantzig's rule; after a run of degenerate pivots the entering
//! column is the lowest-index improving one (Bland) until the objective moves
//! again. The leaving row always comes from a Harris two-pass ratio test with
//! a relative pivot threshold. The basis inverse is dense and is recomputed
//! from scratch every `max(64, m)` pivots and whenever a reported point fails
//! its residual check.

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::linalg::Mat;

/// Primal feasibility tolerance, relative to the problem scale.
pub const FEAS_TOL: f64 = 1e-8;
const OPT_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-7;
const PIVOT_REL: f64 = 1e-6;
const HARRIS_TOL: f64 = 1e-10;
const REINVERT_MIN: usize = 64;
const DEGENERATE_RUN: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub a_eq: Mat,
    pub b_eq: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Optimal objective value; `NaN` when infeasible.
    pub value: f64,
    /// Optimizer; empty when infeasible.
    pub point: Vec<f64>,
}

impl LpResult {
    pub fn infeasible() -> Self {
        Self {
            status: LpStatus::Infeasible,
            value: f64::NAN,
            point: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub fn solve_lp(p: &LinearProgram) -> Result<LpResult> {
    check_dim("LP objective length", p.a_eq.ncols(), p.objective.len())?;
    let mut s = Simplex::new(&p.a_eq, &p.b_eq, &p.lower, &p.upper)?;
    if !s.find_feasible()? {
        return Ok(LpResult::infeasible());
    }
    s.minimize(&p.objective)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

enum Outcome {
    Optimal,
    Progress,
}

/// Warm-startable simplex state over a fixed constraint system.
#[derive(Debug, Clone)]
pub struct Simplex {
    n: usize,
    m: usize,
    /// Sparse columns of `[A | I]` after row sign normalization.
    cols: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    /// Row-major `m × m` basis inverse.
    binv: Vec<f64>,
    banned: Vec<bool>,
    scale: f64,
    since_reinvert: usize,
    feasible: Option<bool>,
}

impl Simplex {
    pub fn new(a: &Mat, b: &[f64], lower: &[f64], upper: &[f64]) -> Result<Self> {
        let (m, n) = a.shape();
        check_dim("LP right-hand side length", m, b.len())?;
        check_dim("LP lower bound length", n, lower.len())?;
        check_dim("LP upper bound length", n, upper.len())?;
        for j in 0..n {
            if !lower[j].is_finite() || !upper[j].is_finite() {
                return Err(Error::InvalidInput(format!("LP bound {j} is not finite")));
            }
            if lower[j] > upper[j] {
                return Err(Error::InvalidInput(format!(
                    "LP bounds of variable {j} are inverted: {} > {}",
                    lower[j], upper[j]
                )));
            }
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("LP data contains non-finite values".into()));
        }

        let mut x: Vec<f64> = lower.to_vec();
        let mut residual = b.to_vec();
        for j in 0..n {
            for i in 0..m {
                residual[i] -= a[(i, j)] * x[j];
            }
        }

        // Crash: a row with a singleton column that can absorb the row's
        // residual within its bounds starts with that column basic.
        let mut singleton: Vec<Option<usize>> = vec![None; n];
        for j in 0..n {
            let mut rows = (0..m).filter(|&i| a[(i, j)] != 0.0);
            if let (Some(i), None) = (rows.next(), rows.next()) {
                singleton[j] = Some(i);
            }
        }
        let mut crashed: Vec<Option<usize>> = vec![None; m];
        for j in 0..n {
            let Some(i) = singleton[j] else { continue };
            if crashed[i].is_some() {
                continue;
            }
            let v = lower[j] + residual[i] / a[(i, j)];
            if v >= lower[j] && v <= upper[j] {
                x[j] = v;
                residual[i] = 0.0;
                crashed[i] = Some(j);
            }
        }

        let sign: Vec<f64> = residual
            .iter()
            .map(|r| if *r < 0.0 { -1.0 } else { 1.0 })
            .collect();

        let mut cols = Vec::with_capacity(n + m);
        for j in 0..n {
            let col: Vec<(usize, f64)> = (0..m)
                .filter_map(|i| {
                    let v = a[(i, j)];
                    (v != 0.0).then_some((i, v * sign[i]))
                })
                .collect();
            cols.push(col);
        }
        for i in 0..m {
            cols.push(vec![(i, 1.0)]);
        }
        let rhs: Vec<f64> = b.iter().zip(&sign).map(|(v, s)| v * s).collect();

        let mut lo = lower.to_vec();
        let mut up = upper.to_vec();
        lo.extend(std::iter::repeat_n(0.0, m));
        up.extend(std::iter::repeat_n(f64::INFINITY, m));
        x.extend(residual.iter().map(|r| r.abs()));

        let mut state = vec![VarState::AtLower; n + m];
        let mut banned = vec![false; n + m];
        let mut basis = Vec::with_capacity(m);
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            let bv = match crashed[i] {
                Some(j) => {
                    banned[n + i] = true;
                    binv[i * m + i] = 1.0 / (a[(i, j)] * sign[i]);
                    j
                }
                None => {
                    binv[i * m + i] = 1.0;
                    n + i
                }
            };
            state[bv] = VarState::Basic(i);
            basis.push(bv);
        }
        let a_scale = (0..m)
            .map(|i| (0..n).map(|j| a[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let b_scale = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));

        Ok(Self {
            n,
            m,
            cols,
            rhs,
            lower: lo,
            upper: up,
            x,
            state,
            basis,
            binv,
            banned,
            scale: 1.0 + a_scale + b_scale,
            since_reinvert: 0,
            feasible: None,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.m
    }

    /// Phase 1. Returns whether the constraint system is feasible.
    pub fn find_feasible(&mut self) -> Result<bool> {
        if let Some(f) = self.feasible {
            return Ok(f);
        }
        let mut cost = vec![0.0; self.n + self.m];
        for c in cost.iter_mut().skip(self.n) {
            *c = 1.0;
        }
        self.optimize(&cost)?;
        self.refresh_basic_values();
        let mut infeasibility = self.artificial_total();
        if infeasibility > FEAS_TOL * self.scale && infeasibility < 1e4 * FEAS_TOL * self.scale {
            // Borderline: decide on a fresh factorization.
            self.reinvert()?;
            self.optimize(&cost)?;
            self.refresh_basic_values();
            infeasibility = self.artificial_total();
        }
        if infeasibility > FEAS_TOL * self.scale {
            self.feasible = Some(false);
            return Ok(false);
        }
        self.drive_out_artificials()?;
        for j in self.n..self.n + self.m {
            self.banned[j] = true;
            self.upper[j] = 0.0;
            if !matches!(self.state[j], VarState::Basic(_)) {
                self.x[j] = 0.0;
                self.state[j] = VarState::AtLower;
            }
        }
        self.refresh_basic_values();
        self.feasible = Some(true);
        Ok(true)
    }

    fn artificial_total(&self) -> f64 {
        (self.n..self.n + self.m).map(|j| self.x[j].abs()).sum()
    }

    /// Phase 2 from the current feasible basis.
    pub fn minimize(&mut self, objective: &[f64]) -> Result<LpResult> {
        check_dim("LP objective length", self.n, objective.len())?;
        if !self.find_feasible()? {
            return Ok(LpResult::infeasible());
        }
        if objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("objective contains non-finite values".into()));
        }
        let mut cost = objective.to_vec();
        cost.extend(std::iter::repeat_n(0.0, self.m));
        self.optimize(&cost)?;
        self.refresh_basic_values();
        let point = match self.certified_point() {
            Ok(p) => p,
            Err(_) => {
                self.reinvert()?;
                self.optimize(&cost)?;
                self.refresh_basic_values();
                self.certified_point()?
            }
        };
        let value = point.iter().zip(objective).map(|(x, c)| x * c).sum();
        Ok(LpResult {
            status: LpStatus::Optimal,
            value,
            point,
        })
    }

    /// Maximizes `objective` and returns the optimal value and point.
    pub fn maximize(&mut self, objective: &[f64]) -> Result<LpResult> {
        let neg: Vec<f64> = objective.iter().map(|v| -v).collect();
        let mut r = self.minimize(&neg)?;
        r.value = -r.value;
        Ok(r)
    }

    /// Current structural values, clipped to their bounds and checked
    /// against the equality system.
    fn certified_point(&self) -> Result<Vec<f64>> {
        let point: Vec<f64> = (0..self.n)
            .map(|j| self.x[j].clamp(self.lower[j], self.upper[j]))
            .collect();
        let mut residual = self.rhs.clone();
        for (j, v) in point.iter().enumerate() {
            for &(i, a) in &self.cols[j] {
                residual[i] -= a * v;
            }
        }
        let worst = residual.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
        if worst > FEAS_TOL * self.scale {
            return Err(Error::NumericalFailure(format!(
                "optimal point violates equalities by {worst:e}"
            )));
        }
        Ok(point)
    }

    fn optimize(&mut self, cost: &[f64]) -> Result<()> {
        let mut degenerate = 0usize;
        let max_iter = 50 * (self.n + self.m) + 1000;
        for _ in 0..max_iter {
            let bland = degenerate >= DEGENERATE_RUN;
            match self.iterate(cost, bland)? {
                (Outcome::Optimal, _) => return Ok(()),
                (Outcome::Progress, step) => {
                    if step > 1e-11 {
                        degenerate = 0;
                    } else {
                        degenerate += 1;
                    }
                }
            }
        }
        Err(Error::NumericalFailure("iteration limit reached".into()))
    }

    fn iterate(&mut self, cost: &[f64], bland: bool) -> Result<(Outcome, f64)> {
        let m = self.m;
        // Simplex multipliers y = c_Bᵀ B⁻¹.
        let mut y = vec![0.0; m];
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = cost[bv];
            if cb != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yk, r) in y.iter_mut().zip(row) {
                    *yk += cb * r;
                }
            }
        }

        let mut entering: Option<(usize, f64)> = None;
        for j in 0..self.n + self.m {
            if self.banned[j] || self.lower[j] == self.upper[j] {
                continue;
            }
            let st = self.state[j];
            if matches!(st, VarState::Basic(_)) {
                continue;
            }
            let d = cost[j] - self.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>();
            let eligible = match st {
                VarState::AtLower => d < -OPT_TOL,
                VarState::AtUpper => d > OPT_TOL,
                VarState::Basic(_) => false,
            };
            if !eligible {
                continue;
            }
            if bland {
                entering = Some((j, d));
                break;
            }
            if entering.is_none_or(|(_, best)| d.abs() > best.abs()) {
                entering = Some((j, d));
            }
        }
        let Some((q, _)) = entering else {
            return Ok((Outcome::Optimal, 0.0));
        };

        let alpha = self.ftran(q);
        let sigma = if self.state[q] == VarState::AtLower { 1.0 } else { -1.0 };
        let own_range = self.upper[q] - self.lower[q];

        // Basic variable i moves by -sigma * alpha_i * t.
        let limit = |i: usize, tol: f64| -> f64 {
            let rate = -sigma * alpha[i];
            let bv = self.basis[i];
            if rate < 0.0 {
                (self.x[bv] - self.lower[bv] + tol).max(0.0) / -rate
            } else if self.upper[bv].is_finite() {
                (self.upper[bv] - self.x[bv] + tol).max(0.0) / rate
            } else {
                f64::INFINITY
            }
        };

        // Harris two-pass ratio test over rows with a usable pivot.
        let alpha_max = alpha.iter().fold(0.0f64, |acc, a| acc.max(a.abs()));
        let usable = PIVOT_TOL.max(PIVOT_REL * alpha_max);
        let mut leave: Option<usize> = None;
        let mut step = own_range;
        let mut relaxed = f64::INFINITY;
        for i in 0..m {
            if alpha[i].abs() > usable {
                relaxed = relaxed.min(limit(i, HARRIS_TOL * self.scale));
            }
        }
        if relaxed < own_range {
            let mut best_pivot = 0.0;
            for i in 0..m {
                if alpha[i].abs() > usable && limit(i, 0.0) <= relaxed && alpha[i].abs() > best_pivot {
                    best_pivot = alpha[i].abs();
                    leave = Some(i);
                }
            }
            if let Some(r) = leave {
                step = limit(r, 0.0);
            }
        }
        if !step.is_finite() {
            return Err(Error::NumericalFailure("unbounded ray in bounded LP".into()));
        }

        // Primal update.
        self.x[q] += sigma * step;
        for i in 0..m {
            if alpha[i] != 0.0 {
                let bv = self.basis[i];
                self.x[bv] -= sigma * step * alpha[i];
            }
        }

        match leave {
            None => {
                // Bound flip of the entering variable.
                if sigma > 0.0 {
                    self.x[q] = self.upper[q];
                    self.state[q] = VarState::AtUpper;
                } else {
                    self.x[q] = self.lower[q];
                    self.state[q] = VarState::AtLower;
                }
            }
            Some(r) => {
                let out = self.basis[r];
                let rate = -sigma * alpha[r];
                if rate < 0.0 {
                    self.x[out] = self.lower[out];
                    self.state[out] = VarState::AtLower;
                } else {
                    self.x[out] = self.upper[out];
                    self.state[out] = VarState::AtUpper;
                }
                self.basis[r] = q;
                self.state[q] = VarState::Basic(r);
                self.pivot_inverse(r, &alpha);
                self.since_reinvert += 1;
                if self.since_reinvert >= REINVERT_MIN.max(m) {
                    self.reinvert()?;
                }
            }
        }
        Ok((Outcome::Progress, step))
    }

    /// `B⁻¹ A_q`.
    fn ftran(&self, q: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        for &(k, a) in &self.cols[q] {
            for i in 0..m {
                alpha[i] += self.binv[i * m + k] * a;
            }
        }
        alpha
    }

    fn pivot_inverse(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let pivot = alpha[r];
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (prow, after) = rest.split_at_mut(m);
        for v in prow.iter_mut() {
            *v /= pivot;
        }
        for (i, row) in before.chunks_mut(m).enumerate() {
            let f = alpha[i];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
            }
        }
        for (off, row) in after.chunks_mut(m).enumerate() {
            let f = alpha[r + 1 + off];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
            }
        }
    }

    /// Recomputes `B⁻¹` and the basic values from the nonbasic ones.
    fn reinvert(&mut self) -> Result<()> {
        let m = self.m;
        self.since_reinvert = 0;
        if m == 0 {
            return Ok(());
        }
        let mut b = DMatrix::<f64>::zeros(m, m);
        for (r, &bv) in self.basis.iter().enumerate() {
            for &(i, a) in &self.cols[bv] {
                b[(i, r)] = a;
            }
        }
        let inv = b
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("singular basis".into()))?;
        for i in 0..m {
            for k in 0..m {
                self.binv[i * m + k] = inv[(i, k)];
            }
        }
        self.refresh_basic_values();
        Ok(())
    }

    /// Recomputes basic values as `B⁻¹ (b - N x_N)`.
    fn refresh_basic_values(&mut self) {
        let m = self.m;
        let mut residual = self.rhs.clone();
        for j in 0..self.n + self.m {
            if matches!(self.state[j], VarState::Basic(_)) || self.x[j] == 0.0 {
                continue;
            }
            for &(i, a) in &self.cols[j] {
                residual[i] -= a * self.x[j];
            }
        }
        for i in 0..m {
            let v: f64 = (0..m).map(|k| self.binv[i * m + k] * residual[k]).sum();
            self.x[self.basis[i]] = v;
        }
    }

    /// Pivots basic artificials (at value zero) out of the basis where a
    /// structural column with a usable pivot exists in their row.
    fn drive_out_artificials(&mut self) -> Result<()> {
        let m = self.m;
        for r in 0..m {
            if self.basis[r] < self.n {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.n {
                if matches!(self.state[j], VarState::Basic(_)) {
                    continue;
                }
                let rho: f64 = self.cols[j]
                    .iter()
                    .map(|&(k, a)| self.binv[r * m + k] * a)
                    .sum();
                if rho.abs() > 1e-7 && best.is_none_or(|(_, b)| rho.abs() > b.abs()) {
                    best = Some((j, rho));
                }
            }
            if let Some((q, _)) = best {
                let alpha = self.ftran(q);
                let out = self.basis[r];
                self.x[out] = 0.0;
                self.state[out] = VarState::AtLower;
                self.basis[r] = q;
                self.state[q] = VarState::Basic(r);
                self.pivot_inverse(r, &alpha);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(obj: &[f64], a: &[&[f64]], b: &[f64], lo: &[f64], hi: &[f64]) -> LinearProgram {
        let n = obj.len();
        let rows: Vec<f64> = a.iter().flat_map(|r| r.iter().copied()).collect();
        LinearProgram {
            objective: obj.to_vec(),
            a_eq: Mat::from_row_slice(a.len(), n, &rows),
            b_eq: b.to_vec(),
            lower: lo.to_vec(),
            upper: hi.to_vec(),
        }
    }

    #[test]
    fn box_only() {
        let r = solve_lp(&lp(&[1.0], &[], &[], &[0.0], &[1.0])).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn one_equality() {
        let r = solve_lp(&lp(&[1.0, 0.0], &[&[1.0, 1.0]], &[1.0], &[0.0, 0.0], &[1.0, 1.0])).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(r.value.abs() < 1e-12);
        assert!((r.point[0]).abs() < 1e-12 && (r.point[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_system() {
        let r = solve_lp(&lp(&[0.0], &[&[1.0]], &[5.0], &[-1.0], &[1.0])).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }

    #[test]
    fn redundant_rows() {
        let r = solve_lp(&lp(
            &[-1.0, -2.0],
            &[&[1.0, 1.0], &[2.0, 2.0]],
            &[1.0, 2.0],
            &[0.0, 0.0],
            &[1.0, 1.0],
        ))
        .unwrap();
        assert!((r.value + 2.0).abs() < 1e-9);
    }

    #[test]
    fn warm_start_many_objectives() {
        let a = Mat::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let mut s = Simplex::new(&a, &[1.0], &[0.0; 3], &[1.0; 3]).unwrap();
        assert!(s.find_feasible().unwrap());
        for k in 0..3 {
            let mut c = vec![0.0; 3];
            c[k] = 1.0;
            let r = s.maximize(&c).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(solve_lp(&lp(&[0.0], &[], &[], &[1.0], &[0.0])).is_err());
        assert!(solve_lp(&lp(&[0.0], &[], &[], &[0.0], &[f64::INFINITY])).is_err());
    }

    #[test]
    fn deterministic() {
        let p = lp(
            &[1.0, -1.0, 0.5],
            &[&[1.0, 2.0, -1.0], &[0.5, -1.0, 1.0]],
            &[0.3, 0.1],
            &[-1.0; 3],
            &[1.0; 3],
        );
        let a = solve_lp(&p).unwrap();
        let b = solve_lp(&p).unwrap();
        assert_eq!(a, b);
    }
}
