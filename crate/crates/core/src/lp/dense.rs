//! Dense-tableau bounded-variable primal simplex.
//!
//! Keeps the whole of B⁻¹A in memory and updates it on every pivot. Simple and
//! easy to audit, but each pivot costs O(rows × columns); it serves as the
//! reference implementation that the revised solver is tested against.

use crate::error::{Error, Result};

use super::problem::{LpProblem, LpSolution, LpStatus};
use super::standard::{status_only, Prepared, StandardForm, FEAS_TOL};

const PIVOT_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const DROP_TOL: f64 = 1e-13;
const DEGENERATE_LIMIT: usize = 30;

struct Tableau {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    upper: Vec<f64>,
    at_upper: Vec<bool>,
    banned: Vec<bool>,
    d: Vec<f64>,
    pivot_row: Vec<f64>,
    nonzeros: Vec<usize>,
    iterations: usize,
    max_iterations: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn entry(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    fn set_costs(&mut self, cost: &[f64]) {
        self.d.copy_from_slice(cost);
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            let row = &self.a[i * self.cols..(i + 1) * self.cols];
            for (dj, &aij) in self.d.iter_mut().zip(row) {
                *dj -= cb * aij;
            }
        }
        for i in 0..self.rows {
            self.d[self.basis[i]] = 0.0;
        }
    }

    fn choose_entering(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.cols {
            if self.is_basic[j] || self.banned[j] || self.upper[j] <= 0.0 {
                continue;
            }
            let dj = self.d[j];
            let dir = if !self.at_upper[j] && dj < -OPT_TOL {
                1.0
            } else if self.at_upper[j] && dj > OPT_TOL {
                -1.0
            } else {
                continue;
            };
            if bland {
                return Some((j, dir));
            }
            if dj.abs() > best_score {
                best_score = dj.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    fn run(&mut self) -> Result<Outcome> {
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            let Some((q, dir)) = self.choose_entering(bland) else {
                return Ok(Outcome::Optimal);
            };
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(Error::Invariant(format!(
                    "simplex exceeded {} iterations",
                    self.max_iterations
                )));
            }
            let mut step = self.upper[q];
            let mut leave: Option<usize> = None;
            let mut leave_mag = 0.0;
            for i in 0..self.rows {
                let aiq = self.entry(i, q);
                if aiq.abs() <= PIVOT_TOL {
                    continue;
                }
                let rate = -dir * aiq;
                let b = self.basis[i];
                let limit = if rate < 0.0 {
                    self.beta[i] / -rate
                } else if self.upper[b].is_finite() {
                    (self.upper[b] - self.beta[i]) / rate
                } else {
                    continue;
                }
                .max(0.0);
                let better = match leave {
                    _ if limit < step - 1e-12 => true,
                    Some(l) if limit <= step + 1e-12 => {
                        if bland {
                            b < self.basis[l]
                        } else {
                            aiq.abs() > leave_mag
                        }
                    }
                    _ => false,
                };
                if better {
                    step = limit;
                    leave = Some(i);
                    leave_mag = aiq.abs();
                }
            }
            if step.is_infinite() {
                return Ok(Outcome::Unbounded);
            }
            if step < 1e-11 {
                degenerate += 1;
                if degenerate > DEGENERATE_LIMIT {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }
            if step > 0.0 {
                for i in 0..self.rows {
                    let aiq = self.a[i * self.cols + q];
                    if aiq != 0.0 {
                        self.beta[i] -= dir * aiq * step;
                    }
                }
            }
            match leave {
                None => self.at_upper[q] = !self.at_upper[q],
                Some(r) => {
                    let start = if self.at_upper[q] { self.upper[q] } else { 0.0 };
                    let entering_value = start + dir * step;
                    let b = self.basis[r];
                    let rate = -dir * self.entry(r, q);
                    self.at_upper[b] = rate > 0.0;
                    self.is_basic[b] = false;
                    self.pivot(r, q);
                    self.beta[r] = entering_value;
                    self.basis[r] = q;
                    self.is_basic[q] = true;
                    self.at_upper[q] = false;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let cols = self.cols;
        let piv = self.a[r * cols + q];
        self.nonzeros.clear();
        for c in 0..cols {
            let mut v = self.a[r * cols + c] / piv;
            if v.abs() < DROP_TOL {
                v = 0.0;
            }
            self.pivot_row[c] = v;
            self.a[r * cols + c] = v;
            if v != 0.0 {
                self.nonzeros.push(c);
            }
        }
        self.pivot_row[q] = 1.0;
        self.a[r * cols + q] = 1.0;
        let dense = self.nonzeros.len() * 3 > cols;
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let row = &mut self.a[i * cols..(i + 1) * cols];
            let f = row[q];
            if f == 0.0 {
                continue;
            }
            if dense {
                for (x, &p) in row.iter_mut().zip(&self.pivot_row) {
                    let v = *x - f * p;
                    *x = if v.abs() < DROP_TOL { 0.0 } else { v };
                }
            } else {
                for &c in &self.nonzeros {
                    let v = row[c] - f * self.pivot_row[c];
                    row[c] = if v.abs() < DROP_TOL { 0.0 } else { v };
                }
            }
            row[q] = 0.0;
        }
        let f = self.d[q];
        if f != 0.0 {
            for &c in &self.nonzeros {
                self.d[c] -= f * self.pivot_row[c];
            }
        }
        self.d[q] = 0.0;
    }

    fn column_value(&self, j: usize) -> f64 {
        if self.is_basic[j] {
            0.0
        } else if self.at_upper[j] {
            self.upper[j]
        } else {
            0.0
        }
    }

    fn values(&self) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.cols).map(|j| self.column_value(j)).collect();
        for i in 0..self.rows {
            x[self.basis[i]] = self.beta[i];
        }
        x
    }
}

/// Solves `problem` with the dense tableau.
pub fn solve_lp_dense(problem: &LpProblem) -> Result<LpSolution> {
    let n = problem.num_vars();
    let sf = match StandardForm::prepare(problem)? {
        Prepared::Ready(sf) => sf,
        Prepared::Infeasible => return Ok(status_only(LpStatus::Infeasible, n)),
    };
    let (m, cols) = (sf.m, sf.ncols);
    let mut t = Tableau {
        rows: m,
        cols,
        a: vec![0.0; m * cols],
        beta: vec![0.0; m],
        basis: sf.basis.clone(),
        is_basic: vec![false; cols],
        upper: sf.upper.clone(),
        at_upper: vec![false; cols],
        banned: vec![false; cols],
        d: vec![0.0; cols],
        pivot_row: vec![0.0; cols],
        nonzeros: Vec::with_capacity(cols),
        iterations: 0,
        max_iterations: 50 * (m + cols) + 1000,
    };
    for j in 0..cols {
        let (rows, vals) = sf.column(j);
        for (&i, &a) in rows.iter().zip(vals) {
            t.a[i * cols + j] = a;
        }
    }
    for i in 0..m {
        let bcol = sf.basis[i];
        let scale = t.a[i * cols + bcol];
        for x in &mut t.a[i * cols..(i + 1) * cols] {
            *x /= scale;
        }
        t.beta[i] = sf.b[i] / scale;
        t.is_basic[bcol] = true;
    }

    if !sf.artificial.is_empty() {
        let mut cost = vec![0.0; cols];
        for &c in &sf.artificial {
            cost[c] = 1.0;
        }
        t.set_costs(&cost);
        t.run()?;
        let infeasibility: f64 = (0..m)
            .filter(|&i| sf.is_artificial(t.basis[i]))
            .map(|i| t.beta[i])
            .sum();
        if infeasibility > FEAS_TOL * sf.rhs_scale() {
            return Ok(status_only(LpStatus::Infeasible, n));
        }
        for &c in &sf.artificial {
            t.banned[c] = true;
            t.upper[c] = 0.0;
        }
        for i in 0..m {
            if sf.is_artificial(t.basis[i]) {
                t.beta[i] = 0.0;
            }
        }
    }

    t.set_costs(&sf.cost);
    if let Outcome::Unbounded = t.run()? {
        return Ok(status_only(LpStatus::Unbounded, n));
    }
    Ok(sf.recover(problem, &t.values()))
}
