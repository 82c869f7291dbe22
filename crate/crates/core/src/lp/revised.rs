//! Revised bounded-variable primal simplex.
//!
//! The basis is factored by peeling off column singletons and then row
//! singletons (both triangular); only the remaining nucleus is factored as a
//! dense LU. Between refactorizations pivots are recorded as eta vectors.
//! LPs built from graphs have mostly singleton basis columns (the slack-like
//! difference variables), so the nucleus stays small and a pivot costs little
//! more than one pass over the nonzeros.
//!
//! Pricing is Dantzig's largest reduced cost. A run of degenerate pivots
//! shifts every basic value off its bounds by a small random amount (the
//! right-hand side absorbs the shift, and is restored before the final
//! refactorization); if stalling persists after a few rounds of growing
//! shifts the solver switches to Bland's lowest-index rule until progress
//! resumes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::problem::{LpProblem, LpSolution, LpStatus};
use super::standard::{status_only, Prepared, StandardForm, FEAS_TOL};

const PIVOT_TOL: f64 = 1e-7;
const OPT_TOL: f64 = 1e-9;
const DEGENERATE_LIMIT: usize = 30;
const REFACTOR_EVERY: usize = 100;
const SINGULAR_TOL: f64 = 1e-11;
const DROP_TOL: f64 = 1e-13;
const PERTURBATION: f64 = 1e-9;
const PERTURBATION_SEED: u64 = 0x5eed;
const MAX_SHIFT_ROUNDS: u32 = 6;

struct Factor {
    /// Column singletons in elimination order: (row, basis position, pivot).
    cs: Vec<(usize, usize, f64)>,
    /// Row singletons in elimination order.
    rs: Vec<(usize, usize, f64)>,
    nuc_rows: Vec<usize>,
    nuc_pos: Vec<usize>,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Factor {
    fn new(sf: &StandardForm, basis: &[usize]) -> Result<Self> {
        let m = sf.m;
        let mut row_active = vec![true; m];
        let mut pos_active = vec![true; m];
        let mut col_count = vec![0usize; m];
        let mut row_count = vec![0usize; m];
        let mut row_pos: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (p, &j) in basis.iter().enumerate() {
            let (rows, _) = sf.column(j);
            col_count[p] = rows.len();
            for &i in rows {
                row_count[i] += 1;
                row_pos[i].push(p);
            }
        }

        let mut cs = Vec::new();
        let mut stack: Vec<usize> = (0..m).filter(|&p| col_count[p] == 1).collect();
        while let Some(p) = stack.pop() {
            if !pos_active[p] || col_count[p] != 1 {
                continue;
            }
            let (rows, vals) = sf.column(basis[p]);
            let Some((i, v)) = rows
                .iter()
                .zip(vals)
                .find(|(&i, _)| row_active[i])
                .map(|(&i, &v)| (i, v))
            else {
                continue;
            };
            if v.abs() < SINGULAR_TOL {
                continue;
            }
            pos_active[p] = false;
            row_active[i] = false;
            cs.push((i, p, v));
            for &p2 in &row_pos[i] {
                if pos_active[p2] {
                    col_count[p2] -= 1;
                    if col_count[p2] == 1 {
                        stack.push(p2);
                    }
                }
            }
            for &i2 in rows {
                if row_active[i2] {
                    row_count[i2] -= 1;
                }
            }
        }

        let mut rs = Vec::new();
        let mut stack: Vec<usize> = (0..m)
            .filter(|&i| row_active[i] && row_count[i] == 1)
            .collect();
        while let Some(i) = stack.pop() {
            if !row_active[i] || row_count[i] != 1 {
                continue;
            }
            let p = row_pos[i].iter().copied().find(|&p| pos_active[p]).unwrap();
            let (rows, vals) = sf.column(basis[p]);
            let v = rows
                .iter()
                .zip(vals)
                .find(|(&r, _)| r == i)
                .map(|(_, &v)| v)
                .unwrap();
            if v.abs() < SINGULAR_TOL {
                continue;
            }
            row_active[i] = false;
            pos_active[p] = false;
            rs.push((i, p, v));
            for &i2 in rows {
                if row_active[i2] {
                    row_count[i2] -= 1;
                    if row_count[i2] == 1 {
                        stack.push(i2);
                    }
                }
            }
        }

        let nuc_rows: Vec<usize> = (0..m).filter(|&i| row_active[i]).collect();
        let nuc_pos: Vec<usize> = (0..m).filter(|&p| pos_active[p]).collect();
        let s = nuc_rows.len();
        let mut local = vec![usize::MAX; m];
        for (a, &i) in nuc_rows.iter().enumerate() {
            local[i] = a;
        }
        let mut lu = vec![0.0; s * s];
        for (b, &p) in nuc_pos.iter().enumerate() {
            let (rows, vals) = sf.column(basis[p]);
            for (&i, &v) in rows.iter().zip(vals) {
                if local[i] != usize::MAX {
                    lu[local[i] * s + b] = v;
                }
            }
        }
        let mut perm: Vec<usize> = (0..s).collect();
        for c in 0..s {
            let (best, mag) = (c..s)
                .map(|r| (r, lu[r * s + c].abs()))
                .fold((c, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if mag < SINGULAR_TOL {
                return Err(Error::Invariant("singular simplex basis".into()));
            }
            if best != c {
                for x in 0..s {
                    lu.swap(c * s + x, best * s + x);
                }
                perm.swap(c, best);
            }
            let piv = lu[c * s + c];
            for r in c + 1..s {
                let f = lu[r * s + c] / piv;
                if f == 0.0 {
                    continue;
                }
                lu[r * s + c] = f;
                for x in c + 1..s {
                    lu[r * s + x] -= f * lu[c * s + x];
                }
            }
        }
        Ok(Self {
            cs,
            rs,
            nuc_rows,
            nuc_pos,
            lu,
            perm,
        })
    }

    /// Solves B x = a; `a` is indexed by row and is consumed as scratch.
    fn ftran(&self, sf: &StandardForm, basis: &[usize], a: &mut [f64], x: &mut [f64]) {
        let subtract = |a: &mut [f64], p: usize, xp: f64| {
            if xp != 0.0 {
                let (rows, vals) = sf.column(basis[p]);
                for (&i, &v) in rows.iter().zip(vals) {
                    a[i] -= v * xp;
                }
            }
        };
        for &(i, p, piv) in &self.rs {
            x[p] = a[i] / piv;
            subtract(a, p, x[p]);
        }
        let s = self.nuc_rows.len();
        if s > 0 {
            let mut z: Vec<f64> = self.perm.iter().map(|&r| a[self.nuc_rows[r]]).collect();
            for r in 0..s {
                let mut acc = z[r];
                for c in 0..r {
                    acc -= self.lu[r * s + c] * z[c];
                }
                z[r] = acc;
            }
            for r in (0..s).rev() {
                let mut acc = z[r];
                for c in r + 1..s {
                    acc -= self.lu[r * s + c] * z[c];
                }
                z[r] = acc / self.lu[r * s + r];
            }
            for (b, &p) in self.nuc_pos.iter().enumerate() {
                x[p] = z[b];
                subtract(a, p, z[b]);
            }
        }
        for &(i, p, piv) in self.cs.iter().rev() {
            x[p] = a[i] / piv;
            subtract(a, p, x[p]);
        }
    }

    /// Solves yᵀ B = cᵀ; `c` is indexed by basis position.
    fn btran(&self, sf: &StandardForm, basis: &[usize], c: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        let residual = |y: &[f64], p: usize, skip: usize| {
            let (rows, vals) = sf.column(basis[p]);
            let mut acc = c[p];
            for (&i, &v) in rows.iter().zip(vals) {
                if i != skip {
                    acc -= v * y[i];
                }
            }
            acc
        };
        for &(i, p, piv) in &self.cs {
            y[i] = residual(y, p, i) / piv;
        }
        let s = self.nuc_rows.len();
        if s > 0 {
            let mut w: Vec<f64> = self
                .nuc_pos
                .iter()
                .map(|&p| residual(y, p, usize::MAX))
                .collect();
            for r in 0..s {
                let mut acc = w[r];
                for k in 0..r {
                    acc -= self.lu[k * s + r] * w[k];
                }
                w[r] = acc / self.lu[r * s + r];
            }
            for r in (0..s).rev() {
                let mut acc = w[r];
                for k in r + 1..s {
                    acc -= self.lu[k * s + r] * w[k];
                }
                w[r] = acc;
            }
            for (r, &orig) in self.perm.iter().enumerate() {
                y[self.nuc_rows[orig]] = w[r];
            }
        }
        for &(i, p, piv) in self.rs.iter().rev() {
            y[i] = residual(y, p, i) / piv;
        }
    }
}

struct Eta {
    pos: usize,
    pivot: f64,
    entries: Vec<(usize, f64)>,
}

struct Revised<'a> {
    sf: &'a StandardForm,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    upper: Vec<f64>,
    at_upper: Vec<bool>,
    banned: Vec<bool>,
    beta: Vec<f64>,
    factor: Factor,
    factor_basis: Vec<usize>,
    etas: Vec<Eta>,
    iterations: usize,
    max_iterations: usize,
    scratch: Vec<f64>,
    rhs: Vec<f64>,
    rng: ChaCha8Rng,
    shift_rounds: u32,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl<'a> Revised<'a> {
    fn new(sf: &'a StandardForm) -> Result<Self> {
        let basis = sf.basis.clone();
        let mut is_basic = vec![false; sf.ncols];
        for &j in &basis {
            is_basic[j] = true;
        }
        let factor = Factor::new(sf, &basis)?;
        let mut rng = ChaCha8Rng::seed_from_u64(PERTURBATION_SEED);
        let rhs = (0..sf.m)
            .map(|i| {
                let j = basis[i];
                let (rows, vals) = sf.column(j);
                let a = rows.iter().zip(vals).find(|(&r, _)| r == i).map_or(1.0, |(_, &v)| v);
                let size = PERTURBATION * (1.0 + sf.b[i].abs()) * rng.gen_range(0.5..1.0);
                sf.b[i] + size.copysign(a)
            })
            .collect();
        let mut s = Self {
            sf,
            basis: basis.clone(),
            is_basic,
            upper: sf.upper.clone(),
            at_upper: vec![false; sf.ncols],
            banned: vec![false; sf.ncols],
            beta: vec![0.0; sf.m],
            factor,
            factor_basis: basis.clone(),
            etas: Vec::new(),
            iterations: 0,
            max_iterations: 50 * (sf.m + sf.ncols) + 1000,
            scratch: vec![0.0; sf.m],
            rhs,
            rng,
            shift_rounds: 0,
        };
        s.recompute_beta();
        Ok(s)
    }

    fn ftran(&mut self, mut a: Vec<f64>) -> Vec<f64> {
        let mut x = vec![0.0; self.sf.m];
        self.factor.ftran(self.sf, &self.factor_basis, &mut a, &mut x);
        for eta in &self.etas {
            let xr = x[eta.pos] / eta.pivot;
            x[eta.pos] = xr;
            if xr != 0.0 {
                for &(i, v) in &eta.entries {
                    x[i] -= v * xr;
                }
            }
        }
        x
    }

    fn btran(&mut self, mut c: Vec<f64>) -> Vec<f64> {
        for eta in self.etas.iter().rev() {
            let mut acc = c[eta.pos];
            for &(i, v) in &eta.entries {
                acc -= v * c[i];
            }
            c[eta.pos] = acc / eta.pivot;
        }
        let mut y = std::mem::take(&mut self.scratch);
        self.factor.btran(self.sf, &self.factor_basis, &c, &mut y);
        let out = y.clone();
        self.scratch = y;
        out
    }

    fn refactor(&mut self) -> Result<()> {
        self.factor = Factor::new(self.sf, &self.basis)?;
        self.factor_basis = self.basis.clone();
        self.etas.clear();
        self.recompute_beta();
        Ok(())
    }

    fn recompute_beta(&mut self) {
        let mut rhs = self.rhs.clone();
        for j in 0..self.sf.ncols {
            if !self.is_basic[j] && self.at_upper[j] {
                let (rows, vals) = self.sf.column(j);
                for (&i, &v) in rows.iter().zip(vals) {
                    rhs[i] -= v * self.upper[j];
                }
            }
        }
        self.beta = self.ftran(rhs);
    }

    /// Moves each basic value away from its nearer bound by a random amount
    /// of relative size `scale`, keeping B·x_B equal to the shifted rhs.
    fn shift_basic(&mut self, scale: f64) {
        for i in 0..self.sf.m {
            let j = self.basis[i];
            let up = self.upper[j];
            if up <= 0.0 {
                continue;
            }
            let mut shift = scale * (1.0 + self.beta[i].abs()) * self.rng.gen_range(0.5..1.0);
            if up.is_finite() {
                shift = shift.min(0.25 * up);
                if up - self.beta[i] < self.beta[i] {
                    shift = -shift;
                }
            }
            self.beta[i] += shift;
            let (rows, vals) = self.sf.column(j);
            for (&r, &v) in rows.iter().zip(vals) {
                self.rhs[r] += v * shift;
            }
        }
    }

    fn column_dense(&self, j: usize) -> Vec<f64> {
        let mut a = vec![0.0; self.sf.m];
        let (rows, vals) = self.sf.column(j);
        for (&i, &v) in rows.iter().zip(vals) {
            a[i] = v;
        }
        a
    }

    fn run(&mut self, cost: &[f64]) -> Result<Outcome> {
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            let cb: Vec<f64> = self.basis.iter().map(|&j| cost[j]).collect();
            let y = self.btran(cb);
            let mut entering: Option<(usize, f64)> = None;
            let mut best = 0.0;
            for j in 0..self.sf.ncols {
                if self.is_basic[j] || self.banned[j] || self.upper[j] <= 0.0 {
                    continue;
                }
                let (rows, vals) = self.sf.column(j);
                let mut dj = cost[j];
                for (&i, &v) in rows.iter().zip(vals) {
                    dj -= v * y[i];
                }
                let dir = if !self.at_upper[j] && dj < -OPT_TOL {
                    1.0
                } else if self.at_upper[j] && dj > OPT_TOL {
                    -1.0
                } else {
                    continue;
                };
                if bland {
                    entering = Some((j, dir));
                    break;
                }
                if dj.abs() > best {
                    best = dj.abs();
                    entering = Some((j, dir));
                }
            }
            let Some((q, dir)) = entering else {
                return Ok(Outcome::Optimal);
            };
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(Error::Invariant(format!(
                    "simplex exceeded {} iterations",
                    self.max_iterations
                )));
            }
            let alpha = self.ftran(self.column_dense(q));

            let mut step = self.upper[q];
            let mut leave: Option<usize> = None;
            let mut leave_mag = 0.0;
            for (i, &aiq) in alpha.iter().enumerate() {
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
            if step < 1e-13 {
                degenerate += 1;
                if degenerate > DEGENERATE_LIMIT && !bland {
                    if self.shift_rounds < MAX_SHIFT_ROUNDS {
                        self.shift_basic(PERTURBATION * 4f64.powi(self.shift_rounds as i32));
                        self.shift_rounds += 1;
                        degenerate = 0;
                    } else {
                        bland = true;
                    }
                }
            } else {
                degenerate = 0;
                bland = false;
            }
            if step > 0.0 {
                for (b, &a) in self.beta.iter_mut().zip(&alpha) {
                    if a != 0.0 {
                        *b -= dir * a * step;
                    }
                }
            }
            match leave {
                None => self.at_upper[q] = !self.at_upper[q],
                Some(r) => {
                    let start = if self.at_upper[q] { self.upper[q] } else { 0.0 };
                    let leaving = self.basis[r];
                    self.at_upper[leaving] = -dir * alpha[r] > 0.0;
                    self.is_basic[leaving] = false;
                    self.is_basic[q] = true;
                    self.at_upper[q] = false;
                    self.basis[r] = q;
                    self.beta[r] = start + dir * step;
                    let entries = alpha
                        .iter()
                        .enumerate()
                        .filter(|&(i, v)| i != r && v.abs() > DROP_TOL)
                        .map(|(i, &v)| (i, v))
                        .collect();
                    self.etas.push(Eta {
                        pos: r,
                        pivot: alpha[r],
                        entries,
                    });
                    if self.etas.len() >= REFACTOR_EVERY {
                        self.refactor()?;
                    }
                }
            }
        }
    }

    fn values(&self) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.sf.ncols)
            .map(|j| {
                if !self.is_basic[j] && self.at_upper[j] {
                    self.upper[j]
                } else {
                    0.0
                }
            })
            .collect();
        for (i, &j) in self.basis.iter().enumerate() {
            x[j] = self.beta[i].clamp(0.0, self.upper[j].max(0.0));
        }
        x
    }
}

/// Solves `problem` to optimality, or reports infeasibility or unboundedness.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution> {
    let n = problem.num_vars();
    let sf = match StandardForm::prepare(problem)? {
        Prepared::Ready(sf) => sf,
        Prepared::Infeasible => return Ok(status_only(LpStatus::Infeasible, n)),
    };
    let mut s = Revised::new(&sf)?;
    if !sf.artificial.is_empty() {
        let mut cost = vec![0.0; sf.ncols];
        for &c in &sf.artificial {
            cost[c] = 1.0;
        }
        let base_rhs = s.rhs.clone();
        s.run(&cost)?;
        s.rhs = base_rhs;
        s.shift_rounds = 0;
        s.refactor()?;
        let infeasibility: f64 = (0..sf.m)
            .filter(|&i| sf.is_artificial(s.basis[i]))
            .map(|i| s.beta[i])
            .sum();
        if infeasibility > FEAS_TOL * sf.rhs_scale() {
            return Ok(status_only(LpStatus::Infeasible, n));
        }
        for &c in &sf.artificial {
            s.banned[c] = true;
            s.upper[c] = 0.0;
        }
        for i in 0..sf.m {
            if sf.is_artificial(s.basis[i]) {
                s.beta[i] = 0.0;
            }
        }
    }
    if let Outcome::Unbounded = s.run(&sf.cost)? {
        return Ok(status_only(LpStatus::Unbounded, n));
    }
    s.rhs.clone_from(&sf.b);
    s.refactor()?;
    Ok(sf.recover(problem, &s.values()))
}
