//! Conversion of an [`LpProblem`] to the internal form shared by both simplex
//! implementations: `A x = b`, `b ≥ 0`, `0 ≤ x ≤ u`, with an initial basis of
//! slack, singleton or artificial columns.

use crate::error::Result;

use super::problem::{LpProblem, LpSolution, LpStatus, Relation};

pub(super) const FEAS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy)]
enum VarMap {
    Fixed(f64),
    Shift { col: usize, base: f64 },
    Mirror { col: usize, base: f64 },
    Free { pos: usize, neg: usize },
}

pub(super) struct StandardForm {
    n_orig: usize,
    maps: Vec<VarMap>,
    pub m: usize,
    pub ncols: usize,
    col_start: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<f64>,
    pub upper: Vec<f64>,
    pub b: Vec<f64>,
    pub cost: Vec<f64>,
    /// Initial basic column of each row.
    pub basis: Vec<usize>,
    /// Artificial columns, ascending.
    pub artificial: Vec<usize>,
}

pub(super) enum Prepared {
    Ready(StandardForm),
    Infeasible,
}

impl StandardForm {
    pub fn prepare(problem: &LpProblem) -> Result<Prepared> {
        problem.validate()?;
        let n = problem.num_vars();
        let mut maps = Vec::with_capacity(n);
        let mut upper: Vec<f64> = Vec::new();
        let new_col = |ub: f64, upper: &mut Vec<f64>| {
            upper.push(ub);
            upper.len() - 1
        };
        for j in 0..n {
            let (l, u) = (problem.lower(j), problem.upper(j));
            if l > u + FEAS_TOL {
                return Ok(Prepared::Infeasible);
            }
            let m = if l.is_finite() && u.is_finite() && u - l <= 1e-12 {
                VarMap::Fixed(l)
            } else if l.is_finite() {
                VarMap::Shift {
                    col: new_col(u - l, &mut upper),
                    base: l,
                }
            } else if u.is_finite() {
                VarMap::Mirror {
                    col: new_col(f64::INFINITY, &mut upper),
                    base: u,
                }
            } else {
                let pos = new_col(f64::INFINITY, &mut upper);
                let neg = new_col(f64::INFINITY, &mut upper);
                VarMap::Free { pos, neg }
            };
            maps.push(m);
        }
        let structural = upper.len();

        let mut rows: Vec<(Vec<(usize, f64)>, Relation, f64)> = Vec::new();
        let mut dense = vec![0.0; structural];
        let mut touched: Vec<usize> = Vec::new();
        for c in problem.constraints() {
            let mut rhs = c.rhs;
            for &(j, a) in &c.coefficients {
                let mut add = |col: usize, v: f64| {
                    if dense[col] == 0.0 {
                        touched.push(col);
                    }
                    dense[col] += v;
                };
                match maps[j] {
                    VarMap::Fixed(x) => rhs -= a * x,
                    VarMap::Shift { col, base } => {
                        rhs -= a * base;
                        add(col, a);
                    }
                    VarMap::Mirror { col, base } => {
                        rhs -= a * base;
                        add(col, -a);
                    }
                    VarMap::Free { pos, neg } => {
                        add(pos, a);
                        add(neg, -a);
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let coefs: Vec<(usize, f64)> = touched
                .iter()
                .filter(|&&col| dense[col] != 0.0)
                .map(|&col| (col, dense[col]))
                .collect();
            for &col in &touched {
                dense[col] = 0.0;
            }
            touched.clear();
            if coefs.is_empty() {
                let ok = match c.relation {
                    Relation::Le => 0.0 <= rhs + FEAS_TOL,
                    Relation::Ge => 0.0 >= rhs - FEAS_TOL,
                    Relation::Eq => rhs.abs() <= FEAS_TOL,
                };
                if !ok {
                    return Ok(Prepared::Infeasible);
                }
                continue;
            }
            rows.push((coefs, c.relation, rhs));
        }

        let m = rows.len();
        for (coefs, rel, _) in rows.iter_mut() {
            match rel {
                Relation::Le => coefs.push((new_col(f64::INFINITY, &mut upper), 1.0)),
                Relation::Ge => coefs.push((new_col(f64::INFINITY, &mut upper), -1.0)),
                Relation::Eq => {}
            }
        }
        let mut count = vec![0usize; upper.len()];
        for (coefs, _, _) in &rows {
            for &(col, _) in coefs {
                count[col] += 1;
            }
        }
        let mut used = vec![false; upper.len()];
        let mut basis = vec![usize::MAX; m];
        for (i, (coefs, _, rhs)) in rows.iter_mut().enumerate() {
            if *rhs < 0.0 {
                *rhs = -*rhs;
                for c in coefs.iter_mut() {
                    c.1 = -c.1;
                }
            }
            let rhs = *rhs;
            // Prefer slacks (appended last) over structural singletons.
            let choice = coefs.iter().rev().copied().find(|&(col, a)| {
                count[col] == 1
                    && !used[col]
                    && (a > 0.0 || (rhs == 0.0 && a != 0.0))
                    && rhs / a <= upper[col]
            });
            if let Some((col, _)) = choice {
                used[col] = true;
                basis[i] = col;
            }
        }
        let mut artificial = Vec::new();
        for (i, (coefs, _, _)) in rows.iter_mut().enumerate() {
            if basis[i] == usize::MAX {
                let col = new_col(f64::INFINITY, &mut upper);
                coefs.push((col, 1.0));
                artificial.push(col);
                basis[i] = col;
            }
        }
        let ncols = upper.len();

        let mut per_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); ncols];
        for (i, (coefs, _, _)) in rows.iter().enumerate() {
            for &(col, a) in coefs {
                per_col[col].push((i, a));
            }
        }
        let mut col_start = Vec::with_capacity(ncols + 1);
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        col_start.push(0);
        for entries in per_col {
            for (i, a) in entries {
                row_idx.push(i);
                vals.push(a);
            }
            col_start.push(row_idx.len());
        }

        let mut cost = vec![0.0; ncols];
        for &(j, c) in problem.objective() {
            match maps[j] {
                VarMap::Fixed(_) => {}
                VarMap::Shift { col, .. } => cost[col] += c,
                VarMap::Mirror { col, .. } => cost[col] -= c,
                VarMap::Free { pos, neg } => {
                    cost[pos] += c;
                    cost[neg] -= c;
                }
            }
        }
        Ok(Prepared::Ready(StandardForm {
            n_orig: n,
            maps,
            m,
            ncols,
            col_start,
            row_idx,
            vals,
            upper,
            b: rows.iter().map(|r| r.2).collect(),
            cost,
            basis,
            artificial,
        }))
    }

    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.col_start[j], self.col_start[j + 1]);
        (&self.row_idx[s..e], &self.vals[s..e])
    }

    pub fn is_artificial(&self, j: usize) -> bool {
        self.artificial.binary_search(&j).is_ok()
    }

    /// Largest |b_i|, used to scale the phase-one infeasibility test.
    pub fn rhs_scale(&self) -> f64 {
        1.0 + self.b.iter().fold(0.0, |a: f64, &x| a.max(x.abs()))
    }

    /// Builds the solution of the original problem from internal column values.
    pub fn recover(&self, problem: &LpProblem, x: &[f64]) -> LpSolution {
        let values: Vec<f64> = self
            .maps
            .iter()
            .map(|m| match *m {
                VarMap::Fixed(v) => v,
                VarMap::Shift { col, base } => base + x[col],
                VarMap::Mirror { col, base } => base - x[col],
                VarMap::Free { pos, neg } => x[pos] - x[neg],
            })
            .collect();
        debug_assert_eq!(values.len(), self.n_orig);
        let objective = problem.objective_value(&values);
        LpSolution {
            status: LpStatus::Optimal,
            values,
            objective,
        }
    }
}

pub(super) fn status_only(status: LpStatus, n: usize) -> LpSolution {
    LpSolution {
        status,
        values: vec![0.0; n],
        objective: match status {
            LpStatus::Unbounded => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        },
    }
}
