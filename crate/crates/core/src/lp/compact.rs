//! Reduced form of the k-way LPs used by the solvers.
//!
//! Terminal rows are substituted as constants, d is eliminated into the
//! objective and each |X_u^i − X_v^i| is written as P − N with one equality
//! row. The optimum equals that of [`super::build_rmove_lp`] (or
//! [`super::build_ckr_lp`]) while the tableau is roughly half the size.

use crate::error::Result;
use crate::graph::Instance;

use super::assignment::FractionalAssignment;
use super::problem::{LpProblem, Relation};
use super::revised::solve_lp;

/// An optimal fractional assignment together with its LP objective.
#[derive(Debug, Clone, PartialEq)]
pub struct LpAssignment {
    pub assignment: FractionalAssignment,
    pub objective: f64,
}

fn build(instance: &Instance, with_budget: bool) -> (LpProblem, Vec<Option<usize>>) {
    let (n, k) = (instance.node_count(), instance.k());
    let mut lp = LpProblem::new();
    let mut xvar = vec![None; n * k];
    for v in instance.non_terminals() {
        for i in 0..k {
            xvar[v * k + i] = Some(lp.add_var(format!("X[{v},{}]", i + 1), 0.0, 1.0));
        }
    }
    let constant = |v: usize, i: usize| -> f64 {
        match instance.terminal_partition(v) {
            Some(p) if p == i => 1.0,
            _ => 0.0,
        }
    };
    for e in instance.graph().edges() {
        if e.weight == 0.0 {
            continue;
        }
        for i in 0..k {
            let (xu, xv) = (xvar[e.u * k + i], xvar[e.v * k + i]);
            if xu.is_none() && xv.is_none() {
                let gap = (constant(e.u, i) - constant(e.v, i)).abs();
                lp.add_objective_offset(0.5 * e.weight * gap);
                continue;
            }
            let p = lp.add_nonneg(format!("P[{}-{},{}]", e.u, e.v, i + 1));
            let q = lp.add_nonneg(format!("N[{}-{},{}]", e.u, e.v, i + 1));
            lp.add_objective(p, 0.5 * e.weight);
            lp.add_objective(q, 0.5 * e.weight);
            let mut row = vec![(p, -1.0), (q, 1.0)];
            let mut rhs = 0.0;
            match xu {
                Some(x) => row.push((x, 1.0)),
                None => rhs -= constant(e.u, i),
            }
            match xv {
                Some(x) => row.push((x, -1.0)),
                None => rhs += constant(e.v, i),
            }
            lp.add_constraint(row, Relation::Eq, rhs);
        }
    }
    for v in instance.non_terminals() {
        let row = (0..k).map(|i| (xvar[v * k + i].unwrap(), 1.0)).collect();
        lp.add_constraint(row, Relation::Eq, 1.0);
    }
    if with_budget {
        let movable: Vec<usize> = instance.non_terminals().collect();
        let row = movable
            .iter()
            .map(|&v| (xvar[v * k + instance.initial().get(v)].unwrap(), -1.0))
            .collect();
        lp.add_constraint(
            row,
            Relation::Le,
            instance.r() as f64 - movable.len() as f64,
        );
    }
    (lp, xvar)
}

fn solve(instance: &Instance, with_budget: bool) -> Result<LpAssignment> {
    let (lp, xvar) = build(instance, with_budget);
    let solution = solve_lp(&lp)?.into_optimal()?;
    let values = xvar
        .iter()
        .map(|x| x.map_or(0.0, |j| solution.values[j]))
        .collect();
    let budgeted = if with_budget {
        instance.clone()
    } else {
        instance.with_r(instance.node_count())
    };
    let assignment = FractionalAssignment::clean(&budgeted, values)?;
    Ok(LpAssignment {
        assignment,
        objective: solution.objective,
    })
}

/// Optimal solution of the r-move LP.
pub fn solve_rmove(instance: &Instance) -> Result<LpAssignment> {
    solve(instance, true)
}

/// Optimal solution of the multiway cut relaxation (no move budget).
pub fn solve_ckr(instance: &Instance) -> Result<LpAssignment> {
    solve(instance, false)
}
