use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId};

use super::problem::{LpProblem, Relation};

/// Variable indices of the k-way LP built by [`build_rmove_lp`]:
/// X block first (row-major n×k), then Y (m×k), then one d per edge.
#[derive(Debug, Clone, Copy)]
pub struct RmoveLayout {
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl RmoveLayout {
    pub fn of(instance: &Instance) -> Self {
        Self {
            n: instance.node_count(),
            m: instance.graph().edge_count(),
            k: instance.k(),
        }
    }

    pub fn x(&self, v: NodeId, i: usize) -> usize {
        v * self.k + i
    }

    pub fn y(&self, e: usize, i: usize) -> usize {
        self.n * self.k + e * self.k + i
    }

    pub fn d(&self, e: usize) -> usize {
        self.n * self.k + self.m * self.k + e
    }

    pub fn num_vars(&self) -> usize {
        self.n * self.k + self.m * self.k + self.m
    }
}

fn build_kway(instance: &Instance, with_budget: bool) -> LpProblem {
    let layout = RmoveLayout::of(instance);
    let (n, k) = (layout.n, layout.k);
    let edges = instance.graph().edges();
    let mut lp = LpProblem::new();
    for v in 0..n {
        for i in 0..k {
            lp.add_nonneg(format!("X[{v},{}]", i + 1));
        }
    }
    for e in edges {
        for i in 0..k {
            lp.add_nonneg(format!("Y[{}-{},{}]", e.u, e.v, i + 1));
        }
    }
    for e in edges {
        lp.add_nonneg(format!("d[{}-{}]", e.u, e.v));
    }
    for (idx, e) in edges.iter().enumerate() {
        lp.add_objective(layout.d(idx), e.weight);
    }
    for (idx, e) in edges.iter().enumerate() {
        let mut c1 = vec![(layout.d(idx), 1.0)];
        c1.extend((0..k).map(|i| (layout.y(idx, i), -0.5)));
        lp.add_constraint(c1, Relation::Eq, 0.0);
        for i in 0..k {
            let (y, xu, xv) = (layout.y(idx, i), layout.x(e.u, i), layout.x(e.v, i));
            lp.add_constraint(vec![(y, 1.0), (xu, -1.0), (xv, 1.0)], Relation::Ge, 0.0);
            lp.add_constraint(vec![(y, 1.0), (xu, 1.0), (xv, -1.0)], Relation::Ge, 0.0);
        }
    }
    for v in 0..n {
        let row = (0..k).map(|i| (layout.x(v, i), 1.0)).collect();
        lp.add_constraint(row, Relation::Eq, 1.0);
    }
    for (i, &s) in instance.terminals().iter().enumerate() {
        for j in 0..k {
            let rhs = if i == j { 1.0 } else { 0.0 };
            lp.add_constraint(vec![(layout.x(s, j), 1.0)], Relation::Eq, rhs);
        }
    }
    if with_budget {
        let row = (0..n)
            .map(|v| (layout.x(v, instance.initial().get(v)), -1.0))
            .collect();
        lp.add_constraint(row, Relation::Le, instance.r() as f64 - n as f64);
    }
    lp
}

/// The k-way r-move LP: minimize Σ c_uv d(u,v) where d(u,v) = ½ Σ_i Y^i_uv,
/// Y^i_uv ≥ |X^i_u − X^i_v|, rows of X on the simplex, terminal rows fixed to
/// unit vectors and Σ_v (1 − X_v^{ℓ_v}) ≤ r.
pub fn build_rmove_lp(instance: &Instance) -> LpProblem {
    build_kway(instance, true)
}

/// The multiway cut relaxation: [`build_rmove_lp`] without the move budget.
pub fn build_ckr_lp(instance: &Instance) -> LpProblem {
    build_kway(instance, false)
}

fn require_two(instance: &Instance) -> Result<()> {
    if instance.k() != 2 {
        return Err(Error::RequiresTwoPartitions(instance.k()));
    }
    Ok(())
}

/// Scalar variables shared by the two k = 2 builders: x_v (share of partition
/// 1, indices `0..n`) bounded to [0, 1], then y_uv (indices `n..n+m`).
fn build_scalar(instance: &Instance) -> LpProblem {
    let n = instance.node_count();
    let edges = instance.graph().edges();
    let mut lp = LpProblem::new();
    for v in 0..n {
        lp.add_var(format!("x[{v}]"), 0.0, 1.0);
    }
    for (idx, e) in edges.iter().enumerate() {
        let y = lp.add_nonneg(format!("y[{}-{}]", e.u, e.v));
        debug_assert_eq!(y, n + idx);
        lp.add_objective(y, e.weight);
        lp.add_constraint(vec![(y, 1.0), (e.u, -1.0), (e.v, 1.0)], Relation::Ge, 0.0);
        lp.add_constraint(vec![(y, 1.0), (e.u, 1.0), (e.v, -1.0)], Relation::Ge, 0.0);
    }
    let t = instance.terminals();
    lp.add_constraint(vec![(t[0], 1.0)], Relation::Eq, 1.0);
    lp.add_constraint(vec![(t[1], 1.0)], Relation::Eq, 0.0);
    lp
}

/// Move mass Σ_{ℓ_v=1}(1 − x_v) + Σ_{ℓ_v=2} x_v as (coefficients, constant).
fn move_mass_terms(instance: &Instance) -> (Vec<(usize, f64)>, f64) {
    let mut constant = 0.0;
    let coefs = (0..instance.node_count())
        .map(|v| {
            if instance.initial().get(v) == 0 {
                constant += 1.0;
                (v, -1.0)
            } else {
                (v, 1.0)
            }
        })
        .collect();
    (coefs, constant)
}

/// The k = 2 r-move LP in scalar form.
pub fn build_rmove2_lp(instance: &Instance) -> Result<LpProblem> {
    require_two(instance)?;
    let mut lp = build_scalar(instance);
    let (coefs, constant) = move_mass_terms(instance);
    lp.add_constraint(coefs, Relation::Le, instance.r() as f64 - constant);
    Ok(lp)
}

/// The Lagrangian of the k = 2 LP: the move budget moved into the objective
/// with multiplier `alpha`.
pub fn build_lagrangian_lp(instance: &Instance, alpha: f64) -> Result<LpProblem> {
    require_two(instance)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!(
            "alpha = {alpha} must be finite and >= 0"
        )));
    }
    let mut lp = build_scalar(instance);
    let (coefs, constant) = move_mass_terms(instance);
    for (v, c) in coefs {
        lp.add_objective(v, alpha * c);
    }
    lp.add_objective_offset(alpha * constant);
    Ok(lp)
}
