use crate::error::{Error, Result};
use crate::graph::{Instance, Labeling, NodeId, WeightedGraph};

use super::problem::LpSolution;

const ROW_SUM_TOL: f64 = 1e-7;
const NEGATIVE_TOL: f64 = 1e-9;
const MOVE_TOL: f64 = 1e-6;

/// Row-stochastic n×k matrix of LP values, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalAssignment {
    n: usize,
    k: usize,
    values: Vec<f64>,
}

impl FractionalAssignment {
    pub fn new(n: usize, k: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * k {
            return Err(Error::Parameter(format!(
                "{} values for a {n}x{k} assignment",
                values.len()
            )));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("assignment has non-finite entries".into()));
        }
        Ok(Self { n, k, values })
    }

    /// The 0/1 matrix encoding `labeling`.
    pub fn from_labeling(labeling: &Labeling) -> Self {
        let (n, k) = (labeling.len(), labeling.k());
        let mut values = vec![0.0; n * k];
        for v in 0..n {
            values[v * k + labeling.get(v)] = 1.0;
        }
        Self { n, k, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, v: NodeId, i: usize) -> f64 {
        self.values[v * self.k + i]
    }

    pub fn row(&self, v: NodeId) -> &[f64] {
        &self.values[v * self.k..(v + 1) * self.k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// d_X(u, v) = ½ Σ_i |X_u^i − X_v^i|.
    pub fn distance(&self, u: NodeId, v: NodeId) -> f64 {
        row_distance(self.row(u), self.row(v))
    }

    /// Σ_v (1 − X_v^{ℓ_v}).
    pub fn move_mass(&self, instance: &Instance) -> f64 {
        (0..self.n)
            .map(|v| 1.0 - self.get(v, instance.initial().get(v)))
            .sum()
    }

    /// Σ_{(u,v)} c_uv · d_X(u, v).
    pub fn objective(&self, graph: &WeightedGraph) -> f64 {
        graph
            .edges()
            .iter()
            .map(|e| e.weight * self.distance(e.u, e.v))
            .sum()
    }

    /// The labeling encoded by a 0/1 matrix, or `None` if some row is fractional.
    pub fn as_labeling(&self) -> Option<Labeling> {
        let labels = (0..self.n)
            .map(|v| {
                let row = self.row(v);
                let i = row.iter().position(|&x| (x - 1.0).abs() <= 1e-9)?;
                row.iter()
                    .enumerate()
                    .all(|(j, &x)| j == i || x.abs() <= 1e-9)
                    .then_some(i)
            })
            .collect::<Option<Vec<_>>>()?;
        Labeling::new(labels, self.k).ok()
    }

    /// Checks the LP constraints on X: row sums, fixed terminal rows,
    /// non-negativity and the move budget.
    pub fn check(&self, instance: &Instance) -> Result<()> {
        if self.n != instance.node_count() || self.k != instance.k() {
            return Err(Error::Infeasible(format!(
                "assignment is {}x{}, instance needs {}x{}",
                self.n,
                self.k,
                instance.node_count(),
                instance.k()
            )));
        }
        for v in 0..self.n {
            let row = self.row(v);
            if let Some(x) = row.iter().find(|&&x| x < -NEGATIVE_TOL) {
                return Err(Error::Infeasible(format!("node {v} has entry {x}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::Infeasible(format!("row {v} sums to {sum}")));
            }
            if let Some(p) = instance.terminal_partition(v) {
                if row
                    .iter()
                    .enumerate()
                    .any(|(i, &x)| x != if i == p { 1.0 } else { 0.0 })
                {
                    return Err(Error::Infeasible(format!(
                        "terminal row {v} is not a unit vector"
                    )));
                }
            }
        }
        let mass = self.move_mass(instance);
        if mass > instance.r() as f64 + MOVE_TOL {
            return Err(Error::Infeasible(format!(
                "move mass {mass} exceeds r = {}",
                instance.r()
            )));
        }
        Ok(())
    }

    /// Snaps terminal rows, clamps tiny negatives and renormalizes rows.
    pub(crate) fn clean(instance: &Instance, mut values: Vec<f64>) -> Result<Self> {
        let (n, k) = (instance.node_count(), instance.k());
        for v in 0..n {
            let row = &mut values[v * k..(v + 1) * k];
            if let Some(p) = instance.terminal_partition(v) {
                for (i, x) in row.iter_mut().enumerate() {
                    *x = if i == p { 1.0 } else { 0.0 };
                }
                continue;
            }
            for x in row.iter_mut() {
                if *x < -NEGATIVE_TOL || !x.is_finite() {
                    return Err(Error::LpExtraction(format!("node {v} has entry {x}")));
                }
                *x = x.max(0.0);
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-6 {
                return Err(Error::LpExtraction(format!("row {v} sums to {sum}")));
            }
            for x in row.iter_mut() {
                *x /= sum;
            }
        }
        let x = Self { n, k, values };
        let mass = x.move_mass(instance);
        if mass > instance.r() as f64 + MOVE_TOL {
            return Err(Error::LpExtraction(format!(
                "move mass {mass} exceeds r = {}",
                instance.r()
            )));
        }
        Ok(x)
    }
}

pub(crate) fn row_distance(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Reads the X block (the first n·k variables, row-major) of a solution of
/// [`super::build_rmove_lp`] or [`super::build_ckr_lp`].
pub fn extract_assignment(
    instance: &Instance,
    solution: &LpSolution,
) -> Result<FractionalAssignment> {
    if !solution.is_optimal() {
        return Err(Error::LpExtraction(format!("status {:?}", solution.status)));
    }
    let len = instance.node_count() * instance.k();
    if solution.values.len() < len {
        return Err(Error::LpExtraction(format!(
            "solution has {} values, need at least {len}",
            solution.values.len()
        )));
    }
    FractionalAssignment::clean(instance, solution.values[..len].to_vec())
}
