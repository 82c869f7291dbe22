use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A minimization LP: `min c·x + offset` subject to linear constraints and
/// per-variable bounds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpProblem {
    objective: Vec<(usize, f64)>,
    offset: f64,
    constraints: Vec<Constraint>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    names: Vec<String>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable with bounds `[lower, upper]` and returns its index.
    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> usize {
        self.lower.push(lower);
        self.upper.push(upper);
        self.names.push(name.into());
        self.lower.len() - 1
    }

    /// Adds a non-negative variable.
    pub fn add_nonneg(&mut self, name: impl Into<String>) -> usize {
        self.add_var(name, 0.0, f64::INFINITY)
    }

    pub fn add_objective(&mut self, var: usize, coefficient: f64) {
        if coefficient != 0.0 {
            self.objective.push((var, coefficient));
        }
    }

    pub fn add_objective_offset(&mut self, value: f64) {
        self.offset += value;
    }

    pub fn add_constraint(
        &mut self,
        coefficients: Vec<(usize, f64)>,
        relation: Relation,
        rhs: f64,
    ) {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[(usize, f64)] {
        &self.objective
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn lower(&self, var: usize) -> f64 {
        self.lower[var]
    }

    pub fn upper(&self, var: usize) -> f64 {
        self.upper[var]
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let bad_index = |coefs: &[(usize, f64)]| coefs.iter().any(|&(j, _)| j >= n);
        if bad_index(&self.objective) {
            return Err(Error::Parameter(
                "objective references unknown variable".into(),
            ));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if bad_index(&c.coefficients) {
                return Err(Error::Parameter(format!(
                    "constraint {i} references unknown variable"
                )));
            }
            if !c.rhs.is_finite() || c.coefficients.iter().any(|&(_, a)| !a.is_finite()) {
                return Err(Error::Parameter(format!("constraint {i} is not finite")));
            }
        }
        if self.objective.iter().any(|&(_, a)| !a.is_finite()) || !self.offset.is_finite() {
            return Err(Error::Parameter("objective is not finite".into()));
        }
        for j in 0..n {
            if self.lower[j].is_nan()
                || self.upper[j].is_nan()
                || self.lower[j] == f64::INFINITY
                || self.upper[j] == f64::NEG_INFINITY
            {
                return Err(Error::Parameter(format!(
                    "variable {} has bad bounds",
                    self.names[j]
                )));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.offset
            + self
                .objective
                .iter()
                .map(|&(j, c)| c * values[j])
                .sum::<f64>()
    }

    /// Largest violation of any constraint or bound by `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            let lhs: f64 = c.coefficients.iter().map(|&(j, a)| a * values[j]).sum();
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (j, &x) in values.iter().enumerate() {
            worst = worst.max(self.lower[j] - x).max(x - self.upper[j]);
        }
        worst
    }

    /// Plain text listing: objective, one constraint per line, then bounds.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let term = |out: &mut String, j: usize, a: f64| {
            let _ = write!(out, " {:+} {}", a, self.names[j]);
        };
        let _ = write!(out, "min");
        for &(j, a) in &self.objective {
            term(&mut out, j, a);
        }
        if self.offset != 0.0 {
            let _ = write!(out, " {:+}", self.offset);
        }
        out.push('\n');
        for (i, c) in self.constraints.iter().enumerate() {
            let _ = write!(out, "c{i}:");
            for &(j, a) in &c.coefficients {
                term(&mut out, j, a);
            }
            let _ = writeln!(out, " {} {}", c.relation.symbol(), c.rhs);
        }
        for j in 0..self.num_vars() {
            let _ = writeln!(
                out,
                "bound {} {} {}",
                self.names[j], self.lower[j], self.upper[j]
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Returns the solution if optimal, otherwise an error naming the status.
    pub fn into_optimal(self) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::Infeasible => Err(Error::LpStatus("infeasible")),
            LpStatus::Unbounded => Err(Error::LpStatus("unbounded")),
        }
    }
}
