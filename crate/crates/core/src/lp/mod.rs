//! Linear programming: a dense simplex solver, builders for the r-move LPs and
//! fractional assignments read back from their solutions.

mod assignment;
mod builders;
mod compact;
mod problem;
mod dense;
mod revised;
mod standard;

pub use assignment::{extract_assignment, FractionalAssignment};
pub use builders::{
    build_ckr_lp, build_lagrangian_lp, build_rmove2_lp, build_rmove_lp, RmoveLayout,
};
pub use compact::{solve_ckr, solve_rmove, LpAssignment};
pub use problem::{Constraint, LpProblem, LpSolution, LpStatus, Relation};
pub use dense::solve_lp_dense;
pub use revised::solve_lp;
