//! Budgeted multiway cut: starting from an initial k-partitioning with one
//! terminal per partition, find the smallest cut reachable by moving at most
//! `r` non-terminal nodes.

pub mod baselines;
pub mod bicriteria;
pub mod error;
pub mod flow;
pub mod fptas;
pub mod experiment;
pub mod graph;
pub mod instances;
pub mod io;
pub mod lp;
pub mod random;
pub mod rounding;
pub mod two_part;

pub use error::{Error, Result};
pub use graph::{
    boundary_weight, contract_into_terminal, cut_value, moved_set, Contraction, CutResult, Edge,
    Instance, Labeling, NodeId, WeightedGraph,
};
