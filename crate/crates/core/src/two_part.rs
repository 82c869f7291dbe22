//! k = 2: the penalized graphs G^α, breakpoint enumeration and the
//! breakpoint-based approximation.
//!
//! G^α adds an edge of weight α from every non-terminal to the terminal of its
//! initial partition. A minimum s-t cut of G^α that moves the set S has value
//! |S|·α + δ(S), where δ(S) is the cut of the original graph after moving S.
//! As α grows the moved set shrinks; the distinct sizes are the breakpoints.

use crate::error::{Error, Result};
use crate::flow::{min_st_cut, StCut};
use crate::graph::{cut_value, CutResult, Instance, Labeling, NodeId, WeightedGraph};

fn require_two(instance: &Instance) -> Result<()> {
    if instance.k() != 2 {
        return Err(Error::RequiresTwoPartitions(instance.k()));
    }
    Ok(())
}

pub fn build_alpha_graph(instance: &Instance, alpha: f64) -> Result<WeightedGraph> {
    require_two(instance)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("alpha = {alpha} must be non-negative")));
    }
    let g = instance.graph();
    let t = instance.terminals();
    let extra = instance
        .non_terminals()
        .map(|v| (v, t[instance.initial().get(v)], alpha));
    let edges = g.edges().iter().map(|e| (e.u, e.v, e.weight)).chain(extra);
    WeightedGraph::new(g.node_count(), edges)
}

/// Labeling that puts the source side in partition 0 and the rest in 1.
pub fn side_labeling(source_side: &[bool]) -> Labeling {
    let labels = source_side.iter().map(|&s| usize::from(!s)).collect();
    Labeling::new(labels, 2).expect("labels are 0 or 1")
}

/// Non-terminals whose side differs from their initial partition.
pub fn moved_of_cut(instance: &Instance, source_side: &[bool]) -> Vec<NodeId> {
    instance
        .non_terminals()
        .filter(|&v| usize::from(!source_side[v]) != instance.initial().get(v))
        .collect()
}

/// Labeling obtained by moving every node of `set` to the other partition.
pub fn labeling_moving(instance: &Instance, set: &[NodeId]) -> Labeling {
    let mut labels = instance.initial().as_slice().to_vec();
    for &v in set {
        labels[v] = 1 - labels[v];
    }
    Labeling::new(labels, 2).expect("labels are 0 or 1")
}

/// δ(S): original cut after moving `set`.
pub fn delta(instance: &Instance, set: &[NodeId]) -> f64 {
    cut_value(instance.graph(), &labeling_moving(instance, set)).expect("valid labeling")
}

/// Minimum s-t cut of G^α with its moved set.
pub fn alpha_cut(instance: &Instance, alpha: f64) -> Result<(StCut, Vec<NodeId>)> {
    let g = build_alpha_graph(instance, alpha)?;
    let t = instance.terminals();
    let cut = min_st_cut(&g, t[0], t[1])?;
    let moved = moved_of_cut(instance, &cut.source_side);
    Ok((cut, moved))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Breakpoint {
    pub r: usize,
    pub set: Vec<NodeId>,
    pub delta: f64,
    pub witness_alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointList {
    /// Sorted by strictly decreasing `r`, ending at `r = 0`.
    pub points: Vec<Breakpoint>,
    pub min_cut_calls: usize,
}

fn point(instance: &Instance, set: Vec<NodeId>, alpha: f64) -> Breakpoint {
    Breakpoint {
        r: set.len(),
        delta: delta(instance, &set),
        set,
        witness_alpha: alpha,
    }
}

/// Active-pair refinement. Starting from the pair (S₀, ∅), where S₀ is the
/// moved set of the plain minimum cut, each pair (S, S′) with |S| > |S′| is
/// tested at the α where both lines meet. If G^α has a strictly cheaper cut
/// its moved set is a new breakpoint and the pair splits; otherwise the pair
/// is retired.
///
/// Minimum cuts of G⁰ may move nodes that do not change δ. When two sets end
/// up with the same δ only the smaller is kept, so δ strictly increases along
/// the list.
pub fn find_breakpoints(instance: &Instance) -> Result<BreakpointList> {
    require_two(instance)?;
    let c_inf = instance.initial_cut();
    let (_, s0) = alpha_cut(instance, 0.0)?;
    let mut calls = 1;
    let empty = point(instance, Vec::new(), 2.0 * c_inf);
    if s0.is_empty() {
        return Ok(BreakpointList {
            points: vec![empty],
            min_cut_calls: calls,
        });
    }
    let mut found = vec![point(instance, s0, 0.0), empty];
    let mut active = vec![(0usize, 1usize)];
    while let Some((big, small)) = active.pop() {
        let (a, b) = (&found[big], &found[small]);
        let alpha = ((b.delta - a.delta) / (a.r - b.r) as f64).max(0.0);
        let line = a.r as f64 * alpha + a.delta;
        let (cut, moved) = alpha_cut(instance, alpha)?;
        calls += 1;
        let (lo, hi) = (b.r, a.r);
        if cut.value >= line - 1e-9 * (1.0 + cut.value) || moved.len() <= lo || moved.len() >= hi {
            continue;
        }
        found.push(point(instance, moved, alpha));
        let mid = found.len() - 1;
        active.push((mid, small));
        active.push((big, mid));
    }
    found.sort_by(|x, y| y.r.cmp(&x.r));
    let tol = instance.graph().tolerance();
    let mut points: Vec<Breakpoint> = Vec::with_capacity(found.len());
    for p in found.into_iter().rev() {
        if points.last().is_none_or(|q| p.delta < q.delta - tol) {
            points.push(p);
        }
    }
    points.reverse();
    Ok(BreakpointList {
        points,
        min_cut_calls: calls,
    })
}

/// Moves S₀ if r ≥ r₀, otherwise the breakpoint set S_j with
/// r_{j−1} > r ≥ r_j.
pub fn two_part_solve(instance: &Instance) -> Result<CutResult> {
    let list = find_breakpoints(instance)?;
    let r = instance.r();
    let chosen = list
        .points
        .iter()
        .find(|p| p.r <= r)
        .expect("the last breakpoint moves nothing");
    CutResult::new(instance, labeling_moving(instance, &chosen.set), "two-part")
}
