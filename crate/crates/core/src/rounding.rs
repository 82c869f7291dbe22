//! Grid rounding of fractional assignments and the component rounding.
//!
//! Grid rounding shifts every LP entry by a shared ρ ∈ (0, g), snaps it down
//! to a multiple of g = (k−1)/(k(r+1)) and sends every group of nodes with the
//! same snapped row to one partition. A group holding a terminal follows the
//! terminal; any other group goes to the partition most of its members start
//! in.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{CutResult, Instance, Labeling, NodeId};
use crate::lp::FractionalAssignment;
use crate::random::{stream_rng, STREAM_GRID_SHIFT};

/// g = (k−1)/(k(r+1)).
pub fn grid_step(k: usize, r: usize) -> f64 {
    (k - 1) as f64 / (k * (r + 1)) as f64
}

/// g′ = 1/(10·k·r·(r+2)) for the component rounding.
pub fn component_step(k: usize, r: usize) -> f64 {
    1.0 / (10 * k * r * (r + 2)) as f64
}

/// X̃ = g·⌊(X + ρ)/g⌋, stored as integer multipliers of g.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRounding {
    pub g: f64,
    pub rho: f64,
    k: usize,
    keys: Vec<u32>,
}

impl GridRounding {
    pub fn n(&self) -> usize {
        self.keys.len() / self.k
    }

    /// Multipliers z_v / g of node `v`.
    pub fn key(&self, v: NodeId) -> &[u32] {
        &self.keys[v * self.k..(v + 1) * self.k]
    }

    pub fn value(&self, v: NodeId, i: usize) -> f64 {
        self.g * self.keys[v * self.k + i] as f64
    }
}

pub fn grid_round(x: &FractionalAssignment, g: f64, rho: f64) -> Result<GridRounding> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::Parameter(format!("grid step {g} must be positive")));
    }
    if !(rho > 0.0 && rho < g) {
        return Err(Error::Parameter(format!("shift {rho} outside (0, {g})")));
    }
    let keys = x
        .values()
        .iter()
        .map(|&v| ((v + rho) / g).floor().max(0.0) as u32)
        .collect();
    Ok(GridRounding {
        g,
        rho,
        k: x.k(),
        keys,
    })
}

/// One group H_z of nodes sharing a rounded row.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupStats {
    pub key: Vec<u32>,
    pub members: Vec<NodeId>,
    /// r_z = Σ_{v ∈ H_z} (1 − X_v^{ℓ_v}), on the unrounded values.
    pub r_z: f64,
    pub terminal: Option<NodeId>,
    pub chosen: usize,
}

/// Groups nodes by rounded row and picks each group's partition.
pub fn group_stats(
    instance: &Instance,
    x: &FractionalAssignment,
    grid: &GridRounding,
) -> Result<Vec<GroupStats>> {
    let k = instance.k();
    if grid.n() != instance.node_count() || grid.k != k {
        return Err(Error::Parameter(
            "rounded matrix does not match the instance".into(),
        ));
    }
    let mut groups: BTreeMap<&[u32], Vec<NodeId>> = BTreeMap::new();
    for v in 0..instance.node_count() {
        groups.entry(grid.key(v)).or_default().push(v);
    }
    let initial = instance.initial();
    let mut counts = vec![0usize; k];
    groups
        .into_iter()
        .map(|(key, members)| {
            let mut terminal = None;
            for &v in &members {
                if instance.is_terminal(v) {
                    if let Some(s) = terminal {
                        return Err(Error::Invariant(format!(
                            "terminals {s} and {v} rounded to the same vector"
                        )));
                    }
                    terminal = Some(v);
                }
            }
            let chosen = match terminal {
                Some(s) => initial.get(s),
                None => {
                    counts.iter_mut().for_each(|c| *c = 0);
                    for &v in &members {
                        counts[initial.get(v)] += 1;
                    }
                    (0..k).fold(0, |b, j| if counts[j] > counts[b] { j } else { b })
                }
            };
            let r_z = members
                .iter()
                .map(|&v| 1.0 - x.get(v, initial.get(v)))
                .sum();
            Ok(GroupStats {
                key: key.to_vec(),
                members,
                r_z,
                terminal,
                chosen,
            })
        })
        .collect()
}

/// Labeling sending every group to its chosen partition.
pub fn assign_groups(
    instance: &Instance,
    x: &FractionalAssignment,
    grid: &GridRounding,
) -> Result<Labeling> {
    let mut labels = vec![0; instance.node_count()];
    for group in group_stats(instance, x, grid)? {
        for &v in &group.members {
            labels[v] = group.chosen;
        }
    }
    Labeling::new(labels, instance.k())
}

/// Grid rounding at a given shift.
pub fn round_with_shift(
    instance: &Instance,
    x: &FractionalAssignment,
    rho: f64,
) -> Result<CutResult> {
    let g = grid_step(instance.k(), instance.r());
    let grid = grid_round(x, g, rho)?;
    CutResult::new(instance, assign_groups(instance, x, &grid)?, "lp-round")
}

/// Grid rounding with ρ drawn uniformly from (0, g).
pub fn round_randomized(
    instance: &Instance,
    x: &FractionalAssignment,
    seed: u64,
) -> Result<CutResult> {
    x.check(instance)?;
    let g = grid_step(instance.k(), instance.r());
    let mut rng = stream_rng(seed, STREAM_GRID_SHIFT);
    let rho = loop {
        let rho = rng.gen::<f64>() * g;
        if rho > 0.0 && rho < g {
            break rho;
        }
    };
    Ok(round_with_shift(instance, x, rho)?.with_seed(seed))
}

/// Shifts at which some entry of X + ρ crosses a multiple of g, sorted and
/// deduplicated. Between consecutive values the rounding is constant. Values
/// within 1e-12 of 0 or g are float noise around an entry that is already a
/// multiple of g and are dropped.
pub fn shift_breakpoints(x: &FractionalAssignment, g: f64) -> Vec<f64> {
    let mut cuts: Vec<f64> = x
        .values()
        .iter()
        .map(|&v| (g * (v / g).ceil() - v).rem_euclid(g))
        .filter(|&c| c > 1e-12 && c < g - 1e-12)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|b, a| *b - *a <= 1e-12);
    cuts
}

/// One shift per interval between breakpoints: the midpoints of consecutive
/// breakpoints plus one point before the first and one after the last.
pub fn shift_candidates(x: &FractionalAssignment, g: f64) -> Vec<f64> {
    let mut ends = vec![0.0];
    ends.extend(shift_breakpoints(x, g));
    ends.push(g);
    ends.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// Rounding result for one candidate shift of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCandidate {
    pub rho: f64,
    pub result: CutResult,
}

pub fn derandomized_sweep(
    instance: &Instance,
    x: &FractionalAssignment,
) -> Result<Vec<ShiftCandidate>> {
    x.check(instance)?;
    let g = grid_step(instance.k(), instance.r());
    shift_candidates(x, g)
        .into_iter()
        .map(|rho| {
            Ok(ShiftCandidate {
                rho,
                result: round_with_shift(instance, x, rho)?,
            })
        })
        .collect()
}

/// Best grid rounding over all shifts; ties go to the smaller shift.
pub fn round_derandomized(instance: &Instance, x: &FractionalAssignment) -> Result<CutResult> {
    let tol = instance.graph().tolerance();
    let mut best: Option<CutResult> = None;
    for cand in derandomized_sweep(instance, x)? {
        if best
            .as_ref()
            .is_none_or(|b| cand.result.cut_value < b.cut_value - tol)
        {
            best = Some(cand.result);
        }
    }
    let mut best = best.expect("at least one shift candidate");
    best.algorithm = "lp-round-derand".into();
    Ok(best)
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Connected components of the graph keeping only edges with d_X < g′,
/// as a component id per node (ids are the smallest member).
pub fn threshold_components(instance: &Instance, x: &FractionalAssignment, g: f64) -> Vec<usize> {
    let n = instance.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    for e in instance.graph().edges() {
        if x.distance(e.u, e.v) < g {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// Component rounding: join edges with d_X < g′ = 1/(10kr(r+2)) and send each
/// resulting component to its terminal's partition, or else to the partition
/// most of its members start in.
pub fn component_round(instance: &Instance, x: &FractionalAssignment) -> Result<CutResult> {
    x.check(instance)?;
    let (k, r) = (instance.k(), instance.r());
    if r == 0 {
        return Ok(CutResult::initial(instance, "component-round"));
    }
    let comp = threshold_components(instance, x, component_step(k, r));
    let n = instance.node_count();
    let initial = instance.initial();
    let mut counts = vec![0usize; n * k];
    let mut anchor: Vec<Option<NodeId>> = vec![None; n];
    for v in 0..n {
        counts[comp[v] * k + initial.get(v)] += 1;
        if instance.is_terminal(v) {
            if let Some(s) = anchor[comp[v]] {
                return Err(Error::Invariant(format!(
                    "terminals {s} and {v} fall in one component"
                )));
            }
            anchor[comp[v]] = Some(v);
        }
    }
    let labels = (0..n)
        .map(|v| {
            let c = comp[v];
            match anchor[c] {
                Some(s) => initial.get(s),
                None => {
                    let row = &counts[c * k..(c + 1) * k];
                    (0..k).fold(0, |b, j| if row[j] > row[b] { j } else { b })
                }
            }
        })
        .collect();
    CutResult::new(instance, Labeling::new(labels, k)?, "component-round")
}
