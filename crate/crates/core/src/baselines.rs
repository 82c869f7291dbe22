//! Greedy heuristics and the exhaustive oracle.

use crate::error::{Error, Result};
use crate::graph::{CutResult, Instance, Labeling, NodeId};

/// Default cap on the number of labelings [`exact_brute_force`] may visit.
pub const DEFAULT_WORK_BOUND: u64 = 50_000_000;

/// Change in cut value when `v` moves from its current partition to `j`.
fn move_delta(instance: &Instance, labels: &[usize], v: NodeId, j: usize) -> f64 {
    let from = labels[v];
    instance
        .graph()
        .neighbors(v)
        .iter()
        .map(|&(u, w)| {
            if labels[u] == from {
                w
            } else if labels[u] == j {
                -w
            } else {
                0.0
            }
        })
        .sum()
}

fn finish(instance: &Instance, labels: Vec<usize>, alg: &str) -> Result<CutResult> {
    CutResult::new(instance, Labeling::new(labels, instance.k())?, alg)
}

/// Up to `r` rounds of the single move that lowers the cut most. Moved nodes
/// are frozen. Stops early when no move improves the cut. Ties go to the
/// lowest node id, then the lowest partition.
pub fn greedy_best_move(instance: &Instance) -> Result<CutResult> {
    let tol = instance.graph().tolerance();
    let mut labels = instance.initial().as_slice().to_vec();
    let mut frozen = vec![false; instance.node_count()];
    for _ in 0..instance.r() {
        let mut best: Option<(f64, NodeId, usize)> = None;
        for v in instance.non_terminals().filter(|&v| !frozen[v]) {
            for j in (0..instance.k()).filter(|&j| j != labels[v]) {
                let d = move_delta(instance, &labels, v, j);
                if best.is_none_or(|(b, _, _)| d < b) {
                    best = Some((d, v, j));
                }
            }
        }
        match best {
            Some((d, v, j)) if d < -tol => {
                labels[v] = j;
                frozen[v] = true;
            }
            _ => break,
        }
    }
    finish(instance, labels, "greedy-best")
}

/// Up to `r` rounds: take the unmoved node with the largest weight to other
/// partitions, send it to the partition it is most attached to, and stop once
/// that move would increase the cut.
pub fn greedy_boundary(instance: &Instance) -> Result<CutResult> {
    let tol = instance.graph().tolerance();
    let k = instance.k();
    let mut labels = instance.initial().as_slice().to_vec();
    let mut frozen = vec![false; instance.node_count()];
    let mut adjacency = vec![0.0; k];
    for _ in 0..instance.r() {
        let mut pick: Option<(f64, NodeId)> = None;
        for v in instance.non_terminals().filter(|&v| !frozen[v]) {
            let boundary: f64 = instance
                .graph()
                .neighbors(v)
                .iter()
                .filter(|&&(u, _)| labels[u] != labels[v])
                .map(|&(_, w)| w)
                .sum();
            if pick.is_none_or(|(b, _)| boundary > b) {
                pick = Some((boundary, v));
            }
        }
        let Some((_, v)) = pick else { break };
        adjacency.iter_mut().for_each(|a| *a = 0.0);
        for &(u, w) in instance.graph().neighbors(v) {
            adjacency[labels[u]] += w;
        }
        let j = (0..k)
            .filter(|&j| j != labels[v])
            .fold(None, |best: Option<usize>, j| match best {
                Some(b) if adjacency[b] >= adjacency[j] => Some(b),
                _ => Some(j),
            })
            .expect("k >= 2");
        if adjacency[labels[v]] - adjacency[j] > tol {
            break;
        }
        labels[v] = j;
        frozen[v] = true;
    }
    finish(instance, labels, "greedy-boundary")
}

/// Number of labelings visited by [`exact_brute_force`]:
/// Σ_{s ≤ r} C(N, s)·(k − 1)^s over the N non-terminals.
pub fn exact_work(instance: &Instance) -> u64 {
    let n = instance.non_terminals().count() as u64;
    let k = instance.k() as u64;
    let mut total: u64 = 0;
    let mut term: u64 = 1;
    for s in 0..=instance.r().min(n as usize) as u64 {
        total = total.saturating_add(term);
        // C(n, s+1)(k−1)^{s+1} from C(n, s)(k−1)^s.
        term = (term as u128 * (n - s) as u128 * (k - 1) as u128 / (s + 1) as u128)
            .min(u64::MAX as u128) as u64;
    }
    total
}

struct Search<'a> {
    instance: &'a Instance,
    movable: Vec<NodeId>,
    labels: Vec<usize>,
    moves: Vec<(NodeId, usize)>,
    tol: f64,
    best_cut: f64,
    best_moves: Vec<(NodeId, usize)>,
}

impl Search<'_> {
    fn offer(&mut self, cut: f64) {
        let better = if cut < self.best_cut - self.tol {
            true
        } else if cut <= self.best_cut + self.tol {
            (self.moves.len(), &self.moves) < (self.best_moves.len(), &self.best_moves)
        } else {
            false
        };
        if better {
            self.best_cut = cut;
            self.best_moves.clone_from(&self.moves);
        }
    }

    fn descend(&mut self, start: usize, cut: f64) {
        self.offer(cut);
        if self.moves.len() == self.instance.r() {
            return;
        }
        for idx in start..self.movable.len() {
            let v = self.movable[idx];
            let home = self.labels[v];
            for j in (0..self.instance.k()).filter(|&j| j != home) {
                let d = move_delta(self.instance, &self.labels, v, j);
                self.labels[v] = j;
                self.moves.push((v, j));
                self.descend(idx + 1, cut + d);
                self.moves.pop();
                self.labels[v] = home;
            }
        }
    }
}

/// Tries every set of at most `r` non-terminals and every reassignment of
/// them. Returns the minimum cut; ties go to fewer moves, then to the
/// lexicographically smallest `(node, partition)` move list.
pub fn exact_brute_force(instance: &Instance, work_bound: u64) -> Result<CutResult> {
    let work = exact_work(instance);
    if work > work_bound {
        return Err(Error::Capacity(format!(
            "exhaustive search needs {work} evaluations, bound is {work_bound}"
        )));
    }
    let mut search = Search {
        instance,
        movable: instance.non_terminals().collect(),
        labels: instance.initial().as_slice().to_vec(),
        moves: Vec::new(),
        tol: instance.graph().tolerance(),
        best_cut: f64::INFINITY,
        best_moves: Vec::new(),
    };
    search.descend(0, instance.initial_cut());
    let mut labels = instance.initial().as_slice().to_vec();
    for &(v, j) in &search.best_moves {
        labels[v] = j;
    }
    finish(instance, labels, "exact")
}
