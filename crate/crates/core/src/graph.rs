//! Weighted graphs, labelings and the r-move instance type.
//!
//! Partitions are 0-based throughout the library (`0..k`); the instance file
//! format stores them 1-based and the conversion happens in [`crate::io`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Absolute tolerance used for all cut comparisons, scaled by total edge weight.
pub const CUT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

impl Edge {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected graph with non-negative weights and at most one edge per
/// unordered pair. Edges are stored with `u < v`, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    node_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
}

impl WeightedGraph {
    /// Builds a graph, summing the weights of parallel edges.
    pub fn new<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut merged: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
        }
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((u, v), weight)| Edge { u, v, weight })
            .collect();
        Ok(Self::from_sorted_edges(node_count, edges))
    }

    pub fn empty(node_count: usize) -> Self {
        Self::from_sorted_edges(node_count, Vec::new())
    }

    fn from_sorted_edges(node_count: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for e in &edges {
            adjacency[e.u].push((e.v, e.weight));
            adjacency[e.v].push((e.u, e.weight));
        }
        Self {
            node_count,
            edges,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[v]
    }

    /// Weight of edge `{u, v}`, or 0 when absent.
    pub fn weight(&self, u: NodeId, v: NodeId) -> f64 {
        self.adjacency[u]
            .iter()
            .find(|&&(x, _)| x == v)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Tolerance for comparing cut values on this graph.
    pub fn tolerance(&self) -> f64 {
        CUT_TOLERANCE * self.total_weight().max(1.0)
    }

    /// Largest edge weight (0 for an edgeless graph).
    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).fold(0.0, f64::max)
    }
}

/// Assignment of every node to a partition in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    labels: Vec<usize>,
    k: usize,
}

impl Labeling {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidLabeling(format!("k = {k}, need k >= 2")));
        }
        if let Some((v, &p)) = labels.iter().enumerate().find(|(_, &p)| p >= k) {
            return Err(Error::InvalidLabeling(format!(
                "node {v} has partition {p}, outside 0..{k}"
            )));
        }
        Ok(Self { labels, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, v: NodeId) -> usize {
        self.labels[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.labels
    }

    pub fn set(&mut self, v: NodeId, part: usize) -> Result<()> {
        if part >= self.k {
            return Err(Error::InvalidLabeling(format!(
                "partition {part} outside 0..{}",
                self.k
            )));
        }
        self.labels[v] = part;
        Ok(())
    }
}

/// Sum of the weights of edges whose endpoints carry different labels.
pub fn cut_value(graph: &WeightedGraph, labeling: &Labeling) -> Result<f64> {
    if labeling.len() != graph.node_count() {
        return Err(Error::InvalidLabeling(format!(
            "labeling covers {} nodes, graph has {}",
            labeling.len(),
            graph.node_count()
        )));
    }
    Ok(cut_of_labels(graph, labeling.as_slice()))
}

pub(crate) fn cut_of_labels(graph: &WeightedGraph, labels: &[usize]) -> f64 {
    graph
        .edges()
        .iter()
        .filter(|e| labels[e.u] != labels[e.v])
        .map(|e| e.weight)
        .sum()
}

/// An r-move k-partitioning instance: graph, initial partitioning, one
/// terminal per partition and a move budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    graph: WeightedGraph,
    initial: Labeling,
    terminals: Vec<NodeId>,
    r: usize,
    terminal_of: Vec<Option<usize>>,
}

impl Instance {
    pub fn new(
        graph: WeightedGraph,
        initial: Labeling,
        terminals: Vec<NodeId>,
        r: usize,
    ) -> Result<Self> {
        let n = graph.node_count();
        let k = initial.k();
        if initial.len() != n {
            return Err(Error::InvalidInstance(format!(
                "initial labeling covers {} nodes, graph has {n}",
                initial.len()
            )));
        }
        if terminals.len() != k {
            return Err(Error::InvalidInstance(format!(
                "{} terminals given for k = {k}",
                terminals.len()
            )));
        }
        let mut terminal_of = vec![None; n];
        for (i, &s) in terminals.iter().enumerate() {
            if s >= n {
                return Err(Error::InvalidInstance(format!("terminal {s} out of range")));
            }
            if terminal_of[s].is_some() {
                return Err(Error::InvalidInstance(format!("terminal {s} repeated")));
            }
            if initial.get(s) != i {
                return Err(Error::InvalidInstance(format!(
                    "terminal {s} of partition {i} is initially in partition {}",
                    initial.get(s)
                )));
            }
            terminal_of[s] = Some(i);
        }
        Ok(Self {
            graph,
            initial,
            terminals,
            r,
            terminal_of,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn initial(&self) -> &Labeling {
        &self.initial
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.initial.k()
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn with_r(&self, r: usize) -> Self {
        Self { r, ..self.clone() }
    }

    pub fn is_terminal(&self, v: NodeId) -> bool {
        self.terminal_of[v].is_some()
    }

    /// Partition whose terminal is `v`, if `v` is a terminal.
    pub fn terminal_partition(&self, v: NodeId) -> Option<usize> {
        self.terminal_of[v]
    }

    pub fn non_terminals(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count()).filter(move |&v| !self.is_terminal(v))
    }

    /// c(C₀): the cut value of the initial partitioning.
    pub fn initial_cut(&self) -> f64 {
        cut_of_labels(&self.graph, self.initial.as_slice())
    }

    /// d⁻(v): weight of edges at `v` that cross the initial partitioning.
    pub fn boundary_weight(&self, v: NodeId) -> f64 {
        let lv = self.initial.get(v);
        self.graph
            .neighbors(v)
            .iter()
            .filter(|&&(u, _)| self.initial.get(u) != lv)
            .map(|&(_, w)| w)
            .sum()
    }

    /// Checks that `labeling` fits this instance and leaves terminals in place.
    pub fn check_labeling(&self, labeling: &Labeling) -> Result<()> {
        if labeling.len() != self.node_count() || labeling.k() != self.k() {
            return Err(Error::InvalidLabeling(format!(
                "labeling has {} nodes and k = {}, instance has {} nodes and k = {}",
                labeling.len(),
                labeling.k(),
                self.node_count(),
                self.k()
            )));
        }
        for (i, &s) in self.terminals.iter().enumerate() {
            if labeling.get(s) != i {
                return Err(Error::TerminalMoved(s));
            }
        }
        Ok(())
    }
}

/// Non-terminal nodes whose label differs from the initial one, ascending.
pub fn moved_set(instance: &Instance, labeling: &Labeling) -> Result<Vec<NodeId>> {
    instance.check_labeling(labeling)?;
    Ok(instance
        .non_terminals()
        .filter(|&v| labeling.get(v) != instance.initial().get(v))
        .collect())
}

pub fn boundary_weight(instance: &Instance, v: NodeId) -> f64 {
    instance.boundary_weight(v)
}

/// Output of any solver: a labeling together with its cut and move set.
#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub labeling: Labeling,
    pub cut_value: f64,
    pub moved: Vec<NodeId>,
    pub algorithm: String,
    pub seed: Option<u64>,
}

impl CutResult {
    pub fn new(instance: &Instance, labeling: Labeling, algorithm: &str) -> Result<Self> {
        let moved = moved_set(instance, &labeling)?;
        let cut_value = cut_of_labels(instance.graph(), labeling.as_slice());
        Ok(Self {
            labeling,
            cut_value,
            moved,
            algorithm: algorithm.to_string(),
            seed: None,
        })
    }

    pub fn initial(instance: &Instance, algorithm: &str) -> Self {
        Self {
            labeling: instance.initial().clone(),
            cut_value: instance.initial_cut(),
            moved: Vec::new(),
            algorithm: algorithm.to_string(),
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn moves(&self) -> usize {
        self.moved.len()
    }
}

/// Result of merging a non-terminal node into a terminal.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub instance: Instance,
    /// Original id → id in the contracted instance (`None` for the merged node).
    pub old_to_new: Vec<Option<NodeId>>,
    pub new_to_old: Vec<NodeId>,
    pub merged: NodeId,
    pub target: usize,
}

impl Contraction {
    /// Maps a labeling of the contracted instance back onto the original nodes.
    pub fn lift(&self, labeling: &Labeling) -> Labeling {
        let labels = self
            .old_to_new
            .iter()
            .map(|m| match m {
                Some(x) => labeling.get(*x),
                None => self.target,
            })
            .collect();
        Labeling {
            labels,
            k: labeling.k(),
        }
    }
}

/// Merges non-terminal `v` into terminal `s_j`: every edge `(v, u)` adds its
/// weight to `(s_j, u)` and the edge `(v, s_j)` disappears. Remaining node ids
/// are renumbered densely, preserving their relative order. The move budget is
/// left unchanged.
pub fn contract_into_terminal(instance: &Instance, v: NodeId, j: usize) -> Result<Contraction> {
    if v >= instance.node_count() {
        return Err(Error::Parameter(format!("node {v} out of range")));
    }
    if instance.is_terminal(v) {
        return Err(Error::TerminalContract(v));
    }
    if j >= instance.k() {
        return Err(Error::Parameter(format!(
            "partition {j} outside 0..{}",
            instance.k()
        )));
    }
    let n = instance.node_count();
    let mut old_to_new = vec![None; n];
    let mut new_to_old = Vec::with_capacity(n - 1);
    for u in (0..n).filter(|&u| u != v) {
        old_to_new[u] = Some(new_to_old.len());
        new_to_old.push(u);
    }
    let s_j = instance.terminals()[j];
    let edges = instance.graph().edges().iter().filter_map(|e| {
        let a = if e.u == v { s_j } else { e.u };
        let b = if e.v == v { s_j } else { e.v };
        (a != b).then(|| (old_to_new[a].unwrap(), old_to_new[b].unwrap(), e.weight))
    });
    let graph = WeightedGraph::new(n - 1, edges)?;
    let labels = new_to_old
        .iter()
        .map(|&u| instance.initial().get(u))
        .collect();
    let initial = Labeling::new(labels, instance.k())?;
    let terminals = instance
        .terminals()
        .iter()
        .map(|&s| old_to_new[s].unwrap())
        .collect();
    let contracted = Instance::new(graph, initial, terminals, instance.r())?;
    Ok(Contraction {
        instance: contracted,
        old_to_new,
        new_to_old,
        merged: v,
        target: j,
    })
}


#[cfg(test)]
mod tests {
    use super::fixtures::t1;
    use super::*;

    #[test]
    fn t1_cut_is_crossing_edges() {
        let inst = t1(1);
        assert!((inst.initial_cut() - 1.5).abs() < 1e-12);
        let g = inst.graph();
        let one = Labeling::new(vec![0; 4], 2).unwrap();
        assert_eq!(cut_value(g, &one).unwrap(), 0.0);
        let empty = WeightedGraph::empty(3);
        let l = Labeling::new(vec![0, 1, 0], 2).unwrap();
        assert_eq!(cut_value(&empty, &l).unwrap(), 0.0);
    }

    #[test]
    fn cut_rejects_mismatched_labeling() {
        let inst = t1(1);
        let l = Labeling::new(vec![0, 1], 2).unwrap();
        assert!(matches!(
            cut_value(inst.graph(), &l),
            Err(Error::InvalidLabeling(_))
        ));
        assert!(Labeling::new(vec![0, 2], 2).is_err());
    }

    #[test]
    fn parallel_edges_merge() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 0, 2.5), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.weight(0, 1), 3.5);
        assert!(WeightedGraph::new(2, [(0, 0, 1.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, -1.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, f64::NAN)]).is_err());
    }

    #[test]
    fn moved_set_cases() {
        let inst = t1(1);
        assert!(moved_set(&inst, inst.initial()).unwrap().is_empty());
        let mut l = inst.initial().clone();
        l.set(2, 1).unwrap();
        assert_eq!(moved_set(&inst, &l).unwrap(), vec![2]);
        let mut l = inst.initial().clone();
        l.set(1, 0).unwrap();
        assert!(matches!(moved_set(&inst, &l), Err(Error::TerminalMoved(1))));
    }

    #[test]
    fn boundary_weights() {
        let inst = t1(1);
        assert!((inst.boundary_weight(2) - 1.5).abs() < 1e-12);
        assert_eq!(inst.boundary_weight(0), 0.0);
        let g = WeightedGraph::new(3, [(0, 1, 1.0)]).unwrap();
        let l = Labeling::new(vec![0, 1, 1], 2).unwrap();
        let inst = Instance::new(g, l, vec![0, 1], 0).unwrap();
        assert_eq!(inst.boundary_weight(2), 0.0);
        let total: f64 = (0..inst.node_count())
            .map(|v| inst.boundary_weight(v))
            .sum();
        assert!((total - 2.0 * inst.initial_cut()).abs() < 1e-12);
    }

    #[test]
    fn contract_a_into_t() {
        let inst = t1(1);
        let c = contract_into_terminal(&inst, 2, 1).unwrap();
        let g = c.instance.graph();
        assert_eq!(g.node_count(), 3);
        // remaining originals s=0, t=1, b=3 become 0, 1, 2
        assert_eq!(c.old_to_new, vec![Some(0), Some(1), None, Some(2)]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.weight(0, 1), 2.0);
        assert_eq!(g.weight(2, 1), 3.0);
        let lifted = c.lift(c.instance.initial());
        assert_eq!(lifted.as_slice(), &[0, 1, 1, 1]);
        assert!(
            (cut_value(inst.graph(), &lifted).unwrap() - c.instance.initial_cut()).abs() < 1e-12
        );
    }

    #[test]
    fn contract_isolated_and_terminal() {
        let g = WeightedGraph::new(4, [(0, 1, 1.5)]).unwrap();
        let l = Labeling::new(vec![0, 1, 0, 1], 2).unwrap();
        let inst = Instance::new(g, l, vec![0, 1], 1).unwrap();
        let c = contract_into_terminal(&inst, 3, 0).unwrap();
        assert_eq!(c.instance.node_count(), 3);
        assert_eq!(c.instance.graph().edges(), inst.graph().edges());
        assert!(matches!(
            contract_into_terminal(&inst, 0, 1),
            Err(Error::TerminalContract(0))
        ));
    }

    #[test]
    fn instance_validation() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0)]).unwrap();
        let l = Labeling::new(vec![0, 0, 1], 2).unwrap();
        assert!(Instance::new(g.clone(), l.clone(), vec![0, 1], 0).is_err());
        assert!(Instance::new(g.clone(), l.clone(), vec![0, 0], 0).is_err());
        assert!(Instance::new(g, l, vec![0, 2], 0).is_ok());
    }
}
