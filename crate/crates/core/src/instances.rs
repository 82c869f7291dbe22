//! Instance generators and a loader for labeled edge lists.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Instance, Labeling, WeightedGraph};
use crate::random::{stream_rng, STREAM_SBM_EDGES, STREAM_SBM_LABELS, STREAM_SUITE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relabel {
    Keep,
    Uniform,
}

/// Stochastic block model with `k` equal blocks of `n / k` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    pub n: usize,
    pub k: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub relabel: Relabel,
    pub seed: u64,
    pub r: usize,
}

impl SbmParams {
    pub fn new(n: usize, k: usize, p_in: f64, p_out: f64, seed: u64) -> Self {
        Self {
            n,
            k,
            p_in,
            p_out,
            relabel: Relabel::Uniform,
            seed,
            r: 0,
        }
    }
}

/// Draws an SBM graph with unit weights. Block `b` holds nodes
/// `b·n/k .. (b+1)·n/k` and its lowest node is the terminal of partition `b`.
/// With [`Relabel::Uniform`] every non-terminal gets a uniformly random
/// initial partition; otherwise nodes start in their own block.
pub fn gen_sbm(params: &SbmParams) -> Result<Instance> {
    let SbmParams { n, k, p_in, p_out, .. } = *params;
    if k < 2 || n == 0 || n % k != 0 {
        return Err(Error::Parameter(format!(
            "need k >= 2 dividing n > 0, got n = {n}, k = {k}"
        )));
    }
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) || p_out > p_in {
        return Err(Error::Parameter(format!(
            "need 0 <= p_out <= p_in <= 1, got p_in = {p_in}, p_out = {p_out}"
        )));
    }
    let size = n / k;
    let block = |v: usize| v / size;
    let mut rng = stream_rng(params.seed, STREAM_SBM_EDGES);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if block(u) == block(v) { p_in } else { p_out };
            if rng.gen::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    let terminals: Vec<usize> = (0..k).map(|b| b * size).collect();
    let mut labels: Vec<usize> = (0..n).map(block).collect();
    if params.relabel == Relabel::Uniform {
        let mut rng = stream_rng(params.seed, STREAM_SBM_LABELS);
        for (v, label) in labels.iter_mut().enumerate() {
            if v % size != 0 {
                *label = rng.gen_range(0..k);
            }
        }
    }
    let graph = WeightedGraph::new(n, edges)?;
    Instance::new(graph, Labeling::new(labels, k)?, terminals, params.r)
}

/// Weights drawn by [`gen_random`]: 0.5, 1.0, ..., 4.0.
pub const RANDOM_WEIGHTS: [f64; 8] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];

/// Erdős–Rényi test instance: each pair is an edge with probability `p` and a
/// weight from [`RANDOM_WEIGHTS`]. Nodes `0..k` are the terminals, every other
/// node starts in a uniformly random partition.
pub fn gen_random(n: usize, k: usize, p: f64, r: usize, seed: u64) -> Result<Instance> {
    if k < 2 || n < k {
        return Err(Error::Parameter(format!(
            "need 2 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = stream_rng(seed, STREAM_SUITE);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v, RANDOM_WEIGHTS[rng.gen_range(0..RANDOM_WEIGHTS.len())]));
            }
        }
    }
    let labels = (0..n)
        .map(|v| if v < k { v } else { rng.gen_range(0..k) })
        .collect();
    let graph = WeightedGraph::new(n, edges)?;
    Instance::new(graph, Labeling::new(labels, k)?, (0..k).collect(), r)
}

/// Two disjoint paths. The first has `r + 2` nodes: node 0 is the terminal of
/// partition 0 and is joined to node 1 by an edge of weight `epsilon`, the
/// remaining `r` edges have unit weight. The second is a unit path of
/// `tail_len` nodes whose last node is the terminal of partition 1. All nodes
/// except node 0 start in partition 1, so the initial cut is `epsilon`.
pub fn gen_integrality_gap(r: usize, epsilon: f64, tail_len: usize) -> Result<Instance> {
    if r < 1 || tail_len < 1 {
        return Err(Error::Parameter(format!(
            "need r >= 1 and tail_len >= 1, got r = {r}, tail_len = {tail_len}"
        )));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Parameter(format!("epsilon = {epsilon} must be positive")));
    }
    let head = r + 2;
    let n = head + tail_len;
    let mut edges = vec![(0, 1, epsilon)];
    edges.extend((1..head - 1).map(|v| (v, v + 1, 1.0)));
    edges.extend((head..n - 1).map(|v| (v, v + 1, 1.0)));
    let mut labels = vec![1; n];
    labels[0] = 0;
    let graph = WeightedGraph::new(n, edges)?;
    Instance::new(graph, Labeling::new(labels, 2)?, vec![0, n - 1], r)
}

/// Node layout of [`gen_densest_reduction`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionLayout {
    /// Copy of the input graph: nodes `0..n`.
    pub a_nodes: std::ops::Range<usize>,
    /// Terminal of the partition holding the copy.
    pub a_terminal: usize,
    /// Clique nodes; the first `m` stand for the input edges, in order.
    pub b_nodes: std::ops::Range<usize>,
    pub b_terminal: usize,
}

pub const DEFAULT_REDUCTION_NODE_BOUND: usize = 2000;

/// Builds the densest-subgraph reduction. Partition 0 holds a copy A of the
/// input plus terminal `t` joined to every A node. Partition 1 holds a clique
/// B of `2n² + n` nodes, one per input edge followed by fillers, plus terminal
/// `s` joined to every A and B node. Both endpoints of input edge `e` are
/// joined to B node `e`. All weights are 1 and the initial cut is `2m + n`.
pub fn gen_densest_reduction(
    input: &WeightedGraph,
    r: usize,
    node_bound: usize,
) -> Result<(Instance, ReductionLayout)> {
    let n = input.node_count();
    let clique = 2 * n * n + n;
    let total = n + 1 + clique + 1;
    if total > node_bound {
        return Err(Error::Capacity(format!(
            "reduction of a {n}-node graph needs {total} nodes, bound is {node_bound}"
        )));
    }
    let t = n;
    let b0 = n + 1;
    let s = b0 + clique;
    let mut edges = Vec::new();
    for (i, e) in input.edges().iter().enumerate() {
        edges.push((e.u, e.v, 1.0));
        edges.push((e.u, b0 + i, 1.0));
        edges.push((e.v, b0 + i, 1.0));
    }
    for a in 0..n {
        edges.push((t, a, 1.0));
        edges.push((s, a, 1.0));
    }
    for x in b0..s {
        edges.push((s, x, 1.0));
        for y in x + 1..s {
            edges.push((x, y, 1.0));
        }
    }
    let mut labels = vec![1; total];
    labels[..=n].fill(0);
    let graph = WeightedGraph::new(total, edges)?;
    let instance = Instance::new(graph, Labeling::new(labels, 2)?, vec![t, s], r)?;
    let layout = ReductionLayout {
        a_nodes: 0..n,
        a_terminal: t,
        b_nodes: b0..s,
        b_terminal: s,
    };
    Ok((instance, layout))
}

/// What [`load_labeled_edgelist`] kept and dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeListReport {
    /// Original node id of each instance node.
    pub original_ids: Vec<u64>,
    /// Original label of each partition.
    pub partition_labels: Vec<u64>,
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

fn parse_pairs(path: &Path) -> Result<Vec<(usize, u64, u64)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace().map(str::parse::<u64>);
        let (Some(Ok(a)), Some(Ok(b)), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected two non-negative integers in {}", path.display()),
            });
        };
        out.push((idx + 1, a, b));
    }
    Ok(out)
}

/// Loads an unweighted edge list (`u v` per line) with a membership file
/// (`node label` per line), keeps the `top_blocks` largest labels (ties go to
/// the smaller label), and returns the induced subgraph with unit weights.
/// Nodes are renumbered by increasing original id and the lowest node of each
/// partition is its terminal. Repeated edges count once.
pub fn load_labeled_edgelist(
    edges_path: &Path,
    labels_path: &Path,
    top_blocks: usize,
    r: usize,
) -> Result<(Instance, EdgeListReport)> {
    if top_blocks < 2 {
        return Err(Error::Parameter(format!("top_blocks = {top_blocks}, need >= 2")));
    }
    let mut label_of: HashMap<u64, u64> = HashMap::new();
    for (line, node, label) in parse_pairs(labels_path)? {
        if label_of.insert(node, label).is_some_and(|old| old != label) {
            return Err(Error::Parse {
                line,
                msg: format!("node {node} has two labels"),
            });
        }
    }
    let raw_edges = parse_pairs(edges_path)?;
    let mut sizes: BTreeMap<u64, usize> = BTreeMap::new();
    for &label in label_of.values() {
        *sizes.entry(label).or_insert(0) += 1;
    }
    if top_blocks > sizes.len() {
        return Err(Error::Format(format!(
            "asked for {top_blocks} blocks, membership file has {} labels",
            sizes.len()
        )));
    }
    let mut ranked: Vec<(u64, usize)> = sizes.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut kept: Vec<u64> = ranked[..top_blocks].iter().map(|&(l, _)| l).collect();
    kept.sort_unstable();
    let partition: HashMap<u64, usize> = kept.iter().enumerate().map(|(i, &l)| (l, i)).collect();

    let mut nodes: Vec<u64> = label_of
        .iter()
        .filter(|(_, l)| partition.contains_key(l))
        .map(|(&v, _)| v)
        .collect();
    for &(line, u, v) in &raw_edges {
        for x in [u, v] {
            if !label_of.contains_key(&x) {
                return Err(Error::Format(format!(
                    "node {x} on edge line {line} has no label"
                )));
            }
        }
    }
    nodes.sort_unstable();
    let index: HashMap<u64, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut self_loops = 0;
    let mut seen = std::collections::BTreeSet::new();
    let mut duplicate_edges = 0;
    for &(_, u, v) in &raw_edges {
        if u == v {
            self_loops += 1;
            continue;
        }
        let (Some(&a), Some(&b)) = (index.get(&u), index.get(&v)) else {
            continue;
        };
        if !seen.insert((a.min(b), a.max(b))) {
            duplicate_edges += 1;
        }
    }
    let labels: Vec<usize> = nodes.iter().map(|v| partition[&label_of[v]]).collect();
    let mut terminals = vec![usize::MAX; top_blocks];
    for (v, &p) in labels.iter().enumerate().rev() {
        terminals[p] = v;
    }
    if let Some(p) = terminals.iter().position(|&t| t == usize::MAX) {
        return Err(Error::Format(format!("block {} is empty", kept[p])));
    }
    let graph = WeightedGraph::new(nodes.len(), seen.into_iter().map(|(a, b)| (a, b, 1.0)))?;
    let instance = Instance::new(graph, Labeling::new(labels, top_blocks)?, terminals, r)?;
    let report = EdgeListReport {
        original_ids: nodes,
        partition_labels: kept,
        self_loops,
        duplicate_edges,
    };
    Ok((instance, report))
}
