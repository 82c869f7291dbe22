//! Max-flow / min s-t cut on undirected weighted graphs (Dinic).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};

/// Residual network: every undirected edge of weight w becomes the arc pair
/// u→v and v→u, each of capacity w. Arc `e ^ 1` is the reverse of arc `e`.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<NodeId>,
    cap: Vec<f64>,
    eps: f64,
}

impl FlowNetwork {
    pub fn from_graph(graph: &WeightedGraph) -> Self {
        let n = graph.node_count();
        let mut net = Self {
            adj: vec![Vec::new(); n],
            to: Vec::with_capacity(2 * graph.edge_count()),
            cap: Vec::with_capacity(2 * graph.edge_count()),
            eps: 1e-12 * graph.total_weight().max(1.0),
        };
        for e in graph.edges() {
            net.add_arc_pair(e.u, e.v, e.weight);
        }
        net
    }

    fn add_arc_pair(&mut self, u: NodeId, v: NodeId, w: f64) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(w);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(w);
    }

    fn levels(&self, s: NodeId) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > self.eps && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(
        &mut self,
        u: NodeId,
        t: NodeId,
        limit: f64,
        level: &[usize],
        next: &mut [usize],
    ) -> f64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let e = self.adj[u][next[u]];
            let v = self.to[e];
            if self.cap[e] > self.eps && level[v] == level[u] + 1 {
                let pushed = self.augment(v, t, limit.min(self.cap[e]), level, next);
                if pushed > 0.0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0.0
    }

    /// Saturates the network and returns the total flow pushed.
    pub fn max_flow(&mut self, s: NodeId, t: NodeId) -> f64 {
        let mut total = 0.0;
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0; self.adj.len()];
            loop {
                let f = self.augment(s, t, f64::INFINITY, &level, &mut next);
                if f <= 0.0 {
                    break;
                }
                total += f;
            }
        }
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn reachable(&self, s: NodeId) -> Vec<bool> {
        self.levels(s).iter().map(|&l| l != usize::MAX).collect()
    }
}

/// A minimum s-t cut with its minimal source side.
#[derive(Debug, Clone, PartialEq)]
pub struct StCut {
    pub value: f64,
    pub flow: f64,
    /// Membership of each node in the source side.
    pub source_side: Vec<bool>,
}

impl StCut {
    pub fn source_nodes(&self) -> Vec<NodeId> {
        (0..self.source_side.len())
            .filter(|&v| self.source_side[v])
            .collect()
    }
}

/// Max-flow from `s` to `t`. The returned source side is the set of nodes
/// still reachable from `s` in the residual network, which is the smallest
/// source side over all minimum cuts. `value` is recomputed from the graph.
pub fn min_st_cut(graph: &WeightedGraph, s: NodeId, t: NodeId) -> Result<StCut> {
    let n = graph.node_count();
    if s >= n || t >= n {
        return Err(Error::Parameter(format!("terminal out of range for n = {n}")));
    }
    if s == t {
        return Err(Error::Parameter("source equals sink".into()));
    }
    let mut net = FlowNetwork::from_graph(graph);
    let flow = net.max_flow(s, t);
    let source_side = net.reachable(s);
    let value = graph
        .edges()
        .iter()
        .filter(|e| source_side[e.u] != source_side[e.v])
        .map(|e| e.weight)
        .sum();
    Ok(StCut {
        value,
        flow,
        source_side,
    })
}
