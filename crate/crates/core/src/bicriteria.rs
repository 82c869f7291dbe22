//! Edge subdivision, threshold (CKR) rounding and the bicriteria rounding
//! that may exceed the move budget by a constant factor.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{CutResult, Instance, Labeling, NodeId, WeightedGraph};
use crate::lp::FractionalAssignment;
use crate::random::{stream_rng, STREAM_BICRITERIA};

/// Coordinates closer than this are treated as equal.
pub const ENTRY_TOL: f64 = 1e-12;

/// Graph with interpolated nodes appended so that the rows at the two ends of
/// every edge differ in at most two entries. Nodes below `original_count` are
/// the original ones, with unchanged ids.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdividedInstance {
    pub graph: WeightedGraph,
    pub x: FractionalAssignment,
    pub original_count: usize,
}

impl SubdividedInstance {
    pub fn objective(&self) -> f64 {
        self.x.objective(&self.graph)
    }
}

fn differing(a: &[f64], b: &[f64]) -> usize {
    a.iter().zip(b).filter(|(x, y)| (*x - *y).abs() > ENTRY_TOL).count()
}

/// Next node on the way from `u` to `v`: close the smallest nonzero gap i
/// completely and shift the same amount from the lowest coordinate j whose
/// gap has the opposite sign and is at least as large.
fn step_toward(u: &[f64], v: &[f64]) -> Option<Vec<f64>> {
    let mut pick: Option<(usize, f64)> = None;
    for (t, (a, b)) in u.iter().zip(v).enumerate() {
        let gap = (b - a).abs();
        if gap > ENTRY_TOL && pick.is_none_or(|(_, g)| gap < g) {
            pick = Some((t, gap));
        }
    }
    let (i, alpha) = pick?;
    let sign = (v[i] - u[i]).signum();
    let j = (0..u.len()).find(|&j| j != i && sign * (u[j] - v[j]) >= alpha - ENTRY_TOL)?;
    let mut w = u.to_vec();
    w[i] = v[i];
    w[j] = u[j] - sign * alpha;
    Some(w)
}

pub fn subdivide(graph: &WeightedGraph, x: &FractionalAssignment) -> Result<SubdividedInstance> {
    let n = graph.node_count();
    let k = x.k();
    if x.n() != n {
        return Err(Error::Parameter(format!(
            "assignment has {} rows for {n} nodes",
            x.n()
        )));
    }
    let mut rows: Vec<f64> = x.values().to_vec();
    let mut edges: Vec<(NodeId, NodeId, f64)> = Vec::with_capacity(graph.edge_count());
    for e in graph.edges() {
        let target = x.row(e.v).to_vec();
        let mut from = e.u;
        let mut cur = x.row(e.u).to_vec();
        while differing(&cur, &target) > 2 {
            let w = step_toward(&cur, &target).ok_or_else(|| {
                Error::Invariant(format!("no subdivision step on edge ({}, {})", e.u, e.v))
            })?;
            let id = rows.len() / k;
            rows.extend_from_slice(&w);
            edges.push((from, id, e.weight));
            from = id;
            cur = w;
        }
        edges.push((from, e.v, e.weight));
    }
    let total = rows.len() / k;
    Ok(SubdividedInstance {
        graph: WeightedGraph::new(total, edges)?,
        x: FractionalAssignment::new(total, k, rows)?,
        original_count: n,
    })
}

/// Processing order of the threshold rounding. Both orders end with the last
/// partition, which receives every node left over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sigma {
    /// 0, 1, …, k−2, k−1.
    Forward,
    /// k−2, …, 0, k−1.
    Reverse,
}

impl Sigma {
    pub fn order(self, k: usize) -> Vec<usize> {
        let mut head: Vec<usize> = (0..k - 1).collect();
        if self == Sigma::Reverse {
            head.reverse();
        }
        head.push(k - 1);
        head
    }
}

fn threshold_assign(
    x: &FractionalAssignment,
    rho: f64,
    sigma: Sigma,
    pinned: &[Option<usize>],
) -> Vec<usize> {
    let k = x.k();
    let order = sigma.order(k);
    (0..x.n())
        .map(|v| {
            pinned[v].unwrap_or_else(|| {
                order[..k - 1]
                    .iter()
                    .copied()
                    .find(|&i| x.get(v, i) > rho)
                    .unwrap_or(order[k - 1])
            })
        })
        .collect()
}

fn check_subdivided(graph: &WeightedGraph, x: &FractionalAssignment) -> Result<()> {
    if x.n() != graph.node_count() {
        return Err(Error::Parameter("assignment does not match the graph".into()));
    }
    match graph
        .edges()
        .iter()
        .find(|e| differing(x.row(e.u), x.row(e.v)) > 2)
    {
        Some(e) => Err(Error::SubdivisionRequired(e.u, e.v)),
        None => Ok(()),
    }
}

/// Threshold rounding: in σ order, every node still free with X_v^i > ρ joins
/// partition i; the rest join the last partition of σ.
pub fn ckr_round(
    graph: &WeightedGraph,
    x: &FractionalAssignment,
    rho: f64,
    sigma: Sigma,
) -> Result<Labeling> {
    check_subdivided(graph, x)?;
    let labels = threshold_assign(x, rho, sigma, &vec![None; x.n()]);
    Labeling::new(labels, x.k())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BicriteriaParams {
    pub gamma: f64,
    pub lambda: f64,
    pub rho: f64,
    pub sigma: Sigma,
    pub seed: u64,
}

impl BicriteriaParams {
    /// Draws λ ∈ [(γ+1)/3, γ], ρ ∈ [0, λ] and σ from the seed.
    pub fn draw(gamma: f64, seed: u64) -> Result<Self> {
        if !(gamma > 0.5 && gamma < 1.0) {
            return Err(Error::Parameter(format!("gamma = {gamma} outside (1/2, 1)")));
        }
        let mut rng = stream_rng(seed, STREAM_BICRITERIA);
        let lambda = rng.gen_range((gamma + 1.0) / 3.0..=gamma);
        let rho = rng.gen_range(0.0..=lambda);
        let sigma = if rng.gen_bool(0.5) {
            Sigma::Forward
        } else {
            Sigma::Reverse
        };
        Ok(Self {
            gamma,
            lambda,
            rho,
            sigma,
            seed,
        })
    }
}

/// ⌊r/(1−γ)⌋.
pub fn bicriteria_move_bound(r: usize, gamma: f64) -> usize {
    (r as f64 / (1.0 - gamma) + 1e-9).floor() as usize
}

/// 5/(2γ−1).
pub fn bicriteria_cut_factor(gamma: f64) -> f64 {
    5.0 / (2.0 * gamma - 1.0)
}

/// Rounds an already subdivided instance with explicit parameters: pin nodes
/// with an entry ≥ λ, threshold-round the rest at ρ in σ order, and keep the
/// labels of the original nodes.
pub fn bicriteria_round_with(
    instance: &Instance,
    sub: &SubdividedInstance,
    params: &BicriteriaParams,
) -> Result<CutResult> {
    let x = &sub.x;
    let pinned: Vec<Option<usize>> = (0..x.n())
        .map(|v| (0..x.k()).find(|&i| x.get(v, i) >= params.lambda))
        .collect();
    let mut labels = threshold_assign(x, params.rho, params.sigma, &pinned);
    labels.truncate(sub.original_count);
    let labeling = Labeling::new(labels, instance.k())?;
    Ok(CutResult::new(instance, labeling, "bicriteria")?.with_seed(params.seed))
}

pub fn bicriteria_round(
    instance: &Instance,
    x: &FractionalAssignment,
    gamma: f64,
    seed: u64,
) -> Result<CutResult> {
    let params = BicriteriaParams::draw(gamma, seed)?;
    x.check(instance)?;
    let sub = subdivide(instance.graph(), x)?;
    bicriteria_round_with(instance, &sub, &params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::t1;
    use crate::instances::gen_random;
    use crate::lp::solve_rmove;
    use proptest::prelude::{any, prop_assert, prop_assume, proptest, ProptestConfig};

    fn two_rows(u: &[f64], v: &[f64]) -> (WeightedGraph, FractionalAssignment) {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let vals = u.iter().chain(v).copied().collect();
        (g, FractionalAssignment::new(2, u.len(), vals).unwrap())
    }

    #[test]
    fn hand_split() {
        let (g, x) = two_rows(&[0.5, 0.3, 0.2], &[0.2, 0.5, 0.3]);
        let sub = subdivide(&g, &x).unwrap();
        assert_eq!(sub.graph.node_count(), 3);
        let w = sub.x.row(2);
        for (a, b) in w.iter().zip([0.4, 0.3, 0.3]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((sub.x.distance(0, 2) + sub.x.distance(2, 1) - 0.3).abs() < 1e-12);
        assert!((sub.objective() - x.objective(&g)).abs() < 1e-12);
    }

    #[test]
    fn untouched_edges() {
        for (u, v) in [
            ([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]),
            ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
        ] {
            let (g, x) = two_rows(&u, &v);
            let sub = subdivide(&g, &x).unwrap();
            assert_eq!(sub.graph, g);
        }
    }

    #[test]
    fn sigma_orders() {
        assert_eq!(Sigma::Forward.order(4), vec![0, 1, 2, 3]);
        assert_eq!(Sigma::Reverse.order(4), vec![2, 1, 0, 3]);
    }

    #[test]
    fn ckr_requires_subdivision() {
        let (g, x) = two_rows(&[0.5, 0.3, 0.2], &[0.2, 0.5, 0.3]);
        assert!(matches!(
            ckr_round(&g, &x, 0.5, Sigma::Forward),
            Err(Error::SubdivisionRequired(0, 1))
        ));
    }

    #[test]
    fn ckr_high_threshold_sends_all_to_last() {
        let (g, x) = two_rows(&[0.5, 0.3, 0.2], &[0.2, 0.6, 0.2]);
        let l = ckr_round(&g, &x, 0.7, Sigma::Forward).unwrap();
        assert_eq!(l.as_slice(), &[2, 2]);
        let l = ckr_round(&g, &x, 0.4, Sigma::Forward).unwrap();
        assert_eq!(l.as_slice(), &[0, 1]);
    }

    #[test]
    fn ckr_integral_input() {
        let inst = t1(1);
        let x = FractionalAssignment::from_labeling(inst.initial());
        for rho in [0.1, 0.5, 0.9] {
            for sigma in [Sigma::Forward, Sigma::Reverse] {
                let l = ckr_round(inst.graph(), &x, rho, sigma).unwrap();
                assert_eq!(l, *inst.initial());
            }
        }
    }

    #[test]
    fn single_edge_cut_intervals() {
        // Rows differ in entries 0 and 1 with disjoint L_0 = [0.6, 0.8) and
        // L_1 = [0.1, 0.3).
        let (g, x) = two_rows(&[0.8, 0.1, 0.1], &[0.6, 0.3, 0.1]);
        for step in 1..1000 {
            let rho = step as f64 / 1000.0;
            let in_l0 = (0.6..0.8).contains(&rho);
            let in_l1 = (0.1..0.3).contains(&rho);
            let fwd = ckr_round(&g, &x, rho, Sigma::Forward).unwrap();
            let rev = ckr_round(&g, &x, rho, Sigma::Reverse).unwrap();
            assert_eq!(fwd.get(0) != fwd.get(1), in_l0, "rho {rho}");
            assert_eq!(rev.get(0) != rev.get(1), in_l0 || in_l1, "rho {rho}");
        }
    }

    #[test]
    fn integral_input_is_pinned() {
        let inst = t1(1);
        let mut target = inst.initial().clone();
        target.set(3, 0).unwrap();
        let x = FractionalAssignment::from_labeling(&target);
        for seed in 0..10 {
            let res = bicriteria_round(&inst, &x, 0.75, seed).unwrap();
            assert_eq!(res.labeling, target);
            assert_eq!(res.moved, vec![3]);
        }
    }

    #[test]
    fn parameters() {
        assert_eq!(bicriteria_move_bound(3, 0.75), 12);
        assert_eq!(bicriteria_cut_factor(0.75), 10.0);
        assert!(BicriteriaParams::draw(0.5, 1).is_err());
        assert!(BicriteriaParams::draw(1.0, 1).is_err());
        for seed in 0..200 {
            let p = BicriteriaParams::draw(0.75, seed).unwrap();
            assert!(p.lambda >= 1.75 / 3.0 && p.lambda <= 0.75);
            assert!(p.rho >= 0.0 && p.rho <= p.lambda);
        }
    }

    #[test]
    fn monte_carlo_edge_probability() {
        // Per-edge cut probability of the threshold rounding is at most 1.5·d.
        let (g, x) = two_rows(&[0.5, 0.3, 0.2], &[0.2, 0.6, 0.2]);
        let d = x.distance(0, 1);
        let mut rng = stream_rng(11, STREAM_BICRITERIA);
        let trials = 20_000;
        let cut = (0..trials)
            .filter(|_| {
                let rho: f64 = rng.gen();
                let sigma = if rng.gen_bool(0.5) { Sigma::Forward } else { Sigma::Reverse };
                let l = ckr_round(&g, &x, rho, sigma).unwrap();
                l.get(0) != l.get(1)
            })
            .count();
        let p = cut as f64 / trials as f64;
        assert!(p <= 1.5 * d + 0.02, "p = {p}, d = {d}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn subdivision_and_moves(
            n in 4usize..12, k in 2usize..5, r in 1usize..4, seed in any::<u64>()
        ) {
            prop_assume!(n >= k);
            let inst = gen_random(n, k, 0.5, r, seed).unwrap();
            let lp = solve_rmove(&inst).unwrap();
            let sub = subdivide(inst.graph(), &lp.assignment).unwrap();
            prop_assert!((sub.objective() - lp.assignment.objective(inst.graph())).abs() <= 1e-7);
            for e in sub.graph.edges() {
                prop_assert!(differing(sub.x.row(e.u), sub.x.row(e.v)) <= 2);
            }
            for v in 0..sub.x.n() {
                prop_assert!((sub.x.row(v).iter().sum::<f64>() - 1.0).abs() <= 1e-9);
                prop_assert!(sub.x.row(v).iter().all(|&a| a >= -1e-9));
            }
            for s in 0..20 {
                let res = bicriteria_round(&inst, &lp.assignment, 0.75, s).unwrap();
                prop_assert!(res.moves() <= bicriteria_move_bound(r, 0.75));
            }
        }
    }
}
