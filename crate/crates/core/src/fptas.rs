//! (1+ε)-approximation for constant r by recursive contraction of nodes with
//! large initial boundary weight.

use crate::error::{Error, Result};
use crate::graph::{contract_into_terminal, cut_value, CutResult, Instance, Labeling, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FptasParams {
    pub epsilon: f64,
    pub alpha: f64,
}

impl FptasParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Parameter(format!("epsilon = {epsilon} must be positive")));
        }
        Ok(Self {
            epsilon,
            alpha: 1.0 + epsilon,
        })
    }
}

/// d⁻ threshold (α−1)/(rα)·c(C₀) of the candidate set.
pub fn candidate_threshold(instance: &Instance, alpha: f64) -> f64 {
    (alpha - 1.0) / (instance.r() as f64 * alpha) * instance.initial_cut()
}

/// Non-terminals with d⁻(v) ≥ (α−1)/(rα)·c(C₀). Empty when r = 0.
pub fn candidate_set(instance: &Instance, alpha: f64) -> Vec<NodeId> {
    if instance.r() == 0 {
        return Vec::new();
    }
    let threshold = candidate_threshold(instance, alpha);
    instance
        .non_terminals()
        .filter(|&v| instance.boundary_weight(v) >= threshold)
        .collect()
}

/// Best labeling found below `instance` and its cut value.
fn search(instance: &Instance, alpha: f64, calls: &mut usize) -> Result<(Labeling, f64)> {
    *calls += 1;
    let c0 = instance.initial_cut();
    let mut best = (instance.initial().clone(), c0);
    if instance.r() == 0 || c0 <= instance.graph().tolerance() {
        return Ok(best);
    }
    let tol = instance.graph().tolerance();
    for v in candidate_set(instance, alpha) {
        for j in (0..instance.k()).filter(|&j| j != instance.initial().get(v)) {
            let contraction = contract_into_terminal(instance, v, j)?;
            let child = contraction.instance.with_r(instance.r() - 1);
            let (labels, _) = search(&child, alpha, calls)?;
            let lifted = contraction.lift(&labels);
            let cut = cut_value(instance.graph(), &lifted)?;
            if cut < best.1 - tol {
                best = (lifted, cut);
            }
        }
    }
    Ok(best)
}

/// Runs the contraction recursion and reports the number of visited
/// subproblems alongside the result.
pub fn fptas_solve_counted(instance: &Instance, epsilon: f64) -> Result<(CutResult, usize)> {
    let params = FptasParams::new(epsilon)?;
    let mut calls = 0;
    let (labels, _) = search(instance, params.alpha, &mut calls)?;
    Ok((CutResult::new(instance, labels, "fptas")?, calls))
}

pub fn fptas_solve(instance: &Instance, epsilon: f64) -> Result<CutResult> {
    fptas_solve_counted(instance, epsilon).map(|(res, _)| res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{exact_brute_force, DEFAULT_WORK_BOUND};
    use crate::graph::fixtures::t1;
    use crate::instances::gen_random;
    use proptest::prelude::*;

    #[test]
    fn r_zero_returns_initial() {
        let inst = t1(0);
        let res = fptas_solve(&inst, 0.5).unwrap();
        assert_eq!(res.labeling, *inst.initial());
        assert_eq!(res.cut_value, 1.5);
        assert!(res.moved.is_empty());
    }

    #[test]
    fn t1_initial_is_optimal() {
        let res = fptas_solve(&t1(1), 0.5).unwrap();
        assert_eq!(res.cut_value, 1.5);
        assert!(res.moved.is_empty());
    }

    #[test]
    fn threshold_formula() {
        // T1 has c(C₀) = 1.5; scale r and α so the threshold is easy to read.
        let inst = t1(2);
        let th = candidate_threshold(&inst, 1.5);
        assert!((th - (0.5 / 3.0) * 1.5).abs() < 1e-15);
        // d⁻(a) = 1.5 and d⁻(b) = 1.0 both clear 0.25.
        assert_eq!(candidate_set(&inst, 1.5), vec![2, 3]);
        assert!(candidate_set(&t1(0), 1.5).is_empty());
    }

    #[test]
    fn bad_epsilon() {
        assert!(fptas_solve(&t1(1), 0.0).is_err());
        assert!(fptas_solve(&t1(1), -1.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn within_factor_of_exact(
            n in 3usize..11, k in 2usize..4, r in 0usize..4,
            eps in prop::sample::select(vec![0.25, 0.5, 1.0]), seed in any::<u64>()
        ) {
            prop_assume!(n >= k);
            let inst = gen_random(n, k, 0.4, r, seed).unwrap();
            let exact = exact_brute_force(&inst, DEFAULT_WORK_BOUND).unwrap();
            let params = FptasParams::new(eps).unwrap();
            let a = candidate_set(&inst, params.alpha);
            if inst.initial_cut() > 0.0 && r > 0 {
                let bound = 2.0 * r as f64 * params.alpha / (params.alpha - 1.0);
                prop_assert!(a.len() as f64 <= bound + 1e-9);
            }
            let (res, _) = fptas_solve_counted(&inst, eps).unwrap();
            let tol = inst.graph().tolerance();
            prop_assert!(res.cut_value <= (1.0 + eps) * exact.cut_value + tol);
            prop_assert!(res.cut_value <= inst.initial_cut() + tol);
            prop_assert!(res.moves() <= r);
        }

        #[test]
        fn lifted_cut_matches_contracted_cut(
            n in 4usize..10, seed in any::<u64>(), pick in any::<prop::sample::Index>()
        ) {
            let inst = gen_random(n, 3, 0.5, 2, seed).unwrap();
            let movable: Vec<_> = inst.non_terminals().collect();
            let v = movable[pick.index(movable.len())];
            for j in 0..3 {
                let c = contract_into_terminal(&inst, v, j).unwrap();
                let contracted_cut = c.instance.initial_cut();
                let lifted = c.lift(c.instance.initial());
                let cut = cut_value(inst.graph(), &lifted).unwrap();
                prop_assert!((cut - contracted_cut).abs() <= 1e-9);
            }
        }
    }
}
