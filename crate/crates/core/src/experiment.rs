//! Algorithm registry and CSV rows shared by the CLI and the test suites.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::baselines::{exact_brute_force, greedy_best_move, greedy_boundary, DEFAULT_WORK_BOUND};
use crate::bicriteria::{bicriteria_move_bound, bicriteria_round};
use crate::error::{Error, Result};
use crate::fptas::fptas_solve;
use crate::graph::{CutResult, Instance};
use crate::lp::{solve_rmove, LpAssignment};
use crate::rounding::{component_round, round_derandomized, round_randomized};
use crate::two_part::two_part_solve;

pub const CSV_HEADER: &str = "instance,alg,n,m,k,r,seed,cut,lp_obj,moves,ratio,time_ms,bound";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Lp,
    LpRound,
    LpRoundDerand,
    ComponentRound,
    Fptas,
    Bicriteria,
    TwoPart,
    GreedyBest,
    GreedyBoundary,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::Lp,
        Algorithm::LpRound,
        Algorithm::LpRoundDerand,
        Algorithm::ComponentRound,
        Algorithm::Fptas,
        Algorithm::Bicriteria,
        Algorithm::TwoPart,
        Algorithm::GreedyBest,
        Algorithm::GreedyBoundary,
        Algorithm::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lp => "lp",
            Algorithm::LpRound => "lp-round",
            Algorithm::LpRoundDerand => "lp-round-derand",
            Algorithm::ComponentRound => "component-round",
            Algorithm::Fptas => "fptas",
            Algorithm::Bicriteria => "bicriteria",
            Algorithm::TwoPart => "two-part",
            Algorithm::GreedyBest => "greedy-best",
            Algorithm::GreedyBoundary => "greedy-boundary",
            Algorithm::Exact => "exact",
        }
    }

    /// Whether the output depends on the seed.
    pub fn is_randomized(self) -> bool {
        matches!(self, Algorithm::LpRound | Algorithm::Bicriteria)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgOptions {
    pub epsilon: f64,
    pub gamma: f64,
    pub work_bound: u64,
}

impl Default for AlgOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.5,
            gamma: 0.75,
            work_bound: DEFAULT_WORK_BOUND,
        }
    }
}

/// Move bound an algorithm promises on `instance`.
pub fn move_bound(alg: Algorithm, r: usize, opts: &AlgOptions) -> usize {
    match alg {
        Algorithm::Bicriteria => bicriteria_move_bound(r, opts.gamma),
        _ => r,
    }
}

/// LP optima keyed by instance name and move budget, so every algorithm run
/// on the same instance sees the same fractional solution.
#[derive(Debug, Default)]
pub struct LpCache {
    map: HashMap<(String, usize), LpAssignment>,
}

impl LpCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, name: &str, instance: &Instance) -> Result<&LpAssignment> {
        let key = (name.to_string(), instance.r());
        if !self.map.contains_key(&key) {
            let lp = solve_rmove(instance)?;
            self.map.insert(key.clone(), lp);
        }
        Ok(&self.map[&key])
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Outcome of one algorithm on one instance.
#[derive(Debug, Clone)]
pub enum Outcome {
    /// The LP relaxation itself: objective and number of nodes whose row is
    /// not their initial unit vector.
    Fractional { objective: f64, moved: usize },
    Integral(CutResult),
}

impl Outcome {
    pub fn cut(&self) -> f64 {
        match self {
            Outcome::Fractional { objective, .. } => *objective,
            Outcome::Integral(res) => res.cut_value,
        }
    }

    pub fn moves(&self) -> usize {
        match self {
            Outcome::Fractional { moved, .. } => *moved,
            Outcome::Integral(res) => res.moves(),
        }
    }
}

/// Runs `alg`. Algorithms that round the LP take it from `cache`.
pub fn run_algorithm(
    instance: &Instance,
    name: &str,
    alg: Algorithm,
    opts: &AlgOptions,
    seed: u64,
    cache: &mut LpCache,
) -> Result<Outcome> {
    let res = match alg {
        Algorithm::Lp => {
            let lp = cache.get(name, instance)?;
            let x = &lp.assignment;
            let moved = (0..instance.node_count())
                .filter(|&v| x.get(v, instance.initial().get(v)) < 1.0 - 1e-9)
                .count();
            return Ok(Outcome::Fractional {
                objective: lp.objective,
                moved,
            });
        }
        Algorithm::LpRound => round_randomized(instance, &cache.get(name, instance)?.assignment, seed)?,
        Algorithm::LpRoundDerand => round_derandomized(instance, &cache.get(name, instance)?.assignment)?,
        Algorithm::ComponentRound => component_round(instance, &cache.get(name, instance)?.assignment)?,
        Algorithm::Bicriteria => {
            bicriteria_round(instance, &cache.get(name, instance)?.assignment, opts.gamma, seed)?
        }
        Algorithm::Fptas => fptas_solve(instance, opts.epsilon)?,
        Algorithm::TwoPart => two_part_solve(instance)?,
        Algorithm::GreedyBest => greedy_best_move(instance)?,
        Algorithm::GreedyBoundary => greedy_boundary(instance)?,
        Algorithm::Exact => exact_brute_force(instance, opts.work_bound)?,
    };
    Ok(Outcome::Integral(res))
}

/// One CSV line.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub instance: String,
    pub alg: Algorithm,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub r: usize,
    pub seed: Option<u64>,
    pub cut: f64,
    pub lp_obj: Option<f64>,
    pub moves: usize,
    pub ratio: Option<f64>,
    pub time_ms: Option<f64>,
    pub bound: usize,
}

/// cut / LP, with 0/0 read as 1 and x/0 left undefined.
pub fn ratio(cut: f64, lp: f64) -> Option<f64> {
    const ZERO: f64 = 1e-12;
    if lp > ZERO {
        Some(cut / lp)
    } else if cut <= ZERO {
        Some(1.0)
    } else {
        None
    }
}

fn opt<T: fmt::Display>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl Row {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.alg,
            self.n,
            self.m,
            self.k,
            self.r,
            opt(self.seed),
            self.cut,
            opt(self.lp_obj),
            self.moves,
            opt(self.ratio),
            opt(self.time_ms.map(|t| format!("{t:.3}"))),
            self.bound
        )
    }
}

/// Settings shared by every row of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowOptions {
    pub alg: AlgOptions,
    pub with_lp: bool,
    pub timing: bool,
}

impl Default for RowOptions {
    fn default() -> Self {
        Self {
            alg: AlgOptions::default(),
            with_lp: true,
            timing: true,
        }
    }
}

/// Runs `alg` and fills a CSV row. The LP objective column comes from the
/// cache (solved at most once per instance and budget) unless disabled.
pub fn run_row(
    instance: &Instance,
    name: &str,
    alg: Algorithm,
    seed: u64,
    opts: &RowOptions,
    cache: &mut LpCache,
) -> Result<Row> {
    let start = Instant::now();
    let outcome = run_algorithm(instance, name, alg, &opts.alg, seed, cache)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let lp_obj = if opts.with_lp || alg == Algorithm::Lp {
        Some(cache.get(name, instance)?.objective)
    } else {
        None
    };
    let cut = outcome.cut();
    Ok(Row {
        instance: name.to_string(),
        alg,
        n: instance.node_count(),
        m: instance.graph().edge_count(),
        k: instance.k(),
        r: instance.r(),
        seed: alg.is_randomized().then_some(seed),
        cut,
        lp_obj,
        moves: outcome.moves(),
        ratio: lp_obj.and_then(|lp| ratio(cut, lp)),
        time_ms: opts.timing.then_some(elapsed),
        bound: move_bound(alg, instance.r(), &opts.alg),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_integrality_gap;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("simplex".parse::<Algorithm>().is_err());
    }

    #[test]
    fn gap_rows() {
        let inst = gen_integrality_gap(3, 1.0, 6).unwrap();
        let mut cache = LpCache::new();
        let opts = RowOptions {
            timing: false,
            ..RowOptions::default()
        };
        let exact = run_row(&inst, "gap", Algorithm::Exact, 0, &opts, &mut cache).unwrap();
        let lp = run_row(&inst, "gap", Algorithm::Lp, 0, &opts, &mut cache).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(exact.cut, 1.0);
        assert!((lp.cut - 0.25).abs() < 1e-9);
        assert!((exact.ratio.unwrap() - 4.0).abs() < 1e-6);
        assert_eq!(
            exact.to_csv().split(',').count(),
            CSV_HEADER.split(',').count()
        );
        assert!(exact.to_csv().starts_with("gap,exact,11,"));
    }

    #[test]
    fn bounds_and_ratio() {
        let o = AlgOptions::default();
        assert_eq!(move_bound(Algorithm::Bicriteria, 3, &o), 12);
        assert_eq!(move_bound(Algorithm::Exact, 3, &o), 3);
        assert_eq!(ratio(0.0, 0.0), Some(1.0));
        assert_eq!(ratio(1.0, 0.0), None);
        assert_eq!(ratio(3.0, 1.5), Some(2.0));
    }
}
