use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use rmove::experiment::{run_algorithm, AlgOptions, Algorithm, LpCache, Outcome};
use rmove::two_part::find_breakpoints;

create_exception!(pyrmove, RmoveError, PyException);

fn err(e: rmove::Error) -> PyErr {
    RmoveError::new_err(e.to_string())
}

/// An r-move k-partitioning instance. Partitions are numbered from 0.
#[pyclass(name = "Instance", module = "pyrmove", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyInstance {
    inner: rmove::Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (n, edges, labels, terminals, r))]
    fn new(
        n: usize,
        edges: Vec<(usize, usize, f64)>,
        labels: Vec<usize>,
        terminals: Vec<usize>,
        r: usize,
    ) -> PyResult<Self> {
        let k = terminals.len();
        let graph = rmove::WeightedGraph::new(n, edges).map_err(err)?;
        let initial = rmove::Labeling::new(labels, k).map_err(err)?;
        let inner = rmove::Instance::new(graph, initial, terminals, r).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        rmove::io::parse_instance(text)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        rmove::io::load_instance(path)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        rmove::io::save_instance(&self.inner, path).map_err(err)
    }

    fn to_text(&self) -> String {
        rmove::io::format_instance(&self.inner)
    }

    fn with_r(&self, r: usize) -> Self {
        Self {
            inner: self.inner.with_r(r),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.graph().edge_count()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn terminals(&self) -> Vec<usize> {
        self.inner.terminals().to_vec()
    }

    #[getter]
    fn labels(&self) -> Vec<usize> {
        self.inner.initial().as_slice().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .graph()
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.weight))
            .collect()
    }

    fn initial_cut(&self) -> f64 {
        self.inner.initial_cut()
    }

    /// Cut value of an arbitrary labeling of this instance's graph.
    fn cut_value(&self, labels: Vec<usize>) -> PyResult<f64> {
        let lab = rmove::Labeling::new(labels, self.inner.k()).map_err(err)?;
        rmove::cut_value(self.inner.graph(), &lab).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n={}, m={}, k={}, r={}, initial_cut={})",
            self.n(),
            self.m(),
            self.k(),
            self.r(),
            self.initial_cut()
        )
    }
}

#[pyclass(name = "CutResult", module = "pyrmove", frozen, get_all)]
struct PyCutResult {
    labels: Vec<usize>,
    cut_value: f64,
    moved: Vec<usize>,
    algorithm: String,
    seed: Option<u64>,
}

#[pymethods]
impl PyCutResult {
    #[getter]
    fn moves(&self) -> usize {
        self.moved.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "CutResult(algorithm={:?}, cut_value={}, moves={})",
            self.algorithm,
            self.cut_value,
            self.moved.len()
        )
    }
}

impl From<rmove::CutResult> for PyCutResult {
    fn from(res: rmove::CutResult) -> Self {
        Self {
            labels: res.labeling.as_slice().to_vec(),
            cut_value: res.cut_value,
            moved: res.moved,
            algorithm: res.algorithm,
            seed: res.seed,
        }
    }
}

/// Names accepted by `solve`.
#[pyfunction]
fn algorithms() -> Vec<&'static str> {
    Algorithm::ALL
        .into_iter()
        .filter(|&a| a != Algorithm::Lp)
        .map(Algorithm::name)
        .collect()
}

#[pyfunction]
#[pyo3(signature = (instance, alg, seed=0, epsilon=0.5, gamma=0.75, work_bound=rmove::baselines::DEFAULT_WORK_BOUND))]
fn solve(
    py: Python<'_>,
    instance: &PyInstance,
    alg: &str,
    seed: u64,
    epsilon: f64,
    gamma: f64,
    work_bound: u64,
) -> PyResult<PyCutResult> {
    let alg: Algorithm = alg.parse().map_err(|e: rmove::Error| PyValueError::new_err(e.to_string()))?;
    let opts = AlgOptions {
        epsilon,
        gamma,
        work_bound,
    };
    let inst = &instance.inner;
    let outcome = py
        .detach(|| run_algorithm(inst, "", alg, &opts, seed, &mut LpCache::new()))
        .map_err(err)?;
    match outcome {
        Outcome::Integral(res) => Ok(res.into()),
        Outcome::Fractional { .. } => Err(PyValueError::new_err("use solve_lp for the relaxation")),
    }
}

/// Optimum of the LP relaxation: `(objective, rows)` with one row of k
/// fractional memberships per node.
#[pyfunction]
fn solve_lp(py: Python<'_>, instance: &PyInstance) -> PyResult<(f64, Vec<Vec<f64>>)> {
    let inst = &instance.inner;
    let lp = py.detach(|| rmove::lp::solve_rmove(inst)).map_err(err)?;
    let rows = (0..inst.node_count())
        .map(|v| lp.assignment.row(v).to_vec())
        .collect();
    Ok((lp.objective, rows))
}

/// Breakpoints of a two-partition instance as `(moves, cut, moved_nodes)`,
/// by decreasing number of moves.
#[pyfunction]
fn breakpoints(instance: &PyInstance) -> PyResult<Vec<(usize, f64, Vec<usize>)>> {
    let list = find_breakpoints(&instance.inner).map_err(err)?;
    Ok(list.points.into_iter().map(|p| (p.r, p.delta, p.set)).collect())
}

#[pyfunction]
#[pyo3(signature = (n, k, p_in, p_out, seed, r=0, keep_labels=false))]
fn gen_sbm(
    n: usize,
    k: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
    r: usize,
    keep_labels: bool,
) -> PyResult<PyInstance> {
    let mut params = rmove::instances::SbmParams::new(n, k, p_in, p_out, seed);
    params.r = r;
    if keep_labels {
        params.relabel = rmove::instances::Relabel::Keep;
    }
    rmove::instances::gen_sbm(&params)
        .map(|inner| PyInstance { inner })
        .map_err(err)
}

#[pyfunction]
fn gen_random(n: usize, k: usize, p: f64, r: usize, seed: u64) -> PyResult<PyInstance> {
    rmove::instances::gen_random(n, k, p, r, seed)
        .map(|inner| PyInstance { inner })
        .map_err(err)
}

#[pyfunction]
fn gen_integrality_gap(r: usize, epsilon: f64, tail_len: usize) -> PyResult<PyInstance> {
    rmove::instances::gen_integrality_gap(r, epsilon, tail_len)
        .map(|inner| PyInstance { inner })
        .map_err(err)
}

#[pymodule]
fn pyrmove(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RmoveError", m.py().get_type::<RmoveError>())?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyCutResult>()?;
    m.add_function(wrap_pyfunction!(algorithms, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lp, m)?)?;
    m.add_function(wrap_pyfunction!(breakpoints, m)?)?;
    m.add_function(wrap_pyfunction!(gen_sbm, m)?)?;
    m.add_function(wrap_pyfunction!(gen_random, m)?)?;
    m.add_function(wrap_pyfunction!(gen_integrality_gap, m)?)?;
    Ok(())
}
