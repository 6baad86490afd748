//! Python bindings for the core decision engine: graphs, demand families,
//! colorability verdicts with certificates, the edge-theorem checks, and
//! the appendix grid verifier.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use fracdemand::appendix;
use fracdemand::campaign;
use fracdemand::demand::{self, DemandFn, DemandSpec, WeightFn};
use fracdemand::edgefrac::{self, EdgeTheorem};
use fracdemand::error::Error;
use fracdemand::family::{generate_family, GeneratedGraph};
use fracdemand::fracsolve;
use fracdemand::graph::Graph as CoreGraph;
use fracdemand::listfrac;
use fracdemand::setsys;
use fracdemand::structure;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A graph, possibly carrying line/total provenance from its family spec.
#[pyclass(name = "Graph")]
struct PyGraph {
    target: GeneratedGraph,
}

impl PyGraph {
    fn graph(&self) -> &CoreGraph {
        self.target.vertex_graph()
    }
}

#[pymethods]
impl PyGraph {
    /// Build from an explicit edge list on vertices 0..n.
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let g = CoreGraph::from_edges(n, &edges).map_err(err)?;
        Ok(PyGraph {
            target: GeneratedGraph::Simple(g),
        })
    }

    /// Build from a family spec like "cycle:5", "petersen", "gnp:8,1/2",
    /// "line:complete:4", "total:cycle:5".
    #[staticmethod]
    #[pyo3(signature = (spec, seed = 0))]
    fn family(spec: &str, seed: u64) -> PyResult<Self> {
        Ok(PyGraph {
            target: generate_family(spec, seed).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.graph().n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.graph().edges()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.graph().n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.graph().degree(v))
    }

    fn min_degree(&self) -> usize {
        self.graph().min_degree()
    }

    fn is_simplicial(&self, v: usize) -> PyResult<bool> {
        if v >= self.graph().n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(setsys::is_simplicial(self.graph(), v))
    }

    fn omega_local(&self, v: usize) -> PyResult<usize> {
        if v >= self.graph().n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(setsys::omega_local(self.graph(), v))
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.graph().n(), self.graph().edge_count())
    }
}

fn demand_from_arg(g: &PyGraph, demand: &Bound<'_, PyAny>) -> PyResult<DemandFn> {
    if let Ok(spec) = demand.extract::<String>() {
        let spec = DemandSpec::parse(&spec).map_err(err)?;
        return demand::demand_generate(&g.target, &spec).map_err(err);
    }
    let values: Vec<String> = demand.extract()?;
    let parsed: Result<Vec<_>, _> = values.iter().map(|s| s.parse()).collect();
    DemandFn::new(parsed.map_err(err)?).map_err(err)
}

/// Exact fractional chromatic number as a "p/q" string.
#[pyfunction]
fn chi_f(g: &PyGraph) -> PyResult<String> {
    fracsolve::chi_f(g.graph(), campaign::DEFAULT_LP_CAP)
        .map(|q| q.to_string())
        .map_err(err)
}

/// Generate a demand family; returns per-vertex "p/q" strings.
#[pyfunction]
fn demand_values(g: &PyGraph, spec: &str) -> PyResult<Vec<String>> {
    let spec = DemandSpec::parse(spec).map_err(err)?;
    let f = demand::demand_generate(&g.target, &spec).map_err(err)?;
    Ok(f.values.iter().map(|q| q.to_string()).collect())
}

/// Decide f-colorability. `demand` is a generator spec string or a list of
/// "p/q" strings. Returns a dict with the verdict and its certificate.
#[pyfunction]
fn solve<'py>(
    py: Python<'py>,
    g: &PyGraph,
    demand: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyDict>> {
    let f = demand_from_arg(g, demand)?;
    let verdict =
        fracsolve::is_fcolorable(g.graph(), &f, campaign::DEFAULT_LP_CAP).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("colorable", verdict.colorable)?;
    out.set_item("transcript_hash", &verdict.transcript_hash)?;
    match (&verdict.primal, &verdict.dual) {
        (Some(phi), None) => {
            let per_vertex = PyList::empty(py);
            for set in &phi.assignment {
                let intervals: Vec<(String, String)> = set
                    .parts()
                    .iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect();
                per_vertex.append(intervals)?;
            }
            out.set_item("coloring", per_vertex)?;
        }
        (None, Some(w)) => {
            let weights: Vec<String> = w.values.iter().map(|q| q.to_string()).collect();
            out.set_item("dual_weights", weights)?;
        }
        _ => return Err(PyValueError::new_err("verdict missing its certificate")),
    }
    Ok(out)
}

/// Max-weight independent set under "p/q" weights.
#[pyfunction]
fn max_weight_independent_set(g: &PyGraph, weights: Vec<String>) -> PyResult<(Vec<usize>, String)> {
    let parsed: Result<Vec<_>, _> = weights.iter().map(|s| s.parse()).collect();
    let w = WeightFn::new(parsed.map_err(err)?).map_err(err)?;
    if w.values.len() != g.graph().n() {
        return Err(PyValueError::new_err("weight vector length mismatch"));
    }
    let (set, weight) = setsys::max_weight_independent_set(g.graph(), &w.values);
    Ok((set.as_slice().to_vec(), weight.to_string()))
}

/// Verify one of the local edge theorems ("vizing", "shannon", "konig") on
/// the multigraph described by (n, [(u, v, multiplicity)]).
#[pyfunction]
fn edge_verify<'py>(
    py: Python<'py>,
    n: usize,
    edges: Vec<(usize, usize, usize)>,
    theorem: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let mg = fracdemand::graph::Multigraph::from_edge_multiplicities(n, &edges).map_err(err)?;
    let theorem = match theorem {
        "vizing" => EdgeTheorem::Vizing,
        "shannon" => EdgeTheorem::Shannon,
        "konig" => EdgeTheorem::Konig,
        other => return Err(PyValueError::new_err(format!("unknown theorem {other:?}"))),
    };
    let report =
        edgefrac::verify_edge_theorem(&mg, theorem, campaign::DEFAULT_LP_CAP).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("edmonds_pass", report.edmonds.passed())?;
    out.set_item("lp_colorable", report.lp_colorable)?;
    out.set_item("holds", report.holds())?;
    out.set_item(
        "demand",
        report
            .demand
            .values
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>(),
    )?;
    Ok(out)
}

/// Exact grid verification of an appendix claim.
#[pyfunction]
#[pyo3(signature = (claim, delta_min = None, delta_max = 100, refinement = 4))]
fn appendix_verify<'py>(
    py: Python<'py>,
    claim: &str,
    delta_min: Option<u64>,
    delta_max: u64,
    refinement: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let lo = match delta_min {
        Some(lo) => lo,
        None => appendix::claim_delta_min(claim).map_err(err)?,
    };
    let outcome = appendix::appendix_verify(claim, lo, delta_max, refinement).map_err(err)?;
    let out = PyDict::new(py);
    match outcome {
        appendix::AppendixOutcome::Pass { points_checked } => {
            out.set_item("pass", true)?;
            out.set_item("points_checked", points_checked)?;
        }
        appendix::AppendixOutcome::Counterpoint(c) => {
            out.set_item("pass", false)?;
            out.set_item("delta", c.delta)?;
            let coords: Vec<(String, String)> = c
                .coords
                .iter()
                .map(|(n, v)| (n.clone(), v.to_string()))
                .collect();
            out.set_item("coords", coords)?;
            out.set_item("value", c.value.to_string())?;
        }
    }
    Ok(out)
}

/// Brute-force (f,N)-list-colorability at toy scale.
#[pyfunction]
fn list_colorable_bruteforce(
    g: &PyGraph,
    demand: &Bound<'_, PyAny>,
    n: usize,
) -> PyResult<bool> {
    let f = demand_from_arg(g, demand)?;
    listfrac::list_colorable_bruteforce(g.graph(), &f, n, campaign::DEFAULT_NODE_CAP).map_err(err)
}

/// Run a shipped default campaign; returns the summary counts.
#[pyfunction]
#[pyo3(signature = (name, trials = None))]
fn run_campaign<'py>(
    py: Python<'py>,
    name: &str,
    trials: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = campaign::default_config(name).map_err(err)?;
    if let Some(t) = trials {
        cfg.trials = t;
    }
    let report = campaign::theorem_campaign(&cfg).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("name", &report.config.name)?;
    out.set_item("trials", report.trials)?;
    out.set_item("passes", report.passes)?;
    out.set_item("skips", report.skips)?;
    out.set_item("failures", report.failures.len())?;
    Ok(out)
}

/// Base cliques with their apex/outside parameters.
#[pyfunction]
fn base_cliques<'py>(py: Python<'py>, g: &PyGraph) -> PyResult<Bound<'py, PyList>> {
    let out = PyList::empty(py);
    for report in structure::find_base_cliques(g.graph()) {
        let item = PyDict::new(py);
        item.set_item("clique", report.clique.as_slice().to_vec())?;
        item.set_item("apex", report.apex.as_slice().to_vec())?;
        item.set_item("outside", report.outside.as_slice().to_vec())?;
        item.set_item("ell", report.ell)?;
        item.set_item("ell_uniform", report.ell_uniform)?;
        item.set_item("max_attachment", report.max_attachment)?;
        out.append(item)?;
    }
    Ok(out)
}

#[pymodule]
fn fracdemand_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(chi_f, m)?)?;
    m.add_function(wrap_pyfunction!(demand_values, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(max_weight_independent_set, m)?)?;
    m.add_function(wrap_pyfunction!(edge_verify, m)?)?;
    m.add_function(wrap_pyfunction!(appendix_verify, m)?)?;
    m.add_function(wrap_pyfunction!(list_colorable_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    m.add_function(wrap_pyfunction!(base_cliques, m)?)?;
    Ok(())
}
