//! Python bindings: run a pipeline, check certificates, read constants.

use fatdecomp::graph::io::{parse_edge_list, write_edge_list};
use fatdecomp::minors::is_minor_free as minor_free;
use fatdecomp::{Error, Graph, Pattern};
use fatdecomp_cli::{Certificate, Kind, RunOptions, Target, VerifyOptions};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Domain(_) | Error::Precondition(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn target(name: &str) -> PyResult<Target> {
    match name {
        "k4" => Ok(Target::K4),
        "k4minus" => Ok(Target::K4minus),
        _ => Err(PyValueError::new_err(format!("unknown target {name:?}, expected k4 or k4minus"))),
    }
}

fn graph_from(edges: Vec<(usize, usize)>, n: Option<usize>) -> PyResult<Graph> {
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, &edges).map_err(py_err)
}

/// Edge-list text for a list of `(u, v)` pairs.
#[pyfunction]
#[pyo3(signature = (edges, n=None))]
fn edge_list(edges: Vec<(usize, usize)>, n: Option<usize>) -> PyResult<String> {
    Ok(write_edge_list(&graph_from(edges, n)?))
}

/// Runs the pipeline and returns a dict with the branch, metrics and the
/// certificate text. Budget exhaustion is reported as branch
/// `"budget-error"`, not raised.
#[pyfunction]
#[pyo3(signature = (edges, n=None, target="k4", fat=1, budget=None, scaled_constants=None))]
fn decompose<'py>(
    py: Python<'py>,
    edges: Vec<(usize, usize)>,
    n: Option<usize>,
    target: &str,
    fat: usize,
    budget: Option<u64>,
    scaled_constants: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let text = write_edge_list(&graph_from(edges, n)?);
    let mut opts = RunOptions::new(self::target(target)?, fat);
    opts.scaled = scaled_constants;
    if let Some(b) = budget {
        opts.budget = b;
    }
    let (report, cert) = py.detach(|| fatdecomp_cli::decompose(text.as_bytes(), &opts)).map_err(py_err)?;
    let out = PyDict::new(py);
    let branch = match report.branch {
        fatdecomp_cli::Branch::Decomposition => "decomposition",
        fatdecomp_cli::Branch::Witness => "witness",
        fatdecomp_cli::Branch::BudgetError => "budget-error",
    };
    out.set_item("branch", branch)?;
    out.set_item("digest", &report.input_digest)?;
    out.set_item("bounds", report.bounds)?;
    out.set_item("orw", report.metrics.orw)?;
    out.set_item("irs", report.metrics.irs)?;
    out.set_item("nodes", report.metrics.nodes)?;
    out.set_item("fatness", report.metrics.fatness)?;
    out.set_item("error", report.error)?;
    match cert {
        Certificate::Decomposition { text, qi } => {
            out.set_item("certificate", text)?;
            out.set_item("qi", qi)?;
        }
        Certificate::Witness { text } => out.set_item("certificate", text)?,
        Certificate::None => out.set_item("certificate", py.None())?,
    }
    Ok(out)
}

/// Checks a certificate against an edge-list graph. Returns `(ok, message)`;
/// raises `ValueError` when the texts cannot be read as the stated kind.
#[pyfunction]
#[pyo3(signature = (graph, certificate, kind, target=None, fat=None, decomposition=None))]
fn verify(
    graph: &str,
    certificate: &str,
    kind: &str,
    target: Option<&str>,
    fat: Option<usize>,
    decomposition: Option<String>,
) -> PyResult<(bool, String)> {
    let kind = match kind {
        "decomposition" => Kind::Decomposition,
        "model" => Kind::Model,
        "qi" => Kind::Qi,
        _ => return Err(PyValueError::new_err(format!("unknown certificate kind {kind:?}"))),
    };
    let opts = VerifyOptions {
        target: target.map(self::target).transpose()?,
        fat,
        scaled: None,
        decomposition,
    };
    match fatdecomp_cli::verify(graph, certificate, kind, &opts).map_err(py_err)? {
        Ok(msg) => Ok((true, msg)),
        Err(msg) => Ok((false, msg)),
    }
}

/// The K4 constants for fatness `k` as a dict.
#[pyfunction]
fn constants<'py>(py: Python<'py>, k: usize) -> PyResult<Bound<'py, PyDict>> {
    let c = fatdecomp::sp::constants(k).map_err(py_err)?;
    let out = PyDict::new(py);
    for (name, v) in [("r0", c.r0), ("r0p", c.r0p), ("ell", c.ell), ("r1", c.r1), ("r2", c.r2), ("f0", c.f0), ("f1", c.f1)] {
        out.set_item(name, v)?;
    }
    Ok(out)
}

/// Whether the graph in edge-list text has no minor of the pattern.
#[pyfunction]
fn is_minor_free(graph: &str, pattern: &str) -> PyResult<bool> {
    let g = parse_edge_list(graph).map_err(py_err)?;
    let p = match pattern {
        "k4" => Pattern::K4,
        "k4minus" => Pattern::K4Minus,
        _ => return Err(PyValueError::new_err(format!("unknown pattern {pattern:?}"))),
    };
    Ok(minor_free(&g, p))
}

#[pymodule]
fn fatdecomp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(edge_list, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(is_minor_free, m)?)?;
    Ok(())
}
