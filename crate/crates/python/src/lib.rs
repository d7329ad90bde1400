//! Python bindings. JSON-shaped arguments accept either a JSON string or the
//! equivalent Python object; reports come back as Python dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use ufolab_core::graphs::{ends_lower_bound as ends, GraphSpec};
use ufolab_core::mirror::{is_forbidden, Pattern};
use ufolab_core::qi::{derived_constants as derived, QiConstants};
use ufolab_core::ufo::{self, Ufo, UfoParams};
use ufolab_core::{BoundedGraph, Error, GroupOracle};

fn err(e: Error) -> PyErr {
    match e {
        Error::Input(_) | Error::Json(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_value(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = match obj.extract::<String>() {
        Ok(s) => s,
        Err(_) => obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?,
    };
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn graph_spec(obj: &Bound<'_, PyAny>) -> PyResult<GraphSpec> {
    serde_json::from_value(to_value(obj)?).map_err(|e| PyValueError::new_err(format!("graph: {e}")))
}

fn budget(b: Option<usize>) -> usize {
    b.unwrap_or_else(ufolab_core::graphs::budget_from_env)
}

/// Verifies a UFO (`{"u":..,"f":..,"o":..,"params":..}`) in the graph described by `graph`.
#[pyfunction]
#[pyo3(signature = (graph, ufo, params=None, budget=None))]
fn verify_ufo<'py>(
    py: Python<'py>,
    graph: &Bound<'py, PyAny>,
    ufo: &Bound<'py, PyAny>,
    params: Option<(u64, u32, u32)>,
    budget: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = graph_spec(graph)?;
    let oracle = spec.oracle().map_err(err)?;
    let (triple, stored) = Ufo::from_json(&oracle, &to_value(ufo)?).map_err(err)?;
    let p = match (params, stored) {
        (Some((m, k, r)), _) => UfoParams::new(m, k, r),
        (None, Some(p)) => p,
        (None, None) => return Err(PyValueError::new_err("params: not given and not stored in the UFO")),
    };
    let seeds = if triple.is_empty() { vec![oracle.base_vertex()] } else { triple.support() };
    let radius = p.k.max(p.r).max(spec.radius);
    let bg = BoundedGraph::build(&oracle, &seeds, radius, self::budget(budget)).map_err(err)?;
    let rep = ufo::verify_ufo(&bg, &triple, p).map_err(err)?;
    to_py(py, &rep.to_json(&bg))
}

/// The Z^d family: returns `(ufo, (m, k, r))`.
#[pyfunction]
fn zd_ufo<'py>(py: Python<'py>, d: usize, m: u64, r: u32) -> PyResult<(Bound<'py, PyAny>, (u64, u32, u32))> {
    let (u, p) = ufo::zd_ufo(d, m, r).map_err(err)?;
    let oracle = ufolab_core::NeighborOracle::Cayley(GroupOracle::free_abelian(d).map_err(err)?);
    Ok((to_py(py, &u.to_json(&oracle, None))?, (p.m, p.k, p.r)))
}

/// The pentagon family: returns `(ufo, (m, k, r))`.
#[pyfunction]
fn pentagon_ufo<'py>(py: Python<'py>, m: u64, r: u32) -> PyResult<(Bound<'py, PyAny>, (u64, u32, u32))> {
    let (u, p) = ufo::pentagon_ufo(m, r).map_err(err)?;
    Ok((to_py(py, &u.to_json(&ufolab_core::NeighborOracle::Pentagon, None))?, (p.m, p.k, p.r)))
}

/// Britton reduction in BS(m, n); words are space-separated generator names.
#[pyfunction]
fn britton_reduce(m: i64, n: i64, word: &str) -> PyResult<String> {
    let g = GroupOracle::baumslag_solitar(m, n).map_err(err)?;
    let w = g.generators().parse_word(word).map_err(err)?;
    Ok(g.generators().format_word(&g.britton_reduce(&w).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (graph, n, big_n, budget=None))]
fn ends_lower_bound(graph: &Bound<'_, PyAny>, n: u32, big_n: u32, budget: Option<usize>) -> PyResult<usize> {
    let oracle = graph_spec(graph)?.oracle().map_err(err)?;
    ends(&oracle, &oracle.base_vertex(), n, big_n, self::budget(budget)).map_err(err)
}

/// `"COHERENCE_VIOLATION"`, `"MATCHING_VIOLATION"` or `"ALLOWED"`.
#[pyfunction]
fn mirror_check(pattern: &Bound<'_, PyAny>) -> PyResult<&'static str> {
    let p = Pattern::from_json(&to_value(pattern)?).map_err(err)?;
    Ok(is_forbidden(&p).name())
}

/// `(alpha, m', k', r')` for constants `(A, B, C)`, degree bound `D` and params.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn derived_constants(a: f64, b: f64, c: f64, d: u64, m: u64, k: u32, r: u32) -> PyResult<(f64, i64, u32, u32)> {
    let qc = QiConstants::new(a, b, c).map_err(err)?;
    let dc = derived(qc, d, UfoParams::new(m, k, r)).map_err(err)?;
    Ok((dc.alpha, dc.m_prime, dc.k_prime, dc.r_prime))
}

/// Runs the command line in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let (mut out, mut errs) = (Vec::new(), Vec::new());
    let code = ufolab_core::cli::run(std::iter::once("ufolab".to_string()).chain(args), &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errs).into_owned())
}

#[pymodule]
fn ufolab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(verify_ufo, m)?)?;
    m.add_function(wrap_pyfunction!(zd_ufo, m)?)?;
    m.add_function(wrap_pyfunction!(pentagon_ufo, m)?)?;
    m.add_function(wrap_pyfunction!(britton_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(ends_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(mirror_check, m)?)?;
    m.add_function(wrap_pyfunction!(derived_constants, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
