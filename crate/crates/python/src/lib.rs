//! Python bindings. Weights and prices cross the boundary as strings such
//! as `"7/4"` (ints and floats are accepted on input); structured results
//! are returned as JSON text.

use gncg::dynamics::{self, Rule, Scheduler};
use gncg::equilibria::{self, Level, DEFAULT_BR_CAP};
use gncg::optima::{self, DEFAULT_OPT_CAP};
use gncg::{families, game, io, Rational, Weight};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: gncg::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn weight(obj: &Bound<'_, PyAny>) -> PyResult<Weight> {
    let text = obj.str()?.to_string();
    text.parse::<Weight>().map_err(err)
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    weight(obj)?
        .as_rational()
        .ok_or_else(|| PyValueError::new_err("expected an exact number"))
}

fn matrix(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Vec<Vec<Weight>>> {
    rows.iter().map(|r| r.iter().map(weight).collect()).collect()
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

#[pyclass(name = "HostGraph", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyHostGraph {
    inner: gncg::HostGraph,
}

#[pymethods]
impl PyHostGraph {
    /// Complete host from a square weight matrix; `kind` is `general`,
    /// `metric` or `one_two`.
    #[new]
    #[pyo3(signature = (weights, kind = "general"))]
    fn new(weights: Vec<Vec<Bound<'_, PyAny>>>, kind: &str) -> PyResult<Self> {
        let w = matrix(weights)?;
        let n = w.len();
        let inner = match kind {
            "general" => gncg::HostGraph::build_general(n, w),
            "metric" => gncg::HostGraph::build_metric(n, w),
            "one_two" => gncg::HostGraph::build_one_two(n, w),
            other => return Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
        }
        .map_err(err)?;
        Ok(PyHostGraph { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (coords, p = None))]
    fn from_points(coords: Vec<Vec<Bound<'_, PyAny>>>, p: Option<Bound<'_, PyAny>>) -> PyResult<Self> {
        let coords = coords.iter().map(|r| r.iter().map(rational).collect()).collect::<PyResult<Vec<Vec<_>>>>()?;
        let p = p.as_ref().map(rational).transpose()?.unwrap_or_else(|| Rational::from_integer(1));
        Ok(PyHostGraph { inner: gncg::HostGraph::from_points(coords, p).map_err(err)? })
    }

    #[staticmethod]
    fn from_tree(n: usize, edges: Vec<(usize, usize, Bound<'_, PyAny>)>) -> PyResult<Self> {
        let edges = edges.iter().map(|(u, v, w)| Ok((*u, *v, weight(w)?))).collect::<PyResult<Vec<_>>>()?;
        Ok(PyHostGraph { inner: gncg::HostGraph::from_tree(n, edges).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyHostGraph { inner: io::parse_instance(text).map_err(err)?.host })
    }

    fn to_json(&self) -> String {
        io::instance_to_value(&self.inner, None).to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().name()
    }

    fn weight(&self, u: usize, v: usize) -> PyResult<String> {
        if u >= self.inner.n() || v >= self.inner.n() {
            return Err(PyValueError::new_err("node out of range"));
        }
        Ok(self.inner.weight(u, v).to_string())
    }

    /// Triangle violations as `(u, x, v)` triples.
    fn metric_violations(&self) -> Vec<(usize, usize, usize)> {
        self.inner.check_metric().iter().map(|m| (m.u, m.x, m.v)).collect()
    }

    fn __repr__(&self) -> String {
        format!("HostGraph(kind={}, n={})", self.inner.kind(), self.inner.n())
    }
}

#[pyclass(name = "StrategyProfile", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProfile {
    inner: gncg::StrategyProfile,
}

#[pymethods]
impl PyProfile {
    #[new]
    fn new(strategies: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyProfile { inner: gncg::StrategyProfile::from_sets(strategies).map_err(err)? })
    }

    #[staticmethod]
    fn from_owned_edges(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyProfile { inner: gncg::StrategyProfile::from_owned_edges(n, &edges).map_err(err)? })
    }

    fn strategies(&self) -> Vec<Vec<usize>> {
        self.inner.to_sets()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("StrategyProfile({:?})", self.inner.to_sets())
    }
}

#[pyfunction]
fn social_cost(host: &PyHostGraph, profile: &PyProfile, alpha: Bound<'_, PyAny>) -> PyResult<String> {
    let c = game::social_cost(&host.inner, &profile.inner, &weight(&alpha)?).map_err(err)?;
    Ok(c.to_string())
}

#[pyfunction]
fn agent_cost(host: &PyHostGraph, profile: &PyProfile, agent: usize, alpha: Bound<'_, PyAny>) -> PyResult<String> {
    let c = game::agent_cost(&host.inner, &profile.inner, agent, &weight(&alpha)?).map_err(err)?;
    Ok(c.total.to_string())
}

/// Exact best response of `agent` as `(targets, cost)`.
#[pyfunction]
#[pyo3(signature = (host, profile, agent, alpha, cap = DEFAULT_BR_CAP))]
fn best_response(
    host: &PyHostGraph,
    profile: &PyProfile,
    agent: usize,
    alpha: Bound<'_, PyAny>,
    cap: usize,
) -> PyResult<(Vec<usize>, String)> {
    let (br, cost) =
        equilibria::best_response_exact(&host.inner, &profile.inner, agent, &weight(&alpha)?, cap).map_err(err)?;
    Ok((br.into_iter().collect(), cost.to_string()))
}

/// Equilibrium report as JSON.
#[pyfunction]
#[pyo3(signature = (host, profile, alpha, level = "NE", cap = DEFAULT_BR_CAP))]
fn certify(host: &PyHostGraph, profile: &PyProfile, alpha: Bound<'_, PyAny>, level: &str, cap: usize) -> PyResult<String> {
    let level: Level = level.parse().map_err(err)?;
    let r = equilibria::certify(&host.inner, &profile.inner, &weight(&alpha)?, level, cap).map_err(err)?;
    Ok(to_json(&r))
}

#[pyfunction]
#[pyo3(signature = (host, profile, alpha, cap = DEFAULT_BR_CAP))]
fn is_nash(host: &PyHostGraph, profile: &PyProfile, alpha: Bound<'_, PyAny>, cap: usize) -> PyResult<bool> {
    equilibria::is_nash(&host.inner, &profile.inner, &weight(&alpha)?, cap).map_err(err)
}

/// Exhaustive social optimum as JSON.
#[pyfunction]
#[pyo3(signature = (host, alpha, cap = DEFAULT_OPT_CAP))]
fn optimum(host: &PyHostGraph, alpha: Bound<'_, PyAny>, cap: usize) -> PyResult<String> {
    Ok(to_json(&optima::optimum_exact(&host.inner, &weight(&alpha)?, cap).map_err(err)?))
}

/// Improving dynamics trace as JSON.
#[pyfunction]
#[pyo3(signature = (host, profile, alpha, rule = "exact-br", seed = None, max_steps = 1000))]
fn run_dynamics(
    host: &PyHostGraph,
    profile: &PyProfile,
    alpha: Bound<'_, PyAny>,
    rule: &str,
    seed: Option<u64>,
    max_steps: usize,
) -> PyResult<String> {
    let rule: Rule = rule.parse().map_err(err)?;
    let scheduler = seed.map_or(Scheduler::RoundRobin, |seed| Scheduler::Random { seed });
    let t = dynamics::run(&host.inner, &weight(&alpha)?, &profile.inner, rule, scheduler, max_steps, DEFAULT_BR_CAP)
        .map_err(err)?;
    Ok(to_json(&t))
}

/// A lower-bound family as `(host, {name: profile}, {prediction: value})`.
#[pyfunction]
#[pyo3(signature = (name, alpha, size = None))]
fn family(
    name: &str,
    alpha: Bound<'_, PyAny>,
    size: Option<usize>,
) -> PyResult<(PyHostGraph, std::collections::BTreeMap<String, PyProfile>, std::collections::BTreeMap<String, String>)> {
    let b = families::by_name(name, size, &weight(&alpha)?).map_err(err)?;
    let profiles = b.profiles.iter().map(|(k, s)| (k.clone(), PyProfile { inner: s.clone() })).collect();
    let predictions = b.predictions.iter().map(|(k, p)| (k.clone(), p.value.to_string())).collect();
    Ok((PyHostGraph { inner: b.host }, profiles, predictions))
}

#[pymodule]
#[pyo3(name = "gncg")]
fn gncg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHostGraph>()?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(social_cost, m)?)?;
    m.add_function(wrap_pyfunction!(agent_cost, m)?)?;
    m.add_function(wrap_pyfunction!(best_response, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(is_nash, m)?)?;
    m.add_function(wrap_pyfunction!(optimum, m)?)?;
    m.add_function(wrap_pyfunction!(run_dynamics, m)?)?;
    m.add_function(wrap_pyfunction!(family, m)?)?;
    Ok(())
}
