//! Python bindings for frlp-core.
//!
//! Nodes are addressed by name, demands by 0-based index.

use std::time::Duration;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use frlp_core::covering::instance_covers;
use frlp_core::generators::{gen_example, gen_prop5a, gen_prop5b, gen_random, RandomConfig, EXAMPLE_NAMES};
use frlp_core::lp::bounds::TIGHT_NODE_CAP;
use frlp_core::lp::{build_model, lp_bound, Formulation, ModelInputs, TightEvaluator};
use frlp_core::solver::{Limits, Objective, SolveRequest};
use frlp_core::{FrlpError, NodeSet, Variant};

create_exception!(frlp, SolveError, PyException);

fn to_py(e: FrlpError) -> PyErr {
    match e {
        FrlpError::Parse { .. }
        | FrlpError::Validation(_)
        | FrlpError::UnknownNode(_)
        | FrlpError::InvalidArgument(_)
        | FrlpError::DirectedNetwork(_)
        | FrlpError::Io(_) => PyValueError::new_err(e.to_string()),
        _ => SolveError::new_err(e.to_string()),
    }
}

fn variant_of(inst: &frlp_core::Instance, v: Option<&str>) -> PyResult<Variant> {
    match v {
        None => Ok(inst.variant),
        Some(s) => s.parse().map_err(to_py),
    }
}

/// A validated instance.
#[pyclass(frozen, module = "frlp")]
struct Instance {
    inner: frlp_core::Instance,
}

#[pymethods]
impl Instance {
    #[getter]
    fn node_names(&self) -> Vec<String> {
        self.inner.network.names().to_vec()
    }

    #[getter]
    fn num_demands(&self) -> usize {
        self.inner.demands.len()
    }

    #[getter]
    fn range(&self) -> f64 {
        self.inner.range
    }

    #[getter]
    fn variant(&self) -> String {
        self.inner.variant.to_string()
    }

    #[getter]
    fn budget(&self) -> Option<usize> {
        self.inner.placement.budget
    }

    /// (origin, destination, volume) of every demand.
    fn demands(&self) -> Vec<(String, String, f64)> {
        let net = &self.inner.network;
        self.inner
            .demands
            .iter()
            .map(|d| (net.name(d.origin).to_string(), net.name(d.destination).to_string(), d.volume))
            .collect()
    }

    fn with_alpha(&self, alpha: f64) -> Instance {
        Instance {
            inner: self.inner.with_alpha(alpha),
        }
    }

    fn to_json(&self) -> String {
        frlp_core::serialize_instance(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(nodes={}, edges={}, demands={}, range={}, variant={})",
            self.inner.node_count(),
            self.inner.network.edges().len(),
            self.inner.demands.len(),
            self.inner.range,
            self.inner.variant
        )
    }
}

impl Instance {
    fn stations(&self, names: Vec<String>) -> PyResult<NodeSet> {
        let net = &self.inner.network;
        let mut s = NodeSet::empty(net.node_count());
        for name in names {
            let j = net
                .node_by_name(&name)
                .ok_or_else(|| PyValueError::new_err(format!("unknown node '{name}'")))?;
            s.insert(j);
        }
        Ok(s)
    }

    fn names(&self, set: &NodeSet) -> Vec<String> {
        set.iter().map(|j| self.inner.network.name(j).to_string()).collect()
    }

    fn demand(&self, q: usize) -> PyResult<usize> {
        if q < self.inner.demands.len() {
            Ok(q)
        } else {
            Err(PyValueError::new_err(format!(
                "demand {q} out of range (instance has {})",
                self.inner.demands.len()
            )))
        }
    }
}

#[pyclass(frozen, get_all, module = "frlp")]
struct Route {
    visits: Vec<String>,
    length: f64,
    cycle: bool,
}

#[pymethods]
impl Route {
    fn __repr__(&self) -> String {
        format!("Route(({}), length={})", self.visits.join(", "), self.length)
    }
}

#[pyclass(frozen, get_all, module = "frlp")]
struct Solution {
    objective: f64,
    bound: f64,
    optimal: bool,
    stations: Vec<String>,
    served: Vec<bool>,
    time_s: f64,
    separation_time_s: f64,
    bb_nodes: usize,
    cuts: usize,
}

#[pymethods]
impl Solution {
    fn __repr__(&self) -> String {
        format!(
            "Solution(objective={}, stations={:?}, optimal={})",
            self.objective, self.stations, self.optimal
        )
    }
}

#[pyclass(frozen, get_all, module = "frlp")]
struct Bounds {
    agg: f64,
    disagg: f64,
    /// None above the node cap of the tight evaluator.
    tight: Option<f64>,
}

#[pymethods]
impl Bounds {
    fn __repr__(&self) -> String {
        format!("Bounds(agg={}, disagg={}, tight={:?})", self.agg, self.disagg, self.tight)
    }
}

#[pyfunction]
fn load_instance(path: std::path::PathBuf) -> PyResult<Instance> {
    let parsed = frlp_core::network::load_instance(&path).map_err(to_py)?;
    Ok(Instance { inner: parsed.instance })
}

#[pyfunction]
fn parse_instance(document: &str) -> PyResult<Instance> {
    let parsed = frlp_core::parse_instance(document).map_err(to_py)?;
    Ok(Instance { inner: parsed.instance })
}

/// Built-in instances: fig2, fig7, fig8, prop5a, prop5b and random.
#[pyfunction]
#[pyo3(signature = (name, n=3, delta=None, f1=1.0, range=10.0, seed=1, nodes=8, demands=4, density=0.4))]
#[allow(clippy::too_many_arguments)]
fn generate_instance(
    name: &str,
    n: usize,
    delta: Option<f64>,
    f1: f64,
    range: f64,
    seed: u64,
    nodes: usize,
    demands: usize,
    density: f64,
) -> PyResult<Instance> {
    let inner = match name {
        "prop5a" => gen_prop5a(n, f1, range),
        "prop5b" => gen_prop5b(n, delta.unwrap_or(range / (2 * n * n) as f64), f1, range),
        "random" => gen_random(&RandomConfig {
            seed,
            nodes,
            density,
            demands,
            range,
            ..RandomConfig::default()
        }),
        other if EXAMPLE_NAMES.contains(&other) => gen_example(other),
        other => Err(FrlpError::InvalidArgument(format!("unknown instance name '{other}'"))),
    }
    .map_err(to_py)?;
    Ok(Instance { inner })
}

#[pyfunction]
#[pyo3(signature = (instance, demand, variant=None))]
fn enumerate_routes(instance: &Instance, demand: usize, variant: Option<&str>) -> PyResult<Vec<Route>> {
    let q = instance.demand(demand)?;
    let v = variant_of(&instance.inner, variant)?;
    let routes = frlp_core::enumerate_routes(&instance.inner, q, v).map_err(to_py)?;
    Ok(routes
        .into_iter()
        .map(|r| Route {
            visits: r.visits.iter().map(|&j| instance.inner.network.name(j).to_string()).collect(),
            length: r.length,
            cycle: r.kind == frlp_core::RouteKind::Cycle,
        })
        .collect())
}

/// Per-route cut-set families and the minimal aggregated family of one demand.
#[pyfunction]
#[pyo3(signature = (instance, demand, variant=None))]
fn cut_sets(
    instance: &Instance,
    demand: usize,
    variant: Option<&str>,
) -> PyResult<(Vec<Vec<Vec<String>>>, Vec<Vec<String>>)> {
    let q = instance.demand(demand)?;
    let v = variant_of(&instance.inner, variant)?;
    let covers = instance_covers(&instance.inner, v).map_err(to_py)?;
    let cover = &covers[q];
    let per_route = cover
        .per_route
        .iter()
        .map(|f| f.sets.iter().map(|s| instance.names(s)).collect())
        .collect();
    let aggregated = cover.aggregated.sets.iter().map(|s| instance.names(s)).collect();
    Ok((per_route, aggregated))
}

#[pyfunction]
#[pyo3(signature = (instance, demand, stations, variant=None))]
fn is_served(instance: &Instance, demand: usize, stations: Vec<String>, variant: Option<&str>) -> PyResult<bool> {
    let q = instance.demand(demand)?;
    let v = variant_of(&instance.inner, variant)?;
    let s = instance.stations(stations)?;
    frlp_core::feasibility::is_served(&instance.inner, q, &s, v).map_err(to_py)
}

/// Branch-and-cut. `objective` is "maxcover" (needs a budget) or "minstations".
#[pyfunction]
#[pyo3(signature = (instance, variant=None, objective="minstations", budget=None, coverage=1.0, time_limit=None, node_limit=None))]
fn solve(
    py: Python<'_>,
    instance: &Instance,
    variant: Option<&str>,
    objective: &str,
    budget: Option<usize>,
    coverage: f64,
    time_limit: Option<f64>,
    node_limit: Option<usize>,
) -> PyResult<Solution> {
    let inst = &instance.inner;
    let v = variant_of(inst, variant)?;
    let objective = match objective {
        "maxcover" => Objective::MaxCover {
            budget: budget
                .or(inst.placement.budget)
                .ok_or_else(|| PyValueError::new_err("maxcover needs a budget"))?,
        },
        "minstations" => Objective::MinStations { coverage },
        other => return Err(PyValueError::new_err(format!("unknown objective '{other}'"))),
    };
    let time = time_limit
        .map(Duration::try_from_secs_f64)
        .transpose()
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let sol = py
        .detach(|| {
            frlp_core::solver::solve(&SolveRequest {
                instance: inst,
                variant: v,
                objective,
                limits: Limits { time, nodes: node_limit },
                seed: 0,
            })
        })
        .map_err(to_py)?;
    Ok(Solution {
        objective: sol.objective,
        bound: sol.bound,
        optimal: sol.optimal,
        stations: instance.names(&sol.stations),
        served: sol.served,
        time_s: sol.stats.total_time.as_secs_f64(),
        separation_time_s: sol.stats.separation_time.as_secs_f64(),
        bb_nodes: sol.stats.nodes,
        cuts: sol.stats.cuts,
    })
}

/// LP bounds of the aggregated, disaggregated and tight models.
#[pyfunction]
#[pyo3(signature = (instance, variant=None, budget=None))]
fn bounds(instance: &Instance, variant: Option<&str>, budget: Option<usize>) -> PyResult<Bounds> {
    let mut inst = instance.inner.clone();
    if budget.is_some() {
        inst.placement.budget = budget;
    }
    let v = variant_of(&inst, variant)?;
    let covers = instance_covers(&inst, v).map_err(to_py)?;
    let per_route: Vec<_> = covers.iter().map(|c| c.per_route.clone()).collect();
    let agg: Vec<_> = covers.iter().map(|c| c.aggregated.clone()).collect();
    let lp = |f, inputs| build_model(&inst, f, inputs).and_then(|m| lp_bound(&m)).map_err(to_py);
    let a = lp(Formulation::Agg, ModelInputs::Aggregated(&agg))?;
    let d = lp(Formulation::Disagg, ModelInputs::PerRoute(&per_route))?;
    let tight = if inst.node_count() <= TIGHT_NODE_CAP {
        let t = TightEvaluator::new(&inst, v).map_err(to_py)?;
        Some(t.max_over_placement(&inst.placement, None).map_err(to_py)?)
    } else {
        None
    };
    Ok(Bounds { agg: a, disagg: d, tight })
}

/// Volume served with a fixed station set.
#[pyfunction]
#[pyo3(signature = (instance, stations, variant=None))]
fn reevaluate(instance: &Instance, stations: Vec<String>, variant: Option<&str>) -> PyResult<f64> {
    let v = variant_of(&instance.inner, variant)?;
    let s = instance.stations(stations)?;
    frlp_core::solver::reevaluate(&instance.inner, &s, v).map_err(to_py)
}

#[pymodule]
fn frlp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SolveError", m.py().get_type::<SolveError>())?;
    m.add_class::<Instance>()?;
    m.add_class::<Route>()?;
    m.add_class::<Solution>()?;
    m.add_class::<Bounds>()?;
    m.add_function(wrap_pyfunction!(load_instance, m)?)?;
    m.add_function(wrap_pyfunction!(parse_instance, m)?)?;
    m.add_function(wrap_pyfunction!(generate_instance, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_routes, m)?)?;
    m.add_function(wrap_pyfunction!(cut_sets, m)?)?;
    m.add_function(wrap_pyfunction!(is_served, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(reevaluate, m)?)?;
    Ok(())
}
