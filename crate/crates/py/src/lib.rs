//! Python bindings: the main types and operations of the toolkit, driven
//! in-process. Colorings travel as plain dicts, structured reports as
//! dict/list trees mirroring the JSON formats.

use std::collections::{BTreeMap, BTreeSet};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use sogkit::{Coloring, GadgetParams, HostConstraint, Relation, SearchConfig, SearchOutcome};

fn err(e: sogkit::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.unbind().into()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.unbind().into(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.unbind().into()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.unbind().into()
        }
    })
}

fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let json = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &json)
}

fn coloring_from_dict(assignment: BTreeMap<String, usize>, k: usize) -> Coloring {
    Coloring::new(assignment, k)
}

fn relation_from_str(relation: &str) -> PyResult<Relation> {
    relation.parse().map_err(err)
}

/// A finite simple labeled graph.
#[pyclass(name = "Graph", from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: sogkit::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: sogkit::Graph::from_parts(vertices, edges).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().map(|s| s.to_string()).collect()
    }

    fn edges(&self) -> Vec<(String, String)> {
        self.inner.edges().cloned().collect()
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn has_edge(&self, a: &str, b: &str) -> bool {
        self.inner.has_edge(a, b)
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({} vertices, {} edges)",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// A host tree for representations.
#[pyclass(name = "HostTree", from_py_object)]
#[derive(Clone)]
struct PyHostTree {
    inner: sogkit::HostTree,
}

#[pymethods]
impl PyHostTree {
    #[new]
    fn new(nodes: Vec<String>, edges: Vec<(String, String)>) -> PyResult<Self> {
        Ok(PyHostTree {
            inner: sogkit::HostTree::from_parts(nodes, edges).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyHostTree {
            inner: serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    fn leafage(&self) -> usize {
        self.inner.leafage()
    }

    fn analyze(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &sogkit::analyze_tree(&self.inner))
    }

    fn subdivide(&self, a: &str, b: &str, times: usize) -> PyResult<PyHostTree> {
        Ok(PyHostTree {
            inner: sogkit::subdivide(&self.inner, &(a.to_string(), b.to_string()), times)
                .map_err(err)?,
        })
    }

    fn is_subdivision_of(&self, base: &PyHostTree) -> bool {
        sogkit::is_subdivision_of(&self.inner, &base.inner)
    }

    fn __repr__(&self) -> String {
        format!("HostTree({} nodes)", self.inner.node_count())
    }
}

/// A host tree plus a vertex-to-subtree assignment.
#[pyclass(name = "Representation", from_py_object)]
#[derive(Clone)]
struct PyRepresentation {
    inner: sogkit::Representation,
}

#[pymethods]
impl PyRepresentation {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyRepresentation {
            inner: serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }

    #[staticmethod]
    fn from_parts(host: &PyHostTree, subtrees: BTreeMap<String, Vec<String>>) -> PyResult<Self> {
        let sets: BTreeMap<String, BTreeSet<String>> = subtrees
            .into_iter()
            .map(|(v, nodes)| (v, nodes.into_iter().collect()))
            .collect();
        Ok(PyRepresentation {
            inner: sogkit::Representation::from_node_sets(host.inner.clone(), sets).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn host(&self) -> PyHostTree {
        PyHostTree {
            inner: self.inner.host().clone(),
        }
    }

    fn subtree_of(&self, vertex: &str) -> Option<Vec<String>> {
        self.inner
            .subtree_of(vertex)
            .map(|s| s.nodes().map(|n| n.to_string()).collect())
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().map(|s| s.to_string()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Representation({} vertices on {} host nodes)",
            self.inner.vertices().count(),
            self.inner.host().node_count()
        )
    }
}

/// Role labels of a blocked graph.
#[pyclass(name = "BlockedLabels", from_py_object)]
#[derive(Clone)]
struct PyBlockedLabels {
    inner: sogkit::BlockedLabels,
}

#[pymethods]
impl PyBlockedLabels {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyBlockedLabels {
            inner: serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn vertex_reps(&self) -> Vec<String> {
        self.inner.vertex_reps().map(|s| s.to_string()).collect()
    }

    fn clique_members(&self) -> Vec<String> {
        self.inner.clique_members().iter().map(|s| s.to_string()).collect()
    }
}

#[pyfunction]
fn vertex_connectivity(g: &PyGraph) -> PyResult<usize> {
    sogkit::vertex_connectivity(&g.inner).map_err(err)
}

#[pyfunction]
fn find_k_coloring(py: Python<'_>, g: &PyGraph, k: usize) -> PyResult<Py<PyAny>> {
    match sogkit::find_k_coloring(&g.inner, k) {
        Some(c) => to_py(py, &c.assignment),
        None => Ok(py.None()),
    }
}

#[pyfunction]
fn amplify_3con(g: &PyGraph) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: sogkit::amplify_3con(&g.inner).map_err(err)?,
    })
}

#[pyfunction]
fn build_gadget(py: Python<'_>, d: usize, u: usize) -> PyResult<(PyGraph, Py<PyAny>)> {
    let params = GadgetParams::new(d, u).map_err(err)?;
    let (graph, named) = sogkit::build_gadget(params).map_err(err)?;
    Ok((PyGraph { inner: graph }, to_py(py, &named)?))
}

#[pyfunction]
fn build_blocked_graph(g: &PyGraph, d: usize, u: usize) -> PyResult<(PyGraph, PyBlockedLabels)> {
    let params = GadgetParams::new(d, u).map_err(err)?;
    let (graph, labels) = sogkit::build_blocked_graph(&g.inner, params).map_err(err)?;
    Ok((PyGraph { inner: graph }, PyBlockedLabels { inner: labels }))
}

#[pyfunction]
fn build_empty_blocked(g: &PyGraph) -> PyResult<(PyGraph, PyBlockedLabels)> {
    let (graph, labels) = sogkit::build_empty_blocked(&g.inner).map_err(err)?;
    Ok((PyGraph { inner: graph }, PyBlockedLabels { inner: labels }))
}

/// Gadget parameters dictated by a tree: returns (d, u, k).
#[pyfunction]
fn reduction_params_for_tree(t: &PyHostTree) -> PyResult<(usize, usize, usize)> {
    let (p, k) = sogkit::reduction_params_for_tree(&t.inner).map_err(err)?;
    Ok((p.d, p.u, k))
}

#[pyfunction]
fn represent_blocked_on_star(
    g: &PyGraph,
    coloring: BTreeMap<String, usize>,
    k: usize,
) -> PyResult<(PyRepresentation, PyGraph, PyBlockedLabels)> {
    let c = coloring_from_dict(coloring, k);
    let params = GadgetParams::new(k, 0).map_err(err)?;
    let (rep, blocked, labels) =
        sogkit::represent_blocked_on_star(&g.inner, &c, params).map_err(err)?;
    Ok((
        PyRepresentation { inner: rep },
        PyGraph { inner: blocked },
        PyBlockedLabels { inner: labels },
    ))
}

#[pyfunction]
fn represent_blocked_on_subdivision(
    t: &PyHostTree,
    g: &PyGraph,
    coloring: BTreeMap<String, usize>,
    k: usize,
) -> PyResult<(PyRepresentation, PyGraph, PyBlockedLabels)> {
    let c = coloring_from_dict(coloring, k);
    let (rep, blocked, labels) =
        sogkit::represent_blocked_on_subdivision(&t.inner, &g.inner, &c).map_err(err)?;
    Ok((
        PyRepresentation { inner: rep },
        PyGraph { inner: blocked },
        PyBlockedLabels { inner: labels },
    ))
}

#[pyfunction]
fn represent_empty_blocked_subpaths(
    g: &PyGraph,
    coloring: BTreeMap<String, usize>,
    k: usize,
) -> PyResult<(PyRepresentation, PyGraph, PyBlockedLabels)> {
    let c = coloring_from_dict(coloring, k);
    let (rep, blocked, labels) =
        sogkit::represent_empty_blocked_subpaths(&g.inner, &c, k).map_err(err)?;
    Ok((
        PyRepresentation { inner: rep },
        PyGraph { inner: blocked },
        PyBlockedLabels { inner: labels },
    ))
}

/// Returns a dict {"passed": bool, "offending_pairs": [...]}.
#[pyfunction]
fn verify_representation(
    py: Python<'_>,
    rep: &PyRepresentation,
    target: &PyGraph,
    relation: &str,
) -> PyResult<Py<PyAny>> {
    let verdict = sogkit::verify_representation(
        &rep.inner,
        &target.inner,
        relation_from_str(relation)?,
    )
    .map_err(err)?;
    let dict = PyDict::new(py);
    match verdict {
        sogkit::Verdict::Pass => {
            dict.set_item("passed", true)?;
            dict.set_item("offending_pairs", PyList::empty(py))?;
        }
        sogkit::Verdict::Fail { offending_pairs } => {
            dict.set_item("passed", false)?;
            dict.set_item("offending_pairs", offending_pairs)?;
        }
    }
    Ok(dict.unbind().into())
}

#[pyfunction]
fn derive_graph(rep: &PyRepresentation, relation: &str) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: sogkit::derive_graph(&rep.inner, relation_from_str(relation)?),
    })
}

#[pyfunction]
fn find_illegal_pairs(
    rep: &PyRepresentation,
    labels: &PyBlockedLabels,
    original: &PyGraph,
) -> PyResult<Vec<(String, String)>> {
    sogkit::find_illegal_pairs(&rep.inner, &labels.inner, &original.inner).map_err(err)
}

#[pyfunction]
fn decode_coloring(
    py: Python<'_>,
    rep: &PyRepresentation,
    labels: &PyBlockedLabels,
    original: &PyGraph,
    k: usize,
) -> PyResult<Py<PyAny>> {
    let decoded =
        sogkit::decode_coloring(&rep.inner, &labels.inner, &original.inner, k).map_err(err)?;
    to_py(py, &decoded)
}

#[pyfunction]
#[pyo3(signature = (g, max_host, relation="overlap", leafage=None, max_degree=None, paths_only=false, budget=None))]
#[allow(clippy::too_many_arguments)]
fn find_representation(
    py: Python<'_>,
    g: &PyGraph,
    max_host: usize,
    relation: &str,
    leafage: Option<usize>,
    max_degree: Option<usize>,
    paths_only: bool,
    budget: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let mut cfg = SearchConfig::new(max_host)
        .map_err(err)?
        .with_relation(relation_from_str(relation)?);
    if let Some(k) = leafage {
        cfg = cfg.with_constraint(HostConstraint::LeafageAtMost(k));
    }
    if let Some(k) = max_degree {
        cfg = cfg.with_constraint(HostConstraint::MaxDegreeAtMost(k));
    }
    if paths_only {
        cfg = cfg.paths_only();
    }
    if let Some(seconds) = budget {
        cfg = cfg.with_budget(seconds);
    }
    let dict = PyDict::new(py);
    match sogkit::find_representation(&g.inner, &cfg).map_err(err)? {
        SearchOutcome::Found {
            representation,
            hosts_checked,
        } => {
            dict.set_item("status", "found")?;
            dict.set_item("hosts_checked", hosts_checked)?;
            dict.set_item(
                "representation",
                PyRepresentation {
                    inner: representation,
                }
                .into_pyobject(py)?,
            )?;
        }
        SearchOutcome::BoundedAbsent { hosts_checked } => {
            dict.set_item("status", "bounded_absent")?;
            dict.set_item("hosts_checked", hosts_checked)?;
        }
        SearchOutcome::Timeout { hosts_checked } => {
            dict.set_item("status", "timeout")?;
            dict.set_item("hosts_checked", hosts_checked)?;
        }
    }
    Ok(dict.unbind().into())
}

#[pyfunction]
#[pyo3(signature = (d, max_host, budget=None))]
fn audit_gadget_lemmas(
    py: Python<'_>,
    d: usize,
    max_host: usize,
    budget: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let mut cfg = SearchConfig::new(max_host).map_err(err)?;
    if let Some(seconds) = budget {
        cfg = cfg.with_budget(seconds);
    }
    to_py(py, &sogkit::audit_gadget_lemmas(d, &cfg).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (max_host, offset=2, budget=None))]
fn audit_spanbranch(
    py: Python<'_>,
    max_host: usize,
    offset: usize,
    budget: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let mut cfg = SearchConfig::new(max_host).map_err(err)?;
    if let Some(seconds) = budget {
        cfg = cfg.with_budget(seconds);
    }
    to_py(py, &sogkit::audit_spanbranch(&cfg, offset).map_err(err)?)
}

#[pymodule]
fn sogkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyHostTree>()?;
    m.add_class::<PyRepresentation>()?;
    m.add_class::<PyBlockedLabels>()?;
    m.add_function(wrap_pyfunction!(vertex_connectivity, m)?)?;
    m.add_function(wrap_pyfunction!(find_k_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(amplify_3con, m)?)?;
    m.add_function(wrap_pyfunction!(build_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(build_blocked_graph, m)?)?;
    m.add_function(wrap_pyfunction!(build_empty_blocked, m)?)?;
    m.add_function(wrap_pyfunction!(reduction_params_for_tree, m)?)?;
    m.add_function(wrap_pyfunction!(represent_blocked_on_star, m)?)?;
    m.add_function(wrap_pyfunction!(represent_blocked_on_subdivision, m)?)?;
    m.add_function(wrap_pyfunction!(represent_empty_blocked_subpaths, m)?)?;
    m.add_function(wrap_pyfunction!(verify_representation, m)?)?;
    m.add_function(wrap_pyfunction!(derive_graph, m)?)?;
    m.add_function(wrap_pyfunction!(find_illegal_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(decode_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(find_representation, m)?)?;
    m.add_function(wrap_pyfunction!(audit_gadget_lemmas, m)?)?;
    m.add_function(wrap_pyfunction!(audit_spanbranch, m)?)?;
    Ok(())
}
