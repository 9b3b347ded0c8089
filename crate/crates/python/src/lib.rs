//! Python bindings: graph types plus the decomposition entry points.
//!
//! Structured results (trees, decompositions) come back as plain Python
//! objects decoded from their JSON form.

use graphdec::cliquewidth::{clique_width, cwd_expression, eval_cw, CwExpression};
use graphdec::io::{self, EdgeList};
use graphdec::modular::{gdec, md_tree, modules, DEFAULT_MODULE_CAP};
use graphdec::mso::{definable_family, eval_formula, Assignment, Formula};
use graphdec::split::{self, SDGraph as CoreSD, DEFAULT_SPLIT_CAP};
use graphdec::tutte::tutte_decompose_with;
use graphdec::twodag::canonical_term;
use graphdec::whitney::two_isomorphic_set;
use graphdec::{Error, MultiGraph as CoreMulti, RelStructure, SimpleDigraph, TwoGraph as CoreTwo};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(graphdec_py, GraphdecError, PyException);
create_exception!(graphdec_py, CapacityError, GraphdecError);

const FACTOR_CAP: usize = 14;
const TUTTE_CAP: usize = 14;

fn err(e: Error) -> PyErr {
    match e {
        Error::Input(m) => PyValueError::new_err(m),
        e @ Error::Capacity { .. } => CapacityError::new_err(e.to_string()),
        e => GraphdecError::new_err(e.to_string()),
    }
}

fn to_py<T: serde::Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| GraphdecError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// Simple directed graph; undirected edges are symmetric arc pairs.
#[pyclass(name = "Digraph", module = "graphdec_py", eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Digraph(SimpleDigraph);

#[pymethods]
impl Digraph {
    #[new]
    #[pyo3(signature = (arcs, vertices = None))]
    fn new(arcs: Vec<(String, String)>, vertices: Option<Vec<String>>) -> PyResult<Self> {
        let mut g = SimpleDigraph::with_vertices(vertices.unwrap_or_default());
        for (u, v) in arcs {
            g.add_edge(&u, &v).map_err(err)?;
        }
        Ok(Digraph(g))
    }

    #[staticmethod]
    fn undirected(edges: Vec<(String, String)>) -> PyResult<Self> {
        SimpleDigraph::undirected_from(edges).map(Digraph).map_err(err)
    }

    #[staticmethod]
    fn from_edgelist(text: &str) -> PyResult<Self> {
        io::read_digraph(text).map(Digraph).map_err(err)
    }

    fn edgelist(&self) -> String {
        EdgeList::from_digraph(&self.0).to_string()
    }

    fn dot(&self) -> String {
        io::digraph_dot(&self.0)
    }

    fn vertices(&self) -> Vec<String> {
        self.0.names().to_vec()
    }

    fn arcs(&self) -> Vec<(String, String)> {
        self.0.edge_names().into_iter().collect()
    }

    fn is_strongly_connected(&self) -> bool {
        self.0.is_strongly_connected()
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn __repr__(&self) -> String {
        format!("Digraph({} vertices, {} arcs)", self.0.n(), self.0.edge_count())
    }
}

/// Multigraph with named edges, for the Tutte and Whitney operations.
#[pyclass(name = "MultiGraph", module = "graphdec_py", eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct MultiGraph(CoreMulti);

#[pymethods]
impl MultiGraph {
    /// Undirected multigraph from `(id, u, v)` triples.
    #[new]
    fn new(edges: Vec<(String, String, String)>) -> PyResult<Self> {
        CoreMulti::undirected_from(edges).map(MultiGraph).map_err(err)
    }

    #[staticmethod]
    fn from_edgelist(text: &str) -> PyResult<Self> {
        io::read_multigraph(text).map(MultiGraph).map_err(err)
    }

    fn edgelist(&self) -> String {
        EdgeList::from_multigraph(&self.0).to_string()
    }

    fn edges(&self) -> Vec<(String, String, String)> {
        self.0.edges().iter().map(|e| (e.id.clone(), self.0.name(e.tail).to_string(), self.0.name(e.head).to_string())).collect()
    }

    fn __repr__(&self) -> String {
        format!("MultiGraph({} vertices, {} edges)", self.0.n(), self.0.m())
    }
}

/// Graph with distinguished sources s1, s2.
#[pyclass(name = "TwoGraph", module = "graphdec_py", skip_from_py_object)]
#[derive(Clone)]
pub struct TwoGraph(CoreTwo);

#[pymethods]
impl TwoGraph {
    /// Directed 2-graph from `(id, tail, head)` triples.
    #[new]
    fn new(edges: Vec<(String, String, String)>, s1: &str, s2: &str) -> PyResult<Self> {
        let g = CoreMulti::from_edges(edges).map_err(err)?;
        CoreTwo::new(g, s1, s2).map(TwoGraph).map_err(err)
    }

    #[staticmethod]
    fn from_edgelist(text: &str) -> PyResult<Self> {
        io::read_two_graph(text).map(TwoGraph).map_err(err)
    }

    /// Canonical term, as text.
    fn canonical_term(&self) -> PyResult<String> {
        canonical_term(&self.0, FACTOR_CAP).map(|t| t.to_string()).map_err(err)
    }
}

/// Graph whose ε-edges mark where components were split apart.
#[pyclass(name = "SDGraph", module = "graphdec_py", skip_from_py_object)]
#[derive(Clone)]
pub struct SDGraph(CoreSD);

#[pymethods]
impl SDGraph {
    #[new]
    fn new(graph: &Digraph, eps: Vec<(String, String)>) -> PyResult<Self> {
        CoreSD::new(graph.0.clone(), eps).map(SDGraph).map_err(err)
    }

    #[staticmethod]
    fn from_edgelist(text: &str) -> PyResult<Self> {
        io::read_sd_graph(text).map(SDGraph).map_err(err)
    }

    fn eval(&self) -> Digraph {
        Digraph(split::eval(&self.0))
    }

    fn eps(&self) -> Vec<(String, String)> {
        self.0.eps.iter().cloned().collect()
    }

    fn graph(&self) -> Digraph {
        Digraph(self.0.graph.clone())
    }

    /// Components with their type, as `(vertices, type)` pairs.
    fn components(&self, py: Python<'_>) -> PyResult<Vec<(Vec<String>, Py<PyAny>)>> {
        let comps = split::sd_components(&self.0, DEFAULT_SPLIT_CAP).map_err(err)?;
        comps.iter().map(|(c, t)| Ok((c.names().to_vec(), to_py(py, t)?))).collect()
    }

    fn is_canonical(&self) -> PyResult<bool> {
        split::check_canonical(&self.0, DEFAULT_SPLIT_CAP).map(|v| v.is_empty()).map_err(err)
    }

    fn edgelist(&self) -> String {
        EdgeList::from_sd_graph(&self.0).to_string()
    }

    fn __eq__(&self, other: &SDGraph) -> PyResult<bool> {
        split::same_sd_graph(&self.0, &other.0).map_err(err)
    }
}

/// All modules, each as a sorted vertex list.
#[pyfunction]
#[pyo3(signature = (g, cap = DEFAULT_MODULE_CAP))]
fn module_family(g: &Digraph, cap: usize) -> PyResult<Vec<Vec<String>>> {
    let fam = modules(&g.0, cap).map_err(err)?;
    Ok(fam.members.iter().map(|&m| fam.names(m)).collect())
}

#[pyfunction]
#[pyo3(signature = (g, cap = DEFAULT_MODULE_CAP))]
fn modular_tree(py: Python<'_>, g: &Digraph, cap: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &md_tree(&g.0, cap).map_err(err)?)
}

/// Graph form of the modular decomposition: `(vertex count, edge count, json)`.
#[pyfunction]
#[pyo3(signature = (g, cap = DEFAULT_MODULE_CAP))]
fn modular_graph(py: Python<'_>, g: &Digraph, cap: usize) -> PyResult<(usize, usize, Py<PyAny>)> {
    let d = gdec(&g.0, cap).map_err(err)?;
    Ok((d.vertex_count(), d.edge_count(), to_py(py, &d)?))
}

/// Split decomposition of a strongly connected digraph.
#[pyfunction]
#[pyo3(signature = (g, cap = DEFAULT_SPLIT_CAP, seed = None))]
fn split_decompose(g: &Digraph, cap: usize, seed: Option<u64>) -> PyResult<SDGraph> {
    match seed {
        Some(s) => split::split_iterative(&g.0, cap, s),
        None => split::split_decompose(&g.0, cap),
    }
    .map(SDGraph)
    .map_err(err)
}

/// Split decomposition of each connected component of an undirected graph.
#[pyfunction]
#[pyo3(signature = (g, cap = DEFAULT_SPLIT_CAP))]
fn split_decompose_undirected(g: &Digraph, cap: usize) -> PyResult<Vec<SDGraph>> {
    Ok(split::split_decompose_undirected(&g.0, cap).map_err(err)?.into_iter().map(SDGraph).collect())
}

#[pyfunction]
#[pyo3(signature = (g, cap = TUTTE_CAP, seed = None))]
fn tutte_decompose(py: Python<'_>, g: &MultiGraph, cap: usize, seed: Option<u64>) -> PyResult<Py<PyAny>> {
    to_py(py, &tutte_decompose_with(&g.0, cap, seed).map_err(err)?)
}

/// Every graph with the same cycle matroid, up to `limit` of them.
#[pyfunction]
#[pyo3(signature = (g, limit = None))]
fn two_isomorphic(g: &MultiGraph, limit: Option<usize>) -> PyResult<Vec<MultiGraph>> {
    Ok(two_isomorphic_set(&g.0, limit).map_err(err)?.into_iter().map(MultiGraph).collect())
}

#[pyfunction]
fn cliquewidth(g: &Digraph) -> PyResult<usize> {
    clique_width(&g.0).map_err(err)
}

/// Expression with at most `k` labels defining `g`, if there is one.
#[pyfunction]
fn cwd_witness(g: &Digraph, k: usize) -> PyResult<Option<String>> {
    Ok(cwd_expression(&g.0, k).map_err(err)?.map(|e| e.to_string()))
}

#[pyfunction]
fn eval_expression(expr: &str) -> PyResult<Digraph> {
    let e = CwExpression::parse(expr).map_err(err)?;
    Ok(Digraph(eval_cw(&e).map_err(err)?.graph))
}

fn structure(g: &Digraph) -> RelStructure {
    RelStructure::from_digraph(&g.0)
}

/// Truth value of `formula` on `g` (relation `edg`) with element variables
/// bound by `elems` and set variables by `sets`.
#[pyfunction]
#[pyo3(signature = (g, formula, elems = None, sets = None))]
fn mso_eval(
    g: &Digraph,
    formula: &str,
    elems: Option<Vec<(String, String)>>,
    sets: Option<Vec<(String, Vec<String>)>>,
) -> PyResult<bool> {
    let s = structure(g);
    let f = Formula::parse(formula).map_err(err)?;
    let elems = elems.unwrap_or_default();
    let sets = sets.unwrap_or_default();
    let e: Vec<(&str, &str)> = elems.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let owned: Vec<(&str, Vec<&str>)> = sets.iter().map(|(a, b)| (a.as_str(), b.iter().map(String::as_str).collect())).collect();
    let st: Vec<(&str, &[&str])> = owned.iter().map(|(a, b)| (*a, b.as_slice())).collect();
    let asg = Assignment::named(&s, &e, &st).map_err(err)?;
    eval_formula(&s, &f, &asg).map_err(err)
}

/// Sets satisfying a formula whose only free variable is `var`.
#[pyfunction]
fn mso_define(g: &Digraph, formula: &str, var: &str) -> PyResult<Vec<Vec<String>>> {
    let s = structure(g);
    let f = Formula::parse(formula).map_err(err)?;
    let fam = definable_family(&s, &f, var).map_err(err)?;
    Ok(fam.members.iter().map(|&m| fam.names(m)).collect())
}

#[pymodule]
fn graphdec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GraphdecError", m.py().get_type::<GraphdecError>())?;
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_class::<Digraph>()?;
    m.add_class::<MultiGraph>()?;
    m.add_class::<TwoGraph>()?;
    m.add_class::<SDGraph>()?;
    m.add_function(wrap_pyfunction!(module_family, m)?)?;
    m.add_function(wrap_pyfunction!(modular_tree, m)?)?;
    m.add_function(wrap_pyfunction!(modular_graph, m)?)?;
    m.add_function(wrap_pyfunction!(split_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(split_decompose_undirected, m)?)?;
    m.add_function(wrap_pyfunction!(tutte_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(two_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(cliquewidth, m)?)?;
    m.add_function(wrap_pyfunction!(cwd_witness, m)?)?;
    m.add_function(wrap_pyfunction!(eval_expression, m)?)?;
    m.add_function(wrap_pyfunction!(mso_eval, m)?)?;
    m.add_function(wrap_pyfunction!(mso_define, m)?)?;
    Ok(())
}
