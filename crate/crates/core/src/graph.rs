//! Core graph types: simple digraphs, multigraphs with edge identities and
//! 2-graphs (multigraphs with two distinguished sources).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple loop-free directed graph. Undirected edges are stored as two
/// opposite arcs.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(into = "DigraphDoc", try_from = "DigraphDoc")]
pub struct SimpleDigraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    out: Vec<BTreeSet<usize>>,
    inn: Vec<BTreeSet<usize>>,
    labels: Vec<Option<String>>,
}

#[derive(Serialize, Deserialize)]
struct DigraphDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, String>,
}

impl From<SimpleDigraph> for DigraphDoc {
    fn from(g: SimpleDigraph) -> Self {
        let labels = (0..g.n())
            .filter_map(|i| g.label(i).map(|l| (g.name(i).to_string(), l.to_string())))
            .collect();
        DigraphDoc {
            vertices: g.names.clone(),
            edges: g.edges().into_iter().map(|(u, v)| (g.names[u].clone(), g.names[v].clone())).collect(),
            labels,
        }
    }
}

impl TryFrom<DigraphDoc> for SimpleDigraph {
    type Error = Error;
    fn try_from(d: DigraphDoc) -> Result<Self> {
        let mut g = SimpleDigraph::new();
        for v in &d.vertices {
            g.add_vertex(v);
        }
        for (u, v) in &d.edges {
            g.add_edge(u, v)?;
        }
        for (v, l) in d.labels {
            let i = g.index_of(&v).ok_or_else(|| Error::input(format!("label on unknown vertex {v}")))?;
            g.set_label(i, Some(l));
        }
        Ok(g)
    }
}

impl PartialEq for SimpleDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_set() == other.vertex_set()
            && self.edge_names() == other.edge_names()
            && self.label_map() == other.label_map()
    }
}

impl Eq for SimpleDigraph {}

impl SimpleDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Self {
        let mut g = Self::new();
        for v in names {
            g.add_vertex(v.as_ref());
        }
        g
    }

    /// Builds a graph from named arcs; vertices are created on first use.
    pub fn from_arcs<S: AsRef<str>>(arcs: impl IntoIterator<Item = (S, S)>) -> Result<Self> {
        let mut g = Self::new();
        for (u, v) in arcs {
            g.add_edge(u.as_ref(), v.as_ref())?;
        }
        Ok(g)
    }

    /// Undirected graph from named edges (each edge becomes two arcs).
    pub fn undirected_from<S: AsRef<str>>(edges: impl IntoIterator<Item = (S, S)>) -> Result<Self> {
        let mut g = Self::new();
        for (u, v) in edges {
            g.add_undirected(u.as_ref(), v.as_ref())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.out.push(BTreeSet::new());
        self.inn.push(BTreeSet::new());
        self.labels.push(None);
        i
    }

    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<()> {
        if u == v {
            return Err(Error::input(format!("loop on vertex {u}")));
        }
        let a = self.add_vertex(u);
        let b = self.add_vertex(v);
        self.add_arc(a, b);
        Ok(())
    }

    pub fn add_undirected(&mut self, u: &str, v: &str) -> Result<()> {
        self.add_edge(u, v)?;
        self.add_edge(v, u)
    }

    /// Adds the arc u→v by index; loops are ignored.
    pub fn add_arc(&mut self, u: usize, v: usize) {
        if u != v {
            self.out[u].insert(v);
            self.inn[v].insert(u);
        }
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) {
        self.out[u].remove(&v);
        self.inn[v].remove(&u);
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(&v)
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => self.has_arc(a, b),
            _ => false,
        }
    }

    pub fn out_neighbors(&self, u: usize) -> &BTreeSet<usize> {
        &self.out[u]
    }

    pub fn in_neighbors(&self, u: usize) -> &BTreeSet<usize> {
        &self.inn[u]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for (u, outs) in self.out.iter().enumerate() {
            for &v in outs {
                e.push((u, v));
            }
        }
        e
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    pub fn vertex_set(&self) -> BTreeSet<String> {
        self.names.iter().cloned().collect()
    }

    pub fn edge_names(&self) -> BTreeSet<(String, String)> {
        self.edges().into_iter().map(|(u, v)| (self.names[u].clone(), self.names[v].clone())).collect()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels[i].as_deref()
    }

    pub fn set_label(&mut self, i: usize, label: Option<String>) {
        self.labels[i] = label;
    }

    pub fn label_map(&self) -> BTreeMap<String, String> {
        (0..self.n())
            .filter_map(|i| self.labels[i].clone().map(|l| (self.names[i].clone(), l)))
            .collect()
    }

    /// True when every arc has its reverse.
    pub fn is_undirected(&self) -> bool {
        self.edges().into_iter().all(|(u, v)| self.has_arc(v, u))
    }

    pub fn induced_subgraph<S: AsRef<str>>(&self, x: impl IntoIterator<Item = S>) -> Result<SimpleDigraph> {
        let mut idx = Vec::new();
        for v in x {
            let v = v.as_ref();
            idx.push(self.index_of(v).ok_or_else(|| Error::input(format!("unknown vertex {v}")))?);
        }
        Ok(self.induced_by_indices(&idx))
    }

    /// Induced subgraph on the given vertex indices, in the given order.
    pub fn induced_by_indices(&self, idx: &[usize]) -> SimpleDigraph {
        let mut g = SimpleDigraph::new();
        for &i in idx {
            let j = g.add_vertex(&self.names[i]);
            g.labels[j] = self.labels[i].clone();
        }
        for &i in idx {
            for &j in idx {
                if self.has_arc(i, j) {
                    let a = g.index_of(&self.names[i]).unwrap();
                    let b = g.index_of(&self.names[j]).unwrap();
                    g.add_arc(a, b);
                }
            }
        }
        g
    }

    /// Induced subgraph on a bitmask of vertex indices.
    pub fn induced_by_mask(&self, mask: u64) -> SimpleDigraph {
        let idx: Vec<usize> = (0..self.n()).filter(|&i| mask >> i & 1 == 1).collect();
        self.induced_by_indices(&idx)
    }

    pub fn reverse(&self) -> SimpleDigraph {
        let mut g = self.clone();
        std::mem::swap(&mut g.out, &mut g.inn);
        g
    }

    /// Connectivity of the underlying undirected graph. The empty graph is connected.
    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in self.out[u].iter().chain(self.inn[u].iter()) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n()
    }

    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.out[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        self.reachable_from(0).iter().all(|&b| b) && self.reverse().reachable_from(0).iter().all(|&b| b)
    }

    /// Connected components of the underlying undirected graph, as sorted index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![s];
            comp[s] = c;
            let mut k = 0;
            while k < members.len() {
                let u = members[k];
                k += 1;
                for &v in self.out[u].iter().chain(self.inn[u].iter()) {
                    if comp[v] == usize::MAX {
                        comp[v] = c;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Renames every vertex through `f`.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> SimpleDigraph {
        let mut g = SimpleDigraph::new();
        for i in 0..self.n() {
            let j = g.add_vertex(&f(&self.names[i]));
            g.labels[j] = self.labels[i].clone();
        }
        for (u, v) in self.edges() {
            g.add_arc(u, v);
        }
        g
    }
}

/// An edge of a multigraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MEdge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub directed: bool,
}

impl MEdge {
    pub fn other(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.tail == v || self.head == v
    }
}

/// Loop-free multigraph whose edges carry identifiers.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(into = "MultiDoc", try_from = "MultiDoc")]
pub struct MultiGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<MEdge>,
    edge_index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct MultiDoc {
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    id: String,
    tail: String,
    head: String,
    #[serde(default = "yes")]
    directed: bool,
}

fn yes() -> bool {
    true
}

impl From<MultiGraph> for MultiDoc {
    fn from(g: MultiGraph) -> Self {
        MultiDoc {
            vertices: g.names.clone(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    tail: g.names[e.tail].clone(),
                    head: g.names[e.head].clone(),
                    directed: e.directed,
                })
                .collect(),
        }
    }
}

impl TryFrom<MultiDoc> for MultiGraph {
    type Error = Error;
    fn try_from(d: MultiDoc) -> Result<Self> {
        let mut g = MultiGraph::new();
        for v in &d.vertices {
            g.add_vertex(v);
        }
        for e in d.edges {
            g.add_edge(&e.id, &e.tail, &e.head, e.directed)?;
        }
        Ok(g)
    }
}

impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_set() == other.vertex_set() && self.edge_records() == other.edge_records()
    }
}

impl Eq for MultiGraph {}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from `(id, tail, head)` triples, all directed.
    pub fn from_edges<S: AsRef<str>>(edges: impl IntoIterator<Item = (S, S, S)>) -> Result<Self> {
        let mut g = Self::new();
        for (id, t, h) in edges {
            g.add_edge(id.as_ref(), t.as_ref(), h.as_ref(), true)?;
        }
        Ok(g)
    }

    /// Builds a graph from `(id, u, v)` triples, all undirected.
    pub fn undirected_from<S: AsRef<str>>(edges: impl IntoIterator<Item = (S, S, S)>) -> Result<Self> {
        let mut g = Self::new();
        for (id, t, h) in edges {
            g.add_edge(id.as_ref(), t.as_ref(), h.as_ref(), false)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn add_edge(&mut self, id: &str, tail: &str, head: &str, directed: bool) -> Result<usize> {
        if tail == head {
            return Err(Error::input(format!("edge {id} is a loop")));
        }
        if self.edge_index.contains_key(id) {
            return Err(Error::input(format!("duplicate edge id {id}")));
        }
        let t = self.add_vertex(tail);
        let h = self.add_vertex(head);
        let k = self.edges.len();
        self.edges.push(MEdge { id: id.to_string(), tail: t, head: h, directed });
        self.edge_index.insert(id.to_string(), k);
        Ok(k)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edges(&self) -> &[MEdge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &MEdge {
        &self.edges[k]
    }

    pub fn edge_pos(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn edge_by_id(&self, id: &str) -> Option<&MEdge> {
        self.edge_pos(id).map(|k| &self.edges[k])
    }

    pub fn edge_ids(&self) -> BTreeSet<String> {
        self.edges.iter().map(|e| e.id.clone()).collect()
    }

    pub fn vertex_set(&self) -> BTreeSet<String> {
        self.names.iter().cloned().collect()
    }

    /// `(id, tail name, head name, directed)` records, sorted by id.
    pub fn edge_records(&self) -> BTreeSet<(String, String, String, bool)> {
        self.edges
            .iter()
            .map(|e| (e.id.clone(), self.names[e.tail].clone(), self.names[e.head].clone(), e.directed))
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.m()).filter(|&k| self.edges[k].touches(v)).collect()
    }

    /// Subgraph made of the given edges and their end vertices.
    pub fn edge_induced<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<MultiGraph> {
        let mut keep = BTreeSet::new();
        for id in ids {
            let id = id.as_ref();
            keep.insert(self.edge_pos(id).ok_or_else(|| Error::input(format!("unknown edge {id}")))?);
        }
        Ok(self.edge_induced_by_positions(&keep))
    }

    pub fn edge_induced_by_positions(&self, keep: &BTreeSet<usize>) -> MultiGraph {
        let mut g = MultiGraph::new();
        for &k in keep {
            let e = &self.edges[k];
            g.add_edge(&e.id, &self.names[e.tail], &self.names[e.head], e.directed)
                .expect("edges of a valid graph");
        }
        g
    }

    /// Copy with one edge removed (vertices are kept).
    pub fn without_edge(&self, id: &str) -> MultiGraph {
        let mut g = MultiGraph::new();
        for v in &self.names {
            g.add_vertex(v);
        }
        for e in &self.edges {
            if e.id != id {
                g.add_edge(&e.id, &self.names[e.tail], &self.names[e.head], e.directed).unwrap();
            }
        }
        g
    }

    /// Copy with the listed edges reversed.
    pub fn with_reversed(&self, ids: &BTreeSet<String>) -> MultiGraph {
        let mut g = MultiGraph::new();
        for v in &self.names {
            g.add_vertex(v);
        }
        for e in &self.edges {
            let (t, h) = if ids.contains(&e.id) { (e.head, e.tail) } else { (e.tail, e.head) };
            g.add_edge(&e.id, &self.names[t], &self.names[h], e.directed).unwrap();
        }
        g
    }

    /// Same graph with every edge marked undirected.
    pub fn undirected(&self) -> MultiGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.directed = false;
        }
        g
    }

    /// Same graph with every edge marked directed.
    pub fn directed(&self) -> MultiGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.directed = true;
        }
        g
    }

    /// Drops vertices incident to no edge.
    pub fn without_isolated(&self) -> MultiGraph {
        let all: BTreeSet<usize> = (0..self.m()).collect();
        self.edge_induced_by_positions(&all)
    }

    fn connected_avoiding(&self, skip: Option<usize>) -> bool {
        let alive: Vec<usize> = (0..self.n()).filter(|&v| Some(v) != skip).collect();
        if alive.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n()];
        for e in &self.edges {
            if Some(e.tail) == skip || Some(e.head) == skip {
                continue;
            }
            adj[e.tail].push(e.head);
            adj[e.head].push(e.tail);
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![alive[0]];
        seen[alive[0]] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == alive.len()
    }

    /// Undirected connectivity over all vertices.
    pub fn is_connected(&self) -> bool {
        self.connected_avoiding(None)
    }

    /// Connected, and stays connected after deleting any single vertex.
    /// A graph made of one edge or of parallel edges is 2-connected.
    pub fn is_2connected(&self) -> bool {
        if self.m() == 0 || !self.is_connected() {
            return false;
        }
        if self.n() <= 2 {
            return true;
        }
        (0..self.n()).all(|v| self.connected_avoiding(Some(v)))
    }

    /// Simple digraph on the same vertices (parallel edges merged, undirected
    /// edges doubled).
    pub fn to_simple(&self) -> SimpleDigraph {
        let mut g = SimpleDigraph::with_vertices(&self.names);
        for e in &self.edges {
            g.add_arc(e.tail, e.head);
            if !e.directed {
                g.add_arc(e.head, e.tail);
            }
        }
        g
    }
}

/// A multigraph with two distinct distinguished vertices.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "TwoDoc", try_from = "TwoDoc")]
pub struct TwoGraph {
    pub graph: MultiGraph,
    pub s1: usize,
    pub s2: usize,
}

#[derive(Serialize, Deserialize)]
struct TwoDoc {
    graph: MultiGraph,
    s1: String,
    s2: String,
}

impl From<TwoGraph> for TwoDoc {
    fn from(t: TwoGraph) -> Self {
        TwoDoc { s1: t.graph.name(t.s1).to_string(), s2: t.graph.name(t.s2).to_string(), graph: t.graph }
    }
}

impl TryFrom<TwoDoc> for TwoGraph {
    type Error = Error;
    fn try_from(d: TwoDoc) -> Result<Self> {
        TwoGraph::new(d.graph, &d.s1, &d.s2)
    }
}

impl PartialEq for TwoGraph {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && self.s1_name() == other.s1_name() && self.s2_name() == other.s2_name()
    }
}

impl Eq for TwoGraph {}

impl TwoGraph {
    pub fn new(graph: MultiGraph, s1: &str, s2: &str) -> Result<Self> {
        let a = graph.index_of(s1).ok_or_else(|| Error::input(format!("unknown source {s1}")))?;
        let b = graph.index_of(s2).ok_or_else(|| Error::input(format!("unknown source {s2}")))?;
        if a == b {
            return Err(Error::input("the two sources must differ"));
        }
        Ok(TwoGraph { graph, s1: a, s2: b })
    }

    pub fn s1_name(&self) -> &str {
        self.graph.name(self.s1)
    }

    pub fn s2_name(&self) -> &str {
        self.graph.name(self.s2)
    }

    /// Same graph with the two sources exchanged.
    pub fn swapped(&self) -> TwoGraph {
        TwoGraph { graph: self.graph.clone(), s1: self.s2, s2: self.s1 }
    }
}

/// Finite relational structure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelStructure {
    pub domain: Vec<String>,
    pub relations: BTreeMap<String, Relation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

impl RelStructure {
    pub fn new<S: AsRef<str>>(domain: impl IntoIterator<Item = S>) -> Self {
        RelStructure { domain: domain.into_iter().map(|s| s.as_ref().to_string()).collect(), relations: BTreeMap::new() }
    }

    pub fn declare(&mut self, name: &str, arity: usize) {
        self.relations.entry(name.to_string()).or_insert(Relation { arity, tuples: BTreeSet::new() });
    }

    pub fn insert(&mut self, name: &str, tuple: Vec<usize>) -> Result<()> {
        if tuple.iter().any(|&d| d >= self.domain.len()) {
            return Err(Error::input(format!("tuple of {name} leaves the domain")));
        }
        let rel = self
            .relations
            .entry(name.to_string())
            .or_insert(Relation { arity: tuple.len(), tuples: BTreeSet::new() });
        if rel.arity != tuple.len() {
            return Err(Error::input(format!("relation {name} has arity {}", rel.arity)));
        }
        rel.tuples.insert(tuple);
        Ok(())
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> bool {
        self.relations.get(name).is_some_and(|r| r.tuples.contains(tuple))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    /// The graph as a structure with one binary relation `edg`.
    pub fn from_digraph(g: &SimpleDigraph) -> Self {
        let mut s = RelStructure::new(g.names());
        s.declare("edg", 2);
        for (u, v) in g.edges() {
            s.insert("edg", vec![u, v]).unwrap();
        }
        s
    }

    /// Checks every tuple against its arity and the domain.
    pub fn validate(&self) -> Result<()> {
        for (name, rel) in &self.relations {
            for t in &rel.tuples {
                if t.len() != rel.arity || t.iter().any(|&d| d >= self.domain.len()) {
                    return Err(Error::validation(format!("bad tuple {t:?} in {name}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_subgraph_of_triangle() {
        let g = SimpleDigraph::undirected_from([("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        let h = g.induced_subgraph(["a", "b"]).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.edge_names(), BTreeSet::from([("a".into(), "b".into()), ("b".into(), "a".into())]));
        assert_eq!(g.induced_subgraph(g.names().to_vec()).unwrap(), g);
        assert!(g.induced_subgraph(["z"]).is_err());
    }

    #[test]
    fn edge_induced_cases() {
        let g = MultiGraph::from_edges([("e1", "a", "b"), ("e2", "b", "c"), ("e3", "c", "a")]).unwrap();
        let h = g.edge_induced(["e1"]).unwrap();
        assert_eq!((h.n(), h.m()), (2, 1));
        assert_eq!(g.edge_induced(Vec::<String>::new()).unwrap().n(), 0);
        assert_eq!(g.edge_induced(g.edge_ids()).unwrap(), g);
        assert!(g.edge_induced(["zz"]).is_err());
    }

    #[test]
    fn connectivity_basics() {
        let mut g = SimpleDigraph::with_vertices(["1"]);
        assert!(g.is_connected());
        g.add_edge("1", "2").unwrap();
        g.add_vertex("3");
        assert!(!g.is_connected());
        let c = SimpleDigraph::from_arcs([("0", "1"), ("1", "2"), ("2", "0")]).unwrap();
        assert!(c.is_strongly_connected());
        assert!(!SimpleDigraph::from_arcs([("0", "1")]).unwrap().is_strongly_connected());
    }

    #[test]
    fn two_connectivity() {
        let bond = MultiGraph::from_edges([("e", "u", "v"), ("f", "u", "v")]).unwrap();
        assert!(bond.is_2connected());
        let path = MultiGraph::from_edges([("e", "u", "v"), ("f", "v", "w")]).unwrap();
        assert!(!path.is_2connected());
        let bridge = MultiGraph::from_edges([
            ("1", "a", "b"),
            ("2", "b", "c"),
            ("3", "c", "d"),
            ("4", "a", "c"),
            ("5", "b", "d"),
        ])
        .unwrap();
        assert!(bridge.is_2connected());
    }

    #[test]
    fn serde_round_trip() {
        let g = SimpleDigraph::from_arcs([("a", "b"), ("b", "c")]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<SimpleDigraph>(&s).unwrap(), g);
        let m = MultiGraph::from_edges([("e", "u", "v"), ("f", "u", "v")]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<MultiGraph>(&s).unwrap(), m);
        let t = TwoGraph::new(m, "u", "v").unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<TwoGraph>(&s).unwrap(), t);
    }
}
