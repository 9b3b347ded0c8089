//! Text formats: the line-oriented edge list and DOT export.
//!
//! Edge-list records, one per line, `#` starts a comment:
//!
//! ```text
//! vertex <name>
//! edge <id> <tail> <head> [directed|undirected]
//! eps <u> <v>
//! source <s1> <s2>
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, SimpleDigraph, TwoGraph};
use crate::modular::GdecGraph;
use crate::split::SDGraph;
use crate::tutte::{ComponentKind, TutteDecomposition};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub vertices: Vec<String>,
    /// (id, tail, head, directed)
    pub edges: Vec<(String, String, String, bool)>,
    pub eps: Vec<(String, String)>,
    pub sources: Option<(String, String)>,
}

impl EdgeList {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = EdgeList::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::input(format!("line {}: malformed record '{line}'", no + 1));
            match f[0] {
                "vertex" if f.len() == 2 => out.vertices.push(f[1].into()),
                "edge" if f.len() == 4 || f.len() == 5 => {
                    let directed = match f.get(4) {
                        None | Some(&"directed") => true,
                        Some(&"undirected") => false,
                        Some(_) => return Err(bad()),
                    };
                    out.edges.push((f[1].into(), f[2].into(), f[3].into(), directed));
                }
                "eps" if f.len() == 3 => out.eps.push((f[1].into(), f[2].into())),
                "source" if f.len() == 3 => {
                    if out.sources.replace((f[1].into(), f[2].into())).is_some() {
                        return Err(Error::input(format!("line {}: second source record", no + 1)));
                    }
                }
                _ => return Err(bad()),
            }
        }
        Ok(out)
    }

    pub fn digraph(&self) -> Result<SimpleDigraph> {
        if !self.eps.is_empty() {
            return Err(Error::input("ε-edges need an SD graph"));
        }
        let mut g = SimpleDigraph::with_vertices(&self.vertices);
        for (_, t, h, directed) in &self.edges {
            if *directed {
                g.add_edge(t, h)?;
            } else {
                g.add_undirected(t, h)?;
            }
        }
        Ok(g)
    }

    pub fn multigraph(&self) -> Result<MultiGraph> {
        if !self.eps.is_empty() {
            return Err(Error::input("ε-edges are not allowed in a multigraph"));
        }
        let mut g = MultiGraph::new();
        for v in &self.vertices {
            g.add_vertex(v);
        }
        for (id, t, h, directed) in &self.edges {
            g.add_edge(id, t, h, *directed)?;
        }
        Ok(g)
    }

    pub fn two_graph(&self) -> Result<TwoGraph> {
        let (s1, s2) = self.sources.as_ref().ok_or_else(|| Error::input("a 2-graph needs a source record"))?;
        TwoGraph::new(self.multigraph()?, s1, s2)
    }

    pub fn sd_graph(&self) -> Result<SDGraph> {
        let plain = EdgeList { eps: vec![], ..self.clone() };
        let mut g = plain.digraph()?;
        for (u, v) in &self.eps {
            g.add_vertex(u);
            g.add_vertex(v);
        }
        SDGraph::new(g, self.eps.iter().cloned())
    }

    pub fn from_digraph(g: &SimpleDigraph) -> Self {
        let mut out = EdgeList { vertices: g.names().to_vec(), ..Default::default() };
        let mut k = 0;
        for (a, b) in g.edges() {
            let back = g.has_arc(b, a);
            if back && b < a {
                continue;
            }
            k += 1;
            out.edges.push((format!("e{k}"), g.name(a).into(), g.name(b).into(), !back));
        }
        out
    }

    pub fn from_multigraph(g: &MultiGraph) -> Self {
        let edges = g.edges().iter().map(|e| (e.id.clone(), g.name(e.tail).into(), g.name(e.head).into(), e.directed)).collect();
        EdgeList { vertices: g.names().to_vec(), edges, ..Default::default() }
    }

    pub fn from_two_graph(t: &TwoGraph) -> Self {
        EdgeList { sources: Some((t.s1_name().into(), t.s2_name().into())), ..Self::from_multigraph(&t.graph) }
    }

    pub fn from_sd_graph(h: &SDGraph) -> Self {
        EdgeList { eps: h.eps.iter().cloned().collect(), ..Self::from_digraph(&h.graph) }
    }
}

impl std::fmt::Display for EdgeList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.vertices {
            writeln!(f, "vertex {v}")?;
        }
        for (id, t, h, d) in &self.edges {
            writeln!(f, "edge {id} {t} {h} {}", if *d { "directed" } else { "undirected" })?;
        }
        for (u, v) in &self.eps {
            writeln!(f, "eps {u} {v}")?;
        }
        if let Some((a, b)) = &self.sources {
            writeln!(f, "source {a} {b}")?;
        }
        Ok(())
    }
}

/// Reads a graph file: JSON when the text starts with `{`, edge list
/// otherwise.
pub fn read_digraph(text: &str) -> Result<SimpleDigraph> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::input(format!("graph JSON: {e}")))
    } else {
        EdgeList::parse(text)?.digraph()
    }
}

pub fn read_multigraph(text: &str) -> Result<MultiGraph> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::input(format!("multigraph JSON: {e}")))
    } else {
        EdgeList::parse(text)?.multigraph()
    }
}

pub fn read_two_graph(text: &str) -> Result<TwoGraph> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::input(format!("2-graph JSON: {e}")))
    } else {
        EdgeList::parse(text)?.two_graph()
    }
}

pub fn read_sd_graph(text: &str) -> Result<SDGraph> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::input(format!("SD graph JSON: {e}")))
    } else {
        EdgeList::parse(text)?.sd_graph()
    }
}

fn q(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn digraph_dot(g: &SimpleDigraph) -> String {
    let mut s = String::from("digraph G {\n");
    for v in g.names() {
        let _ = writeln!(s, "  {};", q(v));
    }
    for (a, b) in g.edges() {
        let _ = writeln!(s, "  {} -> {};", q(g.name(a)), q(g.name(b)));
    }
    s.push_str("}\n");
    s
}

pub fn multigraph_dot(g: &MultiGraph) -> String {
    let mut s = String::from("digraph G {\n");
    for v in g.names() {
        let _ = writeln!(s, "  {};", q(v));
    }
    for e in g.edges() {
        let dir = if e.directed { "" } else { ", dir=none" };
        let _ = writeln!(s, "  {} -> {} [label={}{dir}];", q(g.name(e.tail)), q(g.name(e.head)), q(&e.id));
    }
    s.push_str("}\n");
    s
}

/// Solid arcs as arrows, ε-edges dotted and undirected.
pub fn sd_dot(h: &SDGraph) -> String {
    let g = &h.graph;
    let mut s = String::from("digraph SD {\n");
    for v in g.names() {
        let shape = if h.partner(v).is_some() { "point" } else { "ellipse" };
        let _ = writeln!(s, "  {} [shape={shape}];", q(v));
    }
    for (a, b) in g.edges() {
        let _ = writeln!(s, "  {} -> {};", q(g.name(a)), q(g.name(b)));
    }
    for (u, v) in &h.eps {
        let _ = writeln!(s, "  {} -> {} [style=dotted, dir=none];", q(u), q(v));
    }
    s.push_str("}\n");
    s
}

/// Tree arcs solid, linear and prime arcs dashed, nodes coloured by type.
pub fn gdec_dot(d: &GdecGraph) -> String {
    let g = &d.graph;
    let mut s = String::from("digraph Gdec {\n");
    for i in 0..g.n() {
        let colour = match g.label(i) {
            Some("par") => "lightblue",
            Some("ser") => "lightpink",
            Some("lin") => "khaki",
            Some("prime") => "palegreen",
            _ => "white",
        };
        let label = g.label(i).map(|l| format!("{} ({l})", g.name(i))).unwrap_or_else(|| g.name(i).into());
        let _ = writeln!(s, "  {} [label={}, style=filled, fillcolor={colour}];", q(g.name(i)), q(&label));
    }
    for (a, b) in g.edges() {
        let (x, y) = (g.name(a), g.name(b));
        let style = if d.son.contains(&(x.to_string(), y.to_string())) { "" } else { " [style=dashed]" };
        let _ = writeln!(s, "  {} -> {}{style};", q(x), q(y));
    }
    s.push_str("}\n");
    s
}

/// The component tree: one node per component, one edge per marker pair.
pub fn tutte_dot(d: &TutteDecomposition) -> String {
    let mut s = String::from("graph Tutte {\n");
    for (i, c) in d.components.iter().enumerate() {
        let kind = match c.kind {
            ComponentKind::Bond => "bond",
            ComponentKind::Cycle => "cycle",
            ComponentKind::ThreeConnected => "3-connected",
        };
        let mut ids: Vec<String> = c.real_edge_ids().into_iter().collect();
        ids.sort();
        let _ = writeln!(s, "  c{i} [label={}];", q(&format!("{kind}: {}", ids.join(" "))));
    }
    for l in &d.links {
        let _ = writeln!(s, "  c{} -- c{} [label={}];", l.left_component, l.right_component, q(&l.left));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_and_comments() {
        let text = "# a path\nvertex z\nedge e1 a b\nedge e2 b c undirected # trailing\n";
        let l = EdgeList::parse(text).unwrap();
        let g = l.digraph().unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 3);
        let m = l.multigraph().unwrap();
        assert_eq!(m.m(), 2);
        assert!(EdgeList::parse("edge e1 a").is_err());
        assert!(EdgeList::parse("edge e1 a b sideways").is_err());
        assert!(EdgeList::parse("wat").is_err());
    }

    #[test]
    fn round_trips() {
        let g = SimpleDigraph::from_arcs([("a", "b"), ("b", "a"), ("b", "c")]).unwrap();
        let text = EdgeList::from_digraph(&g).to_string();
        assert_eq!(read_digraph(&text).unwrap(), g);
        assert_eq!(read_digraph(&serde_json::to_string(&g).unwrap()).unwrap(), g);
        let t = EdgeList::parse("edge x s t\nedge y s m\nedge z m t\nsource s t\n").unwrap().two_graph().unwrap();
        assert_eq!(read_two_graph(&EdgeList::from_two_graph(&t).to_string()).unwrap(), t);
        let h = EdgeList::parse("edge e1 a h undirected\nedge e2 k b undirected\neps h k\n").unwrap().sd_graph().unwrap();
        assert_eq!(read_sd_graph(&EdgeList::from_sd_graph(&h).to_string()).unwrap().eps, h.eps);
        assert!(sd_dot(&h).contains("style=dotted"));
    }
}
