//! Backtracking isomorphism for small vertex- and arc-coloured digraphs.
//!
//! Every graph kind of the crate is lowered to a [`ColoredGraph`]; colours are
//! interned through a shared [`Palette`] so both sides agree on their meaning.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use crate::error::{check_cap, Result};
use crate::graph::{MultiGraph, SimpleDigraph, TwoGraph};

pub const DEFAULT_ISO_CAP: usize = 64;

#[derive(Debug, Default, Clone)]
pub struct Palette {
    ids: HashMap<String, u64>,
}

impl Palette {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn color(&mut self, key: &str) -> u64 {
        let next = self.ids.len() as u64 + 1;
        *self.ids.entry(key.to_string()).or_insert(next)
    }
}

#[derive(Debug, Clone)]
pub struct ColoredGraph {
    pub vcolor: Vec<u64>,
    /// Arc (u,v) → sorted multiset of arc colours.
    pub arcs: BTreeMap<(usize, usize), Vec<u64>>,
}

impl ColoredGraph {
    pub fn new(n: usize) -> Self {
        ColoredGraph { vcolor: vec![0; n], arcs: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.vcolor.len()
    }

    pub fn add_arc(&mut self, u: usize, v: usize, color: u64) {
        let e = self.arcs.entry((u, v)).or_default();
        let pos = e.partition_point(|&c| c <= color);
        e.insert(pos, color);
    }

    pub fn add_edge(&mut self, u: usize, v: usize, color: u64) {
        self.add_arc(u, v, color);
        self.add_arc(v, u, color);
    }

    fn arc(&self, u: usize, v: usize) -> &[u64] {
        self.arcs.get(&(u, v)).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Colour refinement; returns a stable invariant per vertex.
fn refine(g: &ColoredGraph) -> Vec<u64> {
    let n = g.n();
    let mut outs: Vec<Vec<(usize, &Vec<u64>)>> = vec![Vec::new(); n];
    let mut ins: Vec<Vec<(usize, &Vec<u64>)>> = vec![Vec::new(); n];
    for ((u, v), cs) in &g.arcs {
        outs[*u].push((*v, cs));
        ins[*v].push((*u, cs));
    }
    let mut inv: Vec<u64> = g.vcolor.iter().map(hash_of).collect();
    let mut classes = inv.iter().collect::<BTreeSet<_>>().len();
    for _ in 0..n.max(1) {
        let next: Vec<u64> = (0..n)
            .map(|u| {
                let mut o: Vec<(u64, &Vec<u64>)> = outs[u].iter().map(|(v, c)| (inv[*v], *c)).collect();
                let mut i: Vec<(u64, &Vec<u64>)> = ins[u].iter().map(|(v, c)| (inv[*v], *c)).collect();
                o.sort();
                i.sort();
                hash_of(&(inv[u], o, i))
            })
            .collect();
        let c = next.iter().collect::<BTreeSet<_>>().len();
        inv = next;
        if c == classes {
            break;
        }
        classes = c;
    }
    inv
}

/// Finds a colour-preserving bijection `a → b`, if one exists.
pub fn find_isomorphism(a: &ColoredGraph, b: &ColoredGraph, cap: usize) -> Result<Option<Vec<usize>>> {
    check_cap("isomorphism instance", a.n().max(b.n()), cap)?;
    let n = a.n();
    if n != b.n() || a.arcs.len() != b.arcs.len() {
        return Ok(None);
    }
    // Refine both graphs jointly so that invariants are comparable.
    let (ia, ib) = joint_refine(a, b);
    let mut sa = ia.clone();
    let mut sb = ib.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    let mut class_size: HashMap<u64, usize> = HashMap::new();
    for x in &ia {
        *class_size.entry(*x).or_default() += 1;
    }
    // Order: smallest classes first, then neighbours of already placed vertices.
    let mut adj = vec![BTreeSet::new(); n];
    for &(u, v) in a.arcs.keys() {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let pick = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let linked = order.iter().any(|&w: &usize| adj[v].contains(&w));
                (!linked, class_size[&ia[v]], v)
            })
            .unwrap();
        placed[pick] = true;
        order.push(pick);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(a, b, &ia, &ib, &order, 0, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn joint_refine(a: &ColoredGraph, b: &ColoredGraph) -> (Vec<u64>, Vec<u64>) {
    // Disjoint union keeps the hashes of the two sides in the same namespace.
    let n = a.n();
    let mut u = ColoredGraph::new(n + b.n());
    u.vcolor[..n].copy_from_slice(&a.vcolor);
    u.vcolor[n..].copy_from_slice(&b.vcolor);
    for ((x, y), cs) in &a.arcs {
        u.arcs.insert((*x, *y), cs.clone());
    }
    for ((x, y), cs) in &b.arcs {
        u.arcs.insert((x + n, y + n), cs.clone());
    }
    let inv = refine(&u);
    (inv[..n].to_vec(), inv[n..].to_vec())
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &ColoredGraph,
    b: &ColoredGraph,
    ia: &[u64],
    ib: &[u64],
    order: &[usize],
    k: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if k == order.len() {
        return true;
    }
    let v = order[k];
    for w in 0..b.n() {
        if used[w] || ib[w] != ia[v] {
            continue;
        }
        if a.arc(v, v) != b.arc(w, w) {
            continue;
        }
        let ok = order[..k].iter().all(|&x| {
            let y = map[x];
            a.arc(v, x) == b.arc(w, y) && a.arc(x, v) == b.arc(y, w)
        });
        if !ok {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(a, b, ia, ib, order, k + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

fn fixed_color(p: &mut Palette, name: &str, fixed: Option<&BTreeSet<String>>) -> u64 {
    match fixed {
        Some(f) if f.contains(name) => p.color(&format!("fixed:{name}")),
        _ => p.color("free"),
    }
}

fn lower_digraph(g: &SimpleDigraph, p: &mut Palette, fixed: Option<&BTreeSet<String>>) -> ColoredGraph {
    let mut c = ColoredGraph::new(g.n());
    for i in 0..g.n() {
        let base = fixed_color(p, g.name(i), fixed);
        let lab = p.color(&format!("label:{}", g.label(i).unwrap_or("")));
        c.vcolor[i] = base * 1_000_003 + lab;
    }
    for (u, v) in g.edges() {
        c.add_arc(u, v, 1);
    }
    c
}

fn to_names(map: Vec<usize>, from: &[String], to: &[String]) -> BTreeMap<String, String> {
    map.into_iter().enumerate().map(|(i, j)| (from[i].clone(), to[j].clone())).collect()
}

/// Isomorphism of simple digraphs (vertex labels must agree), fixing the
/// listed vertex identifiers.
pub fn isomorphic_digraphs(
    g: &SimpleDigraph,
    h: &SimpleDigraph,
    fixed: Option<&BTreeSet<String>>,
) -> Result<Option<BTreeMap<String, String>>> {
    let mut p = Palette::new();
    let a = lower_digraph(g, &mut p, fixed);
    let b = lower_digraph(h, &mut p, fixed);
    Ok(find_isomorphism(&a, &b, DEFAULT_ISO_CAP)?.map(|m| to_names(m, g.names(), h.names())))
}

/// How multigraph edges must correspond.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeMode {
    /// Edges map to edges with the same identifier.
    Identified,
    /// Edge identifiers are ignored.
    Anonymous,
}

fn lower_multi(
    g: &MultiGraph,
    p: &mut Palette,
    fixed: Option<&BTreeSet<String>>,
    mode: EdgeMode,
    ignore_direction: bool,
) -> ColoredGraph {
    let mut c = ColoredGraph::new(g.n());
    for i in 0..g.n() {
        c.vcolor[i] = fixed_color(p, g.name(i), fixed);
    }
    for e in g.edges() {
        let undirected = ignore_direction || !e.directed;
        let key = match mode {
            EdgeMode::Identified => format!("edge:{}:{}", e.id, undirected),
            EdgeMode::Anonymous => format!("edge::{}", undirected),
        };
        let col = p.color(&key);
        if undirected {
            c.add_edge(e.tail, e.head, col);
        } else {
            c.add_arc(e.tail, e.head, col);
        }
    }
    c
}

/// Isomorphism of multigraphs. With `ignore_direction` the underlying
/// undirected multigraphs are compared.
pub fn isomorphic_multigraphs(
    g: &MultiGraph,
    h: &MultiGraph,
    fixed: Option<&BTreeSet<String>>,
    mode: EdgeMode,
    ignore_direction: bool,
) -> Result<Option<BTreeMap<String, String>>> {
    if mode == EdgeMode::Identified && g.edge_ids() != h.edge_ids() {
        return Ok(None);
    }
    let mut p = Palette::new();
    let a = lower_multi(g, &mut p, fixed, mode, ignore_direction);
    let b = lower_multi(h, &mut p, fixed, mode, ignore_direction);
    Ok(find_isomorphism(&a, &b, DEFAULT_ISO_CAP)?.map(|m| to_names(m, g.names(), h.names())))
}

/// Edge-identified isomorphism of 2-graphs mapping sources to sources.
pub fn isomorphic_two_graphs(g: &TwoGraph, h: &TwoGraph) -> Result<bool> {
    let mut p = Palette::new();
    let mut a = lower_multi(&g.graph, &mut p, None, EdgeMode::Identified, false);
    let mut b = lower_multi(&h.graph, &mut p, None, EdgeMode::Identified, false);
    if g.graph.edge_ids() != h.graph.edge_ids() {
        return Ok(false);
    }
    let s1 = p.color("source:1");
    let s2 = p.color("source:2");
    a.vcolor[g.s1] = s1;
    a.vcolor[g.s2] = s2;
    b.vcolor[h.s1] = s1;
    b.vcolor[h.s2] = s2;
    Ok(find_isomorphism(&a, &b, DEFAULT_ISO_CAP)?.is_some())
}

/// Key identifying an undirected multigraph without isolated vertices up to
/// edge-identified isomorphism: the multiset of per-vertex incidence sets.
pub fn incidence_key(g: &MultiGraph) -> Vec<Vec<String>> {
    let mut inc: Vec<Vec<String>> = vec![Vec::new(); g.n()];
    for e in g.edges() {
        inc[e.tail].push(e.id.clone());
        inc[e.head].push(e.id.clone());
    }
    let mut key: Vec<Vec<String>> = inc
        .into_iter()
        .filter(|v| !v.is_empty())
        .map(|mut v| {
            v.sort();
            v
        })
        .collect();
    key.sort();
    key
}
