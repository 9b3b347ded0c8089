//! Splits, joins, circles of transitive tournaments and split decomposition
//! graphs.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bipartition::{good_members, tree_partition, BipartitionFamily};
use crate::error::{check_cap, Error, Result};
use crate::graph::SimpleDigraph;
use crate::iso::{find_isomorphism, isomorphic_digraphs, ColoredGraph, Palette, DEFAULT_ISO_CAP};
use crate::partitive::{bits, full_mask, Mask};

pub const DEFAULT_SPLIT_CAP: usize = 15;
/// Largest graph handed to the CTT recognizer.
pub const CTT_RECOGNITION_LIMIT: usize = 12;

fn mask_of(g: &SimpleDigraph, names: &[&str]) -> Result<Mask> {
    let mut m = 0;
    for v in names {
        let i = g.index_of(v).ok_or_else(|| Error::input(format!("unknown vertex {v}")))?;
        m |= 1 << i;
    }
    Ok(m)
}

/// Cross arcs from `a` to `b` form a complete bipartite product.
fn complete_cross(g: &SimpleDigraph, a: Mask, b: Mask) -> bool {
    let mut tails = 0u64;
    let mut heads = 0u64;
    let mut count = 0u32;
    for u in bits(a) {
        for &v in g.out_neighbors(u) {
            if b >> v & 1 == 1 {
                tails |= 1 << u;
                heads |= 1 << v;
                count += 1;
            }
        }
    }
    count == tails.count_ones() * heads.count_ones()
}

/// Whether {a, V-a} is a split (vertex-index mask).
pub fn is_split(g: &SimpleDigraph, a: Mask) -> bool {
    let full = full_mask(g.n());
    let a = a & full;
    let b = full & !a;
    if a.count_ones() < 2 || b.count_ones() < 2 {
        return false;
    }
    complete_cross(g, a, b) && complete_cross(g, b, a)
}

pub fn is_split_named(g: &SimpleDigraph, block: &[&str]) -> Result<bool> {
    Ok(is_split(g, mask_of(g, block)?))
}

fn require_connected(g: &SimpleDigraph) -> Result<()> {
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::precondition("graph is not connected"));
    }
    Ok(())
}

/// Every split of a connected graph.
pub fn splits(g: &SimpleDigraph, cap: usize) -> Result<BipartitionFamily> {
    check_cap("vertex set", g.n(), cap)?;
    require_connected(g)?;
    let n = g.n();
    let mut b = BipartitionFamily::new(g.names().to_vec())?;
    if n < 4 {
        return Ok(b);
    }
    let full = full_mask(n);
    for rest in 0..(1u64 << (n - 1)) {
        let a = 1 | rest << 1;
        if a != full && is_split(g, a) {
            b.insert(a)?;
        }
    }
    Ok(b)
}

pub fn good_splits(g: &SimpleDigraph, cap: usize) -> Result<BipartitionFamily> {
    Ok(good_members(&splits(g, cap)?))
}

/// Join of two disjoint graphs at the vertices `h` of `hg` and `k` of `kg`.
pub fn join(hg: &SimpleDigraph, h: &str, kg: &SimpleDigraph, k: &str) -> Result<SimpleDigraph> {
    let hi = hg.index_of(h).ok_or_else(|| Error::input(format!("marker {h} is not a vertex")))?;
    let ki = kg.index_of(k).ok_or_else(|| Error::input(format!("marker {k} is not a vertex")))?;
    if hg.names().iter().any(|v| kg.index_of(v).is_some()) {
        return Err(Error::input("joined graphs must be disjoint"));
    }
    let mut g = SimpleDigraph::new();
    for (src, skip) in [(hg, hi), (kg, ki)] {
        for i in 0..src.n() {
            if i != skip {
                g.add_vertex(src.name(i));
            }
        }
    }
    for (src, skip) in [(hg, hi), (kg, ki)] {
        for (u, v) in src.edges() {
            if u != skip && v != skip {
                g.add_edge(src.name(u), src.name(v))?;
            }
        }
    }
    for (x, xm, y, ym) in [(hg, hi, kg, ki), (kg, ki, hg, hi)] {
        for &a in x.in_neighbors(xm) {
            for &b in y.out_neighbors(ym) {
                g.add_edge(x.name(a), y.name(b))?;
            }
        }
    }
    Ok(g)
}

fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut s = base.to_string();
    while taken(&s) {
        s.push('\'');
    }
    s
}

/// Side of a split with a marker standing for the other side.
fn marked_side(g: &SimpleDigraph, a: Mask, marker: &str) -> SimpleDigraph {
    let full = full_mask(g.n());
    let b = full & !a;
    let mut h = g.induced_by_mask(a);
    h.add_vertex(marker);
    for u in bits(a) {
        if g.out_neighbors(u).iter().any(|&v| b >> v & 1 == 1) {
            h.add_edge(g.name(u), marker).unwrap();
        }
        if g.in_neighbors(u).iter().any(|&v| b >> v & 1 == 1) {
            h.add_edge(marker, g.name(u)).unwrap();
        }
    }
    h
}

/// The two graphs whose join at their markers gives back `g`.
pub fn split_parts(g: &SimpleDigraph, a: Mask) -> Result<(SimpleDigraph, String, SimpleDigraph, String)> {
    if !(g.is_strongly_connected() || g.is_undirected() && g.is_connected()) {
        return Err(Error::precondition("the two sides of a split are unique only for strongly connected graphs"));
    }
    if !is_split(g, a) {
        return Err(Error::input("not a split"));
    }
    let full = full_mask(g.n());
    let h = fresh("h", |s| g.index_of(s).is_some());
    let k = fresh("k", |s| g.index_of(s).is_some() || s == h);
    Ok((marked_side(g, a, &h), h, marked_side(g, full & !a, &k), k))
}

/// Circle of transitive tournaments: `hinges` is 0 = p1 < ... < pk < n,
/// followed by n itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CttSpec {
    pub n: usize,
    pub hinges: Vec<usize>,
}

impl CttSpec {
    pub fn new(n: usize, hinges: Vec<usize>) -> Result<Self> {
        let ok = n >= 3
            && hinges.len() >= 2
            && hinges[0] == 0
            && *hinges.last().unwrap() == n
            && hinges.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::input(format!("invalid hinge sequence {hinges:?} for {n} vertices")));
        }
        Ok(CttSpec { n, hinges })
    }

    /// Number of hinges.
    pub fn k(&self) -> usize {
        self.hinges.len() - 1
    }

    fn from_lengths(lens: &[usize]) -> Self {
        let mut h = vec![0];
        for l in lens {
            h.push(h.last().unwrap() + l);
        }
        CttSpec { n: *h.last().unwrap(), hinges: h }
    }
}

pub fn ctt_graph(spec: &CttSpec) -> SimpleDigraph {
    let n = spec.n;
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut g = SimpleDigraph::with_vertices(&names);
    for w in spec.hinges.windows(2) {
        for i in w[0]..w[1] {
            for j in i + 1..=w[1] {
                let (a, b) = (i % n, j % n);
                if a != b {
                    g.add_arc(a, b);
                }
            }
        }
    }
    g
}

/// A CTT shape together with the vertex playing each v_i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CttMatch {
    pub spec: CttSpec,
    pub order: Vec<String>,
}

impl CttMatch {
    pub fn hinge_vertices(&self) -> BTreeSet<String> {
        self.spec.hinges[..self.spec.k()].iter().map(|&p| self.order[p].clone()).collect()
    }
}

/// Compositions of n, one per rotation class.
fn necklace_compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for cuts in 0..(1u64 << (n - 1)) {
        let mut lens = Vec::new();
        let mut last = 0;
        for i in 1..n {
            if cuts >> (i - 1) & 1 == 1 {
                lens.push(i - last);
                last = i;
            }
        }
        lens.push(n - last);
        let min_rot = (0..lens.len())
            .map(|r| lens[r..].iter().chain(&lens[..r]).copied().collect::<Vec<_>>())
            .min()
            .unwrap();
        if min_rot == lens {
            out.push(lens);
        }
    }
    out
}

pub fn recognize_ctt(g: &SimpleDigraph) -> Result<Option<CttMatch>> {
    let n = g.n();
    if n < 3 || n > CTT_RECOGNITION_LIMIT || g.is_undirected() || !g.is_strongly_connected() {
        return Ok(None);
    }
    let plain = g.rename(|s| s.to_string());
    let degs = |h: &SimpleDigraph| {
        let mut d: Vec<(usize, usize)> = (0..h.n()).map(|i| (h.out_neighbors(i).len(), h.in_neighbors(i).len())).collect();
        d.sort();
        d
    };
    let target = degs(&plain);
    for lens in necklace_compositions(n) {
        let spec = CttSpec::from_lengths(&lens);
        let c = ctt_graph(&spec);
        if c.edge_count() != plain.edge_count() || degs(&c) != target {
            continue;
        }
        if let Some(m) = isomorphic_digraphs(&c, &plain, None)? {
            let order = (0..n).map(|i| m[&format!("v{i}")].clone()).collect();
            return Ok(Some(CttMatch { spec, order }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentType {
    /// At most three vertices and none of the shapes below.
    Small,
    Clique(usize),
    Star { n: usize, center: String },
    Ctt(CttMatch),
    Prime,
    /// Four or more vertices and at least one split.
    Decomposable,
}

fn star_center(c: &SimpleDigraph) -> Option<usize> {
    let n = c.n();
    let center = (0..n).find(|&v| c.out_neighbors(v).len() == n - 1)?;
    let leaves_ok = (0..n).filter(|&v| v != center).all(|v| c.out_neighbors(v).len() == 1);
    leaves_ok.then_some(center)
}

pub fn classify_component(c: &SimpleDigraph, cap: usize) -> Result<ComponentType> {
    let n = c.n();
    if n <= 2 {
        return Ok(ComponentType::Small);
    }
    if c.is_undirected() {
        if c.edge_count() == n * (n - 1) {
            return Ok(ComponentType::Clique(n));
        }
        if let Some(v) = star_center(c) {
            return Ok(ComponentType::Star { n, center: c.name(v).to_string() });
        }
    } else if let Some(m) = recognize_ctt(c)? {
        return Ok(ComponentType::Ctt(m));
    }
    if n == 3 || !c.is_connected() {
        return Ok(ComponentType::Small);
    }
    if splits(c, cap)?.members.is_empty() {
        Ok(ComponentType::Prime)
    } else {
        Ok(ComponentType::Decomposable)
    }
}

/// Solid arcs plus undirected ε-edges linking marker vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SDGraph {
    pub graph: SimpleDigraph,
    /// Unordered pairs, stored with the smaller name first.
    pub eps: BTreeSet<(String, String)>,
    /// Original vertex to its vertex here.
    pub origin: BTreeMap<String, String>,
}

fn eps_pair(u: &str, v: &str) -> (String, String) {
    if u <= v {
        (u.to_string(), v.to_string())
    } else {
        (v.to_string(), u.to_string())
    }
}

impl SDGraph {
    /// Origin is the identity on the vertices touching no ε-edge.
    pub fn new<S: AsRef<str>>(graph: SimpleDigraph, eps: impl IntoIterator<Item = (S, S)>) -> Result<Self> {
        let mut e = BTreeSet::new();
        for (u, v) in eps {
            let (u, v) = (u.as_ref(), v.as_ref());
            if graph.index_of(u).is_none() || graph.index_of(v).is_none() || u == v {
                return Err(Error::input(format!("bad ε-edge {u} - {v}")));
            }
            e.insert(eps_pair(u, v));
        }
        let mut s = SDGraph { graph, eps: e, origin: BTreeMap::new() };
        s.origin = s.plain_vertices().into_iter().map(|v| (v.clone(), v)).collect();
        Ok(s)
    }

    pub fn trivial(g: &SimpleDigraph) -> Self {
        SDGraph::new(g.clone(), Vec::<(String, String)>::new()).unwrap()
    }

    pub fn partner(&self, v: &str) -> Option<&str> {
        self.eps.iter().find_map(|(a, b)| {
            if a == v {
                Some(b.as_str())
            } else if b == v {
                Some(a.as_str())
            } else {
                None
            }
        })
    }

    /// Vertices touching no ε-edge, in vertex order.
    pub fn plain_vertices(&self) -> Vec<String> {
        let touched: BTreeSet<&str> = self.eps.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()]).collect();
        self.graph.names().iter().filter(|v| !touched.contains(v.as_str())).cloned().collect()
    }

    /// Connected components of the solid edges, as vertex index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.graph.components()
    }

    pub fn component_graph(&self, comp: &[usize]) -> SimpleDigraph {
        self.graph.induced_by_indices(comp)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.graph;
        let mut seen = BTreeSet::new();
        for (a, b) in &self.eps {
            if g.index_of(a).is_none() || g.index_of(b).is_none() {
                return Err(Error::validation(format!("ε-edge {a} - {b} has a missing end")));
            }
            if !seen.insert(a) || !seen.insert(b) {
                return Err(Error::validation(format!("ε-edge {a} - {b} is adjacent to another ε-edge")));
            }
        }
        let single = g.n() == 1 && self.eps.is_empty();
        if !single {
            for v in 0..g.n() {
                if g.out_neighbors(v).is_empty() && g.in_neighbors(v).is_empty() {
                    return Err(Error::validation(format!("vertex {} has no solid edge", g.name(v))));
                }
            }
        }
        let comps = self.components();
        let mut comp_of = vec![0; g.n()];
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                comp_of[v] = c;
            }
        }
        if self.eps.len() + 1 != comps.len() {
            return Err(Error::validation("contracting solid edges does not give a tree"));
        }
        let mut parent: Vec<usize> = (0..comps.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (a, b) in &self.eps {
            let (ca, cb) = (comp_of[g.index_of(a).unwrap()], comp_of[g.index_of(b).unwrap()]);
            let (ra, rb) = (find(&mut parent, ca), find(&mut parent, cb));
            if ra == rb {
                return Err(Error::validation("contracting solid edges does not give a tree"));
            }
            parent[ra] = rb;
        }
        let targets: BTreeSet<String> = self.origin.values().cloned().collect();
        let plain: BTreeSet<String> = self.plain_vertices().into_iter().collect();
        if targets != plain || self.origin.len() != plain.len() {
            return Err(Error::validation("origin does not map onto the vertices touching no ε-edge"));
        }
        Ok(())
    }
}

/// Decomposition graph built from the tree of good splits.
pub fn split_decompose(g: &SimpleDigraph, cap: usize) -> Result<SDGraph> {
    check_cap("vertex set", g.n(), cap)?;
    require_connected(g)?;
    if !g.is_undirected() && !g.is_strongly_connected() {
        return Err(Error::precondition(
            "directed graph is not strongly connected; its splits need not be weakly partitive",
        ));
    }
    if g.n() <= 2 {
        return Ok(SDGraph::trivial(g));
    }
    let good = good_splits(g, cap)?;
    if good.members.is_empty() {
        return Ok(SDGraph::trivial(g));
    }
    let tp = tree_partition(&good)?;
    let mut h = SimpleDigraph::with_vertices(g.names());
    let taken = |s: &str| g.index_of(s).is_some();
    let marker: Vec<[String; 2]> = tp
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            [fresh(&format!("(e{},{})", i + 1, tp.nodes[x]), taken), fresh(&format!("(e{},{})", i + 1, tp.nodes[y]), taken)]
        })
        .collect();
    let mut eps = Vec::new();
    for m in &marker {
        h.add_vertex(&m[0]);
        h.add_vertex(&m[1]);
        eps.push((m[0].clone(), m[1].clone()));
    }
    let arcs_between = |p: Mask, q: Mask| bits(p).any(|u| g.out_neighbors(u).iter().any(|&v| q >> v & 1 == 1));
    for x in 0..tp.nodes.len() {
        let bx = tp.boxes[x];
        // (marker name, side beyond it)
        let sides: Vec<(String, Mask)> = tp
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, &(a, b))| {
                if a == x {
                    Some((marker[i][0].clone(), tp.side(a, b)))
                } else if b == x {
                    Some((marker[i][1].clone(), tp.side(b, a)))
                } else {
                    None
                }
            })
            .collect();
        for u in bits(bx) {
            for v in bits(bx) {
                if g.has_arc(u, v) {
                    h.add_edge(g.name(u), g.name(v))?;
                }
            }
            for (m, p) in &sides {
                if arcs_between(1 << u, *p) {
                    h.add_edge(g.name(u), m)?;
                }
                if arcs_between(*p, 1 << u) {
                    h.add_edge(m, g.name(u))?;
                }
            }
        }
        for (mi, pi) in &sides {
            for (mj, pj) in &sides {
                if mi != mj && arcs_between(*pi, *pj) {
                    h.add_edge(mi, mj)?;
                }
            }
        }
    }
    let sd = SDGraph::new(h, eps)?;
    sd.validate()?;
    Ok(sd)
}

/// One decomposition graph per connected component of an undirected graph.
pub fn split_decompose_undirected(g: &SimpleDigraph, cap: usize) -> Result<Vec<SDGraph>> {
    if !g.is_undirected() {
        return Err(Error::precondition("component-wise decomposition applies to undirected graphs only"));
    }
    g.components().iter().map(|c| split_decompose(&g.induced_by_indices(c), cap)).collect()
}

/// Iterated splitting of components along their own good splits, in an
/// order drawn from `seed`.
pub fn split_iterative(g: &SimpleDigraph, cap: usize, seed: u64) -> Result<SDGraph> {
    check_cap("vertex set", g.n(), cap)?;
    require_connected(g)?;
    let mut rng = crate::gen::rng(seed);
    let mut sd = SDGraph::trivial(g);
    let mut step = 0;
    loop {
        let mut options = Vec::new();
        for comp in sd.components() {
            let c = sd.component_graph(&comp);
            if c.n() >= 4 {
                let good = good_splits(&c, cap)?;
                if !good.members.is_empty() {
                    options.push((c, good));
                }
            }
        }
        if options.is_empty() {
            break;
        }
        let (c, good) = &options[rng.gen_range(0..options.len())];
        let ms: Vec<Mask> = good.members.iter().copied().collect();
        let a = ms[rng.gen_range(0..ms.len())];
        step += 1;
        let taken = |s: &str| sd.graph.index_of(s).is_some();
        let (hm, km) = (fresh(&format!("(s{step},1)"), taken), fresh(&format!("(s{step},2)"), taken));
        let hg = marked_side(c, a, &hm);
        let kg = marked_side(c, full_mask(c.n()) & !a, &km);
        let mut next = SimpleDigraph::with_vertices(sd.graph.names());
        next.add_vertex(&hm);
        next.add_vertex(&km);
        for (u, v) in sd.graph.edges() {
            let (u, v) = (sd.graph.name(u), sd.graph.name(v));
            if c.index_of(u).is_none() {
                next.add_edge(u, v)?;
            }
        }
        for part in [&hg, &kg] {
            for (u, v) in part.edges() {
                next.add_edge(part.name(u), part.name(v))?;
            }
        }
        let mut eps: Vec<(String, String)> = sd.eps.iter().cloned().collect();
        eps.push((hm, km));
        let origin = sd.origin.clone();
        sd = SDGraph::new(next, eps)?;
        sd.origin = origin;
    }
    Ok(sd)
}

/// Eliminates the ε-edge u - v.
pub fn elim(h: &SDGraph, u: &str, v: &str) -> Result<SDGraph> {
    if !h.eps.contains(&eps_pair(u, v)) {
        return Err(Error::input(format!("{u} - {v} is not an ε-edge")));
    }
    let g = &h.graph;
    let (ui, vi) = (g.index_of(u).unwrap(), g.index_of(v).unwrap());
    let keep: Vec<usize> = (0..g.n()).filter(|&i| i != ui && i != vi).collect();
    let mut out = g.induced_by_indices(&keep);
    for (a, b) in [(ui, vi), (vi, ui)] {
        for &x in g.in_neighbors(a) {
            for &y in g.out_neighbors(b) {
                if x != y && x != ui && x != vi && y != ui && y != vi {
                    out.add_edge(g.name(x), g.name(y))?;
                }
            }
        }
    }
    let mut eps = h.eps.clone();
    eps.remove(&eps_pair(u, v));
    Ok(SDGraph { graph: out, eps, origin: h.origin.clone() })
}

/// Graph denoted by an SD graph: arcs follow solid edges alternating with
/// ε-edges between vertices touching no ε-edge.
pub fn eval(h: &SDGraph) -> SimpleDigraph {
    let g = &h.graph;
    let partner: Vec<Option<usize>> =
        (0..g.n()).map(|i| h.partner(g.name(i)).map(|p| g.index_of(p).unwrap())).collect();
    let plain: Vec<usize> = (0..g.n()).filter(|&i| partner[i].is_none()).collect();
    let mut out = SimpleDigraph::with_vertices(plain.iter().map(|&i| g.name(i)));
    for &x in &plain {
        let mut seen = vec![false; g.n()];
        let mut stack = Vec::new();
        let mut reach = |w: usize, stack: &mut Vec<usize>, out: &mut SimpleDigraph| match partner[w] {
            None => {
                if w != x {
                    out.add_edge(g.name(x), g.name(w)).unwrap();
                }
            }
            Some(_) => {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        };
        for &w in g.out_neighbors(x) {
            reach(w, &mut stack, &mut out);
        }
        while let Some(w) = stack.pop() {
            let p = partner[w].unwrap();
            for &y in g.out_neighbors(p) {
                reach(y, &mut stack, &mut out);
            }
        }
    }
    out
}

/// Isomorphism of SD graphs that is the identity on the vertices touching
/// no ε-edge.
pub fn same_sd_graph(a: &SDGraph, b: &SDGraph) -> Result<bool> {
    if a.graph.n() != b.graph.n() || a.eps.len() != b.eps.len() {
        return Ok(false);
    }
    let mut pal = Palette::new();
    let mut lower = |s: &SDGraph| {
        let plain: BTreeSet<String> = s.plain_vertices().into_iter().collect();
        let g = &s.graph;
        let mut c = ColoredGraph::new(g.n());
        for i in 0..g.n() {
            let key = if plain.contains(g.name(i)) { format!("v:{}", g.name(i)) } else { "marker".into() };
            c.vcolor[i] = pal.color(&key);
        }
        for (u, v) in g.edges() {
            c.add_arc(u, v, 1);
        }
        for (x, y) in &s.eps {
            c.add_edge(g.index_of(x).unwrap(), g.index_of(y).unwrap(), 2);
        }
        c
    };
    let (ca, cb) = (lower(a), lower(b));
    Ok(find_isomorphism(&ca, &cb, DEFAULT_ISO_CAP.max(ca.n()))?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: u8,
    pub message: String,
}

/// Components with their types, in the order of `SDGraph::components`.
pub fn sd_components(h: &SDGraph, cap: usize) -> Result<Vec<(SimpleDigraph, ComponentType)>> {
    h.components()
        .iter()
        .map(|c| {
            let g = h.component_graph(c);
            let t = classify_component(&g, cap)?;
            Ok((g, t))
        })
        .collect()
}

/// Violations of the four canonicity conditions.
pub fn check_canonical(h: &SDGraph, cap: usize) -> Result<Vec<Violation>> {
    let comps = sd_components(h, cap)?;
    let mut out = Vec::new();
    let trivial = comps.len() == 1 && h.graph.n() <= 2;
    let mut comp_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, (g, t)) in comps.iter().enumerate() {
        for v in g.names() {
            comp_of.insert(v, i);
        }
        let ok = match t {
            ComponentType::Prime | ComponentType::Clique(_) | ComponentType::Ctt(_) => true,
            ComponentType::Star { n, .. } => *n >= 3,
            ComponentType::Small | ComponentType::Decomposable => trivial,
        };
        if !ok {
            out.push(Violation { condition: 1, message: format!("component {:?} has type {:?}", g.names(), t) });
        }
    }
    for (u, v) in &h.eps {
        let (cu, cv) = (&comps[comp_of[u.as_str()]].1, &comps[comp_of[v.as_str()]].1);
        match (cu, cv) {
            (ComponentType::Clique(_), ComponentType::Clique(_)) => {
                out.push(Violation { condition: 2, message: format!("cliques linked by {u} - {v}") });
            }
            (ComponentType::Star { center: a, .. }, ComponentType::Star { center: b, .. }) => {
                if (a == u) != (b == v) {
                    out.push(Violation { condition: 3, message: format!("center linked to a non-center by {u} - {v}") });
                }
            }
            (ComponentType::Ctt(a), ComponentType::Ctt(b)) => {
                if a.spec.k() >= 2 && b.spec.k() >= 2 && a.hinge_vertices().contains(u) && b.hinge_vertices().contains(v) {
                    out.push(Violation { condition: 4, message: format!("hinges linked by {u} - {v}") });
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> SimpleDigraph {
        SimpleDigraph::undirected_from((0..n).map(|i| (format!("{i}"), format!("{}", (i + 1) % n)))).unwrap()
    }

    fn clique(n: usize) -> SimpleDigraph {
        let mut g = SimpleDigraph::with_vertices((0..n).map(|i| format!("{i}")));
        for i in 0..n {
            for j in 0..n {
                g.add_arc(i, j);
            }
        }
        g
    }

    #[test]
    fn clique_splits_are_every_bipartition() {
        for n in 4..=7 {
            let s = splits(&clique(n), 15).unwrap();
            assert_eq!(s.members.len(), (1 << (n - 1)) - n - 1);
        }
    }

    #[test]
    fn cycles_are_prime() {
        for n in 5..=9 {
            assert!(splits(&cycle(n), 15).unwrap().members.is_empty());
            assert_eq!(classify_component(&cycle(n), 15).unwrap(), ComponentType::Prime);
        }
    }

    #[test]
    fn ctt_examples() {
        let g = ctt_graph(&CttSpec::new(4, vec![0, 2, 4]).unwrap());
        let want = SimpleDigraph::from_arcs([("v0", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "v0"), ("v0", "v2"), ("v2", "v0")]).unwrap();
        assert_eq!(g, want);
        let g = ctt_graph(&CttSpec::new(3, vec![0, 3]).unwrap());
        let want = SimpleDigraph::from_arcs([("v0", "v1"), ("v1", "v2"), ("v2", "v0"), ("v1", "v0"), ("v0", "v2")]).unwrap();
        assert_eq!(g, want);
        let c5 = ctt_graph(&CttSpec::new(5, vec![0, 1, 2, 3, 4, 5]).unwrap());
        assert_eq!(c5.edge_count(), 5);
        let m = recognize_ctt(&c5).unwrap().unwrap();
        assert_eq!(m.spec.k(), 5);
    }

    #[test]
    fn join_examples() {
        let c3a = SimpleDigraph::from_arcs([("a", "b"), ("b", "h"), ("h", "a")]).unwrap();
        let c3b = SimpleDigraph::from_arcs([("k", "c"), ("c", "d"), ("d", "k")]).unwrap();
        let j = join(&c3a, "h", &c3b, "k").unwrap();
        let c4 = SimpleDigraph::from_arcs([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        assert_eq!(j, c4);
    }

    #[test]
    fn example_two_eval() {
        let g = SimpleDigraph::from_arcs([
            ("a", "b"),
            ("b", "u"),
            ("v", "c"),
            ("u'", "c"),
            ("d", "v'"),
            ("u\"", "d"),
            ("v\"", "e"),
        ])
        .unwrap();
        let h = SDGraph::new(g, [("u", "v"), ("u'", "v'"), ("u\"", "v\"")]).unwrap();
        let r = eval(&h);
        let mut want = SimpleDigraph::from_arcs([("a", "b"), ("b", "c"), ("d", "c")]).unwrap();
        want.add_vertex("e");
        assert_eq!(r, want);
    }

    #[test]
    fn counterexample_not_weakly_partitive() {
        let g = SimpleDigraph::from_arcs([("2", "1"), ("2", "3"), ("3", "4"), ("5", "4"), ("5", "6"), ("6", "1")]).unwrap();
        assert!(is_split_named(&g, &["1", "2", "3"]).unwrap());
        assert!(is_split_named(&g, &["2", "3", "4"]).unwrap());
        assert!(!is_split_named(&g, &["2", "3"]).unwrap());
        let r = crate::bipartition::check_bip_family(&splits(&g, 15).unwrap().plus_closure());
        assert!(!r.weakly_partitive);
        assert!(split_decompose(&g, 15).is_err());
    }

    #[test]
    fn k4_decomposes_into_clique() {
        let sd = split_decompose(&clique(4), 15).unwrap();
        assert!(sd.eps.is_empty());
        assert!(check_canonical(&sd, 15).unwrap().is_empty());
        let p4 = SimpleDigraph::undirected_from([("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        let sd = split_decompose(&p4, 15).unwrap();
        assert_eq!(sd.eps.len(), 1);
        assert_eq!(eval(&sd), p4);
        assert!(check_canonical(&sd, 15).unwrap().is_empty());
    }
}
