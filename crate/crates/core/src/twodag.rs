//! 2-graphs, 2-dags and their factor decomposition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::{MultiGraph, TwoGraph};
use crate::partitive::{bits, classify_node, strong_members, tree_from_laminar, DecompTree, Mask, NodeKind, SetFamily};

pub const DEFAULT_FACTOR_CAP: usize = 14;

/// Acyclic, `s1` the only vertex without in-edges, `s2` the only one without
/// out-edges, and every vertex on a path from `s1` to `s2`. Edges are read
/// from tail to head whatever their direction flag.
pub fn is_2dag(g: &TwoGraph) -> bool {
    let gr = &g.graph;
    let n = gr.n();
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for e in gr.edges() {
        outdeg[e.tail] += 1;
        indeg[e.head] += 1;
    }
    for v in 0..n {
        if (indeg[v] == 0) != (v == g.s1) || (outdeg[v] == 0) != (v == g.s2) {
            return false;
        }
    }
    topo_order(gr).is_some()
}

fn topo_order(g: &MultiGraph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut indeg = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for e in g.edges() {
        indeg[e.head] += 1;
        out[e.tail].push(e.head);
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = stack.pop() {
        order.push(u);
        for &v in &out[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                stack.push(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn edges_of_mask(mask: Mask) -> BTreeSet<usize> {
    bits(mask).collect()
}

/// Factor test on edge positions.
fn factor_of_positions(g: &TwoGraph, keep: &BTreeSet<usize>) -> Option<TwoGraph> {
    if keep.is_empty() {
        return None;
    }
    let gr = &g.graph;
    let mut indeg = vec![0usize; gr.n()];
    let mut outdeg = vec![0usize; gr.n()];
    let mut inside = vec![false; gr.n()];
    for &k in keep {
        let e = gr.edge(k);
        outdeg[e.tail] += 1;
        indeg[e.head] += 1;
        inside[e.tail] = true;
        inside[e.head] = true;
    }
    let srcs: Vec<usize> = (0..gr.n()).filter(|&v| inside[v] && indeg[v] == 0).collect();
    let sinks: Vec<usize> = (0..gr.n()).filter(|&v| inside[v] && outdeg[v] == 0).collect();
    if srcs.len() != 1 || sinks.len() != 1 {
        return None;
    }
    let (s, t) = (srcs[0], sinks[0]);
    for v in 0..gr.n() {
        if !inside[v] || v == s || v == t {
            continue;
        }
        if v == g.s1 || v == g.s2 {
            return None;
        }
        if gr.incident(v).iter().any(|k| !keep.contains(k)) {
            return None;
        }
    }
    let h = gr.edge_induced_by_positions(keep);
    let h = TwoGraph::new(h, gr.name(s), gr.name(t)).ok()?;
    is_2dag(&h).then_some(h)
}

/// The factor of a 2-dag made of the given edges, if there is one.
pub fn is_factor_edges<S: AsRef<str>>(g: &TwoGraph, f: impl IntoIterator<Item = S>) -> Result<Option<TwoGraph>> {
    let mut keep = BTreeSet::new();
    for id in f {
        let id = id.as_ref();
        keep.insert(g.graph.edge_pos(id).ok_or_else(|| Error::input(format!("unknown edge {id}")))?);
    }
    Ok(factor_of_positions(g, &keep))
}

/// All factors, as a family over the edge ids (in graph order).
pub fn factors(g: &TwoGraph, cap: usize) -> Result<SetFamily> {
    let m = g.graph.m();
    check_cap("factor enumeration", m, cap.min(crate::partitive::MAX_GROUND))?;
    let ground: Vec<String> = g.graph.edges().iter().map(|e| e.id.clone()).collect();
    let members = (1..=crate::partitive::full_mask(m)).filter(|&mask| factor_of_positions(g, &edges_of_mask(mask)).is_some());
    SetFamily::from_masks(ground, members)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorKind {
    Edge,
    Parallel,
    /// Sons in series order, from the first source to the second.
    Series,
    /// Skeleton whose i-th edge (`k{i+1}`) stands for the i-th argument.
    Prime(TwoGraph),
}

/// Tree of strong factors of a 2-dag. `args[u]` lists the sons of `u` in
/// the argument order of the corresponding term operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorTree {
    pub tree: DecompTree,
    pub kinds: Vec<FactorKind>,
    pub factors: Vec<TwoGraph>,
    pub args: Vec<Vec<usize>>,
}

impl FactorTree {
    /// Node reached from the root by following argument positions.
    pub fn node_at(&self, path: &[usize]) -> Option<usize> {
        let mut u = self.tree.root;
        for &i in path {
            u = *self.args[u].get(i)?;
        }
        Some(u)
    }

    /// Argument path of every node, indexed by node.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.tree.len()];
        for u in self.tree.preorder() {
            for (i, &c) in self.args[u].iter().enumerate() {
                let mut p = out[u].clone();
                p.push(i);
                out[c] = p;
            }
        }
        out
    }
}

fn min_edge_id(g: &TwoGraph) -> String {
    g.graph.edges().iter().map(|e| e.id.clone()).min().unwrap_or_default()
}

/// Renames skeleton vertices `x0` (first source), `x1` (second source), then
/// the others in order of first appearance along the edge list.
fn canonical_skeleton(ends: &[(String, String)], s1: &str, s2: &str) -> TwoGraph {
    let mut names: BTreeMap<String, String> = BTreeMap::new();
    names.insert(s1.to_string(), "x0".into());
    names.insert(s2.to_string(), "x1".into());
    for (a, b) in ends {
        for v in [a, b] {
            let next = format!("x{}", names.len());
            names.entry(v.clone()).or_insert(next);
        }
    }
    let mut k = MultiGraph::new();
    k.add_vertex("x0");
    k.add_vertex("x1");
    for (i, (a, b)) in ends.iter().enumerate() {
        k.add_edge(&format!("k{}", i + 1), &names[a], &names[b], true).unwrap();
    }
    TwoGraph::new(k, "x0", "x1").unwrap()
}

pub fn factor_tree(g: &TwoGraph, cap: usize) -> Result<FactorTree> {
    if !is_2dag(g) {
        return Err(Error::precondition("factor decomposition needs a 2-dag"));
    }
    let fam = factors(g, cap)?;
    let mut tree = tree_from_laminar(&strong_members(&fam))?;
    let mems = tree.all_members();
    let mut factors_at = Vec::with_capacity(tree.len());
    for &m in &mems {
        let f = factor_of_positions(g, &edges_of_mask(m))
            .ok_or_else(|| Error::validation("a strong member is not a factor"))?;
        factors_at.push(f);
    }
    let mut kinds = Vec::with_capacity(tree.len());
    let mut args = Vec::with_capacity(tree.len());
    for u in 0..tree.len() {
        let kind = classify_node(&fam, &tree, u)?;
        let sons = tree.nodes[u].children.clone();
        let fu = &factors_at[u];
        let by_min_id = |v: &mut Vec<usize>| v.sort_by_key(|&c| min_edge_id(&factors_at[c]));
        let is_parallel = |sons: &[usize]| {
            sons.iter().all(|&c| factors_at[c].s1_name() == fu.s1_name() && factors_at[c].s2_name() == fu.s2_name())
        };
        let (fk, a, stored) = match kind {
            NodeKind::Leaf => (FactorKind::Edge, vec![], NodeKind::Leaf),
            NodeKind::Complete if is_parallel(&sons) => {
                let mut a = sons.clone();
                by_min_id(&mut a);
                (FactorKind::Parallel, a, NodeKind::Complete)
            }
            NodeKind::Complete | NodeKind::Linear(_) => {
                let mut chain = Vec::new();
                let mut at = fu.s1_name().to_string();
                while chain.len() < sons.len() {
                    let next = sons
                        .iter()
                        .copied()
                        .find(|&c| factors_at[c].s1_name() == at && !chain.contains(&c))
                        .ok_or_else(|| Error::validation(format!("sons of {} do not form a series chain", tree.nodes[u].id)))?;
                    at = factors_at[next].s2_name().to_string();
                    chain.push(next);
                }
                if at != fu.s2_name() {
                    return Err(Error::validation(format!("series chain at {} ends off the sink", tree.nodes[u].id)));
                }
                (FactorKind::Series, chain.clone(), NodeKind::Linear(chain))
            }
            NodeKind::Prime => {
                let mut a = sons.clone();
                by_min_id(&mut a);
                let ends: Vec<(String, String)> =
                    a.iter().map(|&c| (factors_at[c].s1_name().to_string(), factors_at[c].s2_name().to_string())).collect();
                (FactorKind::Prime(canonical_skeleton(&ends, fu.s1_name(), fu.s2_name())), a, NodeKind::Prime)
            }
        };
        tree.nodes[u].kind = Some(stored);
        kinds.push(fk);
        args.push(a);
    }
    Ok(FactorTree { tree, kinds, factors: factors_at, args })
}

/// Edge substitution K[G1/e1,...,Gk/ek] along the edge order of K. Vertex
/// names and edge ids of the substituted graphs that clash get `#k` suffixes.
pub fn theta_substitute(k: &TwoGraph, subs: &[TwoGraph]) -> Result<TwoGraph> {
    if subs.len() != k.graph.m() {
        return Err(Error::input(format!("{} graphs for {} skeleton edges", subs.len(), k.graph.m())));
    }
    let mut h = MultiGraph::new();
    for v in k.graph.names() {
        h.add_vertex(v);
    }
    let mut used_edges: BTreeSet<String> = BTreeSet::new();
    let fresh = |base: &str, taken: &dyn Fn(&str) -> bool| -> String {
        if !taken(base) {
            return base.to_string();
        }
        (1..).map(|i| format!("{base}#{i}")).find(|c| !taken(c)).unwrap()
    };
    for (e, sub) in k.graph.edges().iter().zip(subs) {
        let mut vmap: BTreeMap<usize, String> = BTreeMap::new();
        vmap.insert(sub.s1, k.graph.name(e.tail).to_string());
        vmap.insert(sub.s2, k.graph.name(e.head).to_string());
        for v in 0..sub.graph.n() {
            if !vmap.contains_key(&v) {
                let name = fresh(sub.graph.name(v), &|c| h.index_of(c).is_some());
                h.add_vertex(&name);
                vmap.insert(v, name);
            }
        }
        for se in sub.graph.edges() {
            let id = fresh(&se.id, &|c| used_edges.contains(c));
            used_edges.insert(id.clone());
            h.add_edge(&id, &vmap[&se.tail], &vmap[&se.head], se.directed)?;
        }
    }
    TwoGraph::new(h, k.s1_name(), k.s2_name())
}

/// Series/parallel/prime term denoting a 2-connected 2-graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CanonicalTerm {
    /// An edge; `reversed` means it runs from the second source to the first.
    Edge { id: String, reversed: bool },
    Par(Vec<CanonicalTerm>),
    Ser(Vec<CanonicalTerm>),
    /// Substitution into the skeleton edges, taken in skeleton edge order.
    Theta { skeleton: TwoGraph, args: Vec<CanonicalTerm> },
}

impl CanonicalTerm {
    pub fn edge(id: &str) -> Self {
        CanonicalTerm::Edge { id: id.to_string(), reversed: false }
    }

    pub fn args(&self) -> &[CanonicalTerm] {
        match self {
            CanonicalTerm::Edge { .. } => &[],
            CanonicalTerm::Par(a) | CanonicalTerm::Ser(a) => a,
            CanonicalTerm::Theta { args, .. } => args,
        }
    }

    pub fn args_mut(&mut self) -> &mut [CanonicalTerm] {
        match self {
            CanonicalTerm::Edge { .. } => &mut [],
            CanonicalTerm::Par(a) | CanonicalTerm::Ser(a) => a,
            CanonicalTerm::Theta { args, .. } => args,
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&CanonicalTerm> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.at(rest),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut CanonicalTerm> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args_mut().get_mut(i)?.at_mut(rest),
        }
    }

    /// Edge ids in left-to-right order.
    pub fn edge_ids(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let CanonicalTerm::Edge { id, .. } = t {
                out.push(id.clone());
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&CanonicalTerm)) {
        f(self);
        for a in self.args() {
            a.walk(f);
        }
    }

    pub fn count_leaves(&self) -> usize {
        self.edge_ids().len()
    }

    /// Paths of all nodes, in preorder.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        fn go(t: &CanonicalTerm, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(p.clone());
            for (i, a) in t.args().iter().enumerate() {
                p.push(i);
                go(a, p, out);
                p.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = TermParser { s: text.as_bytes(), i: 0, text };
        let t = p.term()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(t)
    }
}

impl fmt::Display for CanonicalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, args: &[CanonicalTerm]| -> fmt::Result {
            write!(f, "(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")
        };
        match self {
            CanonicalTerm::Edge { id, reversed } => write!(f, "{}e:{id}", if *reversed { "~" } else { "" }),
            CanonicalTerm::Par(a) => {
                write!(f, "par")?;
                list(f, a)
            }
            CanonicalTerm::Ser(a) => {
                write!(f, "ser")?;
                list(f, a)
            }
            CanonicalTerm::Theta { skeleton, args } => {
                write!(f, "theta{{{},{}|", skeleton.s1_name(), skeleton.s2_name())?;
                for (i, e) in skeleton.graph.edges().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}>{}", skeleton.graph.name(e.tail), skeleton.graph.name(e.head))?;
                }
                write!(f, "}}")?;
                list(f, args)
            }
        }
    }
}

struct TermParser<'a> {
    s: &'a [u8],
    i: usize,
    text: &'a str,
}

impl TermParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::input(format!("term syntax error at {}: {msg}", self.i))
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() {
            let c = self.s[self.i];
            if c.is_ascii_whitespace() || b"(),{}|>~:".contains(&c) {
                break;
            }
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected an identifier"));
        }
        Ok(self.text[start..self.i].to_string())
    }

    fn args(&mut self) -> Result<Vec<CanonicalTerm>> {
        self.expect(b'(')?;
        let mut out = vec![self.term()?];
        while self.eat(b',') {
            out.push(self.term()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn term(&mut self) -> Result<CanonicalTerm> {
        let reversed = self.eat(b'~');
        let head = self.ident()?;
        if reversed && head != "e" {
            return Err(self.err("'~' applies to edge constants only"));
        }
        match head.as_str() {
            "e" => {
                self.expect(b':')?;
                Ok(CanonicalTerm::Edge { id: self.ident()?, reversed })
            }
            "par" => Ok(CanonicalTerm::Par(self.args()?)),
            "ser" => Ok(CanonicalTerm::Ser(self.args()?)),
            "theta" => {
                self.expect(b'{')?;
                let s1 = self.ident()?;
                self.expect(b',')?;
                let s2 = self.ident()?;
                self.expect(b'|')?;
                let mut k = MultiGraph::new();
                k.add_vertex(&s1);
                k.add_vertex(&s2);
                let mut i = 1;
                loop {
                    let a = self.ident()?;
                    self.expect(b'>')?;
                    let b = self.ident()?;
                    k.add_edge(&format!("k{i}"), &a, &b, true)?;
                    i += 1;
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b'}')?;
                let skeleton = TwoGraph::new(k, &s1, &s2)?;
                Ok(CanonicalTerm::Theta { skeleton, args: self.args()? })
            }
            other => Err(self.err(&format!("unknown operation {other}"))),
        }
    }
}

struct Builder {
    g: MultiGraph,
    next: usize,
}

impl Builder {
    fn fresh(&mut self) -> String {
        let name = format!("u{}", self.next);
        self.next += 1;
        self.g.add_vertex(&name);
        name
    }

    fn eval(&mut self, t: &CanonicalTerm, s: &str, d: &str) -> Result<()> {
        match t {
            CanonicalTerm::Edge { id, reversed } => {
                let (a, b) = if *reversed { (d, s) } else { (s, d) };
                if self.g.edge_pos(id).is_some() {
                    return Err(Error::validation(format!("edge {id} occurs twice in the term")));
                }
                self.g.add_edge(id, a, b, true)?;
            }
            CanonicalTerm::Par(args) => {
                if args.len() < 2 {
                    return Err(Error::validation("par needs at least two arguments"));
                }
                for a in args {
                    self.eval(a, s, d)?;
                }
            }
            CanonicalTerm::Ser(args) => {
                if args.len() < 2 {
                    return Err(Error::validation("ser needs at least two arguments"));
                }
                let mut at = s.to_string();
                for (i, a) in args.iter().enumerate() {
                    let to = if i + 1 == args.len() { d.to_string() } else { self.fresh() };
                    self.eval(a, &at, &to)?;
                    at = to;
                }
            }
            CanonicalTerm::Theta { skeleton, args } => {
                if args.len() != skeleton.graph.m() {
                    return Err(Error::validation("theta arity differs from its skeleton edge count"));
                }
                let mut map: Vec<String> = Vec::with_capacity(skeleton.graph.n());
                for v in 0..skeleton.graph.n() {
                    map.push(if v == skeleton.s1 {
                        s.to_string()
                    } else if v == skeleton.s2 {
                        d.to_string()
                    } else {
                        self.fresh()
                    });
                }
                for (e, a) in skeleton.graph.edges().iter().zip(args) {
                    self.eval(a, &map[e.tail].clone(), &map[e.head].clone())?;
                }
            }
        }
        Ok(())
    }
}

/// Value of a term, on fresh vertex names `u0` (first source), `u1`, ...
pub fn eval_term(t: &CanonicalTerm) -> Result<TwoGraph> {
    let mut b = Builder { g: MultiGraph::new(), next: 0 };
    let s = b.fresh();
    let d = b.fresh();
    b.eval(t, &s, &d)?;
    TwoGraph::new(b.g, &s, &d)
}

fn term_of_tree(ft: &FactorTree, reversed: &BTreeSet<String>, u: usize) -> CanonicalTerm {
    let sub = |c: usize| term_of_tree(ft, reversed, c);
    match &ft.kinds[u] {
        FactorKind::Edge => {
            let id = ft.tree.nodes[u].id.clone();
            let r = reversed.contains(&id);
            CanonicalTerm::Edge { id, reversed: r }
        }
        FactorKind::Parallel => CanonicalTerm::Par(ft.args[u].iter().map(|&c| sub(c)).collect()),
        FactorKind::Series => CanonicalTerm::Ser(ft.args[u].iter().map(|&c| sub(c)).collect()),
        FactorKind::Prime(k) => CanonicalTerm::Theta { skeleton: k.clone(), args: ft.args[u].iter().map(|&c| sub(c)).collect() },
    }
}

/// The 2-dag used to build the canonical term: `g` itself if it is a 2-dag,
/// else a reorientation, with the set of reversed edges.
pub fn oriented_2dag(g: &TwoGraph) -> Result<(TwoGraph, BTreeSet<String>)> {
    if is_2dag(g) {
        return Ok((g.clone(), BTreeSet::new()));
    }
    let mut tmp = "s".to_string();
    while g.graph.edge_pos(&tmp).is_some() {
        tmp.push('\'');
    }
    let mut with = g.graph.clone();
    with.add_edge(&tmp, g.s1_name(), g.s2_name(), true)?;
    if !with.is_2connected() {
        return Err(Error::precondition("the 2-graph plus an edge between its sources is not 2-connected"));
    }
    let (d, mut rev) = bipolar_orient(&with, &tmp)?;
    rev.remove(&tmp);
    let h = TwoGraph::new(d.graph.without_edge(&tmp), g.s1_name(), g.s2_name())?;
    debug_assert!(is_2dag(&h));
    Ok((h, rev))
}

pub fn canonical_term(g: &TwoGraph, cap: usize) -> Result<CanonicalTerm> {
    let (h, rev) = oriented_2dag(g)?;
    let ft = factor_tree(&h, cap)?;
    Ok(term_of_tree(&ft, &rev, ft.tree.root))
}

/// Term of a 2-dag read directly off its factor tree.
pub fn term_of_factor_tree(ft: &FactorTree) -> CanonicalTerm {
    term_of_tree(ft, &BTreeSet::new(), ft.tree.root)
}

/// Orients a 2-connected multigraph into a 2-dag whose sources are the tail
/// and head of `e`, by adding open ears one at a time. Returns the 2-dag
/// (all edges directed) and the ids of the edges whose direction changed.
pub fn bipolar_orient(g: &MultiGraph, e: &str) -> Result<(TwoGraph, BTreeSet<String>)> {
    if !g.is_2connected() {
        return Err(Error::precondition("bipolar orientation needs a 2-connected graph"));
    }
    let ep = g.edge_pos(e).ok_or_else(|| Error::input(format!("unknown edge {e}")))?;
    let (s, t) = (g.edge(ep).tail, g.edge(ep).head);
    let n = g.n();
    let mut dir: Vec<Option<(usize, usize)>> = vec![None; g.m()];
    let mut visited = vec![false; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    dir[ep] = Some((s, t));
    out[s].push(t);
    visited[s] = true;
    visited[t] = true;
    let reaches = |out: &Vec<Vec<usize>>, a: usize, b: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            for &y in &out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    };
    loop {
        let Some(k) = (0..g.m()).find(|&k| dir[k].is_none() && (visited[g.edge(k).tail] || visited[g.edge(k).head])) else {
            break;
        };
        let ed = g.edge(k);
        let u = if visited[ed.tail] { ed.tail } else { ed.head };
        let w = ed.other(u);
        // The ear as a vertex sequence with its edge positions.
        let (verts, epos) = if visited[w] {
            (vec![u, w], vec![k])
        } else {
            let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
            let mut queue = std::collections::VecDeque::from([w]);
            let mut seen = vec![false; n];
            seen[u] = true;
            seen[w] = true;
            let mut end = None;
            while let Some(x) = queue.pop_front() {
                for j in g.incident(x) {
                    if dir[j].is_some() || j == k {
                        continue;
                    }
                    let y = g.edge(j).other(x);
                    if seen[y] {
                        continue;
                    }
                    seen[y] = true;
                    prev.insert(y, (x, j));
                    if visited[y] {
                        end = Some(y);
                        break;
                    }
                    queue.push_back(y);
                }
                if end.is_some() {
                    break;
                }
            }
            let v = end.ok_or_else(|| Error::precondition("no open ear found; graph is not 2-connected"))?;
            let mut verts = vec![v];
            let mut epos = Vec::new();
            let mut x = v;
            while x != w {
                let (p, j) = prev[&x];
                epos.push(j);
                verts.push(p);
                x = p;
            }
            epos.push(k);
            verts.push(u);
            verts.reverse();
            epos.reverse();
            (verts, epos)
        };
        let (a, b) = (verts[0], *verts.last().unwrap());
        let forward = !reaches(&out, b, a);
        let seq: Vec<usize> = if forward { verts.clone() } else { verts.iter().rev().copied().collect() };
        let eseq: Vec<usize> = if forward { epos.clone() } else { epos.iter().rev().copied().collect() };
        for (i, &j) in eseq.iter().enumerate() {
            dir[j] = Some((seq[i], seq[i + 1]));
            out[seq[i]].push(seq[i + 1]);
        }
        for &v in &verts {
            visited[v] = true;
        }
    }
    let mut h = MultiGraph::new();
    for v in g.names() {
        h.add_vertex(v);
    }
    let mut rev = BTreeSet::new();
    for k in 0..g.m() {
        let ed = g.edge(k);
        let (a, b) = dir[k].ok_or_else(|| Error::precondition("graph is not connected"))?;
        if a != ed.tail {
            rev.insert(ed.id.clone());
        }
        h.add_edge(&ed.id, g.name(a), g.name(b), true)?;
    }
    Ok((TwoGraph::new(h, g.name(s), g.name(t))?, rev))
}

/// Kind of a factor tree node, as seen by the separated representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeRole {
    Edge,
    Parallel,
    Series,
    Theta,
}

/// Separated representation of a 2-dag: two vertices `(x,1)`, `(x,2)` per
/// tree node, one solid edge per leaf, and ε-edges recording which sources
/// coincide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepGraph {
    pub vertices: Vec<String>,
    /// Edge id to (tail, head).
    pub solid: BTreeMap<String, (String, String)>,
    /// Unordered pairs, stored with the smaller name first.
    pub eps: BTreeSet<(String, String)>,
    pub tree: DecompTree,
    pub roles: Vec<NodeRole>,
    pub args: Vec<Vec<usize>>,
    pub ssrc1: BTreeMap<String, String>,
    pub ssrc2: BTreeMap<String, String>,
    pub leaf_map: BTreeMap<String, String>,
    /// Vertex of the decomposed graph each vertex stands for, when known.
    pub origin: BTreeMap<String, String>,
}

pub fn sep_vertex(node: &str, i: usize) -> String {
    format!("({node},{i})")
}

fn eps_pair(a: String, b: String) -> (String, String) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn sep_graph(g: &TwoGraph, cap: usize) -> Result<SepGraph> {
    let ft = factor_tree(g, cap)?;
    Ok(sep_of_tree(&ft))
}

pub fn sep_of_tree(ft: &FactorTree) -> SepGraph {
    let t = &ft.tree;
    let src = |x: usize, i: usize| if i == 1 { ft.factors[x].s1_name() } else { ft.factors[x].s2_name() };
    let mut s = SepGraph {
        vertices: Vec::new(),
        solid: BTreeMap::new(),
        eps: BTreeSet::new(),
        tree: t.clone(),
        roles: ft
            .kinds
            .iter()
            .map(|k| match k {
                FactorKind::Edge => NodeRole::Edge,
                FactorKind::Parallel => NodeRole::Parallel,
                FactorKind::Series => NodeRole::Series,
                FactorKind::Prime(_) => NodeRole::Theta,
            })
            .collect(),
        args: ft.args.clone(),
        ssrc1: BTreeMap::new(),
        ssrc2: BTreeMap::new(),
        leaf_map: BTreeMap::new(),
        origin: BTreeMap::new(),
    };
    for x in t.preorder() {
        let id = &t.nodes[x].id;
        for i in 1..=2 {
            let v = sep_vertex(id, i);
            s.origin.insert(v.clone(), src(x, i).to_string());
            s.vertices.push(v);
        }
        s.ssrc1.insert(id.clone(), sep_vertex(id, 1));
        s.ssrc2.insert(id.clone(), sep_vertex(id, 2));
        if ft.kinds[x] == FactorKind::Edge {
            s.solid.insert(id.clone(), (sep_vertex(id, 1), sep_vertex(id, 2)));
            s.leaf_map.insert(id.clone(), id.clone());
        }
    }
    for z in 0..t.len() {
        let sons = &t.nodes[z].children;
        for &x in sons {
            for i in 1..=2 {
                for j in 1..=2 {
                    if src(z, i) == src(x, j) {
                        s.eps.insert(eps_pair(sep_vertex(&t.nodes[z].id, i), sep_vertex(&t.nodes[x].id, j)));
                    }
                }
            }
        }
        for (a, &x) in sons.iter().enumerate() {
            for &y in &sons[a + 1..] {
                for i in 1..=2 {
                    for j in 1..=2 {
                        let v = src(x, i);
                        if v == src(y, j) && v != src(z, 1) && v != src(z, 2) {
                            s.eps.insert(eps_pair(sep_vertex(&t.nodes[x].id, i), sep_vertex(&t.nodes[y].id, j)));
                        }
                    }
                }
            }
        }
    }
    s
}

impl SepGraph {
    /// Checks the structural invariants: solid edges pairwise non-adjacent
    /// and ε-edges between known vertices.
    pub fn validate(&self) -> Result<()> {
        let known: BTreeSet<&String> = self.vertices.iter().collect();
        let mut touched = BTreeSet::new();
        for (id, (a, b)) in &self.solid {
            for v in [a, b] {
                if !known.contains(v) {
                    return Err(Error::validation(format!("solid edge {id} uses unknown vertex {v}")));
                }
                if !touched.insert(v.clone()) {
                    return Err(Error::validation(format!("solid edges meet at {v}")));
                }
            }
        }
        for (a, b) in &self.eps {
            if !known.contains(a) || !known.contains(b) {
                return Err(Error::validation(format!("ε-edge {a}-{b} uses an unknown vertex")));
            }
        }
        Ok(())
    }

    pub fn root_id(&self) -> &str {
        &self.tree.nodes[self.tree.root].id
    }
}

/// Contracts all ε-edges. Each class is named after the decomposed graph's
/// vertex when the origin map is consistent, else after its least member.
pub fn contract_sep(s: &SepGraph) -> Result<TwoGraph> {
    s.validate()?;
    let idx: BTreeMap<&String, usize> = s.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..s.vertices.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for (a, b) in &s.eps {
        let (ra, rb) = (find(&mut parent, idx[a]), find(&mut parent, idx[b]));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..s.vertices.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    let mut by_origin: BTreeMap<usize, String> = BTreeMap::new();
    let mut consistent = !s.origin.is_empty();
    for (&r, members) in &classes {
        let names: BTreeSet<&String> = members.iter().filter_map(|&i| s.origin.get(&s.vertices[i])).collect();
        if names.len() != 1 || members.iter().any(|&i| !s.origin.contains_key(&s.vertices[i])) {
            consistent = false;
            break;
        }
        by_origin.insert(r, (*names.iter().next().unwrap()).clone());
    }
    if consistent && by_origin.values().collect::<BTreeSet<_>>().len() != by_origin.len() {
        consistent = false;
    }
    let name_of = |r: usize| -> String {
        if consistent {
            by_origin[&r].clone()
        } else {
            classes[&r].iter().map(|&i| s.vertices[i].clone()).min().unwrap()
        }
    };
    let mut g = MultiGraph::new();
    let mut used = BTreeSet::new();
    for (id, (a, b)) in &s.solid {
        let ra = find(&mut parent, idx[a]);
        let rb = find(&mut parent, idx[b]);
        if ra == rb {
            return Err(Error::validation(format!("edge {id} collapses to a loop")));
        }
        used.insert(ra);
        used.insert(rb);
        g.add_edge(id, &name_of(ra), &name_of(rb), true)?;
    }
    let root = s.root_id();
    let r1 = find(&mut parent, idx[&s.ssrc1[root]]);
    let r2 = find(&mut parent, idx[&s.ssrc2[root]]);
    for r in [r1, r2] {
        g.add_vertex(&name_of(r));
    }
    TwoGraph::new(g, &name_of(r1), &name_of(r2))
}
