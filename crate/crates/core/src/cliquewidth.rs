//! Clique-width expressions: evaluation, parsing, the explicit constructions
//! for cliques, stars, CTTs, SD graphs, vertex fusion and substitution, and
//! an exact decision procedure for small graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::SimpleDigraph;
use crate::split::{classify_component, ctt_graph, ComponentType, CttSpec, SDGraph};

pub const TOP: &str = "top";
pub const BOT: &str = "bot";
/// Tag used for ε-edges of SD graphs.
pub const EPS_TAG: &str = "eps";
pub const DEFAULT_CWD_VERTEX_CAP: usize = 6;
pub const DEFAULT_CWD_LABEL_CAP: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CwExpression {
    Const { label: String, tag: Option<String> },
    Add { from: String, to: String, tag: Option<String>, sub: Box<CwExpression> },
    Ren { from: String, to: String, sub: Box<CwExpression> },
    Union(Box<CwExpression>, Box<CwExpression>),
}

use CwExpression as E;

pub fn cnst(label: &str) -> E {
    E::Const { label: label.into(), tag: None }
}

pub fn vtx(label: &str, tag: &str) -> E {
    E::Const { label: label.into(), tag: Some(tag.into()) }
}

pub fn add(from: &str, to: &str, sub: E) -> E {
    E::Add { from: from.into(), to: to.into(), tag: None, sub: Box::new(sub) }
}

pub fn add_tagged(tag: &str, from: &str, to: &str, sub: E) -> E {
    E::Add { from: from.into(), to: to.into(), tag: Some(tag.into()), sub: Box::new(sub) }
}

/// Both directions.
pub fn add_both(a: &str, b: &str, sub: E) -> E {
    add(a, b, add(b, a, sub))
}

pub fn ren(from: &str, to: &str, sub: E) -> E {
    E::Ren { from: from.into(), to: to.into(), sub: Box::new(sub) }
}

pub fn union(a: E, b: E) -> E {
    E::Union(Box::new(a), Box::new(b))
}

/// Union of a nonempty list.
pub fn union_all(items: impl IntoIterator<Item = E>) -> Option<E> {
    items.into_iter().reduce(union)
}

impl CwExpression {
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut BTreeSet<String>) {
        match self {
            E::Const { label, .. } => {
                out.insert(label.clone());
            }
            E::Add { from, to, sub, .. } | E::Ren { from, to, sub } => {
                out.insert(from.clone());
                out.insert(to.clone());
                sub.collect_labels(out);
            }
            E::Union(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
        }
    }

    /// Labels carried by vertices of the value.
    pub fn final_labels(&self) -> BTreeSet<String> {
        match self {
            E::Const { label, .. } => BTreeSet::from([label.clone()]),
            E::Add { sub, .. } => sub.final_labels(),
            E::Ren { from, to, sub } => {
                let mut s = sub.final_labels();
                if s.remove(from) {
                    s.insert(to.clone());
                }
                s
            }
            E::Union(a, b) => a.final_labels().union(&b.final_labels()).cloned().collect(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            E::Const { .. } => 1,
            E::Add { sub, .. } | E::Ren { sub, .. } => 1 + sub.size(),
            E::Union(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Renames every label occurrence through `f`.
    pub fn map_labels(&self, f: &dyn Fn(&str) -> String) -> E {
        match self {
            E::Const { label, tag } => E::Const { label: f(label), tag: tag.clone() },
            E::Add { from, to, tag, sub } => {
                E::Add { from: f(from), to: f(to), tag: tag.clone(), sub: Box::new(sub.map_labels(f)) }
            }
            E::Ren { from, to, sub } => E::Ren { from: f(from), to: f(to), sub: Box::new(sub.map_labels(f)) },
            E::Union(a, b) => union(a.map_labels(f), b.map_labels(f)),
        }
    }

    /// Renames vertex tags; untagged constants are left alone.
    pub fn map_tags(&self, f: &dyn Fn(&str) -> String) -> E {
        match self {
            E::Const { label, tag } => E::Const { label: label.clone(), tag: tag.as_deref().map(f) },
            E::Add { from, to, tag, sub } => {
                E::Add { from: from.clone(), to: to.clone(), tag: tag.clone(), sub: Box::new(sub.map_tags(f)) }
            }
            E::Ren { from, to, sub } => E::Ren { from: from.clone(), to: to.clone(), sub: Box::new(sub.map_tags(f)) },
            E::Union(a, b) => union(a.map_tags(f), b.map_tags(f)),
        }
    }

    /// Label of the constant tagged `v`, if any.
    pub fn label_of(&self, v: &str) -> Option<String> {
        match self {
            E::Const { label, tag } => (tag.as_deref() == Some(v)).then(|| label.clone()),
            E::Add { sub, .. } | E::Ren { sub, .. } => sub.label_of(v),
            E::Union(a, b) => a.label_of(v).or_else(|| b.label_of(v)),
        }
    }

    /// Replaces the constant tagged `v` by `with`.
    pub fn replace_const(&self, v: &str, with: &E) -> E {
        match self {
            E::Const { tag, .. } if tag.as_deref() == Some(v) => with.clone(),
            E::Const { .. } => self.clone(),
            E::Add { from, to, tag, sub } => {
                E::Add { from: from.clone(), to: to.clone(), tag: tag.clone(), sub: Box::new(sub.replace_const(v, with)) }
            }
            E::Ren { from, to, sub } => {
                E::Ren { from: from.clone(), to: to.clone(), sub: Box::new(sub.replace_const(v, with)) }
            }
            E::Union(a, b) => union(a.replace_const(v, with), b.replace_const(v, with)),
        }
    }

    pub fn parse(text: &str) -> Result<E> {
        let mut p = Parser { s: text.as_bytes(), i: 0 };
        let e = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(Error::input(format!("trailing input at offset {}", p.i)));
        }
        Ok(e)
    }
}

fn token(s: &str) -> String {
    let plain = !s.is_empty() && s.chars().all(|c| !c.is_whitespace() && !"(),@[]\"\\".contains(c));
    if plain {
        s.to_string()
    } else {
        let mut out = String::from("\"");
        for c in s.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
        out
    }
}

impl fmt::Display for CwExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            E::Const { label, tag: None } => write!(f, "c({})", token(label)),
            E::Const { label, tag: Some(t) } => write!(f, "c({}@{})", token(label), token(t)),
            E::Add { from, to, tag: None, sub } => write!(f, "add({},{},{})", token(from), token(to), sub),
            E::Add { from, to, tag: Some(t), sub } => {
                write!(f, "add[{}]({},{},{})", token(t), token(from), token(to), sub)
            }
            E::Ren { from, to, sub } => write!(f, "ren({},{},{})", token(from), token(to), sub),
            E::Union(a, b) => write!(f, "u({a},{b})"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            Ok(())
        } else {
            Err(Error::input(format!("expected '{}' at offset {}", c as char, self.i)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn word(&mut self) -> Result<String> {
        self.ws();
        if self.s.get(self.i) == Some(&b'"') {
            self.i += 1;
            let mut out = Vec::new();
            loop {
                match self.s.get(self.i) {
                    None => return Err(Error::input("unterminated string")),
                    Some(b'"') => {
                        self.i += 1;
                        break;
                    }
                    Some(b'\\') => {
                        out.push(*self.s.get(self.i + 1).ok_or_else(|| Error::input("dangling escape"))?);
                        self.i += 2;
                    }
                    Some(&c) => {
                        out.push(c);
                        self.i += 1;
                    }
                }
            }
            return String::from_utf8(out).map_err(|_| Error::input("invalid utf-8 in string"));
        }
        let start = self.i;
        while self.i < self.s.len() {
            let c = self.s[self.i];
            if c.is_ascii_whitespace() || b"(),@[]\"\\".contains(&c) {
                break;
            }
            self.i += 1;
        }
        if start == self.i {
            return Err(Error::input(format!("expected a name at offset {start}")));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
    }

    fn expr(&mut self) -> Result<E> {
        let head = self.word()?;
        match head.as_str() {
            "c" => {
                self.eat(b'(')?;
                let label = self.word()?;
                let tag = if self.peek() == Some(b'@') {
                    self.i += 1;
                    Some(self.word()?)
                } else {
                    None
                };
                self.eat(b')')?;
                Ok(E::Const { label, tag })
            }
            "add" | "ren" => {
                let tag = if head == "add" && self.peek() == Some(b'[') {
                    self.i += 1;
                    let t = self.word()?;
                    self.eat(b']')?;
                    Some(t)
                } else {
                    None
                };
                self.eat(b'(')?;
                let from = self.word()?;
                self.eat(b',')?;
                let to = self.word()?;
                self.eat(b',')?;
                let sub = Box::new(self.expr()?);
                self.eat(b')')?;
                if head == "add" {
                    Ok(E::Add { from, to, tag, sub })
                } else {
                    Ok(E::Ren { from, to, sub })
                }
            }
            "u" => {
                self.eat(b'(')?;
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                self.eat(b')')?;
                Ok(union(a, b))
            }
            other => Err(Error::input(format!("unknown operation {other}"))),
        }
    }
}

/// Value of an expression: a graph with a label on each vertex, plus edges
/// created by tagged additions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub graph: SimpleDigraph,
    pub labels: BTreeMap<String, String>,
    pub tagged: BTreeMap<String, BTreeSet<(String, String)>>,
}

/// Evaluates an expression. Untagged constants are named `#k` by their
/// position among the constants.
pub fn eval_cw(t: &E) -> Result<LabeledGraph> {
    struct Val {
        vs: Vec<usize>,
    }
    struct St {
        names: Vec<String>,
        lab: Vec<String>,
        arcs: BTreeSet<(usize, usize)>,
        tagged: BTreeMap<String, BTreeSet<(usize, usize)>>,
        count: usize,
    }
    fn go(t: &E, st: &mut St) -> Result<Val> {
        match t {
            E::Const { label, tag } => {
                let k = st.count;
                st.count += 1;
                let name = tag.clone().unwrap_or_else(|| format!("#{k}"));
                st.names.push(name);
                st.lab.push(label.clone());
                Ok(Val { vs: vec![st.names.len() - 1] })
            }
            E::Add { from, to, tag, sub } => {
                if from == to {
                    return Err(Error::validation(format!("edge addition between equal labels {from}")));
                }
                let v = go(sub, st)?;
                let src: Vec<usize> = v.vs.iter().copied().filter(|&x| st.lab[x] == *from).collect();
                let dst: Vec<usize> = v.vs.iter().copied().filter(|&x| st.lab[x] == *to).collect();
                let rel = match tag {
                    None => &mut st.arcs,
                    Some(t) => st.tagged.entry(t.clone()).or_default(),
                };
                for &a in &src {
                    for &b in &dst {
                        rel.insert((a, b));
                    }
                }
                Ok(v)
            }
            E::Ren { from, to, sub } => {
                let v = go(sub, st)?;
                for &x in &v.vs {
                    if st.lab[x] == *from {
                        st.lab[x] = to.clone();
                    }
                }
                Ok(v)
            }
            E::Union(a, b) => {
                let mut va = go(a, st)?;
                let vb = go(b, st)?;
                va.vs.extend(vb.vs);
                Ok(va)
            }
        }
    }
    let mut st = St { names: vec![], lab: vec![], arcs: BTreeSet::new(), tagged: BTreeMap::new(), count: 0 };
    go(t, &mut st)?;
    let mut g = SimpleDigraph::new();
    for n in &st.names {
        if g.index_of(n).is_some() {
            return Err(Error::validation(format!("vertex tag {n} occurs twice")));
        }
        g.add_vertex(n);
    }
    for &(a, b) in &st.arcs {
        g.add_arc(a, b);
    }
    let labels = st.names.iter().cloned().zip(st.lab.iter().cloned()).collect();
    let tagged = st
        .tagged
        .iter()
        .map(|(t, s)| (t.clone(), s.iter().map(|&(a, b)| (st.names[a].clone(), st.names[b].clone())).collect()))
        .collect();
    Ok(LabeledGraph { graph: g, labels, tagged })
}

fn vname(i: usize) -> String {
    format!("v{i}")
}

/// K_n on v0..v{n-1} with labels 1 and 2: each new vertex is joined to the
/// block built so far, then merged into it.
pub fn clique_expr(n: usize) -> E {
    let mut e = vtx("1", &vname(0));
    for i in 1..n {
        e = ren("2", "1", add_both("1", "2", union(e, vtx("2", &vname(i)))));
    }
    e
}

/// S_{n-1}: centre v0 (label 1) joined to n-1 leaves (label 2).
pub fn star_expr(n: usize) -> E {
    let centre = vtx("1", &vname(0));
    match union_all((1..n).map(|i| vtx("2", &vname(i)))) {
        None => centre,
        Some(leaves) => add_both("1", "2", union(centre, leaves)),
    }
}

/// Builds a CTT left to right with labels 1, 2, 3 and bot.
pub fn ctt_expr(spec: &CttSpec) -> E {
    let p = &spec.hinges;
    let n = spec.n;
    let mut g = add("1", "2", union(vtx("1", &vname(0)), vtx("2", &vname(1))));
    for i in 2..n {
        let m = (1..p.len()).find(|&m| p[m - 1] <= i && i < p[m]).unwrap();
        let fresh = union(g, vtx("3", &vname(i)));
        let at_hinge = i == p[m - 1];
        // In the first segment, and at the hinge closing it, v0 is still a source.
        let first = m == 1 || (at_hinge && m == 2);
        let mut step = if first { add("2", "3", add("1", "3", fresh)) } else { add("2", "3", fresh) };
        if at_hinge {
            step = ren("2", BOT, step);
        }
        g = ren("3", "2", step);
    }
    add("2", "1", g)
}

fn product(label: &str, t: u8) -> String {
    format!("{label}.{t}")
}

/// Fuses `u` (indegree 0) and `v` (outdegree 0) of the value of `e`,
/// with labels in (labels of e) x {0,1,2,3}. The fused vertex is named `u`.
pub fn fuse_expr(e: &E, u: &str, v: &str) -> Result<E> {
    let g = eval_cw(e)?.graph;
    let ui = g.index_of(u).ok_or_else(|| Error::input(format!("unknown vertex {u}")))?;
    let vi = g.index_of(v).ok_or_else(|| Error::input(format!("unknown vertex {v}")))?;
    if ui == vi || !g.in_neighbors(ui).is_empty() || !g.out_neighbors(vi).is_empty() {
        return Err(Error::input("fusion needs distinct u of indegree 0 and v of outdegree 0"));
    }
    let ty = |x: usize| -> u8 {
        match (g.has_arc(ui, x), g.has_arc(x, vi)) {
            (true, true) => 1,
            (true, false) => 2,
            (false, true) => 3,
            _ => 0,
        }
    };
    let types: BTreeMap<String, u8> =
        (0..g.n()).filter(|&x| x != ui && x != vi).map(|x| (g.name(x).to_string(), ty(x))).collect();
    let alphabet = e.labels();
    let base = alphabet.iter().next().unwrap().clone();
    // Every final label collapses to `base` first.
    let mut whole = e.clone();
    for l in e.final_labels() {
        if l != base {
            whole = ren(&l, &base, whole);
        }
    }
    let lifted = lift(&whole, &types, u, v);
    let used: BTreeSet<u8> = types.values().copied().collect();
    let p = match alphabet.iter().nth(1) {
        Some(other) => product(other, 0),
        None => product(&base, (0..4).find(|t| !used.contains(t)).unwrap()),
    };
    let mut out = match lifted {
        None => return Ok(vtx(&p, u)),
        Some((h, _)) => union(h, vtx(&p, u)),
    };
    for (from_p, t) in [(false, 3), (false, 1), (true, 2), (true, 1)] {
        if !used.contains(&t) {
            continue;
        }
        let q = product(&base, t);
        out = if from_p { add(&p, &q, out) } else { add(&q, &p, out) };
    }
    for t in (0..4).rev() {
        out = ren(&product(&base, t), &p, out);
    }
    Ok(out)
}

/// Drops the constants of u and v and pairs every label with the vertex
/// type; returns the types present in the value.
fn lift(e: &E, types: &BTreeMap<String, u8>, u: &str, v: &str) -> Option<(E, BTreeSet<u8>)> {
    match e {
        E::Const { label, tag } => {
            let t = tag.as_deref()?;
            if t == u || t == v {
                return None;
            }
            let ty = types[t];
            Some((vtx(&product(label, ty), t), BTreeSet::from([ty])))
        }
        E::Add { from, to, tag, sub } => {
            let (mut s, ts) = lift(sub, types, u, v)?;
            for &a in &ts {
                for &b in &ts {
                    s = E::Add { from: product(from, a), to: product(to, b), tag: tag.clone(), sub: Box::new(s) };
                }
            }
            Some((s, ts))
        }
        E::Ren { from, to, sub } => {
            let (mut s, ts) = lift(sub, types, u, v)?;
            for &a in &ts {
                s = ren(&product(from, a), &product(to, a), s);
            }
            Some((s, ts))
        }
        E::Union(a, b) => match (lift(a, types, u, v), lift(b, types, u, v)) {
            (Some((x, tx)), Some((y, ty))) => Some((union(x, y), tx.union(&ty).copied().collect())),
            (x, None) => x,
            (None, y) => y,
        },
    }
}

/// Direct fusion of `u` and `v` into a vertex named `u`.
pub fn fuse_vertices(g: &SimpleDigraph, u: &str, v: &str) -> Result<SimpleDigraph> {
    let ui = g.index_of(u).ok_or_else(|| Error::input(format!("unknown vertex {u}")))?;
    let vi = g.index_of(v).ok_or_else(|| Error::input(format!("unknown vertex {v}")))?;
    let mut out = SimpleDigraph::new();
    for i in 0..g.n() {
        if i != vi {
            out.add_vertex(g.name(i));
        }
    }
    for (a, b) in g.edges() {
        let a = if a == vi { ui } else { a };
        let b = if b == vi { ui } else { b };
        if a != b {
            out.add_edge(g.name(a), g.name(b))?;
        }
    }
    Ok(out)
}

/// Expression for G[H/u]: the value of `eh`, with all its labels merged
/// into the label of u, replaces the constant of u.
pub fn subst_expr(eg: &E, u: &str, eh: &E) -> Result<E> {
    let pu = eg.label_of(u).ok_or_else(|| Error::input(format!("no constant for vertex {u}")))?;
    let mut h = eh.clone();
    for l in eh.final_labels() {
        if l != pu {
            h = ren(&l, &pu, h);
        }
    }
    Ok(eg.replace_const(u, &h))
}

/// One label per vertex; works for any graph.
pub fn naive_expr(g: &SimpleDigraph) -> E {
    let lab = |i: usize| format!("{}", i + 1);
    let Some(mut e) = union_all((0..g.n()).map(|i| vtx(&lab(i), g.name(i)))) else {
        return cnst("1");
    };
    for (a, b) in g.edges() {
        e = add(&lab(a), &lab(b), e);
    }
    e
}

/// An expression for a split component with its own vertex names, using
/// the clique, star or CTT constructions when they apply and the exact
/// search (or one label per vertex) otherwise.
pub fn component_expr(c: &SimpleDigraph, cap: usize) -> Result<E> {
    let retag = |e: E, order: Vec<String>| e.map_tags(&|t: &str| order[t[1..].parse::<usize>().unwrap()].clone());
    match classify_component(c, cap)? {
        ComponentType::Clique(n) => Ok(retag(clique_expr(n), c.names().to_vec())),
        ComponentType::Star { n, center } => {
            let mut order = vec![center.clone()];
            order.extend(c.names().iter().filter(|v| **v != center).cloned());
            Ok(retag(star_expr(n), order))
        }
        ComponentType::Ctt(m) => {
            let e = ctt_expr(&m.spec).map_labels(&|l: &str| if l == BOT { "4".into() } else { l.into() });
            Ok(retag(e, m.order))
        }
        _ => {
            if c.n() <= DEFAULT_CWD_VERTEX_CAP {
                for k in 1..=DEFAULT_CWD_LABEL_CAP.min(c.n()) {
                    if let Some(e) = cwd_expression(c, k)? {
                        return Ok(e);
                    }
                }
            }
            Ok(naive_expr(c))
        }
    }
}

/// Expression for an SD graph with ε-edges as `eps`-tagged edges, built
/// from one expression per component (keyed by the component's least
/// vertex name). Uses the component labels plus top and bot.
pub fn sd_expr(h: &SDGraph, comp_exprs: &BTreeMap<String, E>) -> Result<E> {
    let comps = h.components();
    let mut comp_of: BTreeMap<String, usize> = BTreeMap::new();
    let mut exprs = Vec::new();
    for (i, c) in comps.iter().enumerate() {
        let g = h.component_graph(c);
        let key = g.names().iter().min().unwrap().clone();
        let e = comp_exprs.get(&key).ok_or_else(|| Error::input(format!("no expression for component {key}")))?;
        let val = eval_cw(e)?;
        if val.graph != g {
            return Err(Error::validation(format!("expression for component {key} has the wrong value")));
        }
        if e.labels().contains(TOP) || e.labels().contains(BOT) {
            return Err(Error::validation("component expressions must not use top or bot"));
        }
        for v in g.names() {
            comp_of.insert(v.clone(), i);
        }
        exprs.push(e.clone());
    }
    // Splices the sides hanging off every ε-edge of component `ci` except
    // the one through `skip`.
    fn splice(
        h: &SDGraph,
        comps: &[Vec<usize>],
        exprs: &[E],
        comp_of: &BTreeMap<String, usize>,
        ci: usize,
        skip: Option<&str>,
    ) -> E {
        let mut e = exprs[ci].clone();
        for &x in &comps[ci] {
            let vi = h.graph.name(x);
            if Some(vi) == skip {
                continue;
            }
            if let Some(w) = h.partner(vi) {
                let f = hanging(h, comps, exprs, comp_of, vi, w);
                let pi = exprs[ci].label_of(vi).unwrap();
                e = e.replace_const(vi, &ren(TOP, &pi, f));
            }
        }
        e
    }
    // The part beyond the ε-edge v - w, with v labelled top and the rest bot.
    fn hanging(h: &SDGraph, comps: &[Vec<usize>], exprs: &[E], comp_of: &BTreeMap<String, usize>, v: &str, w: &str) -> E {
        let cw = comp_of[w];
        let mut e = splice(h, comps, exprs, comp_of, cw, Some(w));
        let pw = exprs[cw].label_of(w).unwrap();
        let link = add_tagged(EPS_TAG, BOT, TOP, add_tagged(EPS_TAG, TOP, BOT, union(vtx(TOP, v), vtx(BOT, w))));
        e = e.replace_const(w, &ren(BOT, &pw, link));
        for l in exprs[cw].labels() {
            e = ren(&l, BOT, e);
        }
        e
    }
    Ok(splice(h, &comps, &exprs, &comp_of, 0, None))
}

/// Key of a search state: members, labels (canonical order), pending pairs.
type Key = (u8, [u8; 8], u16);

#[derive(Clone)]
struct State {
    set: u8,
    lab: [u8; 8],
    pending: u16,
}

#[derive(Clone)]
enum Origin {
    Leaf(usize, u8),
    Add(usize, u8, u8),
    Ren(usize, u8, u8),
    Union(usize, usize, Vec<u8>),
}

const NONE: u8 = u8::MAX;

struct Search<'a> {
    g: &'a SimpleDigraph,
    n: usize,
    k: usize,
    states: Vec<State>,
    origin: Vec<Origin>,
    seen: HashMap<Key, usize>,
    by_set: Vec<Vec<usize>>,
    queue: Vec<usize>,
}

impl Search<'_> {
    fn pair(&self, i: u8, j: u8) -> u16 {
        1 << (i as usize * self.k + j as usize)
    }

    fn class(&self, s: &State, l: u8) -> Vec<usize> {
        (0..self.n).filter(|&x| s.set >> x & 1 == 1 && s.lab[x] == l).collect()
    }

    fn complete(&self, a: &[usize], b: &[usize]) -> bool {
        a.iter().all(|&x| b.iter().all(|&y| self.g.has_arc(x, y)))
    }

    /// Pending pairs are complete products, and equal labels mark vertices
    /// that look alike from outside the set.
    fn valid(&self, s: &State) -> bool {
        for i in 0..self.k as u8 {
            for j in 0..self.k as u8 {
                if s.pending & self.pair(i, j) != 0 {
                    if i == j || !self.complete(&self.class(s, i), &self.class(s, j)) {
                        return false;
                    }
                }
            }
        }
        for x in 0..self.n {
            if s.set >> x & 1 == 0 {
                continue;
            }
            for y in x + 1..self.n {
                if s.set >> y & 1 == 0 || s.lab[x] != s.lab[y] {
                    continue;
                }
                for z in 0..self.n {
                    if s.set >> z & 1 == 1 {
                        continue;
                    }
                    if self.g.has_arc(x, z) != self.g.has_arc(y, z) || self.g.has_arc(z, x) != self.g.has_arc(z, y) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn key(&self, s: &State) -> Key {
        let mut map = [NONE; 8];
        let mut next = 0u8;
        let mut lab = [NONE; 8];
        for x in 0..self.n {
            if s.set >> x & 1 == 1 {
                let l = s.lab[x] as usize;
                if map[l] == NONE {
                    map[l] = next;
                    next += 1;
                }
                lab[x] = map[l];
            }
        }
        let mut pending = 0u16;
        for i in 0..self.k {
            for j in 0..self.k {
                if s.pending >> (i * self.k + j) & 1 == 1 && map[i] != NONE && map[j] != NONE {
                    pending |= 1 << (map[i] as usize * self.k + map[j] as usize);
                }
            }
        }
        (s.set, lab, pending)
    }

    fn push(&mut self, s: State, o: Origin) -> Option<usize> {
        if !self.valid(&s) {
            return None;
        }
        let key = self.key(&s);
        if self.seen.contains_key(&key) {
            return None;
        }
        let id = self.states.len();
        self.seen.insert(key, id);
        self.by_set[s.set as usize].push(id);
        self.states.push(s);
        self.origin.push(o);
        self.queue.push(id);
        Some(id)
    }

    fn goal(&self, s: &State) -> bool {
        s.set as usize == (1 << self.n) - 1 && s.pending == 0
    }

    fn run(&mut self) -> Option<usize> {
        for x in 0..self.n {
            let mut lab = [NONE; 8];
            lab[x] = 0;
            if let Some(id) = self.push(State { set: 1 << x, lab, pending: 0 }, Origin::Leaf(x, 0)) {
                if self.goal(&self.states[id]) {
                    return Some(id);
                }
            }
        }
        let perms = permutations(self.k);
        while let Some(id) = self.queue.pop() {
            let s = self.states[id].clone();
            let present: Vec<u8> = (0..self.k as u8).filter(|&l| !self.class(&s, l).is_empty()).collect();
            let mut found = Vec::new();
            for &i in &present {
                for &j in &present {
                    if i == j {
                        continue;
                    }
                    if self.complete(&self.class(&s, i), &self.class(&s, j)) {
                        let t = State { pending: s.pending & !self.pair(i, j), ..s.clone() };
                        found.extend(self.push(t, Origin::Add(id, i, j)));
                    }
                }
                for j in 0..self.k as u8 {
                    if i == j {
                        continue;
                    }
                    let mut t = s.clone();
                    for x in 0..self.n {
                        if t.lab[x] == i {
                            t.lab[x] = j;
                        }
                    }
                    let mut pend = 0u16;
                    for a in 0..self.k as u8 {
                        for b in 0..self.k as u8 {
                            if s.pending & self.pair(a, b) != 0 {
                                let a2 = if a == i { j } else { a };
                                let b2 = if b == i { j } else { b };
                                pend |= self.pair(a2, b2);
                            }
                        }
                    }
                    t.pending = pend;
                    found.extend(self.push(t, Origin::Ren(id, i, j)));
                }
            }
            let rest = ((1u32 << self.n) - 1) as u8 & !s.set;
            let mut sub = rest;
            while sub != 0 {
                let partners = self.by_set[sub as usize].clone();
                for other in partners {
                    for perm in &perms {
                        let o = self.states[other].clone();
                        let mut t = s.clone();
                        t.set |= o.set;
                        for x in 0..self.n {
                            if o.set >> x & 1 == 1 {
                                t.lab[x] = perm[o.lab[x] as usize];
                            }
                        }
                        for a in 0..self.k {
                            for b in 0..self.k {
                                if o.pending >> (a * self.k + b) & 1 == 1 {
                                    t.pending |= self.pair(perm[a], perm[b]);
                                }
                            }
                        }
                        let mut ok = true;
                        for x in 0..self.n {
                            for y in 0..self.n {
                                let cross = (s.set >> x & 1 == 1 && o.set >> y & 1 == 1) || (o.set >> x & 1 == 1 && s.set >> y & 1 == 1);
                                if cross && self.g.has_arc(x, y) {
                                    if t.lab[x] == t.lab[y] {
                                        ok = false;
                                    }
                                    t.pending |= self.pair(t.lab[x], t.lab[y]);
                                }
                            }
                        }
                        if ok {
                            found.extend(self.push(t, Origin::Union(id, other, perm.clone())));
                        }
                    }
                }
                sub = (sub - 1) & rest;
            }
            if let Some(&f) = found.iter().find(|&&f| self.goal(&self.states[f])) {
                return Some(f);
            }
        }
        None
    }

    fn expr(&self, id: usize) -> E {
        let l = |x: u8| format!("{}", x + 1);
        match &self.origin[id] {
            Origin::Leaf(x, a) => vtx(&l(*a), self.g.name(*x)),
            Origin::Add(p, i, j) => add(&l(*i), &l(*j), self.expr(*p)),
            Origin::Ren(p, i, j) => ren(&l(*i), &l(*j), self.expr(*p)),
            Origin::Union(a, b, perm) => {
                let right = self.expr(*b).map_labels(&|s: &str| l(perm[s.parse::<usize>().unwrap() - 1]));
                union(self.expr(*a), right)
            }
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &out {
            for x in 0..k as u8 {
                if !p.contains(&x) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// A k-expression for `g` with labels "1".."k", if one exists.
pub fn cwd_expression(g: &SimpleDigraph, k: usize) -> Result<Option<E>> {
    cwd_expression_with(g, k, DEFAULT_CWD_VERTEX_CAP, DEFAULT_CWD_LABEL_CAP)
}

/// `cwd_expression` with explicit search caps.
pub fn cwd_expression_with(g: &SimpleDigraph, k: usize, vertex_cap: usize, label_cap: usize) -> Result<Option<E>> {
    check_cap("vertex set", g.n(), vertex_cap)?;
    if g.n() == 0 || k == 0 {
        return Ok(None);
    }
    if k >= g.n() {
        return Ok(Some(naive_expr(g)));
    }
    check_cap("label set", k, label_cap)?;
    let mut s = Search {
        g,
        n: g.n(),
        k,
        states: vec![],
        origin: vec![],
        seen: HashMap::new(),
        by_set: vec![vec![]; 1 << g.n()],
        queue: vec![],
    };
    Ok(s.run().map(|id| s.expr(id)))
}

pub fn cwd_at_most(g: &SimpleDigraph, k: usize) -> Result<bool> {
    Ok(cwd_expression(g, k)?.is_some())
}

/// Least k with a k-expression, for graphs within the search caps.
pub fn clique_width(g: &SimpleDigraph) -> Result<usize> {
    for k in 1..=g.n() {
        if k > DEFAULT_CWD_LABEL_CAP && k < g.n() {
            return Err(Error::capacity("label set", k, DEFAULT_CWD_LABEL_CAP));
        }
        if cwd_at_most(g, k)? {
            return Ok(k);
        }
    }
    Ok(0)
}

/// Checks that `ctt_expr` reproduces `ctt_graph` exactly.
pub fn ctt_expr_matches(spec: &CttSpec) -> Result<bool> {
    Ok(eval_cw(&ctt_expr(spec))?.graph == ctt_graph(spec))
}
