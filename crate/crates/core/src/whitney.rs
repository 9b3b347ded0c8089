//! Cycle matroids, twistings and the enumeration of 2-isomorphic graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::{MultiGraph, TwoGraph};
use crate::iso::incidence_key;
use crate::twodag::{canonical_term, eval_term, CanonicalTerm, NodeRole, SepGraph, DEFAULT_FACTOR_CAP};

pub const DEFAULT_MATROID_CAP: usize = 16;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

fn indep_positions(g: &MultiGraph, keep: impl Iterator<Item = usize>) -> bool {
    let mut uf = UnionFind::new(g.n());
    for k in keep {
        let e = g.edge(k);
        if !uf.union(e.tail, e.head) {
            return false;
        }
    }
    true
}

/// The edge set contains no undirected cycle.
pub fn matroid_indep<S: AsRef<str>>(g: &MultiGraph, f: impl IntoIterator<Item = S>) -> Result<bool> {
    let mut pos = Vec::new();
    for id in f {
        let id = id.as_ref();
        pos.push(g.edge_pos(id).ok_or_else(|| Error::input(format!("unknown edge {id}")))?);
    }
    Ok(indep_positions(g, pos.into_iter()))
}

/// Same edge ids and same independent sets, by exhaustive comparison.
pub fn matroid_equal(g: &MultiGraph, h: &MultiGraph, cap: usize) -> Result<bool> {
    if g.edge_ids() != h.edge_ids() {
        return Err(Error::input("cycle matroids are compared on identical edge sets only"));
    }
    let m = g.m();
    check_cap("matroid comparison", m, cap.min(30))?;
    let hpos: Vec<usize> = g.edges().iter().map(|e| h.edge_pos(&e.id).unwrap()).collect();
    for mask in 0u64..(1u64 << m) {
        let a = indep_positions(g, (0..m).filter(|&k| mask >> k & 1 == 1));
        let b = indep_positions(h, (0..m).filter(|&k| mask >> k & 1 == 1).map(|k| hpos[k]));
        if a != b {
            return Ok(false);
        }
    }
    Ok(true)
}

fn vertices_of(g: &MultiGraph, mask: u64) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for k in 0..g.m() {
        if mask >> k & 1 == 1 {
            out.insert(g.edge(k).tail);
            out.insert(g.edge(k).head);
        }
    }
    out
}

fn mask_connected(g: &MultiGraph, mask: u64) -> bool {
    let mut uf = UnionFind::new(g.n());
    let verts = vertices_of(g, mask);
    for k in 0..g.m() {
        if mask >> k & 1 == 1 {
            uf.union(g.edge(k).tail, g.edge(k).head);
        }
    }
    let roots: BTreeSet<usize> = verts.iter().map(|&v| uf.find(v)).collect();
    roots.len() <= 1
}

/// Every graph reachable by one twisting: single edge reversals, and the
/// re-gluings of a connected part M meeting the rest only at u and v with
/// u and v exchanged inside M. Results are deduplicated exactly.
pub fn twistings(g: &MultiGraph, cap: usize) -> Result<Vec<MultiGraph>> {
    let m = g.m();
    check_cap("twisting enumeration", m, cap.min(30))?;
    let mut out: Vec<MultiGraph> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |h: MultiGraph, out: &mut Vec<MultiGraph>| {
        if seen.insert(h.edge_records()) {
            out.push(h);
        }
    };
    for e in g.edges() {
        push(g.with_reversed(&BTreeSet::from([e.id.clone()])), &mut out);
    }
    let full = (1u64 << m) - 1;
    for mmask in 1..full {
        let lmask = full & !mmask;
        let common: Vec<usize> = vertices_of(g, mmask).intersection(&vertices_of(g, lmask)).copied().collect();
        if common.len() != 2 || !mask_connected(g, mmask) || !mask_connected(g, lmask) {
            continue;
        }
        let (u, v) = (common[0], common[1]);
        let swap = |x: usize| if x == u { v } else if x == v { u } else { x };
        let mut h = MultiGraph::new();
        for name in g.names() {
            h.add_vertex(name);
        }
        for (k, e) in g.edges().iter().enumerate() {
            let (a, b) = if mmask >> k & 1 == 1 { (swap(e.tail), swap(e.head)) } else { (e.tail, e.head) };
            h.add_edge(&e.id, g.name(a), g.name(b), e.directed)?;
        }
        push(h, &mut out);
    }
    Ok(out)
}

/// Closure of `g` under twistings, modulo edge-identified isomorphism of
/// the underlying undirected multigraphs.
pub fn twisting_closure(g: &MultiGraph, cap: usize) -> Result<Vec<MultiGraph>> {
    let start = g.undirected();
    let mut seen = BTreeSet::from([incidence_key(&start)]);
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(h) = queue.pop_front() {
        for t in twistings(&h, cap)? {
            let t = t.undirected();
            if seen.insert(incidence_key(&t)) {
                out.push(t.clone());
                queue.push_back(t);
            }
        }
    }
    Ok(out)
}

/// Modifications applied to a canonical term, addressed by argument paths
/// from the root: reversed leaves, source-swapped skeletons, and argument
/// permutations at series nodes (`perm[i]` is the old index of new argument `i`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistChoice {
    pub flips: BTreeSet<Vec<usize>>,
    pub perms: BTreeMap<Vec<usize>, Vec<usize>>,
    pub swaps: BTreeSet<Vec<usize>>,
}

impl TwistChoice {
    pub fn is_empty(&self) -> bool {
        self.flips.is_empty() && self.swaps.is_empty() && self.perms.iter().all(|(_, p)| p.iter().enumerate().all(|(i, &j)| i == j))
    }
}

fn is_permutation(p: &[usize], k: usize) -> bool {
    let mut seen = vec![false; k];
    p.len() == k && p.iter().all(|&i| i < k && !std::mem::replace(&mut seen[i], true))
}

fn check_choice(t: &CanonicalTerm, c: &TwistChoice) -> Result<()> {
    for p in &c.flips {
        if !matches!(t.at(p), Some(CanonicalTerm::Edge { .. })) {
            return Err(Error::input(format!("flip position {p:?} is not a leaf")));
        }
    }
    for p in &c.swaps {
        if !matches!(t.at(p), Some(CanonicalTerm::Theta { .. })) {
            return Err(Error::input(format!("swap position {p:?} is not a prime node")));
        }
    }
    for (p, perm) in &c.perms {
        match t.at(p) {
            Some(CanonicalTerm::Ser(args)) if is_permutation(perm, args.len()) => {}
            Some(CanonicalTerm::Ser(_)) => return Err(Error::input(format!("bad permutation at {p:?}"))),
            _ => return Err(Error::input(format!("permutation position {p:?} is not a series node"))),
        }
    }
    Ok(())
}

fn apply_at(t: &CanonicalTerm, c: &TwistChoice, path: &mut Vec<usize>) -> CanonicalTerm {
    let mut kids = Vec::with_capacity(t.args().len());
    for (i, a) in t.args().iter().enumerate() {
        path.push(i);
        kids.push(apply_at(a, c, path));
        path.pop();
    }
    match t {
        CanonicalTerm::Edge { id, reversed } => CanonicalTerm::Edge { id: id.clone(), reversed: *reversed ^ c.flips.contains(path) },
        CanonicalTerm::Par(_) => CanonicalTerm::Par(kids),
        CanonicalTerm::Ser(_) => match c.perms.get(path) {
            Some(p) => CanonicalTerm::Ser(p.iter().map(|&j| kids[j].clone()).collect()),
            None => CanonicalTerm::Ser(kids),
        },
        CanonicalTerm::Theta { skeleton, .. } => {
            let skeleton = if c.swaps.contains(path) { skeleton.swapped() } else { skeleton.clone() };
            CanonicalTerm::Theta { skeleton, args: kids }
        }
    }
}

pub fn apply_twist_choice(t: &CanonicalTerm, c: &TwistChoice) -> Result<CanonicalTerm> {
    check_choice(t, c)?;
    Ok(apply_at(t, c, &mut Vec::new()))
}

/// Number of terms in the twist set: 2^leaves times the product of k! over
/// series nodes of arity k times 2^(prime nodes).
pub fn nabla_count(t: &CanonicalTerm) -> u128 {
    let mut total: u128 = 1;
    for p in t.positions() {
        match t.at(&p).unwrap() {
            CanonicalTerm::Edge { .. } | CanonicalTerm::Theta { .. } => total *= 2,
            CanonicalTerm::Ser(a) => total *= (1..=a.len() as u128).product::<u128>(),
            CanonicalTerm::Par(_) => {}
        }
    }
    total
}

/// k-th permutation of 0..n in lexicographic order.
fn nth_permutation(n: usize, mut k: u128) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<u128> = vec![1; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i as u128;
    }
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let q = (k / fact[i]) as usize;
        k %= fact[i];
        out.push(pool.remove(q));
    }
    out
}

/// Stream of the twist set of a term, in mixed-radix order over (leaf flips,
/// series permutations, skeleton swaps), leaf flips most significant.
pub struct Nabla {
    term: CanonicalTerm,
    leaves: Vec<Vec<usize>>,
    series: Vec<(Vec<usize>, usize)>,
    thetas: Vec<Vec<usize>>,
    with_flips: bool,
    next: u128,
    total: u128,
}

impl Nabla {
    pub fn new(t: &CanonicalTerm) -> Self {
        Self::build(t, true)
    }

    /// The same stream without leaf reversals: one term per class of terms
    /// that differ only in edge directions.
    pub fn without_flips(t: &CanonicalTerm) -> Self {
        Self::build(t, false)
    }

    fn build(t: &CanonicalTerm, with_flips: bool) -> Self {
        let mut leaves = Vec::new();
        let mut series = Vec::new();
        let mut thetas = Vec::new();
        for p in t.positions() {
            match t.at(&p).unwrap() {
                CanonicalTerm::Edge { .. } => leaves.push(p),
                CanonicalTerm::Ser(a) => series.push((p, a.len())),
                CanonicalTerm::Theta { .. } => thetas.push(p),
                CanonicalTerm::Par(_) => {}
            }
        }
        let mut total: u128 = 1u128 << thetas.len();
        for &(_, k) in &series {
            total *= (1..=k as u128).product::<u128>();
        }
        if with_flips {
            total <<= leaves.len();
        }
        Nabla { term: t.clone(), leaves, series, thetas, with_flips, next: 0, total }
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn choice(&self, mut index: u128) -> TwistChoice {
        let mut c = TwistChoice::default();
        for p in self.thetas.iter().rev() {
            if index & 1 == 1 {
                c.swaps.insert(p.clone());
            }
            index >>= 1;
        }
        for (p, k) in self.series.iter().rev() {
            let f: u128 = (1..=*k as u128).product();
            c.perms.insert(p.clone(), nth_permutation(*k, index % f));
            index /= f;
        }
        if self.with_flips {
            for p in self.leaves.iter().rev() {
                if index & 1 == 1 {
                    c.flips.insert(p.clone());
                }
                index >>= 1;
            }
        }
        c
    }
}

impl Iterator for Nabla {
    type Item = CanonicalTerm;

    fn next(&mut self) -> Option<CanonicalTerm> {
        if self.next >= self.total {
            return None;
        }
        let c = self.choice(self.next);
        self.next += 1;
        Some(apply_at(&self.term, &c, &mut Vec::new()))
    }
}

pub fn nabla(t: &CanonicalTerm) -> Nabla {
    Nabla::new(t)
}

/// Rewires the ε-edges of a separated representation according to a choice
/// (positions as in the term read off the same factor tree).
pub fn twist_sep(s: &SepGraph, c: &TwistChoice) -> Result<SepGraph> {
    let node_at = |p: &[usize]| -> Result<usize> {
        let mut u = s.tree.root;
        for &i in p {
            u = *s.args[u].get(i).ok_or_else(|| Error::input(format!("position {p:?} does not exist")))?;
        }
        Ok(u)
    };
    let v = |x: usize, i: usize| crate::twodag::sep_vertex(&s.tree.nodes[x].id, i);
    let pair = |a: String, b: String| if a <= b { (a, b) } else { (b, a) };
    let mut out = s.clone();
    out.origin.clear();
    for p in &c.swaps {
        let x = node_at(p)?;
        if s.roles[x] != NodeRole::Theta {
            return Err(Error::input(format!("swap position {p:?} is not a prime node")));
        }
        let sons: BTreeSet<String> = s.tree.nodes[x].children.iter().flat_map(|&y| [v(y, 1), v(y, 2)]).collect();
        let mut next = BTreeSet::new();
        for (a, b) in &out.eps {
            let mut e = (a.clone(), b.clone());
            for i in 1..=2 {
                let (xi, xo) = (v(x, i), v(x, 3 - i));
                if *a == xi && sons.contains(b) {
                    e = pair(xo.clone(), b.clone());
                } else if *b == xi && sons.contains(a) {
                    e = pair(a.clone(), xo.clone());
                }
            }
            next.insert(e);
        }
        out.eps = next;
    }
    for (p, perm) in &c.perms {
        let x = node_at(p)?;
        let ys = &s.args[x];
        if s.roles[x] != NodeRole::Series || !is_permutation(perm, ys.len()) {
            return Err(Error::input(format!("bad permutation at {p:?}")));
        }
        let chain = |order: &[usize]| -> Vec<(String, String)> {
            let mut e = vec![pair(v(x, 1), v(order[0], 1))];
            for w in order.windows(2) {
                e.push(pair(v(w[0], 2), v(w[1], 1)));
            }
            e.push(pair(v(*order.last().unwrap(), 2), v(x, 2)));
            e
        };
        for e in chain(ys) {
            if !out.eps.remove(&e) {
                return Err(Error::validation(format!("series ε-edge {}-{} missing", e.0, e.1)));
            }
        }
        let permuted: Vec<usize> = perm.iter().map(|&j| ys[j]).collect();
        out.eps.extend(chain(&permuted));
    }
    for p in &c.flips {
        let x = node_at(p)?;
        if s.roles[x] != NodeRole::Edge {
            return Err(Error::input(format!("flip position {p:?} is not a leaf")));
        }
        let id = &s.tree.nodes[x].id;
        let e = out.solid.get_mut(id).ok_or_else(|| Error::validation(format!("leaf {id} has no solid edge")))?;
        *e = (e.1.clone(), e.0.clone());
    }
    Ok(out)
}

/// Graphs with the same cycle matroid as a 2-connected graph, as undirected
/// multigraphs, one per edge-identified isomorphism class. Stops after
/// `limit` graphs when a limit is given.
pub fn two_isomorphic_set(g: &MultiGraph, limit: Option<usize>) -> Result<Vec<MultiGraph>> {
    two_isomorphic_set_from(g, None, limit)
}

/// As [`two_isomorphic_set`], choosing the sources as the ends of `source_edge`
/// (default: the least edge id).
pub fn two_isomorphic_set_from(g: &MultiGraph, source_edge: Option<&str>, limit: Option<usize>) -> Result<Vec<MultiGraph>> {
    check_cap("2-isomorphism enumeration", g.m(), DEFAULT_FACTOR_CAP)?;
    if !g.is_2connected() {
        return Err(Error::precondition("2-isomorphism enumeration needs a 2-connected graph"));
    }
    if g.n() != g.without_isolated().n() {
        return Err(Error::precondition("the graph has isolated vertices"));
    }
    let id = match source_edge {
        Some(id) => id.to_string(),
        None => g.edge_ids().into_iter().next().unwrap(),
    };
    let e = g.edge_by_id(&id).ok_or_else(|| Error::input(format!("unknown edge {id}")))?;
    let two = TwoGraph::new(g.clone(), g.name(e.tail), g.name(e.head))?;
    let t = canonical_term(&two, DEFAULT_FACTOR_CAP)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    // Leaf reversals only change directions, which are quotiented out.
    for term in Nabla::without_flips(&t) {
        let h = eval_term(&term)?.graph.undirected();
        if seen.insert(incidence_key(&h)) {
            out.push(h);
            if limit.is_some_and(|l| out.len() >= l) {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(ids: &[&str]) -> MultiGraph {
        let n = ids.len();
        let edges: Vec<(String, String, String)> =
            ids.iter().enumerate().map(|(i, id)| (id.to_string(), format!("v{i}"), format!("v{}", (i + 1) % n))).collect();
        MultiGraph::undirected_from(edges).unwrap()
    }

    #[test]
    fn independence() {
        let g = cycle(&["a", "b", "c"]);
        assert!(matroid_indep(&g, Vec::<&str>::new()).unwrap());
        assert!(matroid_indep(&g, ["a", "b"]).unwrap());
        assert!(!matroid_indep(&g, ["a", "b", "c"]).unwrap());
        let bond = MultiGraph::undirected_from([("a", "x", "y"), ("b", "x", "y")]).unwrap();
        assert!(!matroid_indep(&bond, ["a", "b"]).unwrap());
    }

    #[test]
    fn matroid_equality_examples() {
        let g = MultiGraph::from_edges([("a", "x", "y"), ("b", "y", "z"), ("c", "z", "x")]).unwrap();
        let r = g.with_reversed(&BTreeSet::from(["b".to_string()]));
        assert!(matroid_equal(&g, &r, 16).unwrap());
        let f1 = MultiGraph::undirected_from([("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let f2 = MultiGraph::undirected_from([("a", "1", "2"), ("b", "3", "4")]).unwrap();
        assert!(matroid_equal(&f1, &f2, 16).unwrap());
        let c1 = cycle(&["a", "b", "c", "d"]);
        let c2 = cycle(&["a", "c", "b", "d"]);
        assert!(matroid_equal(&c1, &c2, 16).unwrap());
        let other = cycle(&["a", "b", "c", "x"]);
        assert!(matroid_equal(&c1, &other, 16).is_err());
    }

    #[test]
    fn c4_has_three_classes() {
        let out = two_isomorphic_set(&cycle(&["a", "b", "c", "d"]), None).unwrap();
        assert_eq!(out.len(), 3);
        let bond = MultiGraph::undirected_from([("a", "x", "y"), ("b", "x", "y")]).unwrap();
        assert_eq!(two_isomorphic_set(&bond, None).unwrap().len(), 1);
    }

    #[test]
    fn nabla_sizes() {
        let e = CanonicalTerm::edge("e");
        let all: Vec<String> = nabla(&e).map(|t| t.to_string()).collect();
        assert_eq!(all, ["e:e", "~e:e"]);
        let ser = CanonicalTerm::parse("ser(e:e,e:f)").unwrap();
        assert_eq!(nabla(&ser).count(), 8);
        assert_eq!(nabla_count(&ser), 8);
        let par = CanonicalTerm::parse("par(e:e,e:f)").unwrap();
        assert_eq!(nabla(&par).count(), 4);
        let distinct: BTreeSet<String> = nabla(&ser).map(|t| t.to_string()).collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn empty_choice_is_identity() {
        let t = CanonicalTerm::parse("par(e:a,ser(e:b,~e:c))").unwrap();
        assert_eq!(apply_twist_choice(&t, &TwistChoice::default()).unwrap(), t);
        let bad = TwistChoice { swaps: BTreeSet::from([vec![0]]), ..Default::default() };
        assert!(apply_twist_choice(&t, &bad).is_err());
    }

    #[test]
    fn twistings_of_small_graphs() {
        let c3 = MultiGraph::from_edges([("a", "x", "y"), ("b", "y", "z"), ("c", "z", "x")]).unwrap();
        let tw = twistings(&c3, 16).unwrap();
        for h in &tw {
            assert_eq!(incidence_key(&h.undirected()), incidence_key(&c3.undirected()));
        }
        let bond = MultiGraph::from_edges([("a", "x", "y"), ("b", "x", "y"), ("c", "x", "y")]).unwrap();
        for h in twistings(&bond, 16).unwrap() {
            assert_eq!(incidence_key(&h.undirected()), incidence_key(&bond.undirected()));
        }
    }
}
