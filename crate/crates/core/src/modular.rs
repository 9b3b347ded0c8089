//! Modular decomposition of simple digraphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::SimpleDigraph;
use crate::partitive::{bits, classify_node, full_mask, strong_members, tree_from_laminar, DecompTree, Mask, NodeKind, SetFamily};

pub const DEFAULT_MODULE_CAP: usize = 16;

/// Every vertex outside `m` sees all of `m` the same way, in both directions.
pub fn is_module(g: &SimpleDigraph, m: Mask) -> bool {
    if m == 0 {
        return true;
    }
    let first = m.trailing_zeros() as usize;
    for z in 0..g.n() {
        if m >> z & 1 == 1 {
            continue;
        }
        let out = g.has_arc(z, first);
        let inn = g.has_arc(first, z);
        for x in bits(m) {
            if g.has_arc(z, x) != out || g.has_arc(x, z) != inn {
                return false;
            }
        }
    }
    true
}

/// All nonempty modules, by exhaustive enumeration.
pub fn modules(g: &SimpleDigraph, cap: usize) -> Result<SetFamily> {
    check_cap("module enumeration", g.n(), cap.min(crate::partitive::MAX_GROUND))?;
    let all = full_mask(g.n());
    let members = (1..=all).filter(|&m| is_module(g, m));
    SetFamily::from_masks(g.names().to_vec(), members)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModKind {
    Leaf,
    /// Disjoint union of the sons.
    Parallel,
    /// Sons pairwise linked in both directions.
    Series,
    /// Sons in order, every arc going forward.
    Linear(Vec<usize>),
    /// Quotient graph on the sons (vertex names are the son node ids).
    Prime(SimpleDigraph),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularTree {
    pub tree: DecompTree,
    pub kinds: Vec<ModKind>,
}

fn representative(g: &SimpleDigraph, m: Mask) -> usize {
    bits(m).min_by(|&a, &b| g.name(a).cmp(g.name(b))).unwrap()
}

pub fn md_tree(g: &SimpleDigraph, cap: usize) -> Result<ModularTree> {
    if g.n() == 0 {
        return Err(Error::precondition("the graph has no vertex"));
    }
    let family = modules(g, cap)?;
    let mut tree = tree_from_laminar(&strong_members(&family))?;
    let mems = tree.all_members();
    let mut kinds = Vec::with_capacity(tree.len());
    for u in 0..tree.len() {
        let kind = classify_node(&family, &tree, u)?;
        let children = tree.nodes[u].children.clone();
        let reps: Vec<usize> = children.iter().map(|&c| representative(g, mems[c])).collect();
        let mk = match &kind {
            NodeKind::Leaf => ModKind::Leaf,
            NodeKind::Complete => {
                let fwd = g.has_arc(reps[0], reps[1]);
                let bwd = g.has_arc(reps[1], reps[0]);
                match (fwd, bwd) {
                    (false, false) => ModKind::Parallel,
                    (true, true) => ModKind::Series,
                    // Two sons linked one way only.
                    (true, false) => ModKind::Linear(children.clone()),
                    (false, true) => ModKind::Linear(vec![children[1], children[0]]),
                }
            }
            NodeKind::Linear(order) => {
                let a = reps[children.iter().position(|&c| c == order[0]).unwrap()];
                let b = reps[children.iter().position(|&c| c == order[1]).unwrap()];
                if g.has_arc(a, b) {
                    ModKind::Linear(order.clone())
                } else {
                    ModKind::Linear(order.iter().rev().copied().collect())
                }
            }
            NodeKind::Prime => {
                let mut q = SimpleDigraph::with_vertices(children.iter().map(|&c| tree.nodes[c].id.clone()));
                for i in 0..reps.len() {
                    for j in 0..reps.len() {
                        if i != j && g.has_arc(reps[i], reps[j]) {
                            q.add_arc(i, j);
                        }
                    }
                }
                ModKind::Prime(q)
            }
        };
        let stored = match &mk {
            ModKind::Linear(o) => NodeKind::Linear(o.clone()),
            _ => kind,
        };
        tree.nodes[u].kind = Some(stored);
        kinds.push(mk);
    }
    Ok(ModularTree { tree, kinds })
}

/// Graph G[H/u]: vertex u replaced by a copy of H. Vertices of H whose
/// names clash with G are renamed with a `#k` suffix.
pub fn substitute(g: &SimpleDigraph, u: &str, h: &SimpleDigraph) -> Result<SimpleDigraph> {
    let ui = g.index_of(u).ok_or_else(|| Error::input(format!("unknown vertex {u}")))?;
    let taken: BTreeSet<String> = g.names().iter().filter(|n| n.as_str() != u).cloned().collect();
    let fresh = |name: &str| -> String {
        if !taken.contains(name) {
            return name.to_string();
        }
        (1..).map(|k| format!("{name}#{k}")).find(|c| !taken.contains(c)).unwrap()
    };
    let hn: Vec<String> = h.names().iter().map(|s| fresh(s)).collect();
    let mut r = SimpleDigraph::new();
    for i in 0..g.n() {
        if i != ui {
            r.add_vertex(g.name(i));
        }
    }
    for name in &hn {
        r.add_vertex(name);
    }
    for (a, b) in g.edges() {
        if a != ui && b != ui {
            r.add_edge(g.name(a), g.name(b))?;
        }
    }
    for (a, b) in h.edges() {
        r.add_edge(&hn[a], &hn[b])?;
    }
    for x in 0..g.n() {
        if x == ui {
            continue;
        }
        for y in &hn {
            if g.has_arc(x, ui) {
                r.add_edge(g.name(x), y)?;
            }
            if g.has_arc(ui, x) {
                r.add_edge(y, g.name(x))?;
            }
        }
    }
    Ok(r)
}

pub const LABEL_PARALLEL: &str = "par";
pub const LABEL_SERIES: &str = "ser";
pub const LABEL_LINEAR: &str = "lin";
pub const LABEL_PRIME: &str = "prime";

/// Graph form of a modular decomposition: the tree (son arcs), typed internal
/// nodes, a path of arcs along the sons of every linear node and a copy of the
/// quotient on the sons of every prime node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdecGraph {
    pub graph: SimpleDigraph,
    pub son: BTreeSet<(String, String)>,
}

impl GdecGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}

pub fn gdec(g: &SimpleDigraph, cap: usize) -> Result<GdecGraph> {
    let md = md_tree(g, cap)?;
    let t = &md.tree;
    let mut d = SimpleDigraph::new();
    let mut son = BTreeSet::new();
    for u in t.preorder() {
        let id = t.nodes[u].id.clone();
        let i = d.add_vertex(&id);
        let label = match &md.kinds[u] {
            ModKind::Leaf => None,
            ModKind::Parallel => Some(LABEL_PARALLEL),
            ModKind::Series => Some(LABEL_SERIES),
            ModKind::Linear(_) => Some(LABEL_LINEAR),
            ModKind::Prime(_) => Some(LABEL_PRIME),
        };
        d.set_label(i, label.map(str::to_string));
    }
    if d.n() != t.len() {
        return Err(Error::validation("tree node identifiers collide"));
    }
    for u in 0..t.len() {
        let id = &t.nodes[u].id;
        for &c in &t.nodes[u].children {
            d.add_edge(id, &t.nodes[c].id)?;
            son.insert((id.clone(), t.nodes[c].id.clone()));
        }
        match &md.kinds[u] {
            ModKind::Linear(order) => {
                for w in order.windows(2) {
                    d.add_edge(&t.nodes[w[0]].id, &t.nodes[w[1]].id)?;
                }
            }
            ModKind::Prime(q) => {
                for (a, b) in q.edges() {
                    d.add_edge(q.name(a), q.name(b))?;
                }
            }
            _ => {}
        }
    }
    Ok(GdecGraph { graph: d, son })
}

/// Rebuilds the decomposed graph from its graph form.
pub fn from_gdec(dg: &GdecGraph) -> Result<SimpleDigraph> {
    let d = &dg.graph;
    let n = d.n();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in &dg.son {
        let (ai, bi) = match (d.index_of(a), d.index_of(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::validation(format!("son arc {a}->{b} uses an unknown node"))),
        };
        if !d.has_arc(ai, bi) {
            return Err(Error::validation(format!("son arc {a}->{b} is missing from the graph")));
        }
        if parent[bi].replace(ai).is_some() {
            return Err(Error::validation(format!("node {b} has two parents")));
        }
        children[ai].push(bi);
    }
    let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
    if roots.len() != 1 {
        return Err(Error::validation(format!("son arcs must form a rooted tree, found {} roots", roots.len())));
    }
    // Leaves of the tree are the vertices of the graph.
    let mut order = vec![roots[0]];
    let mut k = 0;
    while k < order.len() {
        let u = order[k];
        k += 1;
        order.extend(children[u].iter().copied());
    }
    if order.len() != n {
        return Err(Error::validation("son arcs do not reach every node"));
    }
    for v in 0..n {
        let leaf = children[v].is_empty();
        if leaf != d.label(v).is_none() {
            return Err(Error::validation(format!("node {} has a label inconsistent with its outdegree", d.name(v))));
        }
    }
    let mut leaves_below: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &u in order.iter().rev() {
        if children[u].is_empty() {
            leaves_below[u].push(u);
        } else {
            let mut all = Vec::new();
            for &c in &children[u] {
                all.extend(leaves_below[c].iter().copied());
            }
            leaves_below[u] = all;
        }
    }
    // Arcs that are not son arcs must join two sons of the same node.
    for (a, b) in d.edges() {
        let pair = (d.name(a).to_string(), d.name(b).to_string());
        if dg.son.contains(&pair) {
            continue;
        }
        if parent[a].is_none() || parent[a] != parent[b] {
            return Err(Error::validation(format!("arc {}->{} joins non-siblings", pair.0, pair.1)));
        }
    }
    let leaf_names: Vec<usize> = (0..n).filter(|&v| children[v].is_empty()).collect();
    let mut g = SimpleDigraph::with_vertices(leaf_names.iter().map(|&v| d.name(v)));
    let link = |g: &mut SimpleDigraph, x: usize, y: usize| {
        for &p in &leaves_below[x] {
            for &q in &leaves_below[y] {
                let pi = g.index_of(d.name(p)).unwrap();
                let qi = g.index_of(d.name(q)).unwrap();
                g.add_arc(pi, qi);
            }
        }
    };
    for u in 0..n {
        let sons = &children[u];
        if sons.is_empty() {
            continue;
        }
        let sib = |x: usize, y: usize| d.has_arc(x, y);
        match d.label(u).unwrap() {
            LABEL_PARALLEL | LABEL_SERIES => {
                if sons.len() < 2 {
                    return Err(Error::validation(format!("node {} has fewer than two sons", d.name(u))));
                }
                for &x in sons {
                    for &y in sons {
                        if x != y && sib(x, y) {
                            return Err(Error::validation(format!("complete node {} carries sibling arcs", d.name(u))));
                        }
                    }
                }
                if d.label(u) == Some(LABEL_SERIES) {
                    for &x in sons {
                        for &y in sons {
                            if x != y {
                                link(&mut g, x, y);
                            }
                        }
                    }
                }
            }
            LABEL_LINEAR => {
                let succ: BTreeMap<usize, Vec<usize>> =
                    sons.iter().map(|&x| (x, sons.iter().copied().filter(|&y| y != x && sib(x, y)).collect())).collect();
                let arcs: usize = succ.values().map(|v| v.len()).sum();
                let starts: Vec<usize> =
                    sons.iter().copied().filter(|&x| !sons.iter().any(|&y| y != x && sib(y, x))).collect();
                if arcs != sons.len() - 1 || starts.len() != 1 {
                    return Err(Error::validation(format!("linear node {} sons do not carry a path", d.name(u))));
                }
                let mut path = vec![starts[0]];
                while let Some(next) = succ[path.last().unwrap()].first() {
                    path.push(*next);
                    if path.len() > sons.len() {
                        break;
                    }
                }
                if path.len() != sons.len() {
                    return Err(Error::validation(format!("linear node {} sons do not carry a path", d.name(u))));
                }
                for i in 0..path.len() {
                    for j in i + 1..path.len() {
                        link(&mut g, path[i], path[j]);
                    }
                }
            }
            LABEL_PRIME => {
                if sons.len() < 3 {
                    return Err(Error::validation(format!("prime node {} has fewer than three sons", d.name(u))));
                }
                for &x in sons {
                    for &y in sons {
                        if x != y && sib(x, y) {
                            link(&mut g, x, y);
                        }
                    }
                }
            }
            other => return Err(Error::validation(format!("unknown node type {other}"))),
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> SimpleDigraph {
        SimpleDigraph::undirected_from([("a", "b"), ("b", "c"), ("c", "d")]).unwrap()
    }

    fn transitive_tournament(n: usize) -> SimpleDigraph {
        let mut g = SimpleDigraph::with_vertices((0..n).map(|i| format!("t{i}")));
        for i in 0..n {
            for j in i + 1..n {
                g.add_arc(i, j);
            }
        }
        g
    }

    #[test]
    fn module_examples() {
        let g = p4();
        assert!(is_module(&g, 0b0001));
        assert!(is_module(&g, 0b1111));
        assert!(!is_module(&g, 0b0110));
        let fam = modules(&g, 16).unwrap();
        assert_eq!(fam.members.len(), 5);
    }

    #[test]
    fn clique_and_independent_sets() {
        let k3 = SimpleDigraph::undirected_from([("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(modules(&k3, 16).unwrap().members.len(), 7);
        let i3 = SimpleDigraph::with_vertices(["a", "b", "c"]);
        assert_eq!(modules(&i3, 16).unwrap().members.len(), 7);
    }

    #[test]
    fn tournament_is_linear() {
        let g = transitive_tournament(4);
        let md = md_tree(&g, 16).unwrap();
        let root = md.tree.root;
        let ModKind::Linear(order) = &md.kinds[root] else { panic!("expected a linear root") };
        let ids: Vec<&str> = order.iter().map(|&c| md.tree.nodes[c].id.as_str()).collect();
        assert_eq!(ids, ["t0", "t1", "t2", "t3"]);
    }

    #[test]
    fn two_cliques_side_by_side() {
        let g = SimpleDigraph::undirected_from([("a", "b"), ("c", "d")]).unwrap();
        let md = md_tree(&g, 16).unwrap();
        assert_eq!(md.kinds[md.tree.root], ModKind::Parallel);
        for &c in &md.tree.nodes[md.tree.root].children {
            assert_eq!(md.kinds[c], ModKind::Series);
        }
    }

    #[test]
    fn p4_is_prime() {
        let md = md_tree(&p4(), 16).unwrap();
        let ModKind::Prime(q) = &md.kinds[md.tree.root] else { panic!("expected prime") };
        assert!(crate::iso::isomorphic_digraphs(q, &p4(), None).unwrap().is_some());
    }

    #[test]
    fn gdec_counts_for_tournaments() {
        for n in 3..=8 {
            let d = gdec(&transitive_tournament(n), 16).unwrap();
            assert_eq!((d.vertex_count(), d.edge_count()), (n + 1, 2 * n - 1));
        }
        let single = SimpleDigraph::with_vertices(["x"]);
        let d = gdec(&single, 16).unwrap();
        assert_eq!((d.vertex_count(), d.edge_count()), (1, 0));
        assert_eq!(from_gdec(&d).unwrap(), single);
    }

    #[test]
    fn substitution_examples() {
        let g = p4();
        let w = SimpleDigraph::with_vertices(["w"]);
        let r = substitute(&g, "b", &w).unwrap();
        assert_eq!(r, g.rename(|s| if s == "b" { "w".into() } else { s.into() }));
        let k = SimpleDigraph::with_vertices(["u", "v"]);
        let x = SimpleDigraph::undirected_from([("x1", "x2")]).unwrap();
        let y = SimpleDigraph::undirected_from([("y1", "y2")]).unwrap();
        let r = substitute(&substitute(&k, "u", &x).unwrap(), "v", &y).unwrap();
        assert_eq!(r.edge_count(), 4);
        assert!(!r.is_connected());
        assert!(substitute(&g, "zz", &w).is_err());
    }

    #[test]
    fn malformed_gdec_is_rejected() {
        let mut d = gdec(&p4(), 16).unwrap();
        let leaf = d.graph.index_of("a").unwrap();
        d.graph.set_label(leaf, Some("par".into()));
        assert!(matches!(from_gdec(&d), Err(Error::Validation(_))));
    }
}
