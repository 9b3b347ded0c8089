//! 2-separations of 2-connected graphs and the decomposition into bonds,
//! cycles and 3-connected pieces.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bipartition::{bip_overlap, BipartitionFamily};
use crate::error::{check_cap, Error, Result};
use crate::graph::MultiGraph;
use crate::iso::{find_isomorphism, ColoredGraph, Palette, DEFAULT_ISO_CAP};
use crate::partitive::{bits, full_mask, Mask};

pub const DEFAULT_SEPARATION_CAP: usize = 14;

/// Vertices touched by edges on both sides.
fn boundary(g: &MultiGraph, a: Mask) -> Vec<usize> {
    let full = full_mask(g.m());
    let touch = |m: Mask| {
        let mut s = vec![false; g.n()];
        for k in bits(m) {
            s[g.edge(k).tail] = true;
            s[g.edge(k).head] = true;
        }
        s
    };
    let (ta, tb) = (touch(a), touch(full & !a));
    (0..g.n()).filter(|&v| ta[v] && tb[v]).collect()
}

/// Every 2-separation, as the edge-position block holding edge 0.
pub fn two_separations(g: &MultiGraph, cap: usize) -> Result<Vec<Mask>> {
    let m = g.m();
    check_cap("edge set", m, cap)?;
    if m < 4 {
        return Ok(vec![]);
    }
    let full = full_mask(m);
    let mut out = Vec::new();
    // Edge 0 is always on the first side.
    for rest in 0..(1u64 << (m - 1)) {
        let a = 1 | rest << 1;
        let b = full & !a;
        if a.count_ones() < 2 || b.count_ones() < 2 {
            continue;
        }
        if boundary(g, a).len() == 2 {
            out.push(a);
        }
    }
    Ok(out)
}

/// The 2-separations as a bipartition family over edge ids.
pub fn separation_family(g: &MultiGraph, cap: usize) -> Result<BipartitionFamily> {
    let mut b = BipartitionFamily::new(g.edges().iter().map(|e| e.id.clone()).collect())?;
    for a in two_separations(g, cap)? {
        b.insert(a)?;
    }
    Ok(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Bond,
    Cycle,
    ThreeConnected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TutteComponent {
    pub kind: ComponentKind,
    pub graph: MultiGraph,
    /// Ids of the virtual edges in this component.
    pub markers: BTreeSet<String>,
}

impl TutteComponent {
    pub fn real_edge_ids(&self) -> BTreeSet<String> {
        self.graph.edge_ids().difference(&self.markers).cloned().collect()
    }
}

/// Pair of virtual edges glued together, with the components holding them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerLink {
    pub left: String,
    pub right: String,
    pub left_component: usize,
    pub right_component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TutteDecomposition {
    pub components: Vec<TutteComponent>,
    pub links: Vec<MarkerLink>,
}

fn kind_of(g: &MultiGraph) -> ComponentKind {
    if g.n() == 2 {
        ComponentKind::Bond
    } else if (0..g.n()).all(|v| g.degree(v) == 2) {
        ComponentKind::Cycle
    } else {
        ComponentKind::ThreeConnected
    }
}

fn marker_prefix(g: &MultiGraph) -> String {
    let mut p = "m".to_string();
    let clash = |p: &str| {
        g.edges().iter().any(|e| {
            e.id.strip_prefix(p)
                .and_then(|r| r.split_once('.'))
                .is_some_and(|(k, s)| k.chars().all(|c| c.is_ascii_digit()) && (s == "1" || s == "2"))
        })
    };
    while clash(&p) {
        p.push('m');
    }
    p
}

/// Separations of `g` overlapping no other separation.
fn good_separations(g: &MultiGraph, cap: usize) -> Result<Vec<Mask>> {
    let seps = two_separations(g, cap)?;
    let full = full_mask(g.m());
    Ok(seps.iter().copied().filter(|&p| !seps.iter().any(|&q| bip_overlap(full, p, q))).collect())
}

/// Splits along good 2-separations until none is left. With `seed`, the
/// component and separation are chosen at random at every step.
pub fn tutte_decompose_with(g: &MultiGraph, cap: usize, seed: Option<u64>) -> Result<TutteDecomposition> {
    check_cap("edge set", g.m(), cap)?;
    let base = g.undirected().without_isolated();
    if !base.is_2connected() {
        return Err(Error::precondition("graph is not 2-connected"));
    }
    let prefix = marker_prefix(g);
    let mut rng = seed.map(crate::gen::rng);
    let mut done: Vec<(MultiGraph, BTreeSet<String>)> = Vec::new();
    let mut todo: Vec<(MultiGraph, BTreeSet<String>)> = vec![(g.clone(), BTreeSet::new())];
    let mut next_marker = 1usize;
    while !todo.is_empty() {
        let i = match rng.as_mut() {
            Some(r) => r.gen_range(0..todo.len()),
            None => 0,
        };
        let (c, marks) = todo.swap_remove(i);
        if kind_of(&c) != ComponentKind::ThreeConnected {
            done.push((c, marks));
            continue;
        }
        let good = good_separations(&c.undirected(), cap)?;
        if good.is_empty() {
            if !two_separations(&c, cap)?.is_empty() {
                return Err(Error::validation("component with only crossing 2-separations is neither a bond nor a cycle"));
            }
            done.push((c, marks));
            continue;
        }
        let a = match rng.as_mut() {
            Some(r) => good[r.gen_range(0..good.len())],
            None => good[0],
        };
        let bd = boundary(&c, a);
        let (u, v) = (c.name(bd[0]).to_string(), c.name(bd[1]).to_string());
        let full = full_mask(c.m());
        for (side, tag) in [(a, "1"), (full & !a, "2")] {
            let keep: BTreeSet<usize> = bits(side).collect();
            let mut part = c.edge_induced_by_positions(&keep);
            let id = format!("{prefix}{next_marker}.{tag}");
            part.add_edge(&id, &u, &v, false)?;
            let mut pm: BTreeSet<String> = marks.iter().filter(|m| part.edge_pos(m).is_some()).cloned().collect();
            pm.insert(id);
            todo.push((part, pm));
        }
        next_marker += 1;
    }
    done.sort_by_key(|(c, _)| c.edges().iter().map(|e| e.id.clone()).min());
    let components: Vec<TutteComponent> =
        done.into_iter().map(|(graph, markers)| TutteComponent { kind: kind_of(&graph), graph, markers }).collect();
    let links = build_links(&components)?;
    Ok(TutteDecomposition { components, links })
}

pub fn tutte_decompose(g: &MultiGraph, cap: usize) -> Result<TutteDecomposition> {
    tutte_decompose_with(g, cap, None)
}

fn partner(id: &str) -> Option<String> {
    let (k, s) = id.rsplit_once('.')?;
    match s {
        "1" => Some(format!("{k}.2")),
        "2" => Some(format!("{k}.1")),
        _ => None,
    }
}

fn build_links(components: &[TutteComponent]) -> Result<Vec<MarkerLink>> {
    let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, c) in components.iter().enumerate() {
        for m in &c.markers {
            if owner.insert(m, i).is_some() {
                return Err(Error::validation(format!("virtual edge {m} appears twice")));
            }
            if c.graph.edge_pos(m).is_none() {
                return Err(Error::validation(format!("virtual edge {m} is missing from its component")));
            }
        }
    }
    let mut links = Vec::new();
    for (&m, &i) in &owner {
        let p = partner(m).ok_or_else(|| Error::validation(format!("virtual edge {m} has no partner name")))?;
        let j = *owner.get(p.as_str()).ok_or_else(|| Error::validation(format!("virtual edge {m} is unmatched")))?;
        if i == j {
            return Err(Error::validation(format!("virtual edge {m} is matched inside one component")));
        }
        if m.ends_with(".1") {
            links.push(MarkerLink { left: m.to_string(), right: p, left_component: i, right_component: j });
        }
    }
    Ok(links)
}

fn ends(g: &MultiGraph, id: &str) -> BTreeSet<String> {
    let e = g.edge_by_id(id).expect("marker present");
    BTreeSet::from([g.name(e.tail).to_string(), g.name(e.head).to_string()])
}

/// Glues the components back along matched virtual edges.
pub fn tutte_eval(d: &TutteDecomposition) -> Result<MultiGraph> {
    let links = build_links(&d.components)?;
    for l in &links {
        let a = ends(&d.components[l.left_component].graph, &l.left);
        let b = ends(&d.components[l.right_component].graph, &l.right);
        if a != b {
            return Err(Error::validation(format!("virtual edges {} and {} join different vertices", l.left, l.right)));
        }
    }
    let mut g = MultiGraph::new();
    for c in &d.components {
        for e in c.graph.edges() {
            if c.markers.contains(&e.id) {
                continue;
            }
            if g.edge_pos(&e.id).is_some() {
                return Err(Error::validation(format!("edge {} appears in two components", e.id)));
            }
            g.add_edge(&e.id, c.graph.name(e.tail), c.graph.name(e.head), e.directed)?;
        }
    }
    Ok(g)
}

/// Same components (kind, vertices, real edges) glued in the same pattern,
/// regardless of virtual edge names.
pub fn same_decomposition(a: &TutteDecomposition, b: &TutteDecomposition) -> Result<bool> {
    if a.components.len() != b.components.len() || a.links.len() != b.links.len() {
        return Ok(false);
    }
    let mut pal = Palette::new();
    let mut build = |d: &TutteDecomposition| {
        let mut cg = ColoredGraph::new(d.components.len());
        for (i, c) in d.components.iter().enumerate() {
            let real: Vec<_> = c.graph.edge_records().into_iter().filter(|r| !c.markers.contains(&r.0)).collect();
            let key = format!("{:?}|{:?}|{:?}", c.kind, c.graph.vertex_set(), real);
            cg.vcolor[i] = pal.color(&key);
        }
        for l in &d.links {
            cg.add_edge(l.left_component, l.right_component, 1);
        }
        cg
    };
    let (ga, gb) = (build(a), build(b));
    Ok(find_isomorphism(&ga, &gb, DEFAULT_ISO_CAP.max(a.components.len()))?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> MultiGraph {
        let mut g = MultiGraph::new();
        for i in 0..n {
            g.add_edge(&format!("e{i}"), &format!("v{i}"), &format!("v{}", (i + 1) % n), false).unwrap();
        }
        g
    }

    fn k4() -> MultiGraph {
        MultiGraph::undirected_from([("ab", "a", "b"), ("ac", "a", "c"), ("ad", "a", "d"), ("bc", "b", "c"), ("bd", "b", "d"), ("cd", "c", "d")])
            .unwrap()
    }

    fn kinds(d: &TutteDecomposition) -> Vec<ComponentKind> {
        let mut k: Vec<_> = d.components.iter().map(|c| c.kind).collect();
        k.sort();
        k
    }

    #[test]
    fn cycle_is_one_component() {
        let g = cycle(5);
        assert_eq!(two_separations(&g, 14).unwrap().len(), 5 * 4 / 2 - 5);
        let d = tutte_decompose(&g, 14).unwrap();
        assert_eq!(kinds(&d), vec![ComponentKind::Cycle]);
        assert_eq!(tutte_eval(&d).unwrap(), g);
    }

    #[test]
    fn k4_is_three_connected() {
        let g = k4();
        assert!(two_separations(&g, 14).unwrap().is_empty());
        let d = tutte_decompose(&g, 14).unwrap();
        assert_eq!(kinds(&d), vec![ComponentKind::ThreeConnected]);
    }

    #[test]
    fn k4_minus_edge() {
        let g = k4().without_edge("cd");
        let d = tutte_decompose(&g, 14).unwrap();
        assert_eq!(kinds(&d), vec![ComponentKind::Bond, ComponentKind::Cycle, ComponentKind::Cycle]);
        assert_eq!(d.links.len(), 2);
        assert_eq!(tutte_eval(&d).unwrap(), g);
        let bond = d.components.iter().find(|c| c.kind == ComponentKind::Bond).unwrap();
        assert_eq!(bond.real_edge_ids(), BTreeSet::from(["ab".to_string()]));
    }

    #[test]
    fn random_orders_agree() {
        let mut r = crate::gen::rng(7);
        for _ in 0..10 {
            let g = crate::gen::random_two_connected(&mut r, 9);
            let d0 = tutte_decompose(&g, 14).unwrap();
            for s in 0..4 {
                let d = tutte_decompose_with(&g, 14, Some(s)).unwrap();
                assert!(same_decomposition(&d0, &d).unwrap());
                assert_eq!(tutte_eval(&d).unwrap(), g);
            }
        }
    }

    #[test]
    fn marker_names_avoid_real_ids() {
        let mut g = cycle(3);
        g.add_edge("m1.1", "v0", "v1", false).unwrap();
        g.add_edge("x", "v0", "v1", false).unwrap();
        let d = tutte_decompose(&g, 14).unwrap();
        assert!(d.links.iter().all(|l| l.left.starts_with("mm")));
        assert_eq!(tutte_eval(&d).unwrap(), g);
    }
}
