//! Seeded random instance generators used by tests and by the CLI self-checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;

use crate::graph::{MultiGraph, SimpleDigraph, TwoGraph};
use crate::partitive::{full_mask, Mask, SetFamily, TreeNode, DecompTree};

pub type TestRng = StdRng;

pub fn rng(seed: u64) -> TestRng {
    StdRng::seed_from_u64(seed)
}

pub fn vertex_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn random_digraph(rng: &mut TestRng, n: usize, p: f64) -> SimpleDigraph {
    let names = vertex_names(n);
    let mut g = SimpleDigraph::with_vertices(&names);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                g.add_arc(u, v);
            }
        }
    }
    g
}

pub fn random_undirected(rng: &mut TestRng, n: usize, p: f64) -> SimpleDigraph {
    let names = vertex_names(n);
    let mut g = SimpleDigraph::with_vertices(&names);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_arc(u, v);
                g.add_arc(v, u);
            }
        }
    }
    g
}

/// Random acyclic digraph whose arcs follow the vertex order.
pub fn random_dag(rng: &mut TestRng, n: usize, p: f64) -> SimpleDigraph {
    let names = vertex_names(n);
    let mut g = SimpleDigraph::with_vertices(&names);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_arc(perm[i], perm[j]);
            }
        }
    }
    g
}

pub fn random_connected_undirected(rng: &mut TestRng, n: usize, p: f64) -> SimpleDigraph {
    loop {
        let g = random_undirected(rng, n, p);
        if g.is_connected() {
            return g;
        }
    }
}

pub fn random_strongly_connected(rng: &mut TestRng, n: usize, p: f64) -> SimpleDigraph {
    loop {
        let g = random_digraph(rng, n, p);
        if g.is_strongly_connected() {
            return g;
        }
    }
}

/// Graph built by nested substitutions, so that it has nontrivial modules.
pub fn random_modular_digraph(rng: &mut TestRng, n: usize) -> SimpleDigraph {
    fn build(rng: &mut TestRng, verts: &[usize], g: &mut SimpleDigraph) {
        if verts.len() <= 1 {
            return;
        }
        let k = rng.gen_range(2..=verts.len().min(4));
        let mut parts: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, &v) in verts.iter().enumerate() {
            let p = if i < k { i } else { rng.gen_range(0..k) };
            parts[p].push(v);
        }
        for p in &parts {
            build(rng, p, g);
        }
        let pattern = rng.gen_range(0..4);
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let arc = match pattern {
                    0 => false,
                    1 => true,
                    2 => i < j,
                    _ => rng.gen_bool(0.5),
                };
                if arc {
                    for &x in &parts[i] {
                        for &y in &parts[j] {
                            g.add_arc(x, y);
                        }
                    }
                }
            }
        }
    }
    let mut g = SimpleDigraph::with_vertices(vertex_names(n));
    let verts: Vec<usize> = (0..n).collect();
    build(rng, &verts, &mut g);
    g
}

/// Random overlap-free family containing the ground set and all singletons,
/// built by recursive partitioning.
pub fn random_laminar(rng: &mut TestRng, n: usize) -> SetFamily {
    fn split(rng: &mut TestRng, m: Mask, out: &mut Vec<Mask>) {
        out.push(m);
        let elems: Vec<usize> = crate::partitive::bits(m).collect();
        if elems.len() <= 1 {
            return;
        }
        let k = rng.gen_range(2..=elems.len().min(4));
        let mut parts = vec![0u64; k];
        for (i, &e) in elems.iter().enumerate() {
            let p = if i < k { i } else { rng.gen_range(0..k) };
            parts[p] |= 1 << e;
        }
        for p in parts {
            split(rng, p, out);
        }
    }
    let mut out = Vec::new();
    split(rng, full_mask(n), &mut out);
    SetFamily::from_masks(vertex_names(n), out).unwrap()
}

/// Random rooted tree with no node of outdegree one; leaves carry the
/// singleton boxes.
pub fn random_proper_tree(rng: &mut TestRng, leaves: usize) -> DecompTree {
    let ground = vertex_names(leaves);
    let mut nodes: Vec<TreeNode> = (0..leaves)
        .map(|i| TreeNode { id: ground[i].clone(), parent: None, children: vec![], bx: 1 << i, kind: None })
        .collect();
    let mut roots: Vec<usize> = (0..leaves).collect();
    while roots.len() > 1 {
        roots.shuffle(rng);
        let k = rng.gen_range(2..=roots.len().min(4));
        let kids: Vec<usize> = roots.drain(..k).collect();
        let id = nodes.len();
        nodes.push(TreeNode { id: format!("n{id}"), parent: None, children: kids.clone(), bx: 0, kind: None });
        for c in kids {
            nodes[c].parent = Some(id);
        }
        roots.push(id);
    }
    DecompTree { ground, root: roots[0], nodes }
}

/// Random 2-dag with about `m` edges: series/parallel growth mixed with
/// forward chords between comparable-free vertex pairs.
pub fn random_two_dag(rng: &mut TestRng, m: usize) -> TwoGraph {
    // Vertices carry a position in a topological order; arcs go forward.
    let mut pos: Vec<f64> = vec![0.0, 1.0];
    let mut arcs: Vec<(usize, usize)> = vec![(0, 1)];
    while arcs.len() < m {
        match rng.gen_range(0..3) {
            0 => {
                let k = rng.gen_range(0..arcs.len());
                let (u, v) = arcs[k];
                let w = pos.len();
                pos.push((pos[u] + pos[v]) / 2.0 + rng.gen_range(-1e-3..1e-3) * (pos[v] - pos[u]));
                arcs[k] = (u, w);
                arcs.push((w, v));
            }
            1 => {
                let k = rng.gen_range(0..arcs.len());
                arcs.push(arcs[k]);
            }
            _ => {
                let n = pos.len();
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v && u != 1 && v != 0 && pos[u] < pos[v] {
                    arcs.push((u, v));
                }
            }
        }
    }
    let mut g = MultiGraph::new();
    for i in 0..pos.len() {
        g.add_vertex(&format!("v{i}"));
    }
    for (k, (u, v)) in arcs.iter().enumerate() {
        g.add_edge(&format!("e{k}"), &format!("v{u}"), &format!("v{v}"), true).unwrap();
    }
    TwoGraph::new(g, "v0", "v1").unwrap()
}

/// Random 2-connected multigraph with exactly `m` undirected edges, grown by
/// open ears from a cycle or a bond.
pub fn random_two_connected(rng: &mut TestRng, m: usize) -> MultiGraph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut n;
    let start = rng.gen_range(2..=m.clamp(2, 4));
    if start == 2 || m < 3 {
        edges.push((0, 1));
        if m >= 2 {
            edges.push((0, 1));
        }
        n = 2;
    } else {
        for i in 0..start {
            edges.push((i, (i + 1) % start));
        }
        n = start;
    }
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n);
        while v == u {
            v = rng.gen_range(0..n);
        }
        let room = m - edges.len();
        let len = rng.gen_range(1..=room.min(3));
        let mut prev = u;
        for i in 0..len {
            let next = if i + 1 == len {
                v
            } else {
                n += 1;
                n - 1
            };
            edges.push((prev, next));
            prev = next;
        }
    }
    let mut g = MultiGraph::new();
    for (k, (u, v)) in edges.iter().enumerate() {
        g.add_edge(&format!("e{k}"), &format!("v{u}"), &format!("v{v}"), false).unwrap();
    }
    g
}
