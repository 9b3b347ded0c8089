use std::collections::{BTreeMap, BTreeSet};

use graphdec::cliquewidth::CwExpression as E;
use graphdec::cliquewidth::*;
use graphdec::gen;
use graphdec::iso::isomorphic_digraphs;
use graphdec::modular::{md_tree, substitute, ModKind};
use graphdec::split::{ctt_graph, split_decompose, CttSpec, SDGraph, DEFAULT_SPLIT_CAP};
use graphdec::SimpleDigraph;

fn all_specs(n: usize) -> Vec<CttSpec> {
    (0..1u32 << (n - 1))
        .map(|cuts| {
            let mut h = vec![0];
            h.extend((1..n).filter(|i| cuts >> (i - 1) & 1 == 1));
            h.push(n);
            CttSpec::new(n, h).unwrap()
        })
        .collect()
}

#[test]
fn ctt_constructions_exhaustive() {
    for n in 3..=8 {
        for spec in all_specs(n) {
            let e = ctt_expr(&spec);
            assert_eq!(eval_cw(&e).unwrap().graph, ctt_graph(&spec), "{spec:?}");
            let used = e.labels();
            assert!(used.len() <= 4);
            assert!(used.iter().all(|l| ["1", "2", "3", BOT].contains(&l.as_str())));
            if spec.k() == 1 {
                assert!(used.len() <= 3, "{spec:?}");
            }
        }
    }
    // The directed circuit is the CTT with every vertex a hinge.
    let c5 = SimpleDigraph::from_arcs((0..5).map(|i| (format!("v{i}"), format!("v{}", (i + 1) % 5)))).unwrap();
    assert_eq!(eval_cw(&ctt_expr(&CttSpec::new(5, (0..=5).collect()).unwrap())).unwrap().graph, c5);
}

#[test]
fn clique_and_star_shapes() {
    for n in 1..=7 {
        let k = eval_cw(&clique_expr(n)).unwrap().graph;
        assert_eq!(k.edge_count(), n * (n - 1));
        let s = eval_cw(&star_expr(n)).unwrap().graph;
        let star = SimpleDigraph::undirected_from((1..n).map(|i| ("c".to_string(), format!("l{i}")))).unwrap();
        if n > 1 {
            assert!(isomorphic_digraphs(&s, &star, None).unwrap().is_some());
        }
        assert!(clique_expr(n).labels().len() <= 2 && star_expr(n).labels().len() <= 2);
    }
}

fn is_cograph(g: &SimpleDigraph) -> bool {
    let n = g.n();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let vs = [a, b, c, d];
                    if vs.iter().collect::<BTreeSet<_>>().len() < 4 {
                        continue;
                    }
                    let e = |x: usize, y: usize| g.has_arc(x, y);
                    let path = e(a, b) && e(b, c) && e(c, d);
                    let chords = e(a, c) || e(a, d) || e(b, d);
                    if path && !chords {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn width_two_means_cograph() {
    let mut r = gen::rng(21);
    for i in 0..120 {
        let g = gen::random_undirected(&mut r, 2 + i % 5, 0.5);
        assert_eq!(cwd_at_most(&g, 2).unwrap(), is_cograph(&g), "{g:?}");
        assert_eq!(cwd_at_most(&g, 1).unwrap(), g.edge_count() == 0);
    }
}

#[test]
fn witnesses_evaluate_to_the_graph() {
    let mut r = gen::rng(22);
    for i in 0..60 {
        let g = if i % 2 == 0 { gen::random_undirected(&mut r, 6, 0.5) } else { gen::random_digraph(&mut r, 5, 0.35) };
        for k in 1..=3 {
            if let Some(e) = cwd_expression(&g, k).unwrap() {
                assert_eq!(eval_cw(&e).unwrap().graph, g);
                assert!(e.labels().len() <= k);
            }
        }
    }
}

#[test]
fn induced_subgraphs_never_wider() {
    let mut r = gen::rng(23);
    for _ in 0..12 {
        let g = gen::random_undirected(&mut r, 6, 0.5);
        let w = clique_width(&g).unwrap();
        for x in 1..(1u64 << 6) {
            assert!(cwd_at_most(&g.induced_by_mask(x), w).unwrap());
        }
    }
}

#[test]
fn width_is_the_widest_quotient() {
    let mut r = gen::rng(24);
    for i in 0..40 {
        let g = if i % 2 == 0 { gen::random_undirected(&mut r, 6, 0.5) } else { gen::random_digraph(&mut r, 4, 0.4) };
        let t = md_tree(&g, 16).unwrap();
        let mut want = 1;
        for k in &t.kinds {
            let w = match k {
                ModKind::Leaf | ModKind::Parallel => 1,
                ModKind::Series | ModKind::Linear(_) => 2,
                ModKind::Prime(q) => clique_width(q).unwrap(),
            };
            want = want.max(w);
        }
        assert_eq!(clique_width(&g).unwrap(), want, "{g:?}");
    }
}

#[test]
fn fusion_matches_direct_fusion() {
    let mut r = gen::rng(25);
    let mut checked = 0;
    for i in 0..200 {
        let g = gen::random_dag(&mut r, 3 + i % 6, 0.4);
        let sources: Vec<usize> = (0..g.n()).filter(|&x| g.in_neighbors(x).is_empty()).collect();
        let sinks: Vec<usize> = (0..g.n()).filter(|&x| g.out_neighbors(x).is_empty()).collect();
        let Some((&u, &v)) = sources.iter().flat_map(|u| sinks.iter().map(move |v| (u, v))).find(|(u, v)| u != v) else {
            continue;
        };
        let e = if g.n() <= 6 {
            (1..=3).find_map(|k| cwd_expression(&g, k).unwrap()).unwrap_or_else(|| naive_expr(&g))
        } else {
            naive_expr(&g)
        };
        let f = fuse_expr(&e, g.name(u), g.name(v)).unwrap();
        assert_eq!(eval_cw(&f).unwrap().graph, fuse_vertices(&g, g.name(u), g.name(v)).unwrap());
        assert!(f.labels().len() <= 4 * e.labels().len());
        checked += 1;
    }
    assert!(checked > 100);
    let g = SimpleDigraph::from_arcs([("x", "u")]).unwrap();
    assert!(fuse_expr(&naive_expr(&g), "u", "x").is_err());
}

#[test]
fn substitution_matches_modular_substitution() {
    let mut r = gen::rng(26);
    for i in 0..60 {
        let g = gen::random_digraph(&mut r, 2 + i % 4, 0.4);
        let h = gen::random_digraph(&mut r, 1 + i % 3, 0.5).rename(|s| format!("h{s}"));
        let eg = (1..=3).find_map(|k| cwd_expression(&g, k).unwrap()).unwrap_or_else(|| naive_expr(&g));
        let eh = (1..=3).find_map(|k| cwd_expression(&h, k).unwrap()).unwrap_or_else(|| naive_expr(&h));
        let u = g.name(i % g.n()).to_string();
        let s = subst_expr(&eg, &u, &eh).unwrap();
        assert_eq!(eval_cw(&s).unwrap().graph, substitute(&g, &u, &h).unwrap());
        let shared = eg.labels().len().max(eh.labels().len());
        assert!(s.labels().len() <= shared, "{s}");
    }
}

fn eps_of(v: &LabeledGraph) -> BTreeSet<(String, String)> {
    v.tagged.get(EPS_TAG).cloned().unwrap_or_default()
}

fn check_sd(h: &SDGraph) -> usize {
    let mut exprs = BTreeMap::new();
    let mut k = 0;
    for c in h.components() {
        let g = h.component_graph(&c);
        let e = component_expr(&g, DEFAULT_SPLIT_CAP).unwrap();
        k = k.max(e.labels().len());
        exprs.insert(g.names().iter().min().unwrap().clone(), e);
    }
    let e = sd_expr(h, &exprs).unwrap();
    let v = eval_cw(&e).unwrap();
    assert_eq!(v.graph, h.graph);
    let eps = eps_of(&v);
    let want: BTreeSet<(String, String)> = h.eps.iter().flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())]).collect();
    assert_eq!(eps, want);
    assert!(e.labels().len() <= k + 2, "{} labels, components use {k}", e.labels().len());
    assert_eq!(E::parse(&e.to_string()).unwrap(), e);
    k
}

#[test]
fn sd_graph_expressions() {
    let k4 = eval_cw(&clique_expr(4)).unwrap().graph;
    let sd = split_decompose(&k4, DEFAULT_SPLIT_CAP).unwrap();
    assert_eq!(check_sd(&sd), 2);
    let p6 = SimpleDigraph::undirected_from((0..5).map(|i| (format!("{i}"), format!("{}", i + 1)))).unwrap();
    check_sd(&split_decompose(&p6, DEFAULT_SPLIT_CAP).unwrap());
    let mut r = gen::rng(27);
    for i in 0..40 {
        let g = if i % 2 == 0 {
            gen::random_connected_undirected(&mut r, 4 + i % 7, 0.3)
        } else {
            gen::random_strongly_connected(&mut r, 4 + i % 6, 0.3)
        };
        check_sd(&split_decompose(&g, DEFAULT_SPLIT_CAP).unwrap());
    }
}

#[test]
fn lone_component_keeps_its_expression() {
    let c5 = SimpleDigraph::undirected_from((0..5).map(|i| (format!("{i}"), format!("{}", (i + 1) % 5)))).unwrap();
    let h = SDGraph::trivial(&c5);
    let e = naive_expr(&c5);
    let got = sd_expr(&h, &BTreeMap::from([("0".to_string(), e.clone())])).unwrap();
    assert_eq!(got, e);
}

#[test]
fn renamed_label_disappears() {
    let mut r = gen::rng(28);
    for _ in 0..30 {
        let g = gen::random_digraph(&mut r, 4, 0.5);
        let e = ren("1", "2", naive_expr(&g));
        assert!(eval_cw(&e).unwrap().labels.values().all(|l| l != "1"));
    }
}
