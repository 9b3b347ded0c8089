use std::collections::BTreeMap;

use graphdec::bipartition::{check_bip_family, classify_bip_node, good_members, tree_partition, BipNodeKind};
use graphdec::gen;
use graphdec::split::*;
use graphdec::SimpleDigraph;

const CAP: usize = DEFAULT_SPLIT_CAP;

/// Twelve-vertex graph whose decomposition mixes cliques, stars and a
/// 6-vertex prime component.
fn twelve_vertex_graph() -> SimpleDigraph {
    SimpleDigraph::undirected_from([
        ("b", "h"),
        ("b", "e"),
        ("h", "e"),
        ("e", "f"),
        ("f", "g"),
        ("k", "m"),
        ("n", "p"),
        ("n", "k"),
        ("k", "f"),
        ("f", "c"),
        ("p", "m"),
        ("m", "g"),
        ("g", "d"),
        ("c", "a"),
        ("d", "a"),
        ("c", "g"),
        ("d", "f"),
        ("k", "p"),
        ("m", "n"),
    ])
    .unwrap()
}

fn type_name(t: &ComponentType) -> String {
    match t {
        ComponentType::Clique(n) => format!("K{n}"),
        ComponentType::Star { n, .. } => format!("S{}", n - 1),
        ComponentType::Prime => "prime".into(),
        ComponentType::Ctt(m) => format!("ctt{}", m.spec.k()),
        other => format!("{other:?}"),
    }
}

#[test]
fn twelve_vertex_decomposition_shape() {
    let g = twelve_vertex_graph();
    let sd = split_decompose(&g, CAP).unwrap();
    sd.validate().unwrap();
    assert_eq!(eval(&sd), g);
    assert!(check_canonical(&sd, CAP).unwrap().is_empty());
    let comps = sd_components(&sd, CAP).unwrap();
    let mut kinds: Vec<(String, usize)> = comps.iter().map(|(c, t)| (type_name(t), c.n())).collect();
    kinds.sort();
    assert_eq!(
        kinds,
        vec![
            ("K3".to_string(), 3),
            ("K3".into(), 3),
            ("S2".into(), 3),
            ("S2".into(), 3),
            ("S2".into(), 3),
            ("S2".into(), 3),
            ("prime".into(), 6),
        ]
    );
    // Component tree: degree of each component in the ε-edge tree, keyed by
    // its original vertices.
    let mut degree: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    for (c, _) in &comps {
        let plain: Vec<String> = c.names().iter().filter(|v| g.index_of(v).is_some()).cloned().collect();
        let d = c.names().iter().filter(|v| sd.partner(v).is_some()).count();
        degree.insert(plain, d);
    }
    let want: BTreeMap<Vec<String>, usize> = [
        (vec!["b", "h"], 1),
        (vec!["e"], 2),
        (vec!["f"], 2),
        (vec!["g", "k", "m"], 3),
        (vec!["a"], 2),
        (vec!["c", "d"], 1),
        (vec!["n", "p"], 1),
    ]
    .into_iter()
    .map(|(k, d)| {
        let mut k: Vec<String> = k.into_iter().map(String::from).collect();
        k.sort();
        (k, d)
    })
    .collect();
    let degree: BTreeMap<Vec<String>, usize> = degree
        .into_iter()
        .map(|(mut k, d)| {
            k.sort();
            (k, d)
        })
        .collect();
    assert_eq!(degree, want);
}

#[test]
fn random_round_trips_and_canonicity() {
    let mut r = gen::rng(11);
    for i in 0..60 {
        let n = 3 + i % 8;
        let g = gen::random_connected_undirected(&mut r, n, 0.35);
        let sd = split_decompose(&g, CAP).unwrap();
        sd.validate().unwrap();
        assert_eq!(eval(&sd), g);
        assert_eq!(check_canonical(&sd, CAP).unwrap(), vec![]);
        for (c, t) in sd_components(&sd, CAP).unwrap() {
            if t == ComponentType::Prime {
                assert!(splits(&c, CAP).unwrap().members.is_empty());
            }
        }
    }
    for i in 0..40 {
        let n = 3 + i % 7;
        let g = gen::random_strongly_connected(&mut r, n, 0.3);
        let sd = split_decompose(&g, CAP).unwrap();
        sd.validate().unwrap();
        assert_eq!(eval(&sd), g);
        assert_eq!(check_canonical(&sd, CAP).unwrap(), vec![]);
    }
}

#[test]
fn random_order_splitting_agrees() {
    let mut r = gen::rng(12);
    for i in 0..30 {
        let n = 4 + i % 6;
        let g = if i % 2 == 0 {
            gen::random_connected_undirected(&mut r, n, 0.35)
        } else {
            gen::random_strongly_connected(&mut r, n, 0.3)
        };
        let sd = split_decompose(&g, CAP).unwrap();
        for seed in 0..3 {
            let it = split_iterative(&g, CAP, seed).unwrap();
            it.validate().unwrap();
            assert_eq!(eval(&it), g);
            assert!(same_sd_graph(&sd, &it).unwrap(), "{g:?}");
        }
    }
}

#[test]
fn elimination_commutes() {
    let mut r = gen::rng(13);
    for i in 0..25 {
        let g = gen::random_connected_undirected(&mut r, 5 + i % 5, 0.3);
        let sd = split_decompose(&g, CAP).unwrap();
        let eps: Vec<(String, String)> = sd.eps.iter().cloned().collect();
        for (a, (u, v)) in eps.iter().enumerate() {
            for (x, y) in &eps[a + 1..] {
                let ef = elim(&elim(&sd, u, v).unwrap(), x, y).unwrap();
                let fe = elim(&elim(&sd, x, y).unwrap(), u, v).unwrap();
                assert_eq!(ef.graph, fe.graph);
                assert_eq!(ef.eps, fe.eps);
            }
        }
        let mut all = sd.clone();
        for (u, v) in &eps {
            all = elim(&all, u, v).unwrap();
        }
        assert_eq!(all.graph, g);
    }
}

#[test]
fn split_parts_round_trip() {
    let mut r = gen::rng(14);
    for _ in 0..60 {
        let g = gen::random_strongly_connected(&mut r, 6, 0.35);
        for a in splits(&g, CAP).unwrap().members {
            let (h, hm, k, km) = split_parts(&g, a).unwrap();
            assert_eq!(join(&h, &hm, &k, &km).unwrap(), g);
        }
    }
    let p4 = SimpleDigraph::undirected_from([("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
    let (h, hm, k, km) = split_parts(&p4, 0b0011).unwrap();
    assert_eq!(h, SimpleDigraph::undirected_from([("a", "b"), ("b", hm.as_str())]).unwrap());
    assert_eq!(k, SimpleDigraph::undirected_from([(km.as_str(), "c"), ("c", "d")]).unwrap());
}

#[test]
fn split_families_are_weakly_partitive() {
    let mut r = gen::rng(15);
    for _ in 0..30 {
        let g = gen::random_strongly_connected(&mut r, 7, 0.3);
        assert!(check_bip_family(&splits(&g, CAP).unwrap().plus_closure()).weakly_partitive);
        let u = gen::random_connected_undirected(&mut r, 7, 0.4);
        assert!(check_bip_family(&splits(&u, CAP).unwrap().plus_closure()).partitive);
    }
}

#[test]
fn brittle_families() {
    for n in 4..=7 {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let star = SimpleDigraph::undirected_from((1..n).map(|i| ("0".to_string(), names[i].clone()))).unwrap();
        assert_eq!(splits(&star, CAP).unwrap().members.len(), (1 << (n - 1)) - n - 1);
        assert!(split_decompose(&star, CAP).unwrap().eps.is_empty());
        assert!(matches!(classify_component(&star, CAP).unwrap(), ComponentType::Star { center, .. } if center == "0"));
    }
}

#[test]
fn directed_circuit_node_is_circular() {
    let c = ctt_graph(&CttSpec::new(6, (0..=6).collect()).unwrap());
    let b = splits(&c, CAP).unwrap().plus_closure();
    let t = tree_partition(&good_members(&b)).unwrap();
    let centre = (0..t.nodes.len()).find(|&x| t.degree(x) == 6).unwrap();
    assert!(matches!(classify_bip_node(&b, &t, centre).unwrap(), BipNodeKind::Circular(o) if o.len() == 6));
}

#[test]
fn three_vertex_strong_graphs_are_known_shapes() {
    for arcs in 0u32..64 {
        let pairs = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
        let mut g = SimpleDigraph::with_vertices(["0", "1", "2"]);
        for (b, &(u, v)) in pairs.iter().enumerate() {
            if arcs >> b & 1 == 1 {
                g.add_arc(u, v);
            }
        }
        if !g.is_strongly_connected() {
            continue;
        }
        let t = classify_component(&g, CAP).unwrap();
        assert!(!matches!(t, ComponentType::Small | ComponentType::Decomposable), "{g:?}");
    }
}
