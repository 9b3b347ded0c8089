use std::collections::BTreeSet;

use graphdec::gen;
use graphdec::iso::{incidence_key, isomorphic_two_graphs};
use graphdec::twodag::*;
use graphdec::whitney::*;
use graphdec::MultiGraph;
use rand::Rng;

type Key = Vec<Vec<String>>;

fn keys(gs: &[MultiGraph]) -> BTreeSet<Key> {
    gs.iter().map(incidence_key).collect()
}

/// Every loopless multigraph on the same edge ids with the same vertex count,
/// filtered by cycle matroid equality. Endpoint lists are restricted growth
/// strings, so each graph appears up to vertex renaming.
fn matroid_class(g: &MultiGraph) -> BTreeSet<Key> {
    fn go(g: &MultiGraph, ids: &[String], used: usize, ends: &mut Vec<(usize, usize)>, out: &mut BTreeSet<Key>) {
        let n = g.n();
        let left = ids.len() - ends.len();
        if used + 2 * left < n {
            return;
        }
        if left == 0 {
            let h = MultiGraph::undirected_from(
                ids.iter().zip(ends.iter()).map(|(id, &(a, b))| (id.clone(), format!("u{a}"), format!("u{b}"))),
            )
            .unwrap();
            if matroid_equal(g, &h, 16).unwrap() {
                out.insert(incidence_key(&h));
            }
            return;
        }
        for a in 0..=used.min(n - 1) {
            let after_a = used.max(a + 1);
            for b in a + 1..=after_a.min(n - 1) {
                ends.push((a, b));
                go(g, ids, after_a.max(b + 1), ends, out);
                ends.pop();
            }
        }
    }
    let ids: Vec<String> = g.edges().iter().map(|e| e.id.clone()).collect();
    let mut out = BTreeSet::new();
    go(g, &ids, 0, &mut Vec::new(), &mut out);
    out
}

/// Evaluations of every twist of the canonical term, by hand.
fn nabla_evaluations(g: &MultiGraph) -> BTreeSet<Key> {
    let e = g.edges().iter().map(|e| e.id.clone()).min().unwrap();
    let (d, _) = bipolar_orient(g, &e).unwrap();
    let t = canonical_term(&d, 16).unwrap();
    Nabla::without_flips(&t).map(|x| incidence_key(&eval_term(&x).unwrap().graph)).collect()
}

fn c4(order: [&str; 4]) -> MultiGraph {
    MultiGraph::undirected_from((0..4).map(|i| (order[i].to_string(), format!("v{i}"), format!("v{}", (i + 1) % 4)))).unwrap()
}

#[test]
fn twist_set_is_the_twisting_closure() {
    let mut r = gen::rng(71);
    for _ in 0..50 {
        let m = r.gen_range(2..=8);
        let g = gen::random_two_connected(&mut r, m);
        let set = two_isomorphic_set(&g, None).unwrap();
        let got = keys(&set);
        assert_eq!(got.len(), set.len());
        assert_eq!(got, keys(&twisting_closure(&g, 16).unwrap()));
        assert_eq!(got, nabla_evaluations(&g));
        for h in &set {
            assert!(matroid_equal(&g, h, 16).unwrap());
        }
        if m <= 6 {
            assert_eq!(got, matroid_class(&g), "{g:?}");
        }
    }
}

#[test]
fn twist_stream_has_the_closed_form_size() {
    let mut r = gen::rng(72);
    for _ in 0..60 {
        let m = r.gen_range(1..=7);
        let d = gen::random_two_dag(&mut r, m);
        let t = canonical_term(&d, 16).unwrap();
        let all: Vec<CanonicalTerm> = nabla(&t).collect();
        assert_eq!(all.len() as u128, nabla_count(&t));
        let distinct: BTreeSet<String> = all.iter().map(|x| x.to_string()).collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(all[0], t);
    }
}

#[test]
fn four_cycle_has_three_classes() {
    let g = c4(["a", "b", "c", "d"]);
    let set = two_isomorphic_set(&g, None).unwrap();
    assert_eq!(set.len(), 3);
    assert_eq!(keys(&set), matroid_class(&g));
    assert!(keys(&set).contains(&incidence_key(&c4(["a", "c", "b", "d"]))));
}

#[test]
fn term_route_and_sep_route_agree() {
    let mut r = gen::rng(73);
    for _ in 0..100 {
        let m = r.gen_range(1..=10);
        let g = gen::random_two_dag(&mut r, m);
        let ft = factor_tree(&g, 14).unwrap();
        let t = term_of_factor_tree(&ft);
        let s = sep_of_tree(&ft);
        let nb = Nabla::new(&t);
        let c = nb.choice(r.gen_range(0..nb.total()));
        let a = eval_term(&apply_twist_choice(&t, &c).unwrap()).unwrap();
        let b = contract_sep(&twist_sep(&s, &c).unwrap()).unwrap();
        assert!(isomorphic_two_graphs(&a, &b).unwrap(), "{t} {c:?}");
    }
}

#[test]
fn worked_example_twist() {
    let t = CanonicalTerm::parse(
        "par(e:a,ser(par(e:c,ser(e:b,e:f)),theta{x0,x1|x0>x2,x0>x3,x2>x3,x2>x1,x3>x1}(e:g,e:k,e:m,e:h,par(e:n,e:p)),par(e:d,e:e)))",
    )
    .unwrap();
    let mut c = TwistChoice::default();
    c.perms.insert(vec![1, 0, 1], vec![1, 0]);
    c.swaps.insert(vec![1, 1]);
    c.perms.insert(vec![1], vec![2, 0, 1]);
    let h = apply_twist_choice(&t, &c).unwrap();
    assert_eq!(
        h.to_string(),
        "par(e:a,ser(par(e:d,e:e),par(e:c,ser(e:f,e:b)),theta{x1,x0|x0>x2,x0>x3,x2>x3,x2>x1,x3>x1}(e:g,e:k,e:m,e:h,par(e:n,e:p))))"
    );
    let (g, h) = (eval_term(&t).unwrap().graph, eval_term(&h).unwrap().graph);
    assert!(matroid_equal(&g, &h, 16).unwrap());
    assert!(keys(&two_isomorphic_set(&g, None).unwrap()).contains(&incidence_key(&h)));
    assert!(apply_twist_choice(&t, &TwistChoice { swaps: [vec![0]].into(), ..Default::default() }).is_err());
}

#[test]
fn matroid_equality_basics() {
    let f1 = MultiGraph::undirected_from([("a", "x", "y"), ("b", "y", "z")]).unwrap();
    let f2 = MultiGraph::undirected_from([("a", "x", "y"), ("b", "p", "q")]).unwrap();
    assert!(matroid_equal(&f1, &f2, 16).unwrap());
    let other = MultiGraph::undirected_from([("a", "x", "y"), ("c", "y", "z")]).unwrap();
    assert!(matroid_equal(&f1, &other, 16).is_err());
    assert!(matroid_indep(&c4(["a", "b", "c", "d"]), ["a", "b", "c"]).unwrap());
    assert!(!matroid_indep(&c4(["a", "b", "c", "d"]), ["a", "b", "c", "d"]).unwrap());
}
