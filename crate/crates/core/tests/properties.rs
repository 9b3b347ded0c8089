use graphdec::cliquewidth::{eval_cw, naive_expr, CwExpression};
use graphdec::io::{read_digraph, read_multigraph, EdgeList};
use graphdec::modular::{from_gdec, gdec, md_tree, modules, DEFAULT_MODULE_CAP};
use graphdec::partitive::{check_family, lambda_of, reconstruct_tree};
use graphdec::split::{check_canonical, eval, split_decompose, DEFAULT_SPLIT_CAP};
use graphdec::tutte::{tutte_decompose, tutte_eval};
use graphdec::twodag::{canonical_term, eval_term, CanonicalTerm};
use graphdec::whitney::{matroid_equal, two_isomorphic_set};
use graphdec::{gen, iso, SimpleDigraph};
use proptest::prelude::*;

/// Digraph on `n` vertices from an adjacency bit vector.
fn digraph(n: usize, bits: &[bool]) -> SimpleDigraph {
    let mut g = SimpleDigraph::with_vertices(&gen::vertex_names(n));
    for u in 0..n {
        for v in 0..n {
            if u != v && bits[u * n + v] {
                g.add_arc(u, v);
            }
        }
    }
    g
}

fn arb_digraph(max: usize) -> impl Strategy<Value = SimpleDigraph> {
    (1..=max).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n * n).prop_map(move |b| digraph(n, &b)))
}

fn arb_undirected(max: usize) -> impl Strategy<Value = SimpleDigraph> {
    arb_digraph(max).prop_map(|g| {
        let mut h = g.clone();
        for (a, b) in g.edges() {
            h.add_arc(b, a);
        }
        h
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gdec_inverts(g in arb_digraph(8)) {
        prop_assert_eq!(from_gdec(&gdec(&g, DEFAULT_MODULE_CAP).unwrap()).unwrap(), g);
    }

    #[test]
    fn modules_weakly_partitive(g in arb_digraph(7)) {
        let f = modules(&g, DEFAULT_MODULE_CAP).unwrap();
        prop_assert!(check_family(&f).weakly_partitive);
        let t = md_tree(&g, DEFAULT_MODULE_CAP).unwrap();
        prop_assert!(t.tree.all_members().iter().all(|m| f.contains(*m)));
    }

    #[test]
    fn module_families_of_undirected_graphs_are_partitive(g in arb_undirected(7)) {
        prop_assert!(check_family(&modules(&g, DEFAULT_MODULE_CAP).unwrap()).partitive);
    }

    #[test]
    fn split_decomposition_evaluates_back(g in arb_undirected(8)) {
        prop_assume!(g.is_connected());
        let sd = split_decompose(&g, DEFAULT_SPLIT_CAP).unwrap();
        prop_assert_eq!(eval(&sd), g);
        prop_assert!(check_canonical(&sd, DEFAULT_SPLIT_CAP).unwrap().is_empty());
    }

    #[test]
    fn strong_split_decomposition_evaluates_back(g in arb_digraph(6)) {
        prop_assume!(g.is_strongly_connected());
        prop_assert_eq!(eval(&split_decompose(&g, DEFAULT_SPLIT_CAP).unwrap()), g);
    }

    #[test]
    fn tree_from_leaf_structure(seed in any::<u64>(), leaves in 1usize..30) {
        let mut r = gen::rng(seed);
        let t = gen::random_proper_tree(&mut r, leaves);
        let mut order = t.ground.clone();
        order.reverse();
        let back = reconstruct_tree(&lambda_of(&t).unwrap(), &order).unwrap();
        prop_assert_eq!(back.cluster_names(), t.cluster_names());
    }

    #[test]
    fn canonical_terms_evaluate_back(seed in any::<u64>(), m in 1usize..10) {
        let mut r = gen::rng(seed);
        let g = gen::random_two_dag(&mut r, m);
        let t = canonical_term(&g, 14).unwrap();
        prop_assert!(iso::isomorphic_two_graphs(&eval_term(&t).unwrap(), &g).unwrap());
        prop_assert_eq!(CanonicalTerm::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn tutte_round_trip(seed in any::<u64>(), m in 2usize..12) {
        let mut r = gen::rng(seed);
        let g = gen::random_two_connected(&mut r, m);
        prop_assert_eq!(tutte_eval(&tutte_decompose(&g, 14).unwrap()).unwrap(), g);
    }

    #[test]
    fn two_isomorphic_graphs_share_the_matroid(seed in any::<u64>(), m in 2usize..8) {
        let mut r = gen::rng(seed);
        let g = gen::random_two_connected(&mut r, m);
        for h in two_isomorphic_set(&g, Some(20)).unwrap() {
            prop_assert!(matroid_equal(&g, &h, 16).unwrap());
        }
    }

    #[test]
    fn expressions_print_and_evaluate(g in arb_digraph(7)) {
        let e = naive_expr(&g);
        prop_assert_eq!(&eval_cw(&e).unwrap().graph, &g);
        prop_assert_eq!(CwExpression::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn edge_lists_round_trip(g in arb_digraph(8)) {
        prop_assert_eq!(read_digraph(&EdgeList::from_digraph(&g).to_string()).unwrap(), g);
    }

    #[test]
    fn multigraph_edge_lists_round_trip(seed in any::<u64>(), m in 2usize..12) {
        let mut r = gen::rng(seed);
        let g = gen::random_two_connected(&mut r, m);
        prop_assert_eq!(read_multigraph(&EdgeList::from_multigraph(&g).to_string()).unwrap(), g);
    }
}
