use graphdec::gen;
use graphdec::iso::isomorphic_two_graphs;
use graphdec::partitive::strong_members;
use graphdec::twodag::*;
use graphdec::TwoGraph;
use rand::Rng;

const CAP: usize = 14;

/// The decomposition term of the worked 12-edge example; the prime skeleton
/// is K4 minus an edge.
pub const EXAMPLE_TERM: &str = "par(e:a,ser(par(e:c,ser(e:b,e:f)),theta{x0,x1|x0>x2,x0>x3,x2>x3,x2>x1,x3>x1}(e:g,e:k,e:m,e:h,par(e:n,e:p)),par(e:d,e:e)))";

/// Printed form with parallel arguments sorted, and prime arguments sorted
/// with their skeleton arcs (skeleton vertices renamed by first appearance).
fn normalize(t: &CanonicalTerm) -> String {
    match t {
        CanonicalTerm::Edge { .. } => t.to_string(),
        CanonicalTerm::Par(a) => {
            let mut a: Vec<String> = a.iter().map(normalize).collect();
            a.sort();
            format!("par({})", a.join(","))
        }
        CanonicalTerm::Ser(a) => format!("ser({})", a.iter().map(normalize).collect::<Vec<_>>().join(",")),
        CanonicalTerm::Theta { skeleton, args } => {
            let k = &skeleton.graph;
            let mut arcs: Vec<(String, usize, usize)> =
                k.edges().iter().zip(args).map(|(e, a)| (normalize(a), e.tail, e.head)).collect();
            arcs.sort();
            let mut names = vec![skeleton.s1, skeleton.s2];
            for (_, a, b) in &arcs {
                for v in [*a, *b] {
                    if !names.contains(&v) {
                        names.push(v);
                    }
                }
            }
            let pos = |v: usize| names.iter().position(|&x| x == v).unwrap();
            let parts: Vec<String> = arcs.iter().map(|(s, a, b)| format!("{}>{}:{s}", pos(*a), pos(*b))).collect();
            format!("theta({})", parts.join(","))
        }
    }
}

fn samples(seed: u64, count: usize) -> Vec<TwoGraph> {
    let mut r = gen::rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let m = r.gen_range(1..=10);
        let g = gen::random_two_dag(&mut r, m);
        if g.graph.m() <= 10 {
            out.push(g);
        }
    }
    out
}

#[test]
fn strong_factors_are_the_tree_nodes() {
    for g in samples(61, 100) {
        assert!(is_2dag(&g));
        let fam = factors(&g, CAP).unwrap();
        let ft = factor_tree(&g, CAP).unwrap();
        assert_eq!(strong_members(&fam).named_members(), ft.tree.cluster_names(), "{g:?}");
        for u in 0..ft.tree.len() {
            let ids: Vec<String> = ft.factors[u].graph.edges().iter().map(|e| e.id.clone()).collect();
            let f = is_factor_edges(&g, &ids).unwrap().unwrap();
            assert_eq!(f, ft.factors[u]);
        }
    }
}

#[test]
fn terms_and_sep_graphs_give_back_the_graph() {
    for g in samples(62, 100) {
        let t = canonical_term(&g, CAP).unwrap();
        let back = eval_term(&t).unwrap();
        let mut a: Vec<String> = back.graph.edges().iter().map(|e| e.id.clone()).collect();
        let mut b: Vec<String> = g.graph.edges().iter().map(|e| e.id.clone()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(isomorphic_two_graphs(&back, &g).unwrap(), "{t}");
        assert_eq!(CanonicalTerm::parse(&t.to_string()).unwrap(), t);
        let s = sep_graph(&g, CAP).unwrap();
        s.validate().unwrap();
        assert_eq!(contract_sep(&s).unwrap(), g);
    }
}

#[test]
fn canonical_term_is_stable_under_renaming() {
    for g in samples(63, 40) {
        let t = canonical_term(&g, CAP).unwrap();
        let again = canonical_term(&eval_term(&t).unwrap(), CAP).unwrap();
        assert_eq!(normalize(&again), normalize(&t));
    }
}

#[test]
fn worked_example_term() {
    let t = CanonicalTerm::parse(EXAMPLE_TERM).unwrap();
    let g = eval_term(&t).unwrap();
    assert_eq!(g.graph.m(), 12);
    assert!(is_2dag(&g));
    let got = canonical_term(&g, CAP).unwrap();
    assert_eq!(normalize(&got), normalize(&t), "{got}");
    let CanonicalTerm::Par(root) = &got else { panic!("root is not parallel: {got}") };
    assert_eq!(root.len(), 2);
    let ser = root.iter().find(|x| matches!(x, CanonicalTerm::Ser(_))).unwrap();
    let CanonicalTerm::Theta { skeleton, args } = &ser.args()[1] else { panic!("middle factor is not prime") };
    assert_eq!((skeleton.graph.n(), skeleton.graph.m(), args.len()), (4, 5, 5));
}

#[test]
fn oriented_graphs_are_two_dags() {
    let mut r = gen::rng(64);
    for _ in 0..60 {
        let m = r.gen_range(2..=10);
        let g = gen::random_two_connected(&mut r, m);
        let e = g.edges().iter().map(|e| e.id.clone()).min().unwrap();
        let (d, _) = bipolar_orient(&g, &e).unwrap();
        assert!(is_2dag(&d));
        assert_eq!(d.graph.m(), g.m());
    }
}

#[test]
fn non_dags_are_rejected() {
    let g = TwoGraph::new(graphdec::MultiGraph::from_edges([("e", "x", "y"), ("f", "y", "x")]).unwrap(), "x", "y").unwrap();
    assert!(factor_tree(&g, CAP).is_err());
}
