use std::collections::BTreeSet;

use graphdec::gen;
use graphdec::partitive::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn overlaps_brute(a: Mask, b: Mask) -> bool {
    a & b != 0 && a & !b != 0 && b & !a != 0
}

/// Unions of son subsets, by index set, that land in the family.
fn member_unions(f: &SetFamily, sons: &[Mask]) -> BTreeSet<u64> {
    let k = sons.len();
    (1u64..(1 << k) - 1)
        .filter(|s| s.count_ones() >= 2)
        .filter(|&s| {
            let m = (0..k).filter(|i| s >> i & 1 == 1).fold(0, |m, i| m | sons[i]);
            f.contains(m)
        })
        .collect()
}

fn intervals(order: &[usize]) -> BTreeSet<u64> {
    let k = order.len();
    let mut out = BTreeSet::new();
    for a in 0..k {
        for b in a + 1..k {
            if b - a + 1 < k {
                out.insert(order[a..=b].iter().fold(0u64, |m, &i| m | 1 << i));
            }
        }
    }
    out
}

fn random_family(r: &mut impl Rng, n: usize) -> SetFamily {
    let full = full_mask(n);
    let mut ms: Vec<Mask> = (0..r.gen_range(0..8)).map(|_| r.gen_range(1..=full)).collect();
    ms.push(full);
    SetFamily::from_masks(gen::vertex_names(n), ms).unwrap()
}

#[test]
fn family_report_matches_definitions() {
    let mut r = gen::rng(41);
    for i in 0..300 {
        let n = 1 + i % 6;
        let f = random_family(&mut r, n);
        let rep = check_family(&f);
        let ms: Vec<Mask> = f.members.iter().copied().collect();
        let pairs = || ms.iter().flat_map(|&a| ms.iter().map(move |&b| (a, b))).filter(|&(a, b)| overlaps_brute(a, b));
        assert_eq!(rep.p1, pairs().next().is_none());
        let closed = pairs().all(|(a, b)| [a | b, a & b, a & !b].iter().all(|&m| f.contains(m)));
        assert_eq!(rep.weakly_partitive, f.contains(f.full()) && !f.contains(0) && closed);
        assert_eq!(rep.partitive, rep.weakly_partitive && pairs().all(|(a, b)| f.contains(a ^ b)));
        let strong: Vec<Mask> = ms.iter().copied().filter(|&a| !ms.iter().any(|&b| overlaps_brute(a, b))).collect();
        assert_eq!(strong_members(&f).members.into_iter().collect::<Vec<_>>(), strong);
    }
}

/// Builds a weakly partitive family from a random labelled tree: complete
/// nodes contribute every son union, linear nodes every interval.
fn family_of(r: &mut impl Rng, t: &DecompTree) -> (SetFamily, Vec<Option<Vec<usize>>>) {
    let mut ms = t.all_members();
    let mut orders = vec![None; t.len()];
    for u in 0..t.len() {
        let kids = &t.nodes[u].children;
        if kids.is_empty() {
            continue;
        }
        let sons: Vec<Mask> = kids.iter().map(|&c| t.members(c)).collect();
        let k = sons.len();
        match r.gen_range(0..3) {
            0 => {}
            1 => ms.extend((1u64..1 << k).map(|s| (0..k).filter(|i| s >> i & 1 == 1).fold(0, |m, i| m | sons[i]))),
            _ => {
                let mut ord: Vec<usize> = (0..k).collect();
                ord.shuffle(r);
                for s in intervals(&ord) {
                    ms.push((0..k).filter(|i| s >> i & 1 == 1).fold(0, |m, i| m | sons[i]));
                }
                orders[u] = Some(ord);
            }
        }
    }
    (SetFamily::from_masks(t.ground.clone(), ms).unwrap(), orders)
}

#[test]
fn node_types_against_son_unions() {
    let mut r = gen::rng(42);
    let mut seen = [0usize; 3];
    for i in 0..150 {
        let t = gen::random_proper_tree(&mut r, 2 + i % 9);
        let (f, _) = family_of(&mut r, &t);
        assert!(check_family(&f).weakly_partitive);
        let st = tree_from_laminar(&strong_members(&f)).unwrap();
        assert_eq!(st.cluster_names(), t.cluster_names());
        for u in 0..st.len() {
            let kids = &st.nodes[u].children;
            if kids.is_empty() {
                continue;
            }
            let sons: Vec<Mask> = kids.iter().map(|&c| st.members(c)).collect();
            let k = sons.len();
            let unions = member_unions(&f, &sons);
            let all: BTreeSet<u64> = (1u64..(1 << k) - 1).filter(|s| s.count_ones() >= 2).collect();
            match classify_node(&f, &st, u).unwrap() {
                NodeKind::Complete => {
                    assert_eq!(unions, all);
                    seen[0] += 1;
                }
                NodeKind::Prime => {
                    assert!(k >= 3 && unions.is_empty());
                    seen[1] += 1;
                }
                NodeKind::Linear(order) => {
                    let idx: Vec<usize> = order.iter().map(|c| kids.iter().position(|x| x == c).unwrap()).collect();
                    assert_eq!(unions, intervals(&idx));
                    assert_ne!(unions, all);
                    seen[2] += 1;
                }
                NodeKind::Leaf => unreachable!(),
            }
        }
    }
    assert!(seen.iter().all(|&c| c > 10), "{seen:?}");
}

#[test]
fn laminar_families_give_their_tree() {
    let mut r = gen::rng(43);
    for i in 0..100 {
        let f = gen::random_laminar(&mut r, 1 + i % 12);
        let t = tree_from_laminar(&f).unwrap();
        t.validate().unwrap();
        let mut got = t.all_members();
        got.sort_unstable();
        let want: Vec<Mask> = f.members.iter().copied().collect();
        assert_eq!(got, want);
        assert!(check_family(&f).p1);
    }
}

#[test]
fn leaf_structure_reconstruction() {
    let mut r = gen::rng(44);
    for i in 0..200 {
        let t = gen::random_proper_tree(&mut r, 1 + i % 12);
        let l = lambda_of(&t).unwrap();
        for _ in 0..3 {
            let mut order = t.ground.clone();
            order.shuffle(&mut r);
            let back = reconstruct_tree(&l, &order).unwrap();
            back.validate().unwrap();
            assert_eq!(back.cluster_names(), t.cluster_names());
            assert_eq!(lambda_of(&back).unwrap(), l);
        }
    }
}

#[test]
fn reconstruction_rejects_bad_orders() {
    let mut r = gen::rng(45);
    let t = gen::random_proper_tree(&mut r, 5);
    let l = lambda_of(&t).unwrap();
    assert!(reconstruct_tree(&l, &t.ground[..4]).is_err());
    let mut dup = t.ground.clone();
    dup[1] = dup[0].clone();
    assert!(reconstruct_tree(&l, &dup).is_err());
}
