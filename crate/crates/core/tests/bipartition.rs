use std::collections::BTreeSet;

use graphdec::bipartition::*;
use graphdec::gen;
use graphdec::partitive::Mask;
use rand::seq::SliceRandom;
use rand::Rng;

fn overlap_brute(full: Mask, p: Mask, q: Mask) -> bool {
    [p, full & !p].iter().all(|&a| [q, full & !q].iter().all(|&b| a & b != 0))
}

/// Overlap-free family of the blocks of a random laminar family.
fn random_good_family(r: &mut gen::TestRng, n: usize) -> BipartitionFamily {
    let lam = gen::random_laminar(r, n);
    let mut b = BipartitionFamily::new(lam.ground.clone()).unwrap();
    for &m in &lam.members {
        if m != lam.full() {
            b.insert(m).unwrap();
        }
    }
    b
}

fn union_of(sides: &[Mask], s: u64) -> Mask {
    (0..sides.len()).filter(|i| s >> i & 1 == 1).fold(0, |m, i| m | sides[i])
}

fn cyclic_intervals(order: &[usize]) -> BTreeSet<u64> {
    let k = order.len();
    let mut out = BTreeSet::new();
    for start in 0..k {
        for len in 2..=k.saturating_sub(2) {
            out.insert((0..len).fold(0u64, |m, j| m | 1 << order[(start + j) % k]));
        }
    }
    out
}

#[test]
fn tree_partitions_realize_good_families() {
    let mut r = gen::rng(91);
    for i in 0..150 {
        let b = random_good_family(&mut r, 2 + i % 14);
        assert!(check_bip_family(&b).b1);
        let t = tree_partition(&b).unwrap();
        t.validate().unwrap();
        assert_eq!(t.family(), b);
        assert_eq!(good_members(&b), b);
    }
}

#[test]
fn report_matches_definitions() {
    let mut r = gen::rng(92);
    for i in 0..300 {
        let n = 2 + i % 6;
        let mut b = BipartitionFamily::new(gen::vertex_names(n)).unwrap();
        let full = b.full();
        for _ in 0..r.gen_range(0..10) {
            b.insert(r.gen_range(1..full)).unwrap();
        }
        let ms: Vec<Mask> = b.members.iter().copied().collect();
        let pairs: Vec<(Mask, Mask)> =
            ms.iter().flat_map(|&p| ms.iter().map(move |&q| (p, q))).filter(|&(p, q)| overlap_brute(full, p, q)).collect();
        let rep = check_bip_family(&b);
        assert_eq!(rep.b1, pairs.is_empty());
        let wp = pairs.iter().all(|&(p, q)| [p, full & !p].iter().all(|&a| [q, full & !q].iter().all(|&c| b.contains(a & c))));
        assert_eq!(rep.weakly_partitive, wp);
        assert_eq!(rep.partitive, wp && pairs.iter().all(|&(p, q)| b.contains(p ^ q)));
        let good: BTreeSet<Mask> = ms.iter().copied().filter(|&p| !ms.iter().any(|&q| overlap_brute(full, p, q))).collect();
        assert_eq!(good_members(&b).members, good);
    }
}

#[test]
fn node_types_against_side_unions() {
    let mut r = gen::rng(93);
    let mut seen = [0usize; 3];
    for i in 0..200 {
        let base = random_good_family(&mut r, 4 + i % 12);
        let t = tree_partition(&base).unwrap();
        let mut b = base.clone();
        // Decorate internal nodes: all side unions, cyclic intervals, or nothing.
        for x in 0..t.nodes.len() {
            let nb = t.neighbors(x);
            let k = nb.len();
            if k < 3 || t.boxes[x] != 0 {
                continue;
            }
            let sides: Vec<Mask> = nb.iter().map(|&y| t.side(x, y)).collect();
            match r.gen_range(0..3) {
                0 => {}
                1 => {
                    for s in 1u64..(1 << k) - 1 {
                        b.insert(union_of(&sides, s)).unwrap();
                    }
                }
                _ => {
                    let mut ord: Vec<usize> = (0..k).collect();
                    ord.shuffle(&mut r);
                    for s in cyclic_intervals(&ord) {
                        b.insert(union_of(&sides, s)).unwrap();
                    }
                }
            }
        }
        assert!(check_bip_family(&b).weakly_partitive);
        assert_eq!(good_members(&b), base);
        for x in 0..t.nodes.len() {
            let nb = t.neighbors(x);
            let k = nb.len();
            if k < 3 || t.boxes[x] != 0 {
                continue;
            }
            let sides: Vec<Mask> = nb.iter().map(|&y| t.side(x, y)).collect();
            let unions: BTreeSet<u64> = (1u64..(1 << k) - 1)
                .filter(|s| (2..=k - 2).contains(&(s.count_ones() as usize)))
                .filter(|&s| b.contains(b.canon(union_of(&sides, s))))
                .collect();
            let all: BTreeSet<u64> = (1u64..(1 << k) - 1).filter(|s| (2..=k - 2).contains(&(s.count_ones() as usize))).collect();
            match classify_bip_node(&b, &t, x).unwrap() {
                BipNodeKind::Complete => {
                    assert_eq!(unions, all);
                    seen[0] += 1;
                }
                BipNodeKind::Prime => {
                    assert!(unions.is_empty());
                    seen[1] += 1;
                }
                BipNodeKind::Circular(order) => {
                    let idx: Vec<usize> = order.iter().map(|y| nb.iter().position(|z| z == y).unwrap()).collect();
                    assert_eq!(unions, cyclic_intervals(&idx));
                    seen[2] += 1;
                }
                BipNodeKind::Leaf => unreachable!(),
            }
        }
    }
    assert!(seen.iter().all(|&c| c > 10), "{seen:?}");
}

#[test]
fn overlapping_families_have_no_tree() {
    let mut b = BipartitionFamily::new(gen::vertex_names(4)).unwrap();
    b.insert(0b0011).unwrap();
    b.insert(0b0101).unwrap();
    assert!(tree_partition(&b).is_err());
}
