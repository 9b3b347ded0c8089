//! Families of bipartitions and the tree-partitions realizing them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitive::{bits, full_mask, min_elem, tree_from_laminar, Mask, SetFamily, MAX_GROUND};

/// Bipartitions of a ground set, each stored as the block holding element 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionFamily {
    pub ground: Vec<String>,
    pub members: BTreeSet<Mask>,
}

impl BipartitionFamily {
    pub fn new(ground: Vec<String>) -> Result<Self> {
        if ground.is_empty() || ground.len() > MAX_GROUND {
            return Err(Error::input(format!("ground set size {} out of range", ground.len())));
        }
        Ok(BipartitionFamily { ground, members: BTreeSet::new() })
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn full(&self) -> Mask {
        full_mask(self.n())
    }

    /// Canonical form of the bipartition with the given block.
    pub fn canon(&self, block: Mask) -> Mask {
        if block & 1 == 1 {
            block
        } else {
            self.full() & !block
        }
    }

    /// Adds {block, complement}; rejects a trivial pair.
    pub fn insert(&mut self, block: Mask) -> Result<()> {
        let b = block & self.full();
        if b == 0 || b == self.full() {
            return Err(Error::input("a bipartition needs two nonempty blocks"));
        }
        let c = self.canon(b);
        self.members.insert(c);
        Ok(())
    }

    pub fn contains(&self, block: Mask) -> bool {
        let b = block & self.full();
        b != 0 && b != self.full() && self.members.contains(&self.canon(b))
    }

    pub fn blocks(&self, m: Mask) -> (Mask, Mask) {
        (m, self.full() & !m)
    }

    pub fn names(&self, m: Mask) -> Vec<String> {
        bits(m).map(|i| self.ground[i].clone()).collect()
    }

    pub fn named_members(&self) -> BTreeSet<BTreeSet<BTreeSet<String>>> {
        self.members
            .iter()
            .map(|&m| {
                let (a, b) = self.blocks(m);
                BTreeSet::from([self.names(a).into_iter().collect(), self.names(b).into_iter().collect()])
            })
            .collect()
    }

    /// Adds every {{v}, V-{v}}.
    pub fn plus_closure(&self) -> Self {
        let mut b = self.clone();
        if self.n() >= 2 {
            for v in 0..self.n() {
                b.insert(1 << v).unwrap();
            }
        }
        b
    }
}

/// All four block intersections are nonempty.
pub fn bip_overlap(full: Mask, p: Mask, q: Mask) -> bool {
    let (p2, q2) = (full & !p, full & !q);
    p & q != 0 && p & q2 != 0 && p2 & q != 0 && p2 & q2 != 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipReport {
    pub b0: bool,
    pub b1: bool,
    pub weakly_partitive: bool,
    pub partitive: bool,
}

pub fn check_bip_family(b: &BipartitionFamily) -> BipReport {
    let full = b.full();
    let b0 = b.n() >= 2 && (0..b.n()).all(|v| b.contains(1 << v));
    let ms: Vec<Mask> = b.members.iter().copied().collect();
    let mut b1 = true;
    let mut wp = true;
    let mut part = true;
    for (i, &p) in ms.iter().enumerate() {
        for &q in &ms[i + 1..] {
            if !bip_overlap(full, p, q) {
                continue;
            }
            b1 = false;
            for a in [p, full & !p] {
                for c in [q, full & !q] {
                    if !b.contains(a & c) {
                        wp = false;
                    }
                }
            }
            if !b.contains(p ^ q) {
                part = false;
            }
        }
    }
    BipReport { b0, b1, weakly_partitive: wp, partitive: wp && part }
}

/// Members overlapping no other member.
pub fn good_members(b: &BipartitionFamily) -> BipartitionFamily {
    let full = b.full();
    let ms: Vec<Mask> = b.members.iter().copied().collect();
    let good = ms.iter().copied().filter(|&p| !ms.iter().any(|&q| bip_overlap(full, p, q)));
    BipartitionFamily { ground: b.ground.clone(), members: good.collect() }
}

/// Unrooted tree whose node boxes partition the ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreePartition {
    pub ground: Vec<String>,
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub boxes: Vec<Mask>,
}

impl TreePartition {
    pub fn neighbors(&self, x: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == x { Some(b) } else if b == x { Some(a) } else { None })
            .collect();
        out.sort();
        out
    }

    /// Union of the boxes on the side of `y` once the edge x-y is removed.
    pub fn side(&self, x: usize, y: usize) -> Mask {
        let mut seen = vec![false; self.nodes.len()];
        seen[x] = true;
        seen[y] = true;
        let mut stack = vec![y];
        let mut m = 0;
        while let Some(u) = stack.pop() {
            m |= self.boxes[u];
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        m
    }

    /// The family realized by the tree edges.
    pub fn family(&self) -> BipartitionFamily {
        let mut b = BipartitionFamily { ground: self.ground.clone(), members: BTreeSet::new() };
        for &(x, y) in &self.edges {
            let s = self.side(x, y);
            if s != 0 && s != b.full() {
                b.members.insert(b.canon(s));
            }
        }
        b
    }

    pub fn degree(&self, x: usize) -> usize {
        self.neighbors(x).len()
    }

    /// Boxes partition the ground set, the graph is a tree, and nodes of
    /// degree 1 or 2 have nonempty boxes.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        if self.boxes.len() != n {
            return Err(Error::validation("one box per node is required"));
        }
        let mut all = 0;
        for &b in &self.boxes {
            if all & b != 0 {
                return Err(Error::validation("boxes are not disjoint"));
            }
            all |= b;
        }
        if all != full_mask(self.ground.len()) {
            return Err(Error::validation("boxes do not cover the ground set"));
        }
        if self.edges.len() + 1 != n {
            return Err(Error::validation("edge count of a tree must be one less than its node count"));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::validation("tree is not connected"));
        }
        if n >= 2 {
            for x in 0..n {
                let d = self.degree(x);
                if (d == 1 || d == 2) && self.boxes[x] == 0 {
                    return Err(Error::validation(format!("node {} of degree {d} has an empty box", self.nodes[x])));
                }
            }
        }
        Ok(())
    }
}

/// Inclusion-minimal blocks of the family.
pub fn minimal_blocks(b: &BipartitionFamily) -> Vec<Mask> {
    let blocks: BTreeSet<Mask> = b.members.iter().flat_map(|&m| [m, b.full() & !m]).collect();
    blocks.iter().copied().filter(|&a| !blocks.iter().any(|&c| c != a && c & a == c)).collect()
}

/// Tree-partition realizing an overlap-free family, built around the
/// minimal block with the least element.
pub fn tree_partition(b: &BipartitionFamily) -> Result<TreePartition> {
    let r = minimal_blocks(b).into_iter().min_by_key(|&m| min_elem(m));
    match r {
        None => Ok(TreePartition { ground: b.ground.clone(), nodes: vec!["*".into()], edges: vec![], boxes: vec![b.full()] }),
        Some(r) => tree_partition_at(b, r),
    }
}

fn node_name(ground: &[String], m: Mask) -> String {
    let names: Vec<&str> = bits(m).map(|i| ground[i].as_str()).collect();
    if names.len() == 1 {
        names[0].to_string()
    } else {
        format!("{{{}}}", names.join(","))
    }
}

/// Tree-partition built around the given minimal block.
pub fn tree_partition_at(b: &BipartitionFamily, r: Mask) -> Result<TreePartition> {
    let full = b.full();
    let ms: Vec<Mask> = b.members.iter().copied().collect();
    for (i, &p) in ms.iter().enumerate() {
        for &q in &ms[i + 1..] {
            if bip_overlap(full, p, q) {
                return Err(Error::precondition(format!(
                    "bipartitions with blocks {:?} and {:?} overlap",
                    b.names(p),
                    b.names(q)
                )));
            }
        }
    }
    if !b.contains(r) || !minimal_blocks(b).contains(&r) {
        return Err(Error::input("the chosen block is not a minimal block of the family"));
    }
    // Blocks not including r, as subsets of the complement of r.
    let rest: Vec<usize> = bits(full & !r).collect();
    let pos: BTreeMap<usize, usize> = rest.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let remap = |m: Mask| bits(m).fold(0u64, |acc, e| acc | 1 << pos[&e]);
    let mut fam = Vec::new();
    for &m in &ms {
        for a in [m, full & !m] {
            if a & r != r {
                fam.push(remap(a));
            }
        }
    }
    let sub_ground: Vec<String> = rest.iter().map(|&e| b.ground[e].clone()).collect();
    let f = SetFamily::from_masks(sub_ground, fam)?;
    let t = tree_from_laminar(&f)?;
    let unmap = |m: Mask| bits(m).fold(0u64, |acc, i| acc | 1 << rest[i]);
    let mut nodes: Vec<String> = t.nodes.iter().map(|u| u.id.clone()).collect();
    let mut boxes: Vec<Mask> = t.nodes.iter().map(|u| unmap(u.bx)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, u) in t.nodes.iter().enumerate() {
        if let Some(p) = u.parent {
            edges.push((p, i));
        }
    }
    nodes.push(node_name(&b.ground, r));
    boxes.push(r);
    edges.push((t.root, nodes.len() - 1));
    let tp = TreePartition { ground: b.ground.clone(), nodes, edges, boxes };
    tp.validate()?;
    Ok(tp)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BipNodeKind {
    Leaf,
    Complete,
    Prime,
    /// Neighbours in cyclic order.
    Circular(Vec<usize>),
}

/// Types an internal node from which pairs of neighbouring sides can be
/// merged into a member of the family.
pub fn classify_bip_node(b: &BipartitionFamily, t: &TreePartition, x: usize) -> Result<BipNodeKind> {
    let nb = t.neighbors(x);
    let k = nb.len();
    if k <= 1 {
        return Ok(BipNodeKind::Leaf);
    }
    let sides: Vec<Mask> = nb.iter().map(|&y| t.side(x, y)).collect();
    let mut adj = vec![vec![false; k]; k];
    let mut deg = vec![0usize; k];
    for i in 0..k {
        for j in i + 1..k {
            if b.contains(sides[i] | sides[j]) {
                adj[i][j] = true;
                adj[j][i] = true;
                deg[i] += 1;
                deg[j] += 1;
            }
        }
    }
    let edges: usize = deg.iter().sum::<usize>() / 2;
    if edges == k * (k - 1) / 2 {
        return Ok(BipNodeKind::Complete);
    }
    if edges == 0 && k >= 3 {
        return Ok(BipNodeKind::Prime);
    }
    if edges == k && deg.iter().all(|&d| d == 2) {
        let mut order = vec![0];
        while order.len() < k {
            let cur = *order.last().unwrap();
            match (0..k).find(|&j| adj[cur][j] && !order.contains(&j)) {
                Some(j) => order.push(j),
                None => break,
            }
        }
        if order.len() == k {
            return Ok(BipNodeKind::Circular(order.into_iter().map(|i| nb[i]).collect()));
        }
    }
    Err(Error::NotWeaklyPartitive(format!("togetherness graph at node {} is neither complete, empty nor a cycle", t.nodes[x])))
}
