//! Set families over a small ground set, overlap-free families and their
//! rooted trees, node typing of weakly partitive families, and rebuilding a
//! rooted tree from its leaf betweenness relation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subset of a ground set of at most 64 elements.
pub type Mask = u64;

pub const MAX_GROUND: usize = 64;

pub fn full_mask(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn bits(m: Mask) -> impl Iterator<Item = usize> {
    let mut m = m;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// A and B meet and neither contains the other.
pub fn overlap(a: Mask, b: Mask) -> bool {
    a & b != 0 && a & !b != 0 && b & !a != 0
}

pub fn min_elem(m: Mask) -> usize {
    m.trailing_zeros() as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FamilyDoc", try_from = "FamilyDoc")]
pub struct SetFamily {
    pub ground: Vec<String>,
    pub members: BTreeSet<Mask>,
}

#[derive(Serialize, Deserialize)]
struct FamilyDoc {
    ground: Vec<String>,
    members: Vec<Vec<String>>,
}

impl From<SetFamily> for FamilyDoc {
    fn from(f: SetFamily) -> Self {
        FamilyDoc { members: f.members.iter().map(|&m| f.names(m)).collect(), ground: f.ground }
    }
}

impl TryFrom<FamilyDoc> for SetFamily {
    type Error = Error;
    fn try_from(d: FamilyDoc) -> Result<Self> {
        SetFamily::from_named(d.ground, d.members)
    }
}

impl SetFamily {
    pub fn new(ground: Vec<String>) -> Result<Self> {
        if ground.len() > MAX_GROUND {
            return Err(Error::capacity("ground set", ground.len(), MAX_GROUND));
        }
        let distinct: BTreeSet<&String> = ground.iter().collect();
        if distinct.len() != ground.len() {
            return Err(Error::input("ground set has repeated elements"));
        }
        Ok(SetFamily { ground, members: BTreeSet::new() })
    }

    pub fn from_named<S: AsRef<str>>(ground: Vec<String>, members: Vec<Vec<S>>) -> Result<Self> {
        let mut f = SetFamily::new(ground)?;
        for m in members {
            let mask = f.mask_of(m.iter().map(|s| s.as_ref()))?;
            f.members.insert(mask);
        }
        Ok(f)
    }

    pub fn from_masks(ground: Vec<String>, members: impl IntoIterator<Item = Mask>) -> Result<Self> {
        let mut f = SetFamily::new(ground)?;
        let all = f.full();
        for m in members {
            if m & !all != 0 {
                return Err(Error::input("member outside the ground set"));
            }
            f.members.insert(m);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn full(&self) -> Mask {
        full_mask(self.n())
    }

    pub fn contains(&self, m: Mask) -> bool {
        self.members.contains(&m)
    }

    pub fn mask_of<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<Mask> {
        let mut m = 0;
        for s in names {
            let i = self
                .ground
                .iter()
                .position(|g| g == s)
                .ok_or_else(|| Error::input(format!("{s} is not in the ground set")))?;
            m |= 1 << i;
        }
        Ok(m)
    }

    pub fn names(&self, m: Mask) -> Vec<String> {
        bits(m).map(|i| self.ground[i].clone()).collect()
    }

    /// Members as sorted name sets, independent of the ground order.
    pub fn named_members(&self) -> BTreeSet<BTreeSet<String>> {
        self.members.iter().map(|&m| self.names(m).into_iter().collect()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub p0: bool,
    pub p0prime: bool,
    pub p1: bool,
    pub weakly_partitive: bool,
    pub partitive: bool,
}

pub fn check_family(f: &SetFamily) -> FamilyReport {
    let all = f.full();
    let p0 = f.contains(all) && !f.contains(0);
    let p0prime = p0 && (0..f.n()).all(|i| f.contains(1 << i));
    let mut p1 = true;
    let mut p2 = true;
    let mut p3 = true;
    let ms: Vec<Mask> = f.members.iter().copied().collect();
    for (i, &a) in ms.iter().enumerate() {
        for &b in &ms[i + 1..] {
            if !overlap(a, b) {
                continue;
            }
            p1 = false;
            if !(f.contains(a | b) && f.contains(a & b) && f.contains(a & !b) && f.contains(b & !a)) {
                p2 = false;
            }
            if !f.contains(a ^ b) {
                p3 = false;
            }
        }
    }
    let weakly_partitive = p0 && p2;
    FamilyReport { p0, p0prime, p1, weakly_partitive, partitive: weakly_partitive && p3 }
}

/// Adds every singleton.
pub fn plus_closure(f: &SetFamily) -> SetFamily {
    let mut g = f.clone();
    for i in 0..f.n() {
        g.members.insert(1 << i);
    }
    g
}

/// Members overlapping no member.
pub fn strong_members(f: &SetFamily) -> SetFamily {
    let ms: Vec<Mask> = f.members.iter().copied().collect();
    let strong = ms.iter().copied().filter(|&a| !ms.iter().any(|&b| overlap(a, b)));
    SetFamily { ground: f.ground.clone(), members: strong.collect() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Leaf,
    Complete,
    Prime,
    /// Sons in linear order.
    Linear(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub id: String,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub bx: Mask,
    pub kind: Option<NodeKind>,
}

/// Rooted tree whose node boxes partition the ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TreeDoc", try_from = "TreeDoc")]
pub struct DecompTree {
    pub ground: Vec<String>,
    pub nodes: Vec<TreeNode>,
    pub root: usize,
}

#[derive(Serialize, Deserialize)]
struct TreeDoc {
    ground: Vec<String>,
    root: String,
    nodes: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: String,
    parent: Option<String>,
    children: Vec<String>,
    #[serde(rename = "box")]
    bx: Vec<String>,
    kind: Option<KindDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", content = "order", rename_all = "lowercase")]
enum KindDoc {
    Leaf,
    Complete,
    Prime,
    Linear(Vec<String>),
}

impl From<DecompTree> for TreeDoc {
    fn from(t: DecompTree) -> Self {
        let id = |i: usize| t.nodes[i].id.clone();
        let nodes = t
            .nodes
            .iter()
            .map(|n| NodeDoc {
                id: n.id.clone(),
                parent: n.parent.map(id),
                children: n.children.iter().map(|&c| id(c)).collect(),
                bx: bits(n.bx).map(|i| t.ground[i].clone()).collect(),
                kind: n.kind.as_ref().map(|k| match k {
                    NodeKind::Leaf => KindDoc::Leaf,
                    NodeKind::Complete => KindDoc::Complete,
                    NodeKind::Prime => KindDoc::Prime,
                    NodeKind::Linear(o) => KindDoc::Linear(o.iter().map(|&c| id(c)).collect()),
                }),
            })
            .collect();
        TreeDoc { root: id(t.root), ground: t.ground.clone(), nodes }
    }
}

impl TryFrom<TreeDoc> for DecompTree {
    type Error = Error;
    fn try_from(d: TreeDoc) -> Result<Self> {
        let pos: BTreeMap<&str, usize> = d.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let look = |s: &str| pos.get(s).copied().ok_or_else(|| Error::input(format!("unknown node {s}")));
        let gpos: BTreeMap<&str, usize> = d.ground.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
        let mut nodes = Vec::new();
        for n in &d.nodes {
            let mut bx = 0;
            for b in &n.bx {
                bx |= 1 << gpos.get(b.as_str()).ok_or_else(|| Error::input(format!("unknown element {b}")))?;
            }
            let kind = match &n.kind {
                None => None,
                Some(KindDoc::Leaf) => Some(NodeKind::Leaf),
                Some(KindDoc::Complete) => Some(NodeKind::Complete),
                Some(KindDoc::Prime) => Some(NodeKind::Prime),
                Some(KindDoc::Linear(o)) => Some(NodeKind::Linear(o.iter().map(|s| look(s)).collect::<Result<_>>()?)),
            };
            nodes.push(TreeNode {
                id: n.id.clone(),
                parent: n.parent.as_deref().map(look).transpose()?,
                children: n.children.iter().map(|s| look(s)).collect::<Result<_>>()?,
                bx,
                kind,
            });
        }
        let t = DecompTree { root: look(&d.root)?, ground: d.ground, nodes };
        t.validate()?;
        Ok(t)
    }
}

impl DecompTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_leaf(&self, u: usize) -> bool {
        self.nodes[u].children.is_empty()
    }

    /// Union of the boxes in the subtree of `u`.
    pub fn members(&self, u: usize) -> Mask {
        let mut m = self.nodes[u].bx;
        for &c in &self.nodes[u].children {
            m |= self.members(c);
        }
        m
    }

    pub fn all_members(&self) -> Vec<Mask> {
        let mut out = vec![0; self.len()];
        for u in self.postorder() {
            let mut m = self.nodes[u].bx;
            for &c in &self.nodes[u].children {
                m |= out[c];
            }
            out[u] = m;
        }
        out
    }

    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((u, done)) = stack.pop() {
            if done {
                out.push(u);
            } else {
                stack.push((u, true));
                for &c in self.nodes[u].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            out.push(u);
            for &c in self.nodes[u].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn node_by_id(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// Node sets of the tree as sets of element names.
    pub fn cluster_names(&self) -> BTreeSet<BTreeSet<String>> {
        self.all_members()
            .into_iter()
            .map(|m| bits(m).map(|i| self.ground[i].clone()).collect())
            .collect()
    }

    /// The family of subtree unions.
    pub fn family(&self) -> SetFamily {
        SetFamily { ground: self.ground.clone(), members: self.all_members().into_iter().collect() }
    }

    /// Checks parent/children consistency, reachability and the box partition.
    pub fn validate(&self) -> Result<()> {
        if self.root >= self.len() || self.nodes[self.root].parent.is_some() {
            return Err(Error::validation("root must exist and have no parent"));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                if self.nodes.get(c).and_then(|x| x.parent) != Some(i) {
                    return Err(Error::validation(format!("child link {} -> {c} is not mirrored", n.id)));
                }
            }
            if let Some(p) = n.parent {
                if !self.nodes[p].children.contains(&i) {
                    return Err(Error::validation(format!("parent link of {} is not mirrored", n.id)));
                }
            }
            if n.children.len() <= 1 && n.bx == 0 {
                return Err(Error::validation(format!("node {} of outdegree ≤ 1 has an empty box", n.id)));
            }
            if let Some(NodeKind::Linear(o)) = &n.kind {
                let a: BTreeSet<_> = o.iter().collect();
                let b: BTreeSet<_> = n.children.iter().collect();
                if a != b || o.len() != n.children.len() {
                    return Err(Error::validation(format!("linear order of {} is not its set of sons", n.id)));
                }
            }
        }
        if self.postorder().len() != self.len() {
            return Err(Error::validation("some node is not reachable from the root"));
        }
        let mut seen = 0;
        for n in &self.nodes {
            if n.bx & seen != 0 {
                return Err(Error::validation("boxes are not disjoint"));
            }
            seen |= n.bx;
        }
        if seen != full_mask(self.ground.len()) {
            return Err(Error::validation("boxes do not cover the ground set"));
        }
        Ok(())
    }
}

fn set_text(f: &SetFamily, m: Mask) -> String {
    let names = f.names(m);
    if names.len() == 1 {
        names[0].clone()
    } else {
        format!("{{{}}}", names.join(","))
    }
}

/// Rooted tree of an overlap-free family containing the ground set.
pub fn tree_from_laminar(f: &SetFamily) -> Result<DecompTree> {
    let all = f.full();
    if !f.contains(all) {
        return Err(Error::precondition("the ground set is not a member"));
    }
    if f.contains(0) {
        return Err(Error::precondition("the empty set is a member"));
    }
    let mut ms: Vec<Mask> = f.members.iter().copied().collect();
    for (i, &a) in ms.iter().enumerate() {
        for &b in &ms[i + 1..] {
            if overlap(a, b) {
                return Err(Error::precondition(format!(
                    "members {} and {} overlap",
                    set_text(f, a),
                    set_text(f, b)
                )));
            }
        }
    }
    // Larger sets first so that parents precede children.
    ms.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), min_elem(m)));
    let mut nodes: Vec<TreeNode> = Vec::with_capacity(ms.len());
    for (i, &m) in ms.iter().enumerate() {
        let parent = (0..i).filter(|&j| ms[j] & m == m).min_by_key(|&j| ms[j].count_ones());
        nodes.push(TreeNode { id: set_text(f, m), parent, children: Vec::new(), bx: m, kind: None });
    }
    for i in 0..nodes.len() {
        if let Some(p) = nodes[i].parent {
            nodes[p].children.push(i);
            nodes[p].bx &= !ms[i];
        }
    }
    for n in &mut nodes {
        n.children.sort_by_key(|&c| min_elem(ms[c]));
    }
    let t = DecompTree { ground: f.ground.clone(), nodes, root: 0 };
    Ok(t)
}

/// Togetherness graph on the sons of `u`: i–j when the union of the two
/// sons is a member.
fn togetherness(f: &SetFamily, sons: &[Mask]) -> Vec<Vec<bool>> {
    let k = sons.len();
    let mut adj = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let t = f.contains(sons[i] | sons[j]);
            adj[i][j] = t;
            adj[j][i] = t;
        }
    }
    adj
}

/// Order of the vertices along a simple path spanning `adj`, if it is one.
pub(crate) fn spanning_path(adj: &[Vec<bool>]) -> Option<Vec<usize>> {
    let k = adj.len();
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    let edges: usize = deg.iter().sum::<usize>() / 2;
    if k < 2 || edges != k - 1 || deg.iter().any(|&d| d == 0 || d > 2) {
        return None;
    }
    let start = (0..k).find(|&i| deg[i] == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < k {
        let next = (0..k).find(|&j| adj[cur][j] && j != prev)?;
        prev = cur;
        cur = next;
        order.push(cur);
    }
    Some(order)
}

/// Types an internal node of the tree of strong members.
pub fn classify_node(f: &SetFamily, t: &DecompTree, u: usize) -> Result<NodeKind> {
    let node = &t.nodes[u];
    if node.children.is_empty() {
        return Ok(NodeKind::Leaf);
    }
    let sons: Vec<Mask> = node.children.iter().map(|&c| t.members(c)).collect();
    let k = sons.len();
    let adj = togetherness(f, &sons);
    let edges = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| adj[i][j]).count();
    if edges == k * (k - 1) / 2 {
        return Ok(NodeKind::Complete);
    }
    if edges == 0 && k >= 3 {
        return Ok(NodeKind::Prime);
    }
    if let Some(mut order) = spanning_path(&adj) {
        if min_elem(sons[order[0]]) > min_elem(sons[order[k - 1]]) {
            order.reverse();
        }
        return Ok(NodeKind::Linear(order.into_iter().map(|i| node.children[i]).collect()));
    }
    Err(Error::NotWeaklyPartitive(format!("togetherness graph at node {} is neither complete, empty nor a path", node.id)))
}

/// Betweenness relation of the leaves of a rooted tree: (x,y,z) is present
/// when x lies below the least common ancestor of the distinct leaves y,z.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafStructure {
    pub leaves: Vec<String>,
    pub triples: BTreeSet<(usize, usize, usize)>,
}

impl LeafStructure {
    pub fn holds(&self, x: usize, y: usize, z: usize) -> bool {
        self.triples.contains(&(x, y, z))
    }
}

fn leaf_element(t: &DecompTree, u: usize) -> Result<usize> {
    let b = t.nodes[u].bx;
    if b.count_ones() != 1 {
        return Err(Error::precondition(format!("leaf {} does not have a singleton box", t.nodes[u].id)));
    }
    Ok(min_elem(b))
}

pub fn lambda_of(t: &DecompTree) -> Result<LeafStructure> {
    for n in &t.nodes {
        if n.children.len() == 1 {
            return Err(Error::precondition(format!("node {} has outdegree 1", n.id)));
        }
        if !n.children.is_empty() && n.bx != 0 {
            return Err(Error::precondition(format!("internal node {} has a nonempty box", n.id)));
        }
    }
    let mems = t.all_members();
    let mut leaf_of = BTreeMap::new();
    for u in 0..t.len() {
        if t.is_leaf(u) {
            leaf_of.insert(leaf_element(t, u)?, u);
        }
    }
    let n = t.ground.len();
    let mut triples = BTreeSet::new();
    for y in 0..n {
        for z in 0..n {
            if y == z {
                continue;
            }
            // Least common ancestor: smallest member containing both.
            let lca = mems
                .iter()
                .filter(|&&m| m >> y & 1 == 1 && m >> z & 1 == 1)
                .min_by_key(|m| m.count_ones())
                .copied()
                .unwrap();
            for x in bits(lca) {
                triples.insert((x, y, z));
            }
        }
    }
    Ok(LeafStructure { leaves: t.ground.clone(), triples })
}

/// Rebuilds the tree of a leaf structure, representing every internal node by
/// a leaf chosen through the given total order on the leaves.
pub fn reconstruct_tree(l: &LeafStructure, order: &[String]) -> Result<DecompTree> {
    let n = l.leaves.len();
    if n > MAX_GROUND {
        return Err(Error::capacity("leaf set", n, MAX_GROUND));
    }
    let mut rank = vec![usize::MAX; n];
    for (r, name) in order.iter().enumerate() {
        let i = l
            .leaves
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::input(format!("order mentions unknown leaf {name}")))?;
        rank[i] = r;
    }
    if rank.contains(&usize::MAX) || order.len() != n {
        return Err(Error::input("order must list every leaf exactly once"));
    }
    if n == 1 {
        let ground = l.leaves.clone();
        let node = TreeNode { id: ground[0].clone(), parent: None, children: vec![], bx: 1, kind: None };
        return Ok(DecompTree { ground, nodes: vec![node], root: 0 });
    }
    let r = |x: usize, y: usize, z: usize| l.holds(x, y, z);
    // Leaves below x∨y.
    let below = |x: usize, y: usize| -> Mask { (0..n).filter(|&u| r(u, x, y)).fold(0, |m, u| m | 1 << u) };
    let least = |m: Mask| bits(m).min_by_key(|&i| rank[i]);
    let mut rep = vec![vec![usize::MAX; n]; n];
    let mut reps: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let c = below(x, y);
            let u = least(c).ok_or_else(|| Error::Reconstruction("empty cluster".into()))?;
            let z = bits(c)
                .filter(|&w| w != u && r(x, u, w) && r(y, u, w))
                .min_by_key(|&w| rank[w])
                .ok_or_else(|| Error::Reconstruction(format!("no representative for the join of {} and {}", l.leaves[x], l.leaves[y])))?;
            rep[x][y] = z;
            reps.entry(z).or_default().push((x, y));
        }
    }
    let internal: Vec<usize> = reps.keys().copied().collect();
    // Clusters for the ancestor clauses.
    let clusters: BTreeMap<usize, BTreeSet<Mask>> =
        reps.iter().map(|(&z, ps)| (z, ps.iter().map(|&(w, v)| below(w, v)).collect())).collect();
    // Node indices: leaves 0..n, internal n..
    let m = n + internal.len();
    let mut le = vec![vec![false; m]; m];
    for x in 0..n {
        le[x][x] = true;
        for (j, z) in internal.iter().enumerate() {
            le[x][n + j] = clusters[z].iter().any(|&c| c >> x & 1 == 1);
        }
    }
    for (i, x) in internal.iter().enumerate() {
        for (j, y) in internal.iter().enumerate() {
            le[n + i][n + j] = reps[x]
                .iter()
                .any(|&(u, v)| clusters[y].iter().any(|&c| c >> u & 1 == 1 && c >> v & 1 == 1));
        }
    }
    // Parent = least strict ancestor.
    let mut parent = vec![None; m];
    let mut roots = Vec::new();
    for a in 0..m {
        let anc: Vec<usize> = (0..m).filter(|&b| b != a && le[a][b]).collect();
        if anc.is_empty() {
            roots.push(a);
            continue;
        }
        let p = anc
            .iter()
            .copied()
            .find(|&b| anc.iter().all(|&c| le[b][c]))
            .ok_or_else(|| Error::Reconstruction("ancestors are not totally ordered".into()))?;
        parent[a] = Some(p);
    }
    if roots.len() != 1 {
        return Err(Error::Reconstruction(format!("{} candidate roots", roots.len())));
    }
    let mut nodes: Vec<TreeNode> = (0..m)
        .map(|a| TreeNode {
            id: if a < n { l.leaves[a].clone() } else { format!("({},2)", l.leaves[internal[a - n]]) },
            parent: parent[a],
            children: Vec::new(),
            bx: if a < n { 1 << a } else { 0 },
            kind: None,
        })
        .collect();
    for a in 0..m {
        if let Some(p) = parent[a] {
            if p < n {
                return Err(Error::Reconstruction("a leaf has a descendant".into()));
            }
            nodes[p].children.push(a);
        }
    }
    let t = DecompTree { ground: l.leaves.clone(), nodes, root: roots[0] };
    t.validate().map_err(|e| Error::Reconstruction(e.to_string()))?;
    let mut t = t;
    let mems = t.all_members();
    for node in &mut t.nodes {
        node.children.sort_by_key(|&c| min_elem(mems[c]));
    }
    if lambda_of(&t).map_err(|e| Error::Reconstruction(e.to_string()))? != *l {
        return Err(Error::Reconstruction("the relation is not the leaf structure of a proper tree".into()));
    }
    Ok(t)
}
