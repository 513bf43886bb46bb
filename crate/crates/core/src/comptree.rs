//! Persistent-components trees.
//!
//! Clusters are the connected components of the neighbourhood graph at each
//! radius of a [`RadiusGrid`]. A cluster is identified by its member set, so a
//! block that survives unchanged across many radii is recorded once, with the
//! first radius at which it exists as its birth. Parent links follow
//! immediate inclusion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::filtration::{DistanceMatrix, RadiusGrid};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Components as ascending member lists, ordered by smallest member.
    pub fn blocks(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        let mut blocks: Vec<Vec<usize>> = by_root.into_values().collect();
        blocks.sort_by_key(|b| b[0]);
        blocks
    }
}

/// Connected components at one radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub radius: f64,
    /// Members ascending by point index; blocks ordered by smallest member.
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn singletons(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() == 1).count()
    }
}

pub fn clusters_at(dm: &DistanceMatrix, radius: f64) -> Partition {
    let mut uf = UnionFind::new(dm.len());
    for (i, j) in dm.edges_within(radius) {
        uf.union(i, j);
    }
    Partition {
        radius,
        blocks: uf.blocks(),
    }
}

/// One node of a [`ComponentsTree`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Cluster {
    /// 1-based, in order of first appearance.
    pub id: usize,
    pub members: Vec<usize>,
    pub birth: f64,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Inclusion tree of all clusters seen across a radius grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentsTree {
    clusters: Vec<Cluster>,
    n_points: usize,
}

impl ComponentsTree {
    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn cluster(&self, id: usize) -> &Cluster {
        &self.clusters[id - 1]
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn root(&self) -> &Cluster {
        self.clusters
            .iter()
            .find(|c| c.parent.is_none())
            .expect("tree has a root")
    }

    /// Clusters alive at `radius`: born at or before it, parent born after.
    pub fn blocks_at(&self, radius: f64) -> Vec<&Cluster> {
        self.clusters
            .iter()
            .filter(|c| {
                c.birth <= radius && c.parent.map_or(true, |p| self.cluster(p).birth > radius)
            })
            .collect()
    }

    /// Birth radius of the cluster's parent, if any.
    pub fn parent_birth(&self, id: usize) -> Option<f64> {
        self.cluster(id).parent.map(|p| self.cluster(p).birth)
    }

    /// Heights at which clusters merge: the birth of every non-leaf.
    pub fn merge_heights(&self) -> Vec<f64> {
        self.clusters
            .iter()
            .filter(|c| !c.children.is_empty())
            .map(|c| c.birth)
            .collect()
    }
}

/// Builds the components tree over `grid`.
///
/// Leaves are the singletons, born at radius 0. New clusters appearing at the
/// same radius are numbered by (size, smallest member).
pub fn build_tree(dm: &DistanceMatrix, grid: &RadiusGrid) -> Result<ComponentsTree> {
    let n = dm.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no points".into()));
    }
    let mut clusters: Vec<Cluster> = (0..n)
        .map(|i| Cluster {
            id: i + 1,
            members: vec![i],
            birth: 0.0,
            parent: None,
            children: Vec::new(),
        })
        .collect();
    let mut current: Vec<usize> = (1..=n).collect();

    let mut edges: Vec<(f64, usize, usize)> = dm
        .edges_within(f64::INFINITY)
        .into_iter()
        .map(|(i, j)| (dm.get(i, j), i, j))
        .collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut uf = UnionFind::new(n);
    let mut next_edge = 0;
    let mut components = n;
    for &r in &grid.values {
        let mut merged = false;
        while next_edge < edges.len() && edges[next_edge].0 <= r {
            let (_, i, j) = edges[next_edge];
            if uf.union(i, j) {
                components -= 1;
                merged = true;
            }
            next_edge += 1;
        }
        if !merged {
            continue;
        }
        let mut fresh: Vec<Vec<usize>> = uf
            .blocks()
            .into_iter()
            .filter(|b| clusters[current[b[0]] - 1].members.len() != b.len())
            .collect();
        fresh.sort_by(|a, b| a.len().cmp(&b.len()).then(a[0].cmp(&b[0])));
        for block in fresh {
            let id = clusters.len() + 1;
            let mut children: Vec<usize> = block.iter().map(|&p| current[p]).collect();
            children.sort_by_key(|&c| clusters[c - 1].members[0]);
            children.dedup();
            for &c in &children {
                clusters[c - 1].parent = Some(id);
            }
            for &p in &block {
                current[p] = id;
            }
            clusters.push(Cluster {
                id,
                members: block,
                birth: r,
                parent: None,
                children,
            });
        }
    }
    if components > 1 {
        return Err(Error::GridTooCoarse { components });
    }
    Ok(ComponentsTree {
        clusters,
        n_points: n,
    })
}

/// One row of a singleton profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub radius: f64,
    pub clusters: usize,
    pub singletons: usize,
}

/// Cluster and singleton counts at radius 0 and at every grid value.
pub fn singleton_profile(tree: &ComponentsTree, grid: &RadiusGrid) -> Vec<ProfileRow> {
    core::iter::once(0.0)
        .chain(grid.values.iter().copied())
        .map(|r| {
            let blocks = tree.blocks_at(r);
            ProfileRow {
                radius: r,
                clusters: blocks.len(),
                singletons: blocks.iter().filter(|c| c.members.len() == 1).count(),
            }
        })
        .collect()
}

/// Replaces every character outside `[A-Za-z0-9]` by `_`.
pub fn sanitize_label(name: &str) -> String {
    if name.is_empty() {
        return "_".into();
    }
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// Newick serialisation.
///
/// Leaves carry sanitised point names, internal nodes `c<id>`; a node's branch
/// length is its parent's birth minus its own.
pub fn to_newick(tree: &ComponentsTree, names: &[String]) -> String {
    fn write_node(tree: &ComponentsTree, names: &[String], id: usize, out: &mut String) {
        let c = tree.cluster(id);
        if c.children.is_empty() {
            out.push_str(&sanitize_label(&names[c.members[0]]));
        } else {
            out.push('(');
            for (k, &child) in c.children.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_node(tree, names, child, out);
            }
            let _ = write!(out, ")c{}", c.id);
        }
        if let Some(p) = c.parent {
            let _ = write!(out, ":{:?}", tree.cluster(p).birth - c.birth);
        }
    }
    let mut out = String::new();
    write_node(tree, names, tree.root().id, &mut out);
    out.push(';');
    out
}

/// Generic rooted tree with labelled leaves, used for comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct RefTree {
    pub nodes: Vec<RefNode>,
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefNode {
    pub label: Option<String>,
    pub length: Option<f64>,
    pub children: Vec<usize>,
}

impl RefTree {
    pub fn from_components(tree: &ComponentsTree, names: &[String]) -> Self {
        let mut nodes = Vec::with_capacity(tree.clusters().len());
        for c in tree.clusters() {
            nodes.push(RefNode {
                label: Some(if c.children.is_empty() {
                    sanitize_label(&names[c.members[0]])
                } else {
                    format!("c{}", c.id)
                }),
                length: c.parent.map(|p| tree.cluster(p).birth - c.birth),
                children: c.children.iter().map(|&k| k - 1).collect(),
            });
        }
        Self {
            nodes,
            root: tree.root().id - 1,
        }
    }

    /// Leaf labels in node order.
    pub fn leaves(&self) -> Vec<String> {
        self.leaf_nodes()
            .into_iter()
            .map(|i| self.nodes[i].label.clone().unwrap_or_default())
            .collect()
    }

    fn leaf_nodes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if self.nodes[v].children.is_empty() {
                out.push(v);
            } else {
                stack.extend(self.nodes[v].children.iter().rev());
            }
        }
        out
    }

    /// Non-trivial bipartitions induced by internal edges, each normalised
    /// to the side without the first leaf in `order`.
    fn bipartitions(&self, order: &BTreeMap<String, usize>) -> BTreeSet<Vec<u64>> {
        let n = order.len();
        let words = n.div_ceil(64);
        let mut sets: Vec<Vec<u64>> = vec![vec![0u64; words]; self.nodes.len()];
        let mut sizes = vec![0usize; self.nodes.len()];
        // post-order
        let mut post = Vec::new();
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                post.push(v);
            } else {
                stack.push((v, true));
                for &c in &self.nodes[v].children {
                    stack.push((c, false));
                }
            }
        }
        for &v in &post {
            if self.nodes[v].children.is_empty() {
                let label = self.nodes[v].label.clone().unwrap_or_default();
                let k = order[&label];
                sets[v][k / 64] |= 1 << (k % 64);
                sizes[v] = 1;
            } else {
                for &c in &self.nodes[v].children {
                    for w in 0..words {
                        let bits = sets[c][w];
                        sets[v][w] |= bits;
                    }
                    sizes[v] += sizes[c];
                }
            }
        }
        let mut out = BTreeSet::new();
        for v in 0..self.nodes.len() {
            if v == self.root || self.nodes[v].children.is_empty() {
                continue;
            }
            let size = sizes[v];
            if size < 2 || n - size < 2 {
                continue;
            }
            let mut set = sets[v].clone();
            if set[0] & 1 == 1 {
                for (w, word) in set.iter_mut().enumerate() {
                    *word = !*word;
                    let valid = if (w + 1) * 64 <= n { 64 } else { n - w * 64 };
                    if valid < 64 {
                        *word &= (1u64 << valid) - 1;
                    }
                }
            }
            out.insert(set);
        }
        out
    }
}

/// Robinson-Foulds distance and shared non-trivial splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TreeComparison {
    pub robinson_foulds: usize,
    pub shared_clades: usize,
}

pub fn compare_trees(a: &RefTree, b: &RefTree) -> Result<TreeComparison> {
    let la: BTreeSet<String> = a.leaves().into_iter().collect();
    let lb: BTreeSet<String> = b.leaves().into_iter().collect();
    if la != lb || la.len() != a.leaves().len() || lb.len() != b.leaves().len() {
        return Err(Error::LeafMismatch {
            only_first: la.difference(&lb).cloned().collect(),
            only_second: lb.difference(&la).cloned().collect(),
        });
    }
    let order: BTreeMap<String, usize> = la.into_iter().enumerate().map(|(i, l)| (l, i)).collect();
    let sa = a.bipartitions(&order);
    let sb = b.bipartitions(&order);
    let shared = sa.intersection(&sb).count();
    Ok(TreeComparison {
        robinson_foulds: sa.len() + sb.len() - 2 * shared,
        shared_clades: shared,
    })
}

/// Parses a Newick string into a [`RefTree`].
///
/// Supports nested groups, unquoted or single-quoted labels, branch lengths
/// and whitespace between tokens.
pub fn parse_newick(s: &str) -> Result<RefTree> {
    struct Parser<'a> {
        bytes: &'a [u8],
        pos: usize,
        nodes: Vec<RefNode>,
    }

    impl Parser<'_> {
        fn err<T>(&self, msg: &str) -> Result<T> {
            Err(Error::Newick {
                pos: self.pos,
                msg: msg.to_string(),
            })
        }

        fn skip_ws(&mut self) {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.bytes.get(self.pos).copied()
        }

        fn label(&mut self) -> Result<Option<String>> {
            match self.peek() {
                Some(b'\'') => {
                    self.pos += 1;
                    let start = self.pos;
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\'' {
                        self.pos += 1;
                    }
                    if self.pos >= self.bytes.len() {
                        return self.err("unterminated quoted label");
                    }
                    let l = String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned();
                    self.pos += 1;
                    Ok(Some(l))
                }
                _ => {
                    let start = self.pos;
                    while self.pos < self.bytes.len()
                        && !b"(),:;".contains(&self.bytes[self.pos])
                        && !self.bytes[self.pos].is_ascii_whitespace()
                    {
                        self.pos += 1;
                    }
                    if self.pos == start {
                        Ok(None)
                    } else {
                        Ok(Some(
                            String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned(),
                        ))
                    }
                }
            }
        }

        fn length(&mut self) -> Result<Option<f64>> {
            if self.peek() != Some(b':') {
                return Ok(None);
            }
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && !b"(),:;".contains(&self.bytes[self.pos]) {
                self.pos += 1;
            }
            let text = core::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("").trim();
            match text.parse::<f64>() {
                Ok(v) => Ok(Some(v)),
                Err(_) => self.err("bad branch length"),
            }
        }

        fn subtree(&mut self) -> Result<usize> {
            let mut children = Vec::new();
            if self.peek() == Some(b'(') {
                self.pos += 1;
                loop {
                    children.push(self.subtree()?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.err("expected ',' or ')'"),
                    }
                }
            }
            let label = self.label()?;
            if children.is_empty() && label.is_none() {
                return self.err("leaf without a label");
            }
            let length = self.length()?;
            self.nodes.push(RefNode {
                label,
                length,
                children,
            });
            Ok(self.nodes.len() - 1)
        }
    }

    let mut p = Parser {
        bytes: s.as_bytes(),
        pos: 0,
        nodes: Vec::new(),
    };
    let root = p.subtree()?;
    if p.peek() != Some(b';') {
        return p.err("expected ';'");
    }
    p.pos += 1;
    if p.peek().is_some() {
        return p.err("trailing input after ';'");
    }
    Ok(RefTree {
        nodes: p.nodes,
        root,
    })
}
