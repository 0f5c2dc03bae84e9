//! Host trees, subtrees and structural tree analysis: set relations between
//! subtrees, twigs, lastbranches, edge subdivision and subdivision checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::hash::{Hash, Hasher};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{edge, Edge};
use crate::{Error, Result};

/// A finite tree with string-labeled nodes: connected and acyclic, so
/// |edges| = |nodes| - 1.
#[derive(Debug, Clone)]
pub struct HostTree {
    nodes: BTreeSet<String>,
    edges: BTreeSet<Edge>,
    adj: BTreeMap<String, Vec<String>>,
    tag: u64,
}

impl PartialEq for HostTree {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for HostTree {}

impl HostTree {
    pub fn from_parts<N, E>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        E: IntoIterator<Item = (String, String)>,
    {
        let nodes: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidTree(format!("self-loop at {a:?}")));
            }
            if !nodes.contains(&a) || !nodes.contains(&b) {
                return Err(Error::InvalidTree(format!(
                    "edge ({a:?}, {b:?}) references an undeclared node"
                )));
            }
            edge_set.insert(edge(a, b));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidTree("a tree needs at least one node".into()));
        }
        if edge_set.len() != nodes.len() - 1 {
            return Err(Error::InvalidTree(format!(
                "{} nodes need exactly {} edges, got {}",
                nodes.len(),
                nodes.len() - 1,
                edge_set.len()
            )));
        }
        let mut adj: BTreeMap<String, Vec<String>> =
            nodes.iter().map(|n| (n.clone(), Vec::new())).collect();
        for (a, b) in &edge_set {
            adj.get_mut(a).unwrap().push(b.clone());
            adj.get_mut(b).unwrap().push(a.clone());
        }
        for nbrs in adj.values_mut() {
            nbrs.sort();
        }
        let t = HostTree {
            tag: tag_of(&nodes, &edge_set),
            nodes,
            edges: edge_set,
            adj,
        };
        if !t.is_connected() {
            return Err(Error::InvalidTree("tree is not connected".into()));
        }
        Ok(t)
    }

    /// Builds a path on the given node names, in order.
    pub fn path<I>(nodes: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let names: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let edges: Vec<Edge> = names.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        HostTree::from_parts(names, edges)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|s| s.as_str())
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn has_node(&self, n: &str) -> bool {
        self.nodes.contains(n)
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn neighbors<'a>(&'a self, v: &str) -> impl Iterator<Item = &'a str> + 'a {
        self.adj.get(v).into_iter().flatten().map(|s| s.as_str())
    }

    pub fn degree(&self, v: &str) -> usize {
        self.adj.get(v).map_or(0, |n| n.len())
    }

    pub fn adjacency(&self) -> BTreeMap<&str, Vec<&str>> {
        self.adj
            .iter()
            .map(|(v, nbrs)| (v.as_str(), nbrs.iter().map(|s| s.as_str()).collect()))
            .collect()
    }

    fn is_connected(&self) -> bool {
        let start = self.nodes.iter().next().unwrap();
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        seen.insert(start.as_str());
        let mut queue = VecDeque::from([start.as_str()]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.nodes.len()
    }

    /// Stable identity of this tree, used to reject cross-host subtree
    /// comparisons.
    pub fn tag(&self) -> u64 {
        self.tag
    }

    /// The unique path between two nodes, endpoints included.
    pub fn path_between(&self, a: &str, b: &str) -> Result<Vec<String>> {
        if !self.has_node(a) || !self.has_node(b) {
            return Err(Error::Domain(format!("path endpoints {a:?}, {b:?} must be tree nodes")));
        }
        let adj = self.adjacency();
        let mut prev: BTreeMap<&str, &str> = BTreeMap::new();
        prev.insert(a, a);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for &w in &adj[v] {
                if !prev.contains_key(w) {
                    prev.insert(w, v);
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![b.to_string()];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            path.push(cur.to_string());
        }
        path.reverse();
        Ok(path)
    }

    /// Validates and wraps a node set as a subtree of this host.
    pub fn subtree<I>(&self, nodes: I) -> Result<Subtree>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let set: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        if set.is_empty() {
            return Err(Error::InvalidSubtree("subtree must be nonempty".into()));
        }
        for n in &set {
            if !self.has_node(n) {
                return Err(Error::InvalidSubtree(format!("node {n:?} is not in the host tree")));
            }
        }
        // Connectivity of the induced subgraph.
        let start = set.iter().next().unwrap();
        let mut seen = BTreeSet::new();
        seen.insert(start.clone());
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(&v) {
                if set.contains(w) && seen.insert(w.to_string()) {
                    queue.push_back(w.to_string());
                }
            }
        }
        if seen.len() != set.len() {
            return Err(Error::InvalidSubtree(
                "node set does not induce a connected subgraph".into(),
            ));
        }
        Ok(Subtree {
            nodes: set,
            host_tag: self.tag,
        })
    }

    /// Leaves: nodes of degree at most one (a single-node tree is its own leaf).
    pub fn leaves(&self) -> Vec<&str> {
        self.nodes().filter(|n| self.degree(n) <= 1).collect()
    }

    pub fn leafage(&self) -> usize {
        self.leaves().len()
    }

    /// Graphviz rendering; nodes in `highlight` are filled.
    pub fn to_dot(&self, highlight: Option<&Subtree>) -> String {
        let mut out = String::from("graph host {\n  node [color=black];\n");
        for v in &self.nodes {
            if highlight.map_or(false, |s| s.contains(v)) {
                out.push_str(&format!("  \"{v}\" [style=filled, fillcolor=lightblue];\n"));
            } else {
                out.push_str(&format!("  \"{v}\";\n"));
            }
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn tag_of(nodes: &BTreeSet<String>, edges: &BTreeSet<Edge>) -> u64 {
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    nodes.hash(&mut hasher);
    edges.hash(&mut hasher);
    hasher.finish()
}

#[derive(Serialize, Deserialize)]
struct TreeWire {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Serialize for HostTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TreeWire {
            nodes: self.nodes.iter().cloned().collect(),
            edges: self.edges.iter().cloned().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HostTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = TreeWire::deserialize(deserializer)?;
        HostTree::from_parts(wire.nodes, wire.edges).map_err(D::Error::custom)
    }
}

/// A nonempty node set inducing a connected subgraph of one host tree.
/// Carries the host's tag so cross-host comparisons fail loudly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subtree {
    nodes: BTreeSet<String>,
    host_tag: u64,
}

impl Subtree {
    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|s| s.as_str())
    }

    pub fn node_set(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: &str) -> bool {
        self.nodes.contains(n)
    }

    pub fn host_tag(&self) -> u64 {
        self.host_tag
    }

    /// Leaves of the subtree viewed as a tree in its own right.
    pub fn leaves_within(&self, host: &HostTree) -> Vec<&str> {
        self.nodes
            .iter()
            .filter(|n| host.neighbors(n).filter(|w| self.nodes.contains(*w)).count() <= 1)
            .map(|s| s.as_str())
            .collect()
    }

    /// Nodes of the subtree with at least one host neighbor outside it.
    pub fn boundary_nodes<'a>(&'a self, host: &'a HostTree) -> Vec<&'a str> {
        self.nodes
            .iter()
            .filter(|n| host.neighbors(n).any(|w| !self.nodes.contains(w)))
            .map(|s| s.as_str())
            .collect()
    }

    /// True iff every node has at most two neighbors inside the subtree.
    pub fn is_path(&self, host: &HostTree) -> bool {
        self.nodes
            .iter()
            .all(|n| host.neighbors(n).filter(|w| self.nodes.contains(*w)).count() <= 2)
    }
}

/// Exact trichotomy (plus equality) on the node sets of two subtrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetRelation {
    Disjoint,
    /// Nonempty intersection with both differences nonempty.
    Overlap,
    /// A properly contains B.
    AContainsB,
    /// B properly contains A.
    BContainsA,
    Equal,
}

/// Classifies the relation between two subtrees of the same host.
pub fn set_relation(a: &Subtree, b: &Subtree) -> Result<SetRelation> {
    if a.host_tag != b.host_tag {
        return Err(Error::HostMismatch);
    }
    Ok(relation_of_sets(&a.nodes, &b.nodes))
}

/// Single sorted-merge pass with early exit once all three emptiness facts
/// are decided.
pub(crate) fn relation_of_sets(a: &BTreeSet<String>, b: &BTreeSet<String>) -> SetRelation {
    let mut common = false;
    let mut a_only = false;
    let mut b_only = false;
    let mut ia = a.iter();
    let mut ib = b.iter();
    let (mut na, mut nb) = (ia.next(), ib.next());
    loop {
        if common && a_only && b_only {
            return SetRelation::Overlap;
        }
        match (na, nb) {
            (None, None) => break,
            (Some(_), None) => {
                a_only = true;
                break;
            }
            (None, Some(_)) => {
                b_only = true;
                break;
            }
            (Some(x), Some(y)) => match x.cmp(y) {
                std::cmp::Ordering::Equal => {
                    common = true;
                    na = ia.next();
                    nb = ib.next();
                }
                std::cmp::Ordering::Less => {
                    a_only = true;
                    na = ia.next();
                }
                std::cmp::Ordering::Greater => {
                    b_only = true;
                    nb = ib.next();
                }
            },
        }
    }
    match (common, a_only, b_only) {
        (false, _, _) => SetRelation::Disjoint,
        (true, true, true) => SetRelation::Overlap,
        (true, true, false) => SetRelation::AContainsB,
        (true, false, true) => SetRelation::BContainsA,
        (true, false, false) => SetRelation::Equal,
    }
}

/// Structural summary of a tree: leaves, branching nodes, twigs and
/// lastbranches.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeAnalysis {
    pub leaves: Vec<String>,
    pub leafage: usize,
    pub max_degree: usize,
    /// Nodes of degree at least three.
    pub branching_nodes: Vec<String>,
    /// Maximal induced paths containing a leaf and no node of degree > 2,
    /// listed leaf-first. A bare path is reported as a single twig.
    pub twigs: Vec<Vec<String>>,
    /// Branching nodes whose removal leaves at most one non-path component.
    pub lastbranches: Vec<String>,
    /// True iff the tree has no branching node at all.
    pub is_path: bool,
}

/// Computes leaves, twigs and lastbranches of a tree.
pub fn analyze_tree(t: &HostTree) -> TreeAnalysis {
    let leaves: Vec<String> = t.leaves().iter().map(|s| s.to_string()).collect();
    let max_degree = t.nodes().map(|n| t.degree(n)).max().unwrap_or(0);
    let branching_nodes: Vec<String> = t
        .nodes()
        .filter(|n| t.degree(n) >= 3)
        .map(|s| s.to_string())
        .collect();
    let is_path = branching_nodes.is_empty();

    let mut twigs: Vec<Vec<String>> = Vec::new();
    if is_path {
        // Both leaves trace the same maximal path; report it once from the
        // lexicographically smaller leaf.
        let start = leaves.iter().min().cloned().unwrap_or_else(|| {
            t.nodes().next().unwrap().to_string()
        });
        let mut path = vec![start.clone()];
        let mut prev: Option<String> = None;
        let mut cur = start;
        loop {
            let next = t
                .neighbors(&cur)
                .find(|w| Some(*w) != prev.as_deref())
                .map(|s| s.to_string());
            match next {
                Some(n) => {
                    path.push(n.clone());
                    prev = Some(cur);
                    cur = n;
                }
                None => break,
            }
        }
        twigs.push(path);
    } else {
        for leaf in &leaves {
            let mut path = vec![leaf.clone()];
            let mut prev: Option<String> = None;
            let mut cur = leaf.clone();
            loop {
                let next = t
                    .neighbors(&cur)
                    .find(|w| Some(*w) != prev.as_deref())
                    .map(|s| s.to_string());
                match next {
                    Some(n) if t.degree(&n) <= 2 => {
                        path.push(n.clone());
                        prev = Some(cur);
                        cur = n;
                    }
                    _ => break,
                }
            }
            twigs.push(path);
        }
        twigs.sort();
    }

    let mut lastbranches = Vec::new();
    for b in &branching_nodes {
        let mut non_path_components = 0;
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        seen.insert(b.as_str());
        for start in t.neighbors(b) {
            if seen.contains(start) {
                continue;
            }
            let mut component = vec![start];
            seen.insert(start);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in t.neighbors(v) {
                    if w != b && seen.insert(w) {
                        component.push(w);
                        queue.push_back(w);
                    }
                }
            }
            let path_like = component
                .iter()
                .all(|v| t.neighbors(v).filter(|w| *w != b && component.contains(w)).count() <= 2);
            if !path_like {
                non_path_components += 1;
            }
        }
        if non_path_components <= 1 {
            lastbranches.push(b.clone());
        }
    }

    TreeAnalysis {
        leafage: leaves.len(),
        leaves,
        max_degree,
        branching_nodes,
        twigs,
        lastbranches,
        is_path,
    }
}

/// Replaces `target` with a chain of `times` fresh nodes. Returns the new
/// tree and the chain, ordered from the smaller edge endpoint to the larger.
pub fn subdivide_tracked(t: &HostTree, target: &Edge, times: usize) -> Result<(HostTree, Vec<String>)> {
    if times == 0 {
        return Err(Error::Domain("subdivision count must be positive".into()));
    }
    let target = edge(target.0.clone(), target.1.clone());
    if !t.has_edge(&target.0, &target.1) {
        return Err(Error::Domain(format!(
            "edge ({:?}, {:?}) is not in the tree",
            target.0, target.1
        )));
    }
    let chain: Vec<String> = (1..=times)
        .map(|i| format!("origEdge({},{})#{i:04}", target.0, target.1))
        .collect();
    for c in &chain {
        if t.has_node(c) {
            return Err(Error::Domain(format!("subdivision node name {c:?} already taken")));
        }
    }
    let mut nodes: Vec<String> = t.nodes().map(|s| s.to_string()).collect();
    nodes.extend(chain.iter().cloned());
    let mut edges: Vec<Edge> = t.edges().filter(|e| **e != target).cloned().collect();
    let mut prev = target.0.clone();
    for c in &chain {
        edges.push((prev.clone(), c.clone()));
        prev = c.clone();
    }
    edges.push((prev, target.1.clone()));
    Ok((HostTree::from_parts(nodes, edges)?, chain))
}

/// Edge subdivision: inserts `times` fresh degree-2 nodes into `target`.
/// The leaf set (and so the leafage) is unchanged.
pub fn subdivide(t: &HostTree, target: &Edge, times: usize) -> Result<HostTree> {
    subdivide_tracked(t, target, times).map(|(t, _)| t)
}

/// True iff `candidate` can be derived from `base` by subdividing edges any
/// number of times. Decided on the reduced trees (degree-2 nodes suppressed):
/// there must be an isomorphism of reduced trees under which every reduced
/// path of `candidate` is at least as long as the corresponding path of
/// `base`.
pub fn is_subdivision_of(candidate: &HostTree, base: &HostTree) -> bool {
    let rc = reduce(candidate);
    let rb = reduce(base);
    if rc.nodes.len() != rb.nodes.len() || rc.edges.len() != rb.edges.len() {
        return false;
    }
    if rb.nodes.len() == 1 {
        return rc.nodes.len() == 1;
    }
    // Try mapping an arbitrary fixed topo-node of base onto every candidate
    // topo-node of the same degree.
    let b0 = rb.nodes[0].clone();
    for c0 in &rc.nodes {
        if rb.degree(&b0) != rc.degree(c0) {
            continue;
        }
        let mut mapping = BTreeMap::new();
        mapping.insert(b0.clone(), c0.clone());
        if extend_embedding(&rb, &rc, &b0, None, c0, None, &mut mapping) {
            return true;
        }
    }
    false
}

/// Reduced ("topological") tree: leaves and branching nodes joined by
/// weighted edges recording path lengths.
struct ReducedTree {
    nodes: Vec<String>,
    edges: BTreeMap<(String, String), usize>,
}

impl ReducedTree {
    fn degree(&self, v: &str) -> usize {
        self.edges.keys().filter(|(a, b)| a == v || b == v).count()
    }

    fn neighbors(&self, v: &str) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        for ((a, b), w) in &self.edges {
            if a == v {
                out.push((b.clone(), *w));
            } else if b == v {
                out.push((a.clone(), *w));
            }
        }
        out
    }
}

fn reduce(t: &HostTree) -> ReducedTree {
    let topo: Vec<String> = t
        .nodes()
        .filter(|n| t.degree(n) != 2)
        .map(|s| s.to_string())
        .collect();
    if topo.is_empty() {
        // Degenerate: every node has degree 2, impossible in a tree.
        unreachable!("a tree always has a node of degree != 2");
    }
    let mut edges = BTreeMap::new();
    for start in &topo {
        for first in t.neighbors(start) {
            // Walk along degree-2 nodes until the next topo node.
            let mut prev = start.clone();
            let mut cur = first.to_string();
            let mut len = 1;
            while t.degree(&cur) == 2 {
                let next = t
                    .neighbors(&cur)
                    .find(|w| **w != *prev)
                    .unwrap()
                    .to_string();
                prev = cur;
                cur = next;
                len += 1;
            }
            if start < &cur || (start == &cur) {
                edges.insert((start.clone(), cur.clone()), len);
            } else {
                edges.insert((cur.clone(), start.clone()), len);
            }
        }
    }
    ReducedTree { nodes: topo, edges }
}

/// Recursive matching of reduced trees rooted at a matched pair, with
/// backtracking over the assignment of children. Weights must dominate.
fn extend_embedding(
    base: &ReducedTree,
    cand: &ReducedTree,
    b: &str,
    b_parent: Option<&str>,
    c: &str,
    c_parent: Option<&str>,
    mapping: &mut BTreeMap<String, String>,
) -> bool {
    let b_children: Vec<(String, usize)> = base
        .neighbors(b)
        .into_iter()
        .filter(|(n, _)| Some(n.as_str()) != b_parent)
        .collect();
    let c_children: Vec<(String, usize)> = cand
        .neighbors(c)
        .into_iter()
        .filter(|(n, _)| Some(n.as_str()) != c_parent)
        .collect();
    if b_children.len() != c_children.len() {
        return false;
    }
    match_children(base, cand, b, c, &b_children, &c_children, &mut vec![false; c_children.len()], 0, mapping)
}

#[allow(clippy::too_many_arguments)]
fn match_children(
    base: &ReducedTree,
    cand: &ReducedTree,
    b: &str,
    c: &str,
    b_children: &[(String, usize)],
    c_children: &[(String, usize)],
    used: &mut Vec<bool>,
    i: usize,
    mapping: &mut BTreeMap<String, String>,
) -> bool {
    if i == b_children.len() {
        return true;
    }
    let (bc, bw) = &b_children[i];
    for (j, (cc, cw)) in c_children.iter().enumerate() {
        if used[j] || cw < bw || base.degree(bc) != cand.degree(cc) {
            continue;
        }
        used[j] = true;
        mapping.insert(bc.clone(), cc.clone());
        if extend_embedding(base, cand, bc, Some(b), cc, Some(c), mapping)
            && match_children(base, cand, b, c, b_children, c_children, used, i + 1, mapping)
        {
            return true;
        }
        mapping.remove(bc);
        used[j] = false;
    }
    false
}

/// Common intersection of a family of subtrees (the witness demanded by the
/// Helly property when the family pairwise intersects).
pub fn common_intersection<'a, I>(subtrees: I) -> BTreeSet<String>
where
    I: IntoIterator<Item = &'a Subtree>,
{
    let mut it = subtrees.into_iter();
    let mut acc: BTreeSet<String> = match it.next() {
        Some(s) => s.node_set().clone(),
        None => return BTreeSet::new(),
    };
    for s in it {
        acc = acc.intersection(s.node_set()).cloned().collect();
        if acc.is_empty() {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize) -> HostTree {
        HostTree::path((1..=n).map(|i| format!("{i}"))).unwrap()
    }

    fn star3() -> HostTree {
        HostTree::from_parts(
            ["c", "x", "y", "z"],
            [
                ("c".into(), "x".into()),
                ("c".into(), "y".into()),
                ("c".into(), "z".into()),
            ],
        )
        .unwrap()
    }

    /// Two degree-3 centers joined by an edge, two pendant leaves each.
    pub(crate) fn double_star() -> HostTree {
        HostTree::from_parts(
            ["c1", "c2", "a", "b", "d", "e"],
            [
                ("c1".into(), "c2".into()),
                ("c1".into(), "a".into()),
                ("c1".into(), "b".into()),
                ("c2".into(), "d".into()),
                ("c2".into(), "e".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn relation_examples_on_a_path() {
        let t = p(3);
        let s12 = t.subtree(["1", "2"]).unwrap();
        let s23 = t.subtree(["2", "3"]).unwrap();
        let s2 = t.subtree(["2"]).unwrap();
        let s123 = t.subtree(["1", "2", "3"]).unwrap();
        let s1 = t.subtree(["1"]).unwrap();
        let s3 = t.subtree(["3"]).unwrap();
        assert_eq!(set_relation(&s12, &s23).unwrap(), SetRelation::Overlap);
        assert_eq!(set_relation(&s2, &s123).unwrap(), SetRelation::BContainsA);
        assert_eq!(set_relation(&s123, &s2).unwrap(), SetRelation::AContainsB);
        assert_eq!(set_relation(&s1, &s3).unwrap(), SetRelation::Disjoint);
        assert_eq!(set_relation(&s12, &s12.clone()).unwrap(), SetRelation::Equal);
    }

    #[test]
    fn cross_host_comparison_fails() {
        let t1 = p(3);
        let t2 = star3();
        let a = t1.subtree(["1"]).unwrap();
        let b = t2.subtree(["c"]).unwrap();
        assert!(matches!(set_relation(&a, &b), Err(Error::HostMismatch)));
    }

    #[test]
    fn disconnected_subtree_rejected() {
        let t = p(3);
        assert!(t.subtree(["1", "3"]).is_err());
        assert!(t.subtree(Vec::<String>::new()).is_err());
    }

    #[test]
    fn analyze_star() {
        let a = analyze_tree(&star3());
        assert_eq!(a.leafage, 3);
        assert_eq!(a.branching_nodes, vec!["c"]);
        assert_eq!(a.lastbranches, vec!["c"]);
        assert_eq!(a.twigs.len(), 3);
        assert!(a.twigs.iter().all(|t| t.len() == 1));
        assert!(!a.is_path);
    }

    #[test]
    fn analyze_path() {
        let a = analyze_tree(&p(5));
        assert_eq!(a.leafage, 2);
        assert!(a.branching_nodes.is_empty());
        assert!(a.lastbranches.is_empty());
        assert!(a.is_path);
        assert_eq!(a.twigs.len(), 1);
        assert_eq!(a.twigs[0].len(), 5);
    }

    #[test]
    fn analyze_double_star() {
        let a = analyze_tree(&double_star());
        assert_eq!(a.leafage, 4);
        assert_eq!(a.branching_nodes.len(), 2);
        assert_eq!(a.lastbranches.len(), 2);
        assert_eq!(a.twigs.len(), 4);
    }

    #[test]
    fn twig_accounting_invariant() {
        for t in [p(5), star3(), double_star()] {
            let a = analyze_tree(&t);
            if a.is_path {
                continue;
            }
            let twig_edges: usize = a.twigs.iter().map(|tw| tw.len()).sum();
            let twig_nodes: BTreeSet<&String> = a.twigs.iter().flatten().collect();
            let internal_edges = t
                .edges()
                .filter(|(x, y)| !twig_nodes.contains(x) && !twig_nodes.contains(y))
                .count();
            // Each twig of length m nodes accounts for m edges (m-1 internal
            // to the twig plus its attachment edge).
            assert_eq!(twig_edges + internal_edges, t.node_count() - 1);
            for leaf in &a.leaves {
                assert_eq!(a.twigs.iter().filter(|tw| tw.contains(leaf)).count(), 1);
            }
        }
    }

    #[test]
    fn subdivide_examples() {
        let p2 = p(2);
        let t = subdivide(&p2, &("1".into(), "2".into()), 1).unwrap();
        assert_eq!(t.node_count(), 3);
        assert_eq!(analyze_tree(&t).leafage, 2);

        let s = star3();
        let t = subdivide(&s, &("c".into(), "x".into()), 2).unwrap();
        assert_eq!(t.node_count(), 6);
        assert_eq!(analyze_tree(&t).leafage, 3);
        assert!(subdivide(&s, &("x".into(), "y".into()), 1).is_err());
    }

    #[test]
    fn subdivision_preserves_leafage_randomized() {
        let mut seed = 7u64;
        for _ in 0..100 {
            // Random tree on up to 8 nodes via random attachment.
            let mut nodes = vec!["n0".to_string()];
            let mut edges = Vec::new();
            let n = 2 + (seed % 7) as usize;
            for i in 1..n {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let parent = (seed >> 33) as usize % i;
                nodes.push(format!("n{i}"));
                edges.push((format!("n{parent}"), format!("n{i}")));
            }
            let t = HostTree::from_parts(nodes, edges).unwrap();
            let before = t.leafage();
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let edge_ix = (seed >> 33) as usize % t.edges().count();
            let target = t.edges().nth(edge_ix).unwrap().clone();
            let t2 = subdivide(&t, &target, 1 + (seed % 3) as usize).unwrap();
            assert_eq!(t2.leafage(), before);
        }
    }

    #[test]
    fn subdivision_membership_checks() {
        let s = star3();
        let bigger = subdivide(&s, &("c".into(), "x".into()), 3).unwrap();
        assert!(is_subdivision_of(&bigger, &s));
        assert!(!is_subdivision_of(&s, &bigger));
        assert!(is_subdivision_of(&s, &s));
        assert!(is_subdivision_of(&p(7), &p(3)));
        assert!(!is_subdivision_of(&p(3), &p(7)));
        assert!(!is_subdivision_of(&p(7), &s));

        let ds = double_star();
        let stretched = subdivide(&ds, &("c1".into(), "c2".into()), 4).unwrap();
        let stretched = subdivide(&stretched, &("c1".into(), "a".into()), 2).unwrap();
        assert!(is_subdivision_of(&stretched, &ds));
        assert!(!is_subdivision_of(&stretched, &star3()));
    }

    #[test]
    fn boundary_and_leaves_within() {
        let t = double_star();
        let s = t.subtree(["c1", "a", "b"]).unwrap();
        let mut boundary = s.boundary_nodes(&t);
        boundary.sort();
        assert_eq!(boundary, vec!["c1"]);
        let mut lv = s.leaves_within(&t);
        lv.sort();
        assert_eq!(lv, vec!["a", "b"]);
        assert!(s.is_path(&t));
        let whole = t.subtree(t.nodes().map(|s| s.to_string())).unwrap();
        assert!(!whole.is_path(&t));
    }
}
