//! Representations: a host tree plus a vertex-to-subtree assignment, the
//! graphs they derive under the overlap and intersection relations, the
//! verifier that arbitrates every construction, and subdivision lifting.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::Graph;
use crate::tree::{relation_of_sets, HostTree, SetRelation, Subtree};
use crate::{graphs_equal, Error, Result};

/// Which set relation between subtrees counts as an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Edge iff the node sets overlap (intersect, neither containing the other).
    Overlap,
    /// Edge iff the node sets intersect at all.
    Intersection,
}

impl Relation {
    pub fn joins(self, r: SetRelation) -> bool {
        match self {
            Relation::Overlap => r == SetRelation::Overlap,
            Relation::Intersection => r != SetRelation::Disjoint,
        }
    }
}

impl std::str::FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "overlap" => Ok(Relation::Overlap),
            "intersection" => Ok(Relation::Intersection),
            other => Err(Error::Domain(format!("unknown relation {other:?}"))),
        }
    }
}

/// A host tree together with a total assignment of subtrees to graph
/// vertices. Immutable once built; every subtree is validated against the
/// host on construction.
#[derive(Debug, Clone)]
pub struct Representation {
    host: HostTree,
    assignment: BTreeMap<String, Subtree>,
}

impl Representation {
    pub fn new(host: HostTree, assignment: BTreeMap<String, Subtree>) -> Result<Self> {
        for (v, s) in &assignment {
            if s.host_tag() != host.tag() {
                return Err(Error::Domain(format!(
                    "subtree for vertex {v:?} belongs to a different host"
                )));
            }
        }
        Ok(Representation { host, assignment })
    }

    /// Builds a representation from raw node sets, validating each.
    pub fn from_node_sets(
        host: HostTree,
        sets: BTreeMap<String, BTreeSet<String>>,
    ) -> Result<Self> {
        let mut assignment = BTreeMap::new();
        for (v, nodes) in sets {
            let s = host.subtree(nodes).map_err(|e| {
                Error::InvalidSubtree(format!("vertex {v:?}: {e}"))
            })?;
            assignment.insert(v, s);
        }
        Ok(Representation { host, assignment })
    }

    pub fn host(&self) -> &HostTree {
        &self.host
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.assignment.keys().map(|s| s.as_str())
    }

    pub fn subtree_of(&self, v: &str) -> Option<&Subtree> {
        self.assignment.get(v)
    }

    pub fn assignment(&self) -> &BTreeMap<String, Subtree> {
        &self.assignment
    }

    /// Replaces one vertex's subtree (used to engineer defective
    /// representations in tests and diagnostics).
    pub fn with_subtree(&self, v: &str, s: Subtree) -> Result<Self> {
        if !self.assignment.contains_key(v) {
            return Err(Error::Domain(format!("vertex {v:?} not represented")));
        }
        if s.host_tag() != self.host.tag() {
            return Err(Error::HostMismatch);
        }
        let mut assignment = self.assignment.clone();
        assignment.insert(v.to_string(), s);
        Ok(Representation {
            host: self.host.clone(),
            assignment,
        })
    }
}

/// The graph on the representation's vertex set induced by `relation`.
pub fn derive_graph(rep: &Representation, relation: Relation) -> Graph {
    let vs: Vec<&str> = rep.vertices().collect();
    let mut g = Graph::new();
    for v in &vs {
        g.add_vertex(*v);
    }
    for i in 0..vs.len() {
        let si = &rep.assignment[vs[i]];
        for j in (i + 1)..vs.len() {
            let sj = &rep.assignment[vs[j]];
            if relation.joins(relation_of_sets(si.node_set(), sj.node_set())) {
                g.add_edge_checked(vs[i], vs[j]).expect("vertices declared above");
            }
        }
    }
    g
}

/// Verdict of verifying a representation against a target graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// Every vertex pair whose derived relation disagrees with the target.
    Fail { offending_pairs: Vec<(String, String)> },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Checks that the representation derives exactly `target` under `relation`.
/// The vertex sets must already agree; a mismatch is a domain error, not a
/// Fail.
pub fn verify_representation(
    rep: &Representation,
    target: &Graph,
    relation: Relation,
) -> Result<Verdict> {
    let rep_vs: BTreeSet<&str> = rep.vertices().collect();
    let tgt_vs: BTreeSet<&str> = target.vertices().collect();
    if rep_vs != tgt_vs {
        return Err(Error::Domain(
            "representation and target graph have different vertex sets".into(),
        ));
    }
    let derived = derive_graph(rep, relation);
    if graphs_equal(&derived, target) {
        return Ok(Verdict::Pass);
    }
    let mut offending = Vec::new();
    let vs: Vec<&str> = target.vertices().collect();
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if derived.has_edge(vs[i], vs[j]) != target.has_edge(vs[i], vs[j]) {
                offending.push((vs[i].to_string(), vs[j].to_string()));
            }
        }
    }
    Ok(Verdict::Fail {
        offending_pairs: offending,
    })
}

/// Transports a representation onto a subdivision of its host.
///
/// `node_map` sends every old node to its image in `subdivided`; each old
/// edge must map to a path whose interior contains no image of any other old
/// node. Every subtree is replaced by its image plus all subdivision nodes
/// interior to the edges it spanned, which leaves the derived overlap graph
/// unchanged.
pub fn lift_representation(
    rep: &Representation,
    subdivided: &HostTree,
    node_map: &BTreeMap<String, String>,
) -> Result<Representation> {
    let old = rep.host();
    for n in old.nodes() {
        if !node_map.contains_key(n) {
            return Err(Error::Domain(format!("node_map is missing old node {n:?}")));
        }
    }
    let mut images: BTreeSet<&String> = BTreeSet::new();
    for (from, to) in node_map {
        if !old.has_node(from) {
            return Err(Error::Domain(format!("node_map maps foreign node {from:?}")));
        }
        if !subdivided.has_node(to) {
            return Err(Error::Domain(format!("image node {to:?} not in subdivided host")));
        }
        if !images.insert(to) {
            return Err(Error::Domain(format!("node_map is not injective at {to:?}")));
        }
    }
    // Interior chains per old edge, with the consistency check that chains
    // avoid images of other old nodes.
    let mut chains: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for (a, b) in old.edges() {
        let path = subdivided.path_between(&node_map[a], &node_map[b])?;
        let interior = &path[1..path.len() - 1];
        if interior.iter().any(|n| images.contains(&n.to_string())) {
            return Err(Error::Domain(format!(
                "image path of old edge ({a:?}, {b:?}) passes through another mapped node"
            )));
        }
        chains.insert((a.clone(), b.clone()), interior.to_vec());
    }

    let mut lifted = BTreeMap::new();
    for (v, s) in rep.assignment() {
        let mut nodes: BTreeSet<String> = s.nodes().map(|n| node_map[n].clone()).collect();
        for ((a, b), chain) in &chains {
            if s.contains(a) && s.contains(b) {
                nodes.extend(chain.iter().cloned());
            }
        }
        lifted.insert(v.clone(), nodes);
    }
    Representation::from_node_sets(subdivided.clone(), lifted)
}

/// Identity node map for hosts produced by `subdivide`, which preserves the
/// original node names.
pub fn identity_node_map(t: &HostTree) -> BTreeMap<String, String> {
    t.nodes().map(|n| (n.to_string(), n.to_string())).collect()
}

#[derive(Serialize, Deserialize)]
struct RepWire {
    host: HostTree,
    subtrees: BTreeMap<String, Vec<String>>,
}

impl Serialize for Representation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RepWire {
            host: self.host.clone(),
            subtrees: self
                .assignment
                .iter()
                .map(|(v, s)| (v.clone(), s.nodes().map(|n| n.to_string()).collect()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Representation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = RepWire::deserialize(deserializer)?;
        let sets = wire
            .subtrees
            .into_iter()
            .map(|(v, nodes)| (v, nodes.into_iter().collect()))
            .collect();
        Representation::from_node_sets(wire.host, sets).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{subdivide, HostTree};

    fn path(n: usize) -> HostTree {
        HostTree::path((0..n).map(|i| format!("p{i:02}"))).unwrap()
    }

    fn interval_rep(host: &HostTree, spans: &[(&str, usize, usize)]) -> Representation {
        let mut sets = BTreeMap::new();
        for (name, lo, hi) in spans {
            let nodes: BTreeSet<String> = (*lo..=*hi).map(|i| format!("p{i:02}")).collect();
            sets.insert(name.to_string(), nodes);
        }
        Representation::from_node_sets(host.clone(), sets).unwrap()
    }

    #[test]
    fn two_overlapping_intervals_derive_k2() {
        let host = path(4);
        let rep = interval_rep(&host, &[("x", 0, 2), ("y", 1, 3)]);
        let g = derive_graph(&rep, Relation::Overlap);
        assert!(g.has_edge("x", "y"));
    }

    #[test]
    fn nested_intervals_differ_by_relation() {
        let host = path(4);
        let rep = interval_rep(&host, &[("x", 0, 3), ("y", 1, 1)]);
        let overlap = derive_graph(&rep, Relation::Overlap);
        assert_eq!(overlap.edge_count(), 0);
        let intersection = derive_graph(&rep, Relation::Intersection);
        assert!(intersection.has_edge("x", "y"));
    }

    /// Hand-checked interval overlap model of the 5-cycle.
    pub(crate) fn c5_interval_rep() -> (Representation, Graph) {
        let host = path(16);
        let rep = interval_rep(
            &host,
            &[("v0", 0, 9), ("v1", 8, 11), ("v2", 10, 13), ("v3", 12, 15), ("v4", 1, 14)],
        );
        let c5 = Graph::from_edges([
            ("v0", "v1"),
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v0", "v4"),
        ]);
        (rep, c5)
    }

    #[test]
    fn c5_from_unrolled_chords() {
        let (rep, c5) = c5_interval_rep();
        // Independent oracle: brute-force pairwise set checks.
        let vs: Vec<&str> = rep.vertices().collect();
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                let a = rep.subtree_of(vs[i]).unwrap().node_set();
                let b = rep.subtree_of(vs[j]).unwrap().node_set();
                let inter = a.intersection(b).count();
                let overlap = inter > 0 && inter < a.len() && inter < b.len();
                assert_eq!(overlap, c5.has_edge(vs[i], vs[j]), "pair {} {}", vs[i], vs[j]);
            }
        }
        assert!(graphs_equal(&derive_graph(&rep, Relation::Overlap), &c5));
        assert!(verify_representation(&rep, &c5, Relation::Overlap).unwrap().passed());
    }

    #[test]
    fn verifier_reports_offending_pairs() {
        let host = path(4);
        let rep = interval_rep(&host, &[("x", 0, 3), ("y", 1, 2)]);
        let k2 = Graph::from_edges([("x", "y")]);
        match verify_representation(&rep, &k2, Relation::Overlap).unwrap() {
            Verdict::Fail { offending_pairs } => {
                assert_eq!(offending_pairs, vec![("x".to_string(), "y".to_string())]);
            }
            Verdict::Pass => panic!("nested intervals must not verify as K2 overlap"),
        }
    }

    #[test]
    fn verifier_rejects_vertex_set_mismatch() {
        let host = path(4);
        let rep = interval_rep(&host, &[("x", 0, 2)]);
        let k2 = Graph::from_edges([("x", "y")]);
        assert!(verify_representation(&rep, &k2, Relation::Overlap).is_err());
    }

    #[test]
    fn overlap_graph_is_subgraph_of_intersection_graph() {
        let (rep, _) = c5_interval_rep();
        let ov = derive_graph(&rep, Relation::Overlap);
        let is = derive_graph(&rep, Relation::Intersection);
        for (a, b) in ov.edges() {
            assert!(is.has_edge(a, b));
        }
    }

    #[test]
    fn identity_lift_is_identity() {
        let (rep, c5) = c5_interval_rep();
        let lifted = lift_representation(&rep, rep.host(), &identity_node_map(rep.host())).unwrap();
        assert!(graphs_equal(&derive_graph(&lifted, Relation::Overlap), &c5));
        assert_eq!(lifted.assignment(), rep.assignment());
    }

    #[test]
    fn lift_grows_interior_subtree_only() {
        let host = path(4);
        let rep = interval_rep(&host, &[("x", 0, 2), ("y", 1, 3)]);
        // Subdivide an edge interior to x only.
        let target = subdivide(&host, &("p00".into(), "p01".into()), 1).unwrap();
        let lifted = lift_representation(&rep, &target, &identity_node_map(&host)).unwrap();
        assert_eq!(lifted.subtree_of("x").unwrap().len(), 4);
        assert_eq!(lifted.subtree_of("y").unwrap().len(), 3);
        let before = derive_graph(&rep, Relation::Overlap);
        let after = derive_graph(&lifted, Relation::Overlap);
        assert!(graphs_equal(&before, &after));
    }

    #[test]
    fn random_subdivisions_preserve_derived_graph() {
        let (rep, c5) = c5_interval_rep();
        let mut seed = 41u64;
        for _ in 0..25 {
            let mut cur_rep = rep.clone();
            for _ in 0..5 {
                let host = cur_rep.host().clone();
                let edges: Vec<_> = host.edges().cloned().collect();
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let target_edge = edges[(seed >> 33) as usize % edges.len()].clone();
                let times = 1 + (seed % 3) as usize;
                let new_host = subdivide(&host, &target_edge, times).unwrap();
                cur_rep = lift_representation(&cur_rep, &new_host, &identity_node_map(&host)).unwrap();
            }
            // Oracle: the pre-subdivision graph.
            assert!(graphs_equal(&derive_graph(&cur_rep, Relation::Overlap), &c5));
            assert!(verify_representation(&cur_rep, &c5, Relation::Overlap).unwrap().passed());
        }
    }

    #[test]
    fn representation_json_round_trip() {
        let (rep, _) = c5_interval_rep();
        let s = serde_json::to_string(&rep).unwrap();
        let back: Representation = serde_json::from_str(&s).unwrap();
        assert_eq!(back.assignment(), rep.assignment());
    }

    mod properties {
        use super::*;
        use crate::tree::{set_relation, SetRelation};
        use proptest::prelude::*;

        fn intervals() -> impl Strategy<Value = Vec<(usize, usize)>> {
            proptest::collection::vec((0usize..12, 0usize..12), 1..6)
                .prop_map(|spans| spans.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect())
        }

        proptest! {
            #[test]
            fn overlap_edges_are_intersection_edges(spans in intervals()) {
                let host = path(12);
                let labelled: Vec<(&str, usize, usize)> = spans
                    .iter()
                    .enumerate()
                    .map(|(i, (lo, hi))| {
                        let name: &'static str = Box::leak(format!("x{i}").into_boxed_str());
                        (name, *lo, *hi)
                    })
                    .collect();
                let rep = interval_rep(&host, &labelled);
                let ov = derive_graph(&rep, Relation::Overlap);
                let is = derive_graph(&rep, Relation::Intersection);
                for (a, b) in ov.edges() {
                    prop_assert!(is.has_edge(a, b));
                }
                // The verifier accepts the graph it derived.
                prop_assert!(verify_representation(&rep, &ov, Relation::Overlap).unwrap().passed());
                prop_assert!(verify_representation(&rep, &is, Relation::Intersection).unwrap().passed());
            }

            #[test]
            fn set_relation_is_symmetric_up_to_swap(
                a in (0usize..12, 0usize..12),
                b in (0usize..12, 0usize..12),
            ) {
                let host = path(12);
                let mk = |(x, y): (usize, usize)| {
                    let (lo, hi) = (x.min(y), x.max(y));
                    host.subtree((lo..=hi).map(|i| format!("p{i:02}"))).unwrap()
                };
                let (s, t) = (mk(a), mk(b));
                let fwd = set_relation(&s, &t).unwrap();
                let back = set_relation(&t, &s).unwrap();
                let expected = match fwd {
                    SetRelation::AContainsB => SetRelation::BContainsA,
                    SetRelation::BContainsA => SetRelation::AContainsB,
                    other => other,
                };
                prop_assert_eq!(back, expected);
                prop_assert_eq!(fwd == SetRelation::Equal, s.node_set() == t.node_set());
            }
        }
    }
}
