//! Blocking-gadget constructions: the parameterized gadget graph, the
//! 3-connectivity amplification, and the blocked graphs (with and without
//! the gadget) carrying full role labels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::tree::{analyze_tree, HostTree};
use crate::{Error, Result};

/// Parameters of the blocking gadget: `d >= 3` outer paths and `u` inner
/// paths, where `u` is zero or at least two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetParams {
    pub d: usize,
    pub u: usize,
}

impl GadgetParams {
    pub fn new(d: usize, u: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::Domain(format!("gadget needs d >= 3, got {d}")));
        }
        if u == 1 {
            return Err(Error::Domain("gadget parameter u must be 0 or >= 2".into()));
        }
        Ok(GadgetParams { d, u })
    }
}

/// The four named gadget vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetVertex {
    Vs,
    Vb,
    VsPrime,
    VbPrime,
}

/// Builds the gadget with the default three internal vertices per path:
/// `vs` and `vb` joined by `d` disjoint paths, and (when `u >= 2`) an extra
/// vertex `vs'` joined to `vb'` — the middle vertex of the first outer path —
/// by `u` disjoint paths.
pub fn build_gadget(p: GadgetParams) -> Result<(Graph, BTreeMap<GadgetVertex, String>)> {
    build_gadget_with(p, 3)
}

/// Gadget builder with an explicit number of internal vertices per path,
/// for experimenting with the path-length reading. Paths keep their middle
/// vertex only for odd lengths, so `internal` must be odd and at least 3.
pub fn build_gadget_with(
    p: GadgetParams,
    internal: usize,
) -> Result<(Graph, BTreeMap<GadgetVertex, String>)> {
    if internal < 3 || internal % 2 == 0 {
        return Err(Error::Domain(
            "paths need an odd number of internal vertices, at least 3".into(),
        ));
    }
    let mut g = Graph::new();
    let vs = "gadget:vs".to_string();
    let vb = "gadget:vb".to_string();
    g.add_vertex(vs.clone());
    g.add_vertex(vb.clone());
    let mut named = BTreeMap::new();
    named.insert(GadgetVertex::Vs, vs.clone());
    named.insert(GadgetVertex::Vb, vb.clone());

    let mut vb_prime = String::new();
    for i in 1..=p.d {
        let chain: Vec<String> = (1..=internal).map(|j| format!("gadget:p{i}.{j}")).collect();
        for node in &chain {
            g.add_vertex(node.clone());
        }
        g.add_edge_checked(&vs, &chain[0])?;
        for w in chain.windows(2) {
            g.add_edge_checked(&w[0], &w[1])?;
        }
        g.add_edge_checked(chain.last().unwrap(), &vb)?;
        if i == 1 {
            vb_prime = chain[internal / 2].clone();
        }
    }
    named.insert(GadgetVertex::VbPrime, vb_prime.clone());

    if p.u >= 2 {
        let vs_prime = "gadget:vs'".to_string();
        g.add_vertex(vs_prime.clone());
        named.insert(GadgetVertex::VsPrime, vs_prime.clone());
        for i in 1..=p.u {
            let chain: Vec<String> = (1..=internal).map(|j| format!("gadget:q{i}.{j}")).collect();
            for node in &chain {
                g.add_vertex(node.clone());
            }
            g.add_edge_checked(&vs_prime, &chain[0])?;
            for w in chain.windows(2) {
                g.add_edge_checked(&w[0], &w[1])?;
            }
            g.add_edge_checked(chain.last().unwrap(), &vb_prime)?;
        }
    }
    Ok((g, named))
}

/// Three disjoint copies of `g` plus a triangle on the three copies of every
/// original vertex. The result is 3-connected with minimum degree three, and
/// is k-colorable iff `g` is, for every k >= 3.
pub fn amplify_3con(g: &Graph) -> Result<Graph> {
    if g.vertex_count() < 2 {
        return Err(Error::Domain("amplification needs at least 2 vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Domain("amplification needs a connected input".into()));
    }
    let copies = ["copyA", "copyB", "copyC"];
    let mut out = Graph::new();
    for c in copies {
        for v in g.vertices() {
            out.add_vertex(format!("{c}:{v}"));
        }
    }
    for c in copies {
        for (a, b) in g.edges() {
            out.add_edge_checked(&format!("{c}:{a}"), &format!("{c}:{b}"))?;
        }
    }
    for v in g.vertices() {
        for i in 0..copies.len() {
            for j in (i + 1)..copies.len() {
                out.add_edge_checked(
                    &format!("{}:{v}", copies[i]),
                    &format!("{}:{v}", copies[j]),
                )?;
            }
        }
    }
    Ok(out)
}

/// Role of a vertex in a blocked graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    VertexRep,
    EdgeRep,
    Brother,
    Gadget,
}

/// Copy index of the six disjoint copies of the original vertex and edge
/// sets. Fixed labels a..f; serialized as single letters.
pub const COPIES: [char; 6] = ['a', 'b', 'c', 'd', 'e', 'f'];

pub type CopyId = char;

/// What a blocked-graph vertex stands for in the original graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Vertex(String),
    Edge(String, String),
}

/// Role labeling of a blocked graph: role partition, copy indices, origins,
/// the brother bijection and the named gadget vertices.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BlockedLabels {
    pub role: BTreeMap<String, Role>,
    /// Copy index for vertex- and edge-representatives.
    pub copy: BTreeMap<String, CopyId>,
    pub origin: BTreeMap<String, Origin>,
    /// Bijection from vertex-representatives to their brothers.
    pub brother_of: BTreeMap<String, String>,
    pub named: BTreeMap<GadgetVertex, String>,
}

impl BlockedLabels {
    pub fn vertex_reps(&self) -> impl Iterator<Item = &str> {
        self.role
            .iter()
            .filter(|(_, r)| **r == Role::VertexRep)
            .map(|(v, _)| v.as_str())
    }

    pub fn edge_reps(&self) -> impl Iterator<Item = &str> {
        self.role
            .iter()
            .filter(|(_, r)| **r == Role::EdgeRep)
            .map(|(v, _)| v.as_str())
    }

    pub fn brothers(&self) -> impl Iterator<Item = &str> {
        self.role
            .iter()
            .filter(|(_, r)| **r == Role::Brother)
            .map(|(v, _)| v.as_str())
    }

    /// Members of the forced clique: edge-representatives and brothers.
    pub fn clique_members(&self) -> Vec<&str> {
        self.role
            .iter()
            .filter(|(_, r)| matches!(r, Role::EdgeRep | Role::Brother))
            .map(|(v, _)| v.as_str())
            .collect()
    }

    pub fn vertex_reps_of_copy(&self, c: CopyId) -> Vec<&str> {
        self.vertex_reps()
            .filter(|v| self.copy.get(*v) == Some(&c))
            .collect()
    }

    pub fn origin_vertex(&self, v: &str) -> Option<&str> {
        match self.origin.get(v) {
            Some(Origin::Vertex(o)) => Some(o.as_str()),
            _ => None,
        }
    }
}

fn vertex_rep_name(c: CopyId, v: &str) -> String {
    format!("v:{c}:{v}")
}

fn brother_name(c: CopyId, v: &str) -> String {
    format!("b:{c}:{v}")
}

fn edge_rep_name(c: CopyId, a: &str, b: &str) -> String {
    format!("e:{c}:({a},{b})")
}

/// Core of the blocked-graph construction, with or without the gadget part.
fn build_blocked(g: &Graph, gadget: Option<(Graph, BTreeMap<GadgetVertex, String>)>) -> Result<(Graph, BlockedLabels)> {
    let mut out = Graph::new();
    let mut labels = BlockedLabels::default();

    // V1: six copies of the vertex set; V3: their brothers; V2: six copies
    // of the edge set.
    for c in COPIES {
        for v in g.vertices() {
            let rep = vertex_rep_name(c, v);
            let bro = brother_name(c, v);
            out.add_vertex(rep.clone());
            out.add_vertex(bro.clone());
            labels.role.insert(rep.clone(), Role::VertexRep);
            labels.role.insert(bro.clone(), Role::Brother);
            labels.copy.insert(rep.clone(), c);
            labels.origin.insert(rep.clone(), Origin::Vertex(v.to_string()));
            labels.origin.insert(bro.clone(), Origin::Vertex(v.to_string()));
            labels.brother_of.insert(rep, bro);
        }
        for (a, b) in g.edges() {
            let rep = edge_rep_name(c, a, b);
            out.add_vertex(rep.clone());
            labels.role.insert(rep.clone(), Role::EdgeRep);
            labels.copy.insert(rep.clone(), c);
            labels.origin.insert(rep, Origin::Edge(a.clone(), b.clone()));
        }
    }

    // E1: each edge-representative joined to its two incident
    // vertex-representatives within its copy.
    for c in COPIES {
        for (a, b) in g.edges() {
            let rep = edge_rep_name(c, a, b);
            out.add_edge_checked(&rep, &vertex_rep_name(c, a))?;
            out.add_edge_checked(&rep, &vertex_rep_name(c, b))?;
        }
    }

    // E2: full clique on edge-representatives and brothers.
    let clique: Vec<String> = labels.clique_members().iter().map(|s| s.to_string()).collect();
    for i in 0..clique.len() {
        for j in (i + 1)..clique.len() {
            out.add_edge_checked(&clique[i], &clique[j])?;
        }
    }

    // E3: each vertex-representative joined to its brother.
    for (rep, bro) in &labels.brother_of {
        out.add_edge_checked(rep, bro)?;
    }

    if let Some((gadget_graph, named)) = gadget {
        // V4 and E6: the gadget itself.
        for v in gadget_graph.vertices() {
            out.add_vertex(v);
            labels.role.insert(v.to_string(), Role::Gadget);
        }
        for (a, b) in gadget_graph.edges() {
            out.add_edge_checked(a, b)?;
        }
        // E4, E5: the whole clique joined to vs and vb.
        let vs = named[&GadgetVertex::Vs].clone();
        let vb = named[&GadgetVertex::Vb].clone();
        for m in &clique {
            out.add_edge_checked(m, &vs)?;
            out.add_edge_checked(m, &vb)?;
        }
        labels.named = named;
    }

    Ok((out, labels))
}

/// The blocked graph of `g`: six copies of its vertices and edges as
/// vertex- and edge-representatives, brothers, the E1..E5 edge classes, and
/// the gadget wired to the clique.
pub fn build_blocked_graph(g: &Graph, p: GadgetParams) -> Result<(Graph, BlockedLabels)> {
    build_blocked(g, Some(build_gadget(p)?))
}

/// The blocked graph without the gadget: only representatives and brothers,
/// with the E1..E3 edge classes.
pub fn build_empty_blocked(g: &Graph) -> Result<(Graph, BlockedLabels)> {
    build_blocked(g, None)
}

/// Gadget parameters dictated by a host tree: `k` is its leafage, `d` the
/// minimum degree over its lastbranches, and `u` is zero for a single
/// branching node (where `d = k`) and `k - d + 1` otherwise.
pub fn reduction_params_for_tree(t: &HostTree) -> Result<(GadgetParams, usize)> {
    let analysis = analyze_tree(t);
    let k = analysis.leafage;
    if k < 3 {
        return Err(Error::Domain(format!(
            "reduction needs a tree with at least 3 leaves, got leafage {k}"
        )));
    }
    let d = analysis
        .lastbranches
        .iter()
        .map(|b| t.degree(b))
        .min()
        .expect("a tree with >= 3 leaves has a lastbranch");
    let u = if analysis.branching_nodes.len() == 1 {
        debug_assert_eq!(d, k);
        0
    } else {
        k - d + 1
    };
    Ok((GadgetParams::new(d, u)?, k))
}
