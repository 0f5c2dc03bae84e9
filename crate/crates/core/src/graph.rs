//! Finite simple labeled graphs with deterministic iteration order.
//!
//! Vertex identifiers are strings, namespaced by construction stage when
//! graphs are composed (e.g. `copyA:v3`, `e:b:(u,v)`, `gadget:vs`), so that
//! reductions can merge graphs without collisions and outputs stay
//! human-auditable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// An undirected edge, stored with the lexicographically smaller endpoint
/// first so that edge sets have a single normal form.
pub type Edge = (String, String);

/// Normalizes an unordered vertex pair into its canonical edge form.
pub fn edge(a: impl Into<String>, b: impl Into<String>) -> Edge {
    let (a, b) = (a.into(), b.into());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A finite simple graph: no self-loops, no parallel edges, every edge
/// endpoint declared as a vertex. All iteration is in sorted vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeSet<String>,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn new() -> Self {
        Graph {
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from explicit vertex and edge lists, validating the
    /// simple-graph invariants.
    pub fn from_parts<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String)>,
    {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (a, b) in edges {
            g.add_edge_checked(&a, &b)?;
        }
        Ok(g)
    }

    /// Convenience constructor for tests and small inputs: vertices are
    /// inferred from the edge list plus an explicit isolated-vertex list.
    pub fn from_edges<'a, E>(edges: E) -> Self
    where
        E: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut g = Graph::new();
        for (a, b) in edges {
            g.add_vertex(a);
            g.add_vertex(b);
            g.add_edge_checked(a, b).expect("malformed edge literal");
        }
        g
    }

    pub fn add_vertex(&mut self, v: impl Into<String>) {
        self.vertices.insert(v.into());
    }

    /// Adds an edge between two declared vertices.
    pub fn add_edge_checked(&mut self, a: &str, b: &str) -> Result<()> {
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at {a:?}")));
        }
        if !self.vertices.contains(a) || !self.vertices.contains(b) {
            return Err(Error::InvalidGraph(format!(
                "edge ({a:?}, {b:?}) references an undeclared vertex"
            )));
        }
        self.edges.insert(edge(a, b));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(|s| s.as_str())
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn neighbors<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.iter().filter_map(move |(a, b)| {
            if a == v {
                Some(b.as_str())
            } else if b == v {
                Some(a.as_str())
            } else {
                None
            }
        })
    }

    pub fn degree(&self, v: &str) -> usize {
        self.neighbors(v).count()
    }

    /// Adjacency map in sorted order, for algorithms that need repeated
    /// neighbor lookups.
    pub fn adjacency(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut adj: BTreeMap<&str, Vec<&str>> =
            self.vertices.iter().map(|v| (v.as_str(), Vec::new())).collect();
        for (a, b) in &self.edges {
            adj.get_mut(a.as_str()).unwrap().push(b.as_str());
            adj.get_mut(b.as_str()).unwrap().push(a.as_str());
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let mut it = self.vertices.iter();
        let start = match it.next() {
            Some(v) => v,
            None => return true,
        };
        let adj = self.adjacency();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.as_str());
        queue.push_back(start.as_str());
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Graphviz rendering of the graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph g {\n");
        for v in &self.vertices {
            out.push_str(&format!("  \"{v}\";\n"));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl Default for Graph {
    fn default() -> Self {
        Self::new()
    }
}

/// Labeled equality: identical vertex sets and identical edge sets.
/// Deliberately not isomorphism; verifiers compare labeled objects.
pub fn graphs_equal(a: &Graph, b: &Graph) -> bool {
    a == b
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphWire {
            vertices: self.vertices.iter().cloned().collect(),
            edges: self.edges.iter().cloned().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = GraphWire::deserialize(deserializer)?;
        Graph::from_parts(wire.vertices, wire.edges).map_err(D::Error::custom)
    }
}
