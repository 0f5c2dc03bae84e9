//! Exact vertex connectivity via maximum flow (Menger's theorem).
//!
//! Each vertex is split into an in-node and an out-node joined by a
//! unit-capacity arc; the minimum over all non-adjacent ordered pairs of the
//! max flow equals the minimum vertex cut. Complete graphs have connectivity
//! n - 1 by convention.

use std::collections::BTreeMap;

use crate::graph::Graph;
use crate::{Error, Result};

/// Minimum number of vertices whose removal disconnects `g` or reduces it to
/// a single vertex. Exact; requires at least two vertices.
pub fn vertex_connectivity(g: &Graph) -> Result<usize> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Domain(
            "vertex connectivity needs at least 2 vertices".into(),
        ));
    }
    if !g.is_connected() {
        return Ok(0);
    }
    let vs: Vec<&str> = g.vertices().collect();
    let index: BTreeMap<&str, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut non_adjacent = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !g.has_edge(vs[i], vs[j]) {
                non_adjacent.push((i, j));
            }
        }
    }
    if non_adjacent.is_empty() {
        return Ok(n - 1);
    }

    let adj: Vec<Vec<usize>> = vs
        .iter()
        .map(|v| g.neighbors(v).map(|w| index[w]).collect())
        .collect();
    let mut best = usize::MAX;
    for (s, t) in non_adjacent {
        best = best.min(max_vertex_disjoint_paths(&adj, s, t));
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// Max number of internally vertex-disjoint s-t paths, by BFS augmentation
/// on the split digraph. Node 2i is the in-copy of i, node 2i+1 the out-copy.
fn max_vertex_disjoint_paths(adj: &[Vec<usize>], s: usize, t: usize) -> usize {
    let n = adj.len();
    let node_count = 2 * n;
    // capacity[u][v] over the residual digraph; n is small here.
    let mut cap = vec![vec![0u32; node_count]; node_count];
    for v in 0..n {
        cap[2 * v][2 * v + 1] = 1;
    }
    // Source and sink bypass their own unit split.
    cap[2 * s][2 * s + 1] = u32::MAX / 2;
    cap[2 * t][2 * t + 1] = u32::MAX / 2;
    for (v, nbrs) in adj.iter().enumerate() {
        for &w in nbrs {
            cap[2 * v + 1][2 * w] = u32::MAX / 2;
        }
    }

    let (src, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0usize;
    loop {
        let mut parent = vec![usize::MAX; node_count];
        parent[src] = src;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for v in 0..node_count {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[sink] == usize::MAX {
            return flow;
        }
        let mut v = sink;
        while v != src {
            let u = parent[v];
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn prism() -> Graph {
        Graph::from_edges([
            ("u1", "u2"),
            ("u2", "u3"),
            ("u1", "u3"),
            ("w1", "w2"),
            ("w2", "w3"),
            ("w1", "w3"),
            ("u1", "w1"),
            ("u2", "w2"),
            ("u3", "w3"),
        ])
    }

    /// Brute-force oracle: smallest vertex subset whose removal disconnects
    /// the graph (or n-1 for complete graphs).
    pub(crate) fn brute_force_connectivity(g: &Graph) -> usize {
        let vs: Vec<String> = g.vertices().map(|s| s.to_string()).collect();
        let n = vs.len();
        if !g.is_connected() {
            return 0;
        }
        for size in 0..n.saturating_sub(1) {
            let mut chosen = vec![false; n];
            if cut_of_size_exists(g, &vs, &mut chosen, 0, size) {
                return size;
            }
        }
        n - 1
    }

    fn cut_of_size_exists(g: &Graph, vs: &[String], chosen: &mut Vec<bool>, from: usize, left: usize) -> bool {
        if left == 0 {
            let mut h = Graph::new();
            for (i, v) in vs.iter().enumerate() {
                if !chosen[i] {
                    h.add_vertex(v.clone());
                }
            }
            for (a, b) in g.edges() {
                if h.has_vertex(a) && h.has_vertex(b) {
                    h.add_edge_checked(a, b).unwrap();
                }
            }
            return h.vertex_count() > 0 && !h.is_connected();
        }
        for i in from..vs.len() {
            chosen[i] = true;
            if cut_of_size_exists(g, vs, chosen, i + 1, left - 1) {
                chosen[i] = false;
                return true;
            }
            chosen[i] = false;
        }
        false
    }

    #[test]
    fn complete_graph_k4() {
        let k4 = Graph::from_edges([
            ("a", "b"),
            ("a", "c"),
            ("a", "d"),
            ("b", "c"),
            ("b", "d"),
            ("c", "d"),
        ]);
        assert_eq!(vertex_connectivity(&k4).unwrap(), 3);
    }

    #[test]
    fn path_cut_at_middle() {
        let p3 = Graph::from_edges([("a", "b"), ("b", "c")]);
        assert_eq!(vertex_connectivity(&p3).unwrap(), 1);
    }

    #[test]
    fn prism_is_three_connected() {
        // Oracle: brute force over all vertex subsets of size <= 2.
        assert_eq!(brute_force_connectivity(&prism()), 3);
        assert_eq!(vertex_connectivity(&prism()).unwrap(), 3);
    }

    #[test]
    fn single_vertex_is_domain_error() {
        let mut g = Graph::new();
        g.add_vertex("a");
        assert!(vertex_connectivity(&g).is_err());
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        let mut seed = 0xdeadbeefu64;
        for trial in 0..30 {
            let n = 4 + trial % 4;
            let mut g = Graph::new();
            for i in 0..n {
                g.add_vertex(format!("v{i}"));
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if (seed >> 60) % 5 < 3 {
                        g.add_edge_checked(&format!("v{i}"), &format!("v{j}")).unwrap();
                    }
                }
            }
            assert_eq!(
                vertex_connectivity(&g).unwrap(),
                brute_force_connectivity(&g),
                "disagreement on {g:?}"
            );
        }
    }
}
