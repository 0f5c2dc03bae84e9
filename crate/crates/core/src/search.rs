//! Exhaustive, constraint-pruned search for subtree representations of small
//! graphs over bounded host trees, and empirical audits of structural
//! properties of gadget representations.
//!
//! Hosts are enumerated one per isomorphism class (canonical-form dedup).
//! Within a host, node sets are u64 bitmasks, every connected subset is
//! enumerated once, and the backtracking assigns vertices in descending
//! degree order, pruning on the first pair whose relation contradicts the
//! target graph. Absence is only ever reported relative to the configured
//! caps.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::reduction::{build_gadget, GadgetParams, GadgetVertex};
use crate::represent::{verify_representation, Relation, Representation};
use crate::tree::HostTree;
use crate::{Error, Result};

/// Shape restriction on the hosts to search over.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum HostConstraint {
    Unconstrained,
    LeafageAtMost(usize),
    MaxDegreeAtMost(usize),
    SubdivisionOf(HostTree),
    Fixed(HostTree),
}

/// Restriction on the subtrees assigned to vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubtreeConstraint {
    Any,
    PathsOnly,
}

/// Bounds of a search run. Absence within these caps is reported as
/// `BoundedAbsent`, never as unconditional absence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_host_nodes: usize,
    pub host_constraint: HostConstraint,
    pub relation: Relation,
    pub subtree_constraint: SubtreeConstraint,
    pub time_budget: Option<Duration>,
}

impl SearchConfig {
    pub fn new(max_host_nodes: usize) -> Result<Self> {
        if max_host_nodes < 2 {
            return Err(Error::Domain("max_host_nodes must be at least 2".into()));
        }
        Ok(SearchConfig {
            max_host_nodes,
            host_constraint: HostConstraint::Unconstrained,
            relation: Relation::Overlap,
            subtree_constraint: SubtreeConstraint::Any,
            time_budget: None,
        })
    }

    pub fn with_constraint(mut self, c: HostConstraint) -> Self {
        self.host_constraint = c;
        self
    }

    pub fn with_relation(mut self, r: Relation) -> Self {
        self.relation = r;
        self
    }

    pub fn paths_only(mut self) -> Self {
        self.subtree_constraint = SubtreeConstraint::PathsOnly;
        self
    }

    pub fn with_budget(mut self, seconds: f64) -> Self {
        self.time_budget = Some(Duration::from_secs_f64(seconds));
        self
    }
}

/// Result of a bounded recognition search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        representation: Representation,
        hosts_checked: usize,
    },
    /// Exhausted the whole bounded space without a witness; conclusive only
    /// within the configured caps.
    BoundedAbsent { hosts_checked: usize },
    /// Ran out of time budget with partial coverage.
    Timeout { hosts_checked: usize },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&Representation> {
        match self {
            SearchOutcome::Found { representation, .. } => Some(representation),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Free tree enumeration with canonical-form dedup.

/// Canonical form of a free tree: AHU encoding rooted at its center (for two
/// centers, the ordered pair of half-encodings).
fn canonical_form(adj: &[Vec<usize>]) -> String {
    let centers = tree_centers(adj);
    match centers.as_slice() {
        [c] => encode_rooted(adj, *c, usize::MAX, &|_| ' '),
        [c1, c2] => {
            let a = encode_rooted(adj, *c1, *c2, &|_| ' ');
            let b = encode_rooted(adj, *c2, *c1, &|_| ' ');
            if a <= b {
                format!("[{a}|{b}]")
            } else {
                format!("[{b}|{a}]")
            }
        }
        _ => unreachable!("a tree has one or two centers"),
    }
}

/// Canonical form of a tree with a marked node subset; equal forms mean the
/// marked sets lie in the same orbit of the automorphism group.
fn canonical_form_marked(adj: &[Vec<usize>], marked: u64) -> String {
    let color = |v: usize| if marked >> v & 1 == 1 { '*' } else { '.' };
    let centers = tree_centers(adj);
    match centers.as_slice() {
        [c] => encode_rooted(adj, *c, usize::MAX, &color),
        [c1, c2] => {
            let a = encode_rooted(adj, *c1, *c2, &color);
            let b = encode_rooted(adj, *c2, *c1, &color);
            if a <= b {
                format!("[{a}|{b}]")
            } else {
                format!("[{b}|{a}]")
            }
        }
        _ => unreachable!(),
    }
}

fn encode_rooted(adj: &[Vec<usize>], v: usize, parent: usize, color: &dyn Fn(usize) -> char) -> String {
    let mut children: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| encode_rooted(adj, w, v, color))
        .collect();
    children.sort();
    format!("({}{})", color(v), children.concat())
}

fn tree_centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            degree[v] = 0;
            for &w in &adj[v] {
                if degree[w] > 1 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn host_from_adj(adj: &[Vec<usize>]) -> HostTree {
    let names: Vec<String> = (0..adj.len()).map(|i| format!("n{i:02}")).collect();
    let mut edges = Vec::new();
    for (v, nbrs) in adj.iter().enumerate() {
        for &w in nbrs {
            if v < w {
                edges.push((names[v].clone(), names[w].clone()));
            }
        }
    }
    HostTree::from_parts(names, edges).expect("adjacency lists form a tree")
}

fn adj_of_host(t: &HostTree) -> (Vec<String>, Vec<Vec<usize>>) {
    let names: Vec<String> = t.nodes().map(|s| s.to_string()).collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut adj = vec![Vec::new(); names.len()];
    for (a, b) in t.edges() {
        let (i, j) = (index[a.as_str()], index[b.as_str()]);
        adj[i].push(j);
        adj[j].push(i);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    (names, adj)
}

/// All unlabeled trees with 2..=cap nodes, one representative per
/// isomorphism class, smallest first; within a size, ordered by canonical
/// form. Constraints from `cfg` are applied as filters (or, for subdivision
/// and fixed-host constraints, drive the generation directly).
pub fn enumerate_host_trees(cfg: &SearchConfig) -> Result<Vec<HostTree>> {
    if cfg.max_host_nodes < 2 {
        return Err(Error::Domain("max_host_nodes must be at least 2".into()));
    }
    if cfg.max_host_nodes > 64 {
        return Err(Error::Domain("host enumeration is limited to 64 nodes".into()));
    }
    match &cfg.host_constraint {
        HostConstraint::Fixed(t) => {
            if t.node_count() <= cfg.max_host_nodes {
                Ok(vec![t.clone()])
            } else {
                Ok(Vec::new())
            }
        }
        HostConstraint::SubdivisionOf(t) => subdivisions_up_to(t, cfg.max_host_nodes),
        constraint => {
            let keep = |adj: &[Vec<usize>]| match constraint {
                HostConstraint::Unconstrained => true,
                HostConstraint::LeafageAtMost(k) => {
                    adj.iter().filter(|a| a.len() <= 1).count() <= *k
                }
                HostConstraint::MaxDegreeAtMost(k) => adj.iter().all(|a| a.len() <= *k),
                _ => unreachable!(),
            };
            let mut out = Vec::new();
            // Trees of size n, grown by leaf attachment from size n-1.
            let mut current: Vec<Vec<Vec<usize>>> = vec![vec![vec![1], vec![0]]];
            let mut seen: BTreeSet<String> = BTreeSet::new();
            for n in 2..=cfg.max_host_nodes {
                if n > 2 {
                    let mut next: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
                    for tree in &current {
                        for attach in 0..tree.len() {
                            let mut grown = tree.clone();
                            grown[attach].push(tree.len());
                            grown.push(vec![attach]);
                            let form = canonical_form(&grown);
                            next.entry(form).or_insert(grown);
                        }
                    }
                    current = next.into_values().collect();
                }
                for tree in &current {
                    let form = canonical_form(tree);
                    if seen.insert(form) && keep(tree) {
                        out.push(host_from_adj(tree));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// All subdivisions of `t` with at most `cap` nodes, deduplicated up to
/// isomorphism.
fn subdivisions_up_to(t: &HostTree, cap: usize) -> Result<Vec<HostTree>> {
    if t.node_count() > cap {
        return Ok(Vec::new());
    }
    let edges: Vec<(String, String)> = t.edges().cloned().collect();
    let extra = cap - t.node_count();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut split = vec![0usize; edges.len()];
    loop {
        let total: usize = split.iter().sum();
        if total <= extra {
            let mut cur = t.clone();
            for (i, &times) in split.iter().enumerate() {
                if times > 0 {
                    cur = crate::tree::subdivide(&cur, &edges[i], times)?;
                }
            }
            let (_, adj) = adj_of_host(&cur);
            if seen.insert(canonical_form(&adj)) {
                out.push(cur);
            }
        }
        // Next composition with component sums bounded by `extra`.
        let mut i = 0;
        loop {
            if i == split.len() {
                out.sort_by_key(|h| (h.node_count(), serde_json::to_string(h).unwrap()));
                return Ok(out);
            }
            split[i] += 1;
            if split.iter().sum::<usize>() <= extra {
                break;
            }
            split[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Connected subset machinery on bitmask hosts.

struct MaskHost {
    names: Vec<String>,
    adj_mask: Vec<u64>,
    /// Connected subsets permitted by the subtree constraint, sorted.
    subsets: Vec<u64>,
}

impl MaskHost {
    fn build(t: &HostTree, constraint: SubtreeConstraint) -> Result<MaskHost> {
        let (names, adj) = adj_of_host(t);
        let n = names.len();
        if n > 64 {
            return Err(Error::Domain("search hosts are limited to 64 nodes".into()));
        }
        let adj_mask: Vec<u64> = adj
            .iter()
            .map(|nbrs| nbrs.iter().fold(0u64, |m, &w| m | 1 << w))
            .collect();
        let mut subsets = Vec::new();
        for start in 0..n {
            let above: u64 = !0u64 << start;
            grow(1 << start, adj_mask[start] & above & !(1 << start), 0, &adj_mask, above, &mut subsets);
        }
        if constraint == SubtreeConstraint::PathsOnly {
            subsets.retain(|&s| is_path_mask(s, &adj_mask));
        }
        subsets.sort_unstable_by_key(|&s| (s.count_ones(), s));
        Ok(MaskHost { names, adj_mask, subsets })
    }

    fn subtree_nodes(&self, mask: u64) -> BTreeSet<String> {
        (0..self.names.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.names[i].clone())
            .collect()
    }

    fn subtree_leaf_count(&self, mask: u64) -> usize {
        (0..self.names.len())
            .filter(|&i| mask >> i & 1 == 1)
            .filter(|&i| (self.adj_mask[i] & mask).count_ones() <= 1)
            .count()
    }

    fn boundary_count(&self, mask: u64) -> usize {
        (0..self.names.len())
            .filter(|&i| mask >> i & 1 == 1)
            .filter(|&i| self.adj_mask[i] & !mask != 0)
            .count()
    }
}

fn grow(s: u64, cand: u64, banned: u64, adj: &[u64], above: u64, out: &mut Vec<u64>) {
    out.push(s);
    let mut c = cand;
    let mut banned = banned;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        let vbit = 1u64 << v;
        c ^= vbit;
        let s2 = s | vbit;
        let cand2 = (c | (adj[v] & above & !s2)) & !banned & !s2;
        grow(s2, cand2, banned, adj, above, out);
        banned |= vbit;
    }
}

fn is_path_mask(s: u64, adj: &[u64]) -> bool {
    let mut m = s;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        if (adj[v] & s).count_ones() > 2 {
            return false;
        }
    }
    true
}

/// Relation of two node-set masks, mirroring `set_relation`.
fn joins_mask(relation: Relation, a: u64, b: u64) -> bool {
    let inter = a & b;
    match relation {
        Relation::Intersection => inter != 0,
        Relation::Overlap => inter != 0 && inter != a && inter != b,
    }
}

// ---------------------------------------------------------------------------
// Backtracking search.

struct HostSearch<'a> {
    order: Vec<&'a str>,
    /// adjacency among order indices
    adjacent: Vec<Vec<bool>>,
    relation: Relation,
    deadline: Option<Instant>,
    steps: u64,
    timed_out: bool,
}

impl<'a> HostSearch<'a> {
    fn new(g: &'a Graph, relation: Relation, deadline: Option<Instant>) -> Self {
        let mut order: Vec<&str> = g.vertices().collect();
        order.sort_by(|a, b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(b)));
        let adjacent = order
            .iter()
            .map(|a| order.iter().map(|b| g.has_edge(a, b)).collect())
            .collect();
        HostSearch {
            order,
            adjacent,
            relation,
            deadline,
            steps: 0,
            timed_out: false,
        }
    }

    /// Enumerates assignments over one host; `on_solution` returns false to
    /// stop early. Returns false if the search timed out.
    fn run(&mut self, host: &MaskHost, adj: &[Vec<usize>], on_solution: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        if self.order.is_empty() {
            on_solution(&[]);
            return !self.timed_out;
        }
        // Quotient the first vertex's choices by host automorphisms.
        let mut first_choices = Vec::new();
        let mut seen_orbit = BTreeSet::new();
        for &s in &host.subsets {
            if seen_orbit.insert(canonical_form_marked(adj, s)) {
                first_choices.push(s);
            }
        }
        let mut assigned = vec![0u64; self.order.len()];
        for &s in &first_choices {
            assigned[0] = s;
            if !self.descend(host, &mut assigned, 1, on_solution) {
                break;
            }
            if self.timed_out {
                break;
            }
        }
        !self.timed_out
    }

    fn descend(&mut self, host: &MaskHost, assigned: &mut Vec<u64>, depth: usize, on_solution: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        if depth == self.order.len() {
            return on_solution(assigned);
        }
        for &s in &host.subsets {
            self.steps += 1;
            if self.steps % 4096 == 0 {
                if let Some(deadline) = self.deadline {
                    if Instant::now() >= deadline {
                        self.timed_out = true;
                        return false;
                    }
                }
            }
            let ok = (0..depth).all(|j| {
                joins_mask(self.relation, assigned[j], s) == self.adjacent[depth][j]
            });
            if !ok {
                continue;
            }
            assigned[depth] = s;
            if !self.descend(host, assigned, depth + 1, on_solution) {
                return false;
            }
            if self.timed_out {
                return false;
            }
        }
        true
    }

    fn to_representation(&self, host: &MaskHost, tree: &HostTree, assigned: &[u64]) -> Result<Representation> {
        let sets: BTreeMap<String, BTreeSet<String>> = self
            .order
            .iter()
            .zip(assigned)
            .map(|(v, &mask)| (v.to_string(), host.subtree_nodes(mask)))
            .collect();
        Representation::from_node_sets(tree.clone(), sets)
    }
}

/// Searches the bounded host space for a representation of `g` under the
/// configured relation. The first witness (in host enumeration order) is
/// returned after an internal re-verification; exhaustion yields
/// `BoundedAbsent` and budget expiry yields `Timeout`.
pub fn find_representation(g: &Graph, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if g.vertex_count() > 12 {
        log::warn!(
            "searching for a representation of a {}-vertex graph; expect exponential cost",
            g.vertex_count()
        );
    }
    let hosts = enumerate_host_trees(cfg)?;
    let deadline = cfg.time_budget.map(|b| Instant::now() + b);

    let best = AtomicUsize::new(usize::MAX);
    let any_timeout = AtomicBool::new(false);
    let results: Vec<Option<Representation>> = hosts
        .par_iter()
        .enumerate()
        .map(|(ix, tree)| {
            if ix >= best.load(Ordering::Relaxed) {
                return Ok(None);
            }
            let host = MaskHost::build(tree, cfg.subtree_constraint)?;
            let (_, adj) = adj_of_host(tree);
            let mut search = HostSearch::new(g, cfg.relation, deadline);
            let mut witness: Option<Vec<u64>> = None;
            let completed = search.run(&host, &adj, &mut |assigned| {
                witness = Some(assigned.to_vec());
                false
            });
            if !completed {
                any_timeout.store(true, Ordering::Relaxed);
            }
            match witness {
                Some(assigned) => {
                    let rep = search.to_representation(&host, tree, &assigned)?;
                    match verify_representation(&rep, g, cfg.relation)? {
                        crate::represent::Verdict::Pass => {}
                        crate::represent::Verdict::Fail { .. } => {
                            return Err(Error::Internal(
                                "search produced a representation that fails verification".into(),
                            ))
                        }
                    }
                    best.fetch_min(ix, Ordering::Relaxed);
                    Ok(Some(rep))
                }
                None => Ok(None),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let hosts_checked = hosts.len();
    for rep in results.into_iter().flatten() {
        return Ok(SearchOutcome::Found {
            representation: rep,
            hosts_checked,
        });
    }
    if any_timeout.load(Ordering::Relaxed) {
        Ok(SearchOutcome::Timeout { hosts_checked })
    } else {
        Ok(SearchOutcome::BoundedAbsent { hosts_checked })
    }
}

// ---------------------------------------------------------------------------
// Audits.

/// Outcome of an exhaustive audit: how much was covered, what was found, and
/// every counterexample verbatim.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditReport {
    pub lemma: String,
    pub hosts_checked: usize,
    pub items_checked: usize,
    pub representations_found: usize,
    pub counterexamples: Vec<serde_json::Value>,
    pub timed_out: bool,
    pub elapsed_seconds: f64,
}

impl AuditReport {
    pub fn clean(&self) -> bool {
        self.counterexamples.is_empty() && !self.timed_out
    }
}

/// Enumerates every representation of the `u = 0` gadget within the caps and
/// checks, for each: the blocking subtrees are in strict containment (one
/// way or the other), and both have at least `d` leaves as subtrees.
pub fn audit_gadget_lemmas(d: usize, cfg: &SearchConfig) -> Result<AuditReport> {
    let start = Instant::now();
    let params = GadgetParams::new(d, 0)?;
    let (gadget, named) = build_gadget(params)?;
    let vs = named[&GadgetVertex::Vs].clone();
    let vb = named[&GadgetVertex::Vb].clone();

    let hosts = enumerate_host_trees(cfg)?;
    let deadline = cfg.time_budget.map(|b| Instant::now() + b);

    struct HostAudit {
        reps: usize,
        counterexamples: Vec<serde_json::Value>,
        timed_out: bool,
    }

    let audits: Vec<HostAudit> = hosts
        .par_iter()
        .map(|tree| {
            let host = MaskHost::build(tree, cfg.subtree_constraint)?;
            let (_, adj) = adj_of_host(tree);
            let mut search = HostSearch::new(&gadget, cfg.relation, deadline);
            let vs_ix = search.order.iter().position(|v| *v == vs).unwrap();
            let vb_ix = search.order.iter().position(|v| *v == vb).unwrap();
            let mut audit = HostAudit {
                reps: 0,
                counterexamples: Vec::new(),
                timed_out: false,
            };
            let order: Vec<String> = search.order.iter().map(|v| v.to_string()).collect();
            let completed = search.run(&host, &adj, &mut |assigned| {
                audit.reps += 1;
                let (ts, tb) = (assigned[vs_ix], assigned[vb_ix]);
                let nested = (ts & tb == ts && ts != tb) || (ts & tb == tb && ts != tb);
                let ts_leaves = host.subtree_leaf_count(ts);
                let tb_leaves = host.subtree_leaf_count(tb);
                if !nested || ts_leaves < d || tb_leaves < d {
                    let (larger, larger_leaves, smaller_leaves) =
                        if ts.count_ones() >= tb.count_ones() {
                            ("t_s", ts_leaves, tb_leaves)
                        } else {
                            ("t_b", tb_leaves, ts_leaves)
                        };
                    let assignment: BTreeMap<&str, BTreeSet<String>> = order
                        .iter()
                        .map(|v| v.as_str())
                        .zip(assigned.iter().map(|&m| host.subtree_nodes(m)))
                        .collect();
                    audit.counterexamples.push(serde_json::json!({
                        "host": tree,
                        "assignment": assignment,
                        "t_s": host.subtree_nodes(ts),
                        "t_b": host.subtree_nodes(tb),
                        "nested": nested,
                        "t_s_leaves": ts_leaves,
                        "t_b_leaves": tb_leaves,
                        "larger": larger,
                        "larger_leaves": larger_leaves,
                        "smaller_leaves": smaller_leaves,
                    }));
                }
                true
            });
            audit.timed_out = !completed;
            Ok(audit)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = AuditReport {
        lemma: "gadget-containment-and-leaves".into(),
        hosts_checked: hosts.len(),
        items_checked: 0,
        representations_found: 0,
        counterexamples: Vec::new(),
        timed_out: false,
        elapsed_seconds: 0.0,
    };
    for audit in audits {
        report.representations_found += audit.reps;
        report.items_checked += audit.reps;
        report.counterexamples.extend(audit.counterexamples);
        report.timed_out |= audit.timed_out;
    }
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Exhaustively checks, over all hosts within the caps, that every pair of
/// disjoint subtrees with `l` and `k - l + offset` boundary nodes (where `k`
/// is the host's leafage) covers all branching nodes. The correct statement
/// uses `offset = 2`; `offset = 1` is a deliberately weakened variant used
/// as a negative control.
pub fn audit_spanbranch(cfg: &SearchConfig, offset: usize) -> Result<AuditReport> {
    let start = Instant::now();
    let hosts = enumerate_host_trees(cfg)?;
    let deadline = cfg.time_budget.map(|b| Instant::now() + b);

    struct HostAudit {
        pairs: usize,
        counterexamples: Vec<serde_json::Value>,
        timed_out: bool,
    }

    let audits: Vec<HostAudit> = hosts
        .par_iter()
        .map(|tree| {
            let host = MaskHost::build(tree, SubtreeConstraint::Any)?;
            let k = tree.leaves().len();
            let branch_mask: u64 = {
                let (names, adj) = adj_of_host(tree);
                (0..names.len())
                    .filter(|&i| adj[i].len() >= 3)
                    .fold(0u64, |m, i| m | 1 << i)
            };
            let boundary: Vec<usize> = host.subsets.iter().map(|&s| host.boundary_count(s)).collect();
            let mut audit = HostAudit {
                pairs: 0,
                counterexamples: Vec::new(),
                timed_out: false,
            };
            'outer: for (i, &s) in host.subsets.iter().enumerate() {
                if let Some(deadline) = deadline {
                    if Instant::now() >= deadline {
                        audit.timed_out = true;
                        break 'outer;
                    }
                }
                for (j, &t) in host.subsets.iter().enumerate() {
                    if i == j || s & t != 0 {
                        continue;
                    }
                    let l = boundary[i];
                    if k + offset < l || boundary[j] != k + offset - l {
                        continue;
                    }
                    audit.pairs += 1;
                    if branch_mask & !(s | t) != 0 {
                        audit.counterexamples.push(serde_json::json!({
                            "host": tree,
                            "s": host.subtree_nodes(s),
                            "t": host.subtree_nodes(t),
                            "uncovered": host.subtree_nodes(branch_mask & !(s | t)),
                        }));
                    }
                }
            }
            Ok(audit)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = AuditReport {
        lemma: format!("spanbranch-offset-{offset}"),
        hosts_checked: hosts.len(),
        items_checked: 0,
        representations_found: 0,
        counterexamples: Vec::new(),
        timed_out: false,
        elapsed_seconds: 0.0,
    };
    for audit in audits {
        report.items_checked += audit.pairs;
        report.counterexamples.extend(audit.counterexamples);
        report.timed_out |= audit.timed_out;
    }
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::analyze_tree;

    #[test]
    fn free_tree_counts_match_the_catalog() {
        // Numbers of unlabeled trees on n = 2..7 nodes: 1, 1, 2, 3, 6, 11.
        let expect_cumulative = [(2, 1), (3, 2), (4, 4), (5, 7), (6, 13), (7, 24)];
        for (cap, total) in expect_cumulative {
            let cfg = SearchConfig::new(cap).unwrap();
            let hosts = enumerate_host_trees(&cfg).unwrap();
            assert_eq!(hosts.len(), total, "cap {cap}");
        }
        let cfg = SearchConfig::new(4).unwrap();
        let hosts = enumerate_host_trees(&cfg).unwrap();
        let four: Vec<&HostTree> = hosts.iter().filter(|h| h.node_count() == 4).collect();
        assert_eq!(four.len(), 2);
    }

    #[test]
    fn leafage_two_hosts_are_paths() {
        let cfg = SearchConfig::new(5)
            .unwrap()
            .with_constraint(HostConstraint::LeafageAtMost(2));
        let hosts = enumerate_host_trees(&cfg).unwrap();
        assert_eq!(hosts.len(), 4);
        for h in &hosts {
            assert!(analyze_tree(h).is_path);
        }
    }

    #[test]
    fn leafage_three_excludes_only_the_big_star() {
        let cfg = SearchConfig::new(5)
            .unwrap()
            .with_constraint(HostConstraint::LeafageAtMost(3));
        let hosts = enumerate_host_trees(&cfg).unwrap();
        // All 7 trees on <= 5 nodes except the 4-leaf star.
        assert_eq!(hosts.len(), 6);
        assert!(hosts.iter().all(|h| h.leaves().len() <= 3));
    }

    #[test]
    fn subdivision_enumeration_respects_base() {
        let star = HostTree::from_parts(
            ["c", "x", "y", "z"],
            [("c".into(), "x".into()), ("c".into(), "y".into()), ("c".into(), "z".into())],
        )
        .unwrap();
        let cfg = SearchConfig::new(6)
            .unwrap()
            .with_constraint(HostConstraint::SubdivisionOf(star.clone()));
        let hosts = enumerate_host_trees(&cfg).unwrap();
        // Sizes 4, 5 (one class), 6 (two classes: stretch one leg twice or
        // two legs once each).
        assert_eq!(hosts.len(), 4);
        for h in &hosts {
            assert!(crate::tree::is_subdivision_of(h, &star));
        }
    }

    #[test]
    fn finds_k2_as_overlapping_intervals() {
        let k2 = Graph::from_edges([("x", "y")]);
        let cfg = SearchConfig::new(3).unwrap();
        match find_representation(&k2, &cfg).unwrap() {
            SearchOutcome::Found { representation, .. } => {
                assert!(verify_representation(&representation, &k2, Relation::Overlap)
                    .unwrap()
                    .passed());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn finds_c5_on_paths() {
        let c5 = Graph::from_edges([("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("0", "4")]);
        let cfg = SearchConfig::new(10)
            .unwrap()
            .with_constraint(HostConstraint::LeafageAtMost(2));
        match find_representation(&c5, &cfg).unwrap() {
            SearchOutcome::Found { representation, .. } => {
                assert!(verify_representation(&representation, &c5, Relation::Overlap)
                    .unwrap()
                    .passed());
                assert!(analyze_tree(representation.host()).is_path);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn finds_disjoint_singletons_for_empty_graph_intersection() {
        let mut g = Graph::new();
        g.add_vertex("a");
        g.add_vertex("b");
        g.add_vertex("d");
        let cfg = SearchConfig::new(3).unwrap().with_relation(Relation::Intersection);
        match find_representation(&g, &cfg).unwrap() {
            SearchOutcome::Found { representation, .. } => {
                assert!(
                    verify_representation(&representation, &g, Relation::Intersection)
                        .unwrap()
                        .passed()
                );
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn search_is_deterministic() {
        let c4 = Graph::from_edges([("0", "1"), ("1", "2"), ("2", "3"), ("0", "3")]);
        let cfg = SearchConfig::new(7).unwrap();
        let a = find_representation(&c4, &cfg).unwrap();
        let b = find_representation(&c4, &cfg).unwrap();
        match (a, b) {
            (
                SearchOutcome::Found { representation: ra, .. },
                SearchOutcome::Found { representation: rb, .. },
            ) => assert_eq!(ra.assignment(), rb.assignment()),
            other => panic!("expected two witnesses, got {other:?}"),
        }
    }

    #[test]
    fn gadget_audit_small_caps_is_clean_and_paths_are_empty() {
        // Hosts up to 7 nodes: no violations (possibly no representations).
        let cfg = SearchConfig::new(7).unwrap();
        let report = audit_gadget_lemmas(3, &cfg).unwrap();
        assert!(report.counterexamples.is_empty());
        assert!(!report.timed_out);

        // Path hosts cannot host the gadget at all: t_s needs 3 leaves.
        let cfg = SearchConfig::new(9)
            .unwrap()
            .with_constraint(HostConstraint::LeafageAtMost(2));
        let report = audit_gadget_lemmas(3, &cfg).unwrap();
        assert_eq!(report.representations_found, 0);
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn spanbranch_audit_clean_and_negative_control_fires() {
        // Cap 8 reaches the smallest control counterexample, the spider with
        // legs 3, 3, 1: two leg intervals with two boundary nodes each miss
        // the center.
        let cfg = SearchConfig::new(8).unwrap();
        let correct = audit_spanbranch(&cfg, 2).unwrap();
        assert!(correct.counterexamples.is_empty(), "true statement audited clean");
        assert!(correct.items_checked > 0);

        let control = audit_spanbranch(&cfg, 1).unwrap();
        assert!(
            !control.counterexamples.is_empty(),
            "weakened statement must produce counterexamples"
        );
    }

    #[test]
    fn spanbranch_audit_on_stretched_double_stars() {
        // Four-leaf hosts with two branching nodes, up to 10 nodes.
        let base = HostTree::from_parts(
            ["c1", "c2", "a", "b", "d", "e"],
            [
                ("c1".into(), "c2".into()),
                ("c1".into(), "a".into()),
                ("c1".into(), "b".into()),
                ("c2".into(), "d".into()),
                ("c2".into(), "e".into()),
            ],
        )
        .unwrap();
        let mut hosts = vec![base.clone()];
        hosts.push(crate::tree::subdivide(&base, &("c1".into(), "c2".into()), 2).unwrap());
        let stretched = crate::tree::subdivide(&base, &("a".into(), "c1".into()), 2).unwrap();
        hosts.push(crate::tree::subdivide(&stretched, &("c2".into(), "d".into()), 2).unwrap());
        for host in hosts {
            assert!(host.node_count() <= 10);
            let cfg = SearchConfig::new(host.node_count())
                .unwrap()
                .with_constraint(HostConstraint::Fixed(host));
            let report = audit_spanbranch(&cfg, 2).unwrap();
            assert!(report.counterexamples.is_empty());
            assert!(!report.timed_out);
        }
    }
}
