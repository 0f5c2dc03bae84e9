//! Canonical representation builders: from a proper coloring to a verified
//! subtree-overlap representation of the blocked graph (star hosts,
//! subdivisions of a given tree, and subpath hosts of bounded degree), plus
//! the decoder that recovers a coloring from any sufficiently nice
//! representation.
//!
//! Layout idea, common to all builders: each color class owns one twig of
//! the host. Vertex-representatives sit in disjoint two-node slots on their
//! twig. A brother runs from the branching region to the near node of its
//! vertex-representative; an edge-representative runs between the near nodes
//! of its two endpoints. The blocking subtrees occupy the branching region,
//! and each twig reserves an overflow zone inside `t_s` where the clique
//! members are extended to distinct depths, sorted by size (smallest
//! farthest), which forces every pair of clique members to overlap.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::graph::Graph;
use crate::reduction::{
    build_blocked_graph, build_empty_blocked, reduction_params_for_tree, BlockedLabels,
    GadgetParams, GadgetVertex, Role, COPIES,
};
use crate::represent::{verify_representation, Relation, Representation};
use crate::tree::{analyze_tree, common_intersection, HostTree};
use crate::{Error, Result};

/// Sizing of the canonical layout: the overflow zone length (one slot per
/// clique member) and the node pitch between vertex-representative slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutConfig {
    /// Number of edge-representatives plus brothers of the target blocked
    /// graph; every overflow zone is this long.
    pub overflow_length: usize,
    /// Node spacing between consecutive vertex-representative slots.
    pub slot_pitch: usize,
}

impl LayoutConfig {
    /// The layout dictated by a blocked graph's labels.
    pub fn for_labels(labels: &BlockedLabels) -> Self {
        LayoutConfig {
            overflow_length: labels.clique_members().len(),
            slot_pitch: 2,
        }
    }
}

/// A coloring recovered from a representation: the copy that decoded, the
/// coloring itself, and the twig (or component) witnessing each color.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecodedColoring {
    pub copy: char,
    pub coloring: Coloring,
    pub witnesses: BTreeMap<usize, String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TwigKind {
    /// Attached at the lastbranch carrying `t_s` (or at the star center).
    Blocker,
    /// Attached at one of the other branching nodes, inside `t_b'`.
    Inner { special: bool },
}

struct TwigLayout {
    kind: TwigKind,
    /// Interior nodes, position 1..=len (position 0 is the attach node).
    names: Vec<String>,
    /// First slot position for vertex-representatives.
    slots_start: usize,
    /// Start of the overflow zone (its positions are start..start+N-1).
    overflow_start: usize,
}

impl TwigLayout {
    fn node(&self, pos: usize) -> &str {
        &self.names[pos - 1]
    }

    fn segment(&self, from: usize, to: usize) -> impl Iterator<Item = String> + '_ {
        (from..=to).map(|p| self.node(p).to_string())
    }
}

/// Everything needed to place subtrees on the canonical host.
struct Skeleton {
    host: HostTree,
    twigs: Vec<TwigLayout>,
    center: String,
    /// Spine positions 0..=len; present only for multi-branch hosts.
    /// Position 0 is the center (the chosen lastbranch), the last position
    /// the nearest other branching node.
    spine: Vec<String>,
    /// Nodes of the subtree spanning all other branching nodes.
    inner_core: BTreeSet<String>,
}

impl Skeleton {
    fn spine_segment(&self, from: usize, to: usize) -> impl Iterator<Item = String> + '_ {
        self.spine[from..=to].iter().cloned()
    }
}

fn twig_name(twig: usize, pos: usize) -> String {
    format!("t{twig:02}.{pos:04}")
}

/// Builds a star (spider) skeleton: a center with one leg per color.
/// `min_lengths` lets a spider input impose lower bounds so the host stays a
/// subdivision of it.
fn star_skeleton(slot_counts: &[usize], cfg: &LayoutConfig, min_lengths: &[usize]) -> Result<Skeleton> {
    let n = cfg.overflow_length;
    let sigma = n + 1;
    let slots_start = sigma + 5;
    let center = "c".to_string();
    let mut nodes = vec![center.clone()];
    let mut edges = Vec::new();
    let mut twigs = Vec::new();
    for (i, &count) in slot_counts.iter().enumerate() {
        let needed = if count > 0 {
            slots_start + cfg.slot_pitch * (count - 1) + 1
        } else {
            sigma + 4
        };
        let len = needed.max(min_lengths.get(i).copied().unwrap_or(0)).max(sigma + 4);
        let names: Vec<String> = (1..=len).map(|p| twig_name(i, p)).collect();
        nodes.extend(names.iter().cloned());
        edges.push((center.clone(), names[0].clone()));
        for w in names.windows(2) {
            edges.push((w[0].clone(), w[1].clone()));
        }
        twigs.push(TwigLayout {
            kind: TwigKind::Blocker,
            names,
            slots_start,
            overflow_start: 1,
        });
    }
    Ok(Skeleton {
        host: HostTree::from_parts(nodes, edges)?,
        twigs,
        center,
        spine: Vec::new(),
        inner_core: BTreeSet::new(),
    })
}

/// Decomposition of a multi-branch tree around its chosen lastbranch.
struct TreeShape {
    bstar: String,
    /// Twigs in analysis order: (leaf-first node path, attach node).
    twigs: Vec<(Vec<String>, String)>,
    /// Path from bstar to the nearest other branching node, endpoints included.
    spine_path: Vec<String>,
    /// Minimal subtree of the input spanning all branching nodes except bstar.
    inner_core: BTreeSet<String>,
}

fn shape_of(t: &HostTree) -> Result<TreeShape> {
    let analysis = analyze_tree(t);
    let min_deg = analysis
        .lastbranches
        .iter()
        .map(|b| t.degree(b))
        .min()
        .ok_or_else(|| Error::Domain("tree has no lastbranch".into()))?;
    let bstar = analysis
        .lastbranches
        .iter()
        .filter(|b| t.degree(b) == min_deg)
        .min()
        .unwrap()
        .clone();

    let mut twigs = Vec::new();
    for tw in &analysis.twigs {
        let inner_end = tw.last().unwrap();
        let attach = t
            .neighbors(inner_end)
            .find(|w| t.degree(w) >= 3)
            .ok_or_else(|| Error::Internal("twig without a branching attach point".into()))?
            .to_string();
        twigs.push((tw.clone(), attach));
    }

    // Walk from bstar along its unique non-twig direction until the next
    // branching node; that path is the spine.
    let twig_doors: BTreeSet<&str> = twigs
        .iter()
        .filter(|(_, at)| *at == bstar)
        .map(|(tw, _)| tw.last().unwrap().as_str())
        .collect();
    let first = t
        .neighbors(&bstar)
        .find(|w| !twig_doors.contains(w))
        .ok_or_else(|| Error::Internal("lastbranch has no non-twig direction".into()))?
        .to_string();
    let mut spine_path = vec![bstar.clone(), first.clone()];
    let mut prev = bstar.clone();
    let mut cur = first;
    while t.degree(&cur) < 3 {
        let next = t
            .neighbors(&cur)
            .find(|w| **w != *prev)
            .ok_or_else(|| Error::Internal("spine walk fell off the tree".into()))?
            .to_string();
        spine_path.push(next.clone());
        prev = cur;
        cur = next;
    }

    // Minimal subtree spanning the other branching nodes: iteratively prune
    // leaves that are not among them.
    let others: BTreeSet<&str> = analysis
        .branching_nodes
        .iter()
        .filter(|b| **b != bstar)
        .map(|s| s.as_str())
        .collect();
    let mut keep: BTreeSet<String> = t.nodes().map(|s| s.to_string()).collect();
    loop {
        let removable: Vec<String> = keep
            .iter()
            .filter(|v| {
                !others.contains(v.as_str())
                    && t.neighbors(v).filter(|w| keep.contains(*w)).count() <= 1
            })
            .cloned()
            .collect();
        if removable.is_empty() {
            break;
        }
        for v in removable {
            keep.remove(&v);
        }
    }
    Ok(TreeShape {
        bstar,
        twigs,
        spine_path,
        inner_core: keep,
    })
}

/// Builds a subdivision-of-`t` skeleton with stretched twigs and spine.
fn subdivision_skeleton(
    t: &HostTree,
    slot_counts: &[usize],
    cfg: &LayoutConfig,
) -> Result<Skeleton> {
    let shape = shape_of(t)?;
    let n = cfg.overflow_length;
    let sigma = n + 1;
    let spine_len = (n + 5).max(shape.spine_path.len() - 1);

    let mut nodes: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();

    // Branch namespace: the inner core is copied verbatim under a prefix.
    let brand = |orig: &str| format!("bn:{orig}");
    let center = brand(&shape.bstar);
    nodes.push(center.clone());
    for v in &shape.inner_core {
        nodes.push(brand(v));
    }
    for (a, b) in t.edges() {
        if shape.inner_core.contains(a) && shape.inner_core.contains(b) {
            edges.push((brand(a), brand(b)));
        }
    }

    // Spine from bstar to the nearest other branching node, stretched to
    // hold the overflow zone and the first gadget path.
    let r = brand(shape.spine_path.last().unwrap());
    let mut spine = vec![center.clone()];
    for j in 1..spine_len {
        let name = format!("sp.{j:04}");
        nodes.push(name.clone());
        spine.push(name);
    }
    spine.push(r.clone());
    for w in spine.windows(2) {
        edges.push((w[0].clone(), w[1].clone()));
    }

    // Twigs, stretched to fit their zones; the lexicographically first inner
    // twig is special (it carries the exit of the first gadget path).
    let special_ix = shape
        .twigs
        .iter()
        .enumerate()
        .filter(|(_, (_, at))| *at != shape.bstar)
        .map(|(i, _)| i)
        .min();
    let mut twigs = Vec::new();
    for (i, (tw, attach)) in shape.twigs.iter().enumerate() {
        let count = slot_counts[i];
        let blocker = *attach == shape.bstar;
        let (kind, overflow_start, slots_start, base_needed) = if blocker {
            (TwigKind::Blocker, 1, sigma + 5, sigma + 4)
        } else {
            let special = Some(i) == special_ix;
            let reach = if special { 6 } else { 5 };
            (
                TwigKind::Inner { special },
                reach + 1,
                reach + n + 1,
                reach + n,
            )
        };
        let needed = if count > 0 {
            slots_start + cfg.slot_pitch * (count - 1) + 1
        } else {
            base_needed
        };
        let len = needed.max(tw.len()).max(base_needed);
        let names: Vec<String> = (1..=len).map(|p| twig_name(i, p)).collect();
        nodes.extend(names.iter().cloned());
        edges.push((brand(attach), names[0].clone()));
        for w in names.windows(2) {
            edges.push((w[0].clone(), w[1].clone()));
        }
        twigs.push(TwigLayout {
            kind,
            names,
            slots_start,
            overflow_start,
        });
    }

    let inner_core: BTreeSet<String> = shape.inner_core.iter().map(|v| brand(v)).collect();
    Ok(Skeleton {
        host: HostTree::from_parts(nodes, edges)?,
        twigs,
        center,
        spine,
        inner_core,
    })
}

/// Common placement engine for both gadget-blocked builders.
fn place_blocked(
    skeleton: &Skeleton,
    blocked: &Graph,
    labels: &BlockedLabels,
    coloring: &Coloring,
    cfg: &LayoutConfig,
    params: GadgetParams,
) -> Result<Representation> {
    let n = cfg.overflow_length;
    let sigma = n + 1;
    let multi = !skeleton.spine.is_empty();
    let spine_top = skeleton.spine.len().saturating_sub(1);

    let mut sets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();

    // Slot assignment: color class <-> twig index, representatives sorted by
    // (origin vertex, copy).
    let mut slot_of: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (twig_ix, twig) in skeleton.twigs.iter().enumerate() {
        let mut reps: Vec<&str> = labels
            .vertex_reps()
            .filter(|v| {
                let origin = labels.origin_vertex(v).expect("vertex rep has vertex origin");
                coloring.color_of(origin) == Some(twig_ix)
            })
            .collect();
        reps.sort_by_key(|v| {
            (
                labels.origin_vertex(v).unwrap().to_string(),
                labels.copy[*v],
            )
        });
        for (j, rep) in reps.iter().enumerate() {
            let start = twig.slots_start + cfg.slot_pitch * j;
            slot_of.insert(rep.to_string(), (twig_ix, start));
            sets.insert(rep.to_string(), twig.segment(start, start + 1).collect());
        }
    }

    // Blocking subtrees.
    let mut t_s: BTreeSet<String> = [skeleton.center.clone()].into();
    let mut t_b: BTreeSet<String> = [skeleton.center.clone()].into();
    for twig in &skeleton.twigs {
        if twig.kind == TwigKind::Blocker {
            t_s.extend(twig.segment(1, sigma));
            t_b.extend(twig.segment(1, sigma + 3));
        } else {
            t_b.extend(twig.segment(1, 5));
        }
    }
    let mut inner_big: BTreeSet<String> = BTreeSet::new();
    let mut inner_small: BTreeSet<String> = BTreeSet::new();
    let mut first_path_exit: BTreeSet<String> = BTreeSet::new();
    let mut mandatory: BTreeSet<String> = BTreeSet::new();
    if multi {
        t_s.extend(skeleton.spine_segment(1, sigma));
        t_b.extend(skeleton.spine_segment(1, spine_top));
        t_b.extend(skeleton.inner_core.iter().cloned());

        inner_big.extend(skeleton.spine_segment(n + 3, spine_top));
        inner_big.extend(skeleton.inner_core.iter().cloned());
        inner_small.extend(skeleton.spine_segment(n + 5, spine_top));
        inner_small.extend(skeleton.inner_core.iter().cloned());
        first_path_exit.extend(skeleton.spine_segment(n + 4, spine_top));
        first_path_exit.extend(skeleton.inner_core.iter().cloned());
        mandatory.extend(skeleton.spine_segment(0, spine_top));
        mandatory.extend(skeleton.inner_core.iter().cloned());
        for twig in &skeleton.twigs {
            if let TwigKind::Inner { special } = twig.kind {
                inner_big.extend(twig.segment(1, 4));
                inner_small.extend(twig.segment(1, 1));
                first_path_exit.extend(twig.segment(1, 5));
                mandatory.extend(twig.segment(1, 5));
                if special {
                    first_path_exit.insert(twig.node(6).to_string());
                    mandatory.insert(twig.node(6).to_string());
                }
            }
        }
    }

    let vs = labels.named[&GadgetVertex::Vs].clone();
    let vb = labels.named[&GadgetVertex::Vb].clone();
    sets.insert(vs, t_s);
    sets.insert(vb, t_b);

    // Gadget paths. Path 1 runs along the spine when there is one (its
    // middle vertex is vb'); every other path takes one blocker twig.
    let blocker_twigs: Vec<usize> = skeleton
        .twigs
        .iter()
        .enumerate()
        .filter(|(_, tw)| tw.kind == TwigKind::Blocker)
        .map(|(i, _)| i)
        .collect();
    let inner_twigs: Vec<usize> = skeleton
        .twigs
        .iter()
        .enumerate()
        .filter(|(_, tw)| matches!(tw.kind, TwigKind::Inner { .. }))
        .map(|(i, _)| i)
        .collect();

    let mut path_destinations: Vec<Option<usize>> = Vec::new();
    if multi {
        path_destinations.push(None);
    }
    path_destinations.extend(blocker_twigs.iter().map(|&i| Some(i)));
    if path_destinations.len() != params.d {
        return Err(Error::Internal(format!(
            "path destinations {} do not match d = {}",
            path_destinations.len(),
            params.d
        )));
    }

    for (path_ix, dest) in path_destinations.iter().enumerate() {
        let i = path_ix + 1;
        let names: Vec<String> = (1..=3).map(|j| format!("gadget:p{i}.{j}")).collect();
        match dest {
            Some(twig_ix) => {
                let twig = &skeleton.twigs[*twig_ix];
                sets.insert(names[0].clone(), twig.segment(sigma, sigma + 1).collect());
                sets.insert(names[1].clone(), twig.segment(sigma + 1, sigma + 2).collect());
                sets.insert(names[2].clone(), twig.segment(sigma + 2, sigma + 4).collect());
            }
            None => {
                // Spine path: the first internal pokes out of t_s toward the
                // inner region, the middle is the big inner blob, the third
                // pokes out of t_b' and exits t_b on the special inner twig.
                sets.insert(names[0].clone(), skeleton.spine_segment(sigma, sigma + 2).collect());
                sets.insert(names[1].clone(), inner_big.clone());
                sets.insert(names[2].clone(), first_path_exit.clone());
            }
        }
    }

    if params.u >= 2 {
        sets.insert(labels.named[&GadgetVertex::VsPrime].clone(), inner_small.clone());
        for (j, &twig_ix) in inner_twigs.iter().enumerate() {
            let twig = &skeleton.twigs[twig_ix];
            let names: Vec<String> = (1..=3).map(|l| format!("gadget:q{}.{l}", j + 1)).collect();
            sets.insert(names[0].clone(), twig.segment(1, 2).collect());
            sets.insert(names[1].clone(), twig.segment(2, 3).collect());
            sets.insert(names[2].clone(), twig.segment(3, 5).collect());
        }
    }

    // Clique members: mains first.
    struct Member {
        name: String,
        legs: Vec<usize>,
        crosses_inner: bool,
        main: BTreeSet<String>,
    }
    let rep_of_brother: BTreeMap<&str, &str> = labels
        .brother_of
        .iter()
        .map(|(r, b)| (b.as_str(), r.as_str()))
        .collect();
    let mut members = Vec::new();
    for m in labels.clique_members() {
        let legs: Vec<usize> = match labels.role[m] {
            Role::Brother => vec![slot_of[rep_of_brother[m]].0],
            Role::EdgeRep => {
                let copy = labels.copy[m];
                let (a, b) = match &labels.origin[m] {
                    crate::reduction::Origin::Edge(a, b) => (a.clone(), b.clone()),
                    _ => return Err(Error::Internal("edge rep without edge origin".into())),
                };
                let mut legs = vec![
                    slot_of[&format!("v:{copy}:{a}")].0,
                    slot_of[&format!("v:{copy}:{b}")].0,
                ];
                legs.sort_unstable();
                legs
            }
            _ => unreachable!("clique members are brothers or edge reps"),
        };
        let crosses_inner = multi
            && legs
                .iter()
                .any(|&l| matches!(skeleton.twigs[l].kind, TwigKind::Inner { .. }));
        let mut main: BTreeSet<String> = if crosses_inner {
            mandatory.clone()
        } else {
            [skeleton.center.clone()].into()
        };
        for &leg in &legs {
            let twig = &skeleton.twigs[leg];
            let near = match labels.role[m] {
                Role::Brother => slot_of[rep_of_brother[m]].1,
                Role::EdgeRep => {
                    let copy = labels.copy[m];
                    let (a, b) = match &labels.origin[m] {
                        crate::reduction::Origin::Edge(a, b) => (a.clone(), b.clone()),
                        _ => unreachable!(),
                    };
                    let sa = slot_of[&format!("v:{copy}:{a}")];
                    let sb = slot_of[&format!("v:{copy}:{b}")];
                    if sa.0 == leg {
                        sa.1
                    } else {
                        sb.1
                    }
                }
                _ => unreachable!(),
            };
            main.extend(twig.segment(1, near));
        }
        members.push(Member {
            name: m.to_string(),
            legs,
            crosses_inner,
            main,
        });
    }

    // Overflow extensions: per zone, eligible members sorted by main size
    // (ties by name); the biggest extends least, the smallest farthest, so
    // no two extensions share a leaf.
    members.sort_by(|a, b| (a.main.len(), &a.name).cmp(&(b.main.len(), &b.name)));
    let mut extensions: BTreeMap<String, BTreeSet<String>> =
        members.iter().map(|m| (m.name.clone(), BTreeSet::new())).collect();

    for (twig_ix, twig) in skeleton.twigs.iter().enumerate() {
        let inner_twig = matches!(twig.kind, TwigKind::Inner { .. });
        let eligible: Vec<&Member> = members
            .iter()
            .filter(|m| !m.legs.contains(&twig_ix))
            .filter(|m| if inner_twig { m.crosses_inner } else { true })
            .collect();
        let count = eligible.len();
        for (rank, m) in eligible.iter().enumerate() {
            let depth = count - rank;
            extensions
                .get_mut(&m.name)
                .unwrap()
                .extend(twig.segment(twig.overflow_start, twig.overflow_start + depth - 1));
        }
    }
    // Spine zone, usable only by members that stay on the blocker side.
    if multi {
        let eligible: Vec<&Member> = members.iter().filter(|m| !m.crosses_inner).collect();
        let count = eligible.len();
        for (rank, m) in eligible.iter().enumerate() {
            let depth = count - rank;
            extensions
                .get_mut(&m.name)
                .unwrap()
                .extend(skeleton.spine_segment(1, depth));
        }
    }

    for m in members {
        let mut nodes = m.main;
        nodes.extend(extensions.remove(&m.name).unwrap());
        sets.insert(m.name, nodes);
    }

    let rep = Representation::from_node_sets(skeleton.host.clone(), sets)?;
    match verify_representation(&rep, blocked, Relation::Overlap)? {
        crate::represent::Verdict::Pass => Ok(rep),
        crate::represent::Verdict::Fail { offending_pairs } => Err(Error::Internal(format!(
            "canonical layout failed verification on {} pairs, first: {:?}",
            offending_pairs.len(),
            offending_pairs.first()
        ))),
    }
}

fn check_coloring(g: &Graph, c: &Coloring, k: usize) -> Result<()> {
    if c.k != k {
        return Err(Error::Domain(format!(
            "coloring declares {} classes, construction needs {k}",
            c.k
        )));
    }
    if !c.is_proper(g) {
        return Err(Error::Domain("coloring is not proper on the input graph".into()));
    }
    Ok(())
}

fn class_slot_counts(c: &Coloring, labels: &BlockedLabels) -> Vec<usize> {
    let mut counts = vec![0usize; c.k];
    for rep in labels.vertex_reps() {
        let origin = labels.origin_vertex(rep).unwrap();
        counts[c.color_of(origin).unwrap()] += 1;
    }
    counts
}

/// Canonical representation of the blocked graph of `g` on a host that is a
/// subdivided k-leaf star, from a proper coloring with `k = p.d` classes and
/// `p.u = 0`. Every vertex-representative of color `i` lands wholly on twig
/// `i`; the result always verifies in overlap mode.
pub fn represent_blocked_on_star(
    g: &Graph,
    c: &Coloring,
    p: GadgetParams,
) -> Result<(Representation, Graph, BlockedLabels)> {
    if p.u != 0 {
        return Err(Error::Domain("star hosts use the u = 0 gadget".into()));
    }
    if p.d != c.k {
        return Err(Error::Domain(format!(
            "star hosts need d = k, got d = {} and k = {}",
            p.d, c.k
        )));
    }
    check_coloring(g, c, c.k)?;
    let (blocked, labels) = build_blocked_graph(g, p)?;
    let cfg = LayoutConfig::for_labels(&labels);
    let slot_counts = class_slot_counts(c, &labels);
    let skeleton = star_skeleton(&slot_counts, &cfg, &[])?;
    let rep = place_blocked(&skeleton, &blocked, &labels, c, &cfg, p)?;
    Ok((rep, blocked, labels))
}

/// Canonical representation of the blocked graph of `g` on a subdivision of
/// the input tree `t`, with gadget parameters dictated by `t`. The blocking
/// subtree `t_s` spans exactly one minimum-degree lastbranch; `t_b'` spans
/// all other branching nodes.
pub fn represent_blocked_on_subdivision(
    t: &HostTree,
    g: &Graph,
    c: &Coloring,
) -> Result<(Representation, Graph, BlockedLabels)> {
    let (p, k) = reduction_params_for_tree(t)?;
    check_coloring(g, c, k)?;
    let (blocked, labels) = build_blocked_graph(g, p)?;
    let cfg = LayoutConfig::for_labels(&labels);
    let slot_counts = class_slot_counts(c, &labels);

    let analysis = analyze_tree(t);
    let skeleton = if analysis.branching_nodes.len() == 1 {
        // Spider input: the star layout applies, with the spider's own leg
        // lengths as lower bounds so the host stays a subdivision of it.
        let min_lengths: Vec<usize> = analysis.twigs.iter().map(|tw| tw.len()).collect();
        star_skeleton(&slot_counts, &cfg, &min_lengths)?
    } else {
        subdivision_skeleton(t, &slot_counts, &cfg)?
    };
    let rep = place_blocked(&skeleton, &blocked, &labels, c, &cfg, p)?;
    Ok((rep, blocked, labels))
}

/// Canonical subpath representation of the gadget-free blocked graph on a
/// host of maximum degree `k`: a center of degree `k` joined to one
/// caterpillar per color class. Every subtree is a path, and the result
/// verifies in both overlap and intersection mode.
pub fn represent_empty_blocked_subpaths(
    g: &Graph,
    c: &Coloring,
    k: usize,
) -> Result<(Representation, Graph, BlockedLabels)> {
    if k < 3 {
        return Err(Error::Domain("subpath hosts need k >= 3".into()));
    }
    check_coloring(g, c, k)?;
    let (blocked, labels) = build_empty_blocked(g)?;

    let center = "c".to_string();
    let mut nodes = vec![center.clone()];
    let mut edges = Vec::new();

    // Per color class: a caterpillar whose spine carries one pendant
    // three-edge twig per vertex-representative.
    let mut sets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut spine_names: Vec<Vec<String>> = Vec::new();
    let mut rep_home: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for color in 0..k {
        let mut reps: Vec<&str> = labels
            .vertex_reps()
            .filter(|v| {
                let origin = labels.origin_vertex(v).unwrap();
                c.color_of(origin) == Some(color)
            })
            .collect();
        reps.sort_by_key(|v| (labels.origin_vertex(v).unwrap().to_string(), labels.copy[*v]));

        let spine_len = reps.len().max(1);
        let spine: Vec<String> = (1..=spine_len).map(|j| format!("g{color:02}s{j:03}")).collect();
        nodes.extend(spine.iter().cloned());
        edges.push((center.clone(), spine[0].clone()));
        for w in spine.windows(2) {
            edges.push((w[0].clone(), w[1].clone()));
        }
        for (j, rep) in reps.iter().enumerate() {
            let twig: Vec<String> = (1..=3).map(|l| format!("g{color:02}t{:03}.{l}", j + 1)).collect();
            nodes.extend(twig.iter().cloned());
            edges.push((spine[j].clone(), twig[0].clone()));
            edges.push((twig[0].clone(), twig[1].clone()));
            edges.push((twig[1].clone(), twig[2].clone()));
            sets.insert(rep.to_string(), twig.into_iter().collect());
            rep_home.insert(rep.to_string(), (color, j));
        }
        spine_names.push(spine);
    }

    let host = HostTree::from_parts(nodes, edges)?;

    // Brother: path from the middle node of its representative's subpath to
    // the center. Edge representative: path between the near nodes of its
    // two endpoints, through the center.
    let spine_prefix = |color: usize, j: usize| spine_names[color][..=j].iter().cloned();
    let rep_of_brother: BTreeMap<&str, &str> = labels
        .brother_of
        .iter()
        .map(|(r, b)| (b.as_str(), r.as_str()))
        .collect();
    for m in labels.clique_members() {
        let mut path: BTreeSet<String> = [center.clone()].into();
        match labels.role[m] {
            Role::Brother => {
                let (color, j) = rep_home[rep_of_brother[m]];
                path.insert(format!("g{color:02}t{:03}.2", j + 1));
                path.insert(format!("g{color:02}t{:03}.1", j + 1));
                path.extend(spine_prefix(color, j));
            }
            Role::EdgeRep => {
                let copy = labels.copy[m];
                let (a, b) = match &labels.origin[m] {
                    crate::reduction::Origin::Edge(a, b) => (a.clone(), b.clone()),
                    _ => unreachable!(),
                };
                for v in [a, b] {
                    let (color, j) = rep_home[&format!("v:{copy}:{v}")];
                    path.insert(format!("g{color:02}t{:03}.1", j + 1));
                    path.extend(spine_prefix(color, j));
                }
            }
            _ => unreachable!(),
        }
        sets.insert(m.to_string(), path);
    }

    let rep = Representation::from_node_sets(host, sets)?;
    for relation in [Relation::Overlap, Relation::Intersection] {
        match verify_representation(&rep, &blocked, relation)? {
            crate::represent::Verdict::Pass => {}
            crate::represent::Verdict::Fail { offending_pairs } => {
                return Err(Error::Internal(format!(
                    "subpath layout failed {relation:?} verification on {} pairs, first: {:?}",
                    offending_pairs.len(),
                    offending_pairs.first()
                )))
            }
        }
    }
    Ok((rep, blocked, labels))
}

/// All pairs of same-copy vertex-representatives whose origins are adjacent
/// in the original graph and whose subtrees intersect a common twig of the
/// host. Pairs are reported once, in sorted order.
pub fn find_illegal_pairs(
    rep: &Representation,
    labels: &BlockedLabels,
    original: &Graph,
) -> Result<Vec<(String, String)>> {
    let twigs = twig_node_sets(rep.host());
    let reps: Vec<&str> = labels.vertex_reps().collect();
    for v in &reps {
        if rep.subtree_of(v).is_none() {
            return Err(Error::Domain(format!("labels mention {v:?} which is not represented")));
        }
        let origin = labels
            .origin_vertex(v)
            .ok_or_else(|| Error::Domain(format!("vertex rep {v:?} lacks a vertex origin")))?;
        if !original.has_vertex(origin) {
            return Err(Error::Domain(format!(
                "origin {origin:?} of {v:?} is not a vertex of the original graph"
            )));
        }
    }

    let mut touched: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
    for v in &reps {
        let s = rep.subtree_of(v).unwrap();
        let hit: BTreeSet<usize> = twigs
            .iter()
            .enumerate()
            .filter(|(_, t)| s.nodes().any(|n| t.contains(n)))
            .map(|(i, _)| i)
            .collect();
        touched.insert(v, hit);
    }

    let mut illegal = BTreeSet::new();
    for i in 0..reps.len() {
        for j in (i + 1)..reps.len() {
            let (a, b) = (reps[i], reps[j]);
            if labels.copy[a] != labels.copy[b] {
                continue;
            }
            let (oa, ob) = (
                labels.origin_vertex(a).unwrap(),
                labels.origin_vertex(b).unwrap(),
            );
            if !original.has_edge(oa, ob) {
                continue;
            }
            if !touched[a].is_disjoint(&touched[b]) {
                illegal.insert((a.to_string(), b.to_string()));
            }
        }
    }
    Ok(illegal.into_iter().collect())
}

fn twig_node_sets(host: &HostTree) -> Vec<BTreeSet<String>> {
    analyze_tree(host)
        .twigs
        .into_iter()
        .map(|t| t.into_iter().collect())
        .collect()
}

/// Recovers a proper coloring of the original graph from a representation of
/// one of its blocked graphs.
///
/// For gadget-blocked graphs: finds a copy whose vertex-representatives all
/// lie wholly on twigs with no illegal pair, and maps twigs to colors. For
/// gadget-free (subpath) blocked graphs: takes the common node of all clique
/// subtrees of highest degree and uses the components of the host minus that
/// node as colors. Fails with `NoNiceCopy` when every copy is spoiled.
pub fn decode_coloring(
    rep: &Representation,
    labels: &BlockedLabels,
    original: &Graph,
    k: usize,
) -> Result<DecodedColoring> {
    if labels.named.is_empty() {
        decode_subpath(rep, labels, original, k)
    } else {
        decode_blocked(rep, labels, original, k)
    }
}

fn decode_blocked(
    rep: &Representation,
    labels: &BlockedLabels,
    original: &Graph,
    k: usize,
) -> Result<DecodedColoring> {
    let twigs = twig_node_sets(rep.host());
    if twigs.len() > k {
        return Err(Error::Domain(format!(
            "host has {} twigs, cannot map onto {k} colors",
            twigs.len()
        )));
    }
    let mut failures = Vec::new();
    'copies: for copy in COPIES {
        let mut assignment: BTreeMap<String, usize> = BTreeMap::new();
        let mut witnesses: BTreeMap<usize, String> = BTreeMap::new();
        for v in labels.vertex_reps_of_copy(copy) {
            let s = rep
                .subtree_of(v)
                .ok_or_else(|| Error::Domain(format!("vertex rep {v:?} not represented")))?;
            let home = twigs.iter().position(|t| s.nodes().all(|n| t.contains(n)));
            let Some(color) = home else {
                failures.push(format!("copy {copy}: {v} is not wholly on a twig"));
                continue 'copies;
            };
            let origin = labels.origin_vertex(v).unwrap().to_string();
            assignment.insert(origin, color);
            witnesses.insert(color, twigs[color].iter().next().unwrap().clone());
        }
        let coloring = Coloring::new(assignment, k);
        if !coloring.is_proper(original) {
            failures.push(format!("copy {copy}: an illegal pair shares a twig"));
            continue;
        }
        return Ok(DecodedColoring {
            copy,
            coloring,
            witnesses,
        });
    }
    Err(Error::NoNiceCopy(failures.join("; ")))
}

fn decode_subpath(
    rep: &Representation,
    labels: &BlockedLabels,
    original: &Graph,
    k: usize,
) -> Result<DecodedColoring> {
    let members = labels
        .clique_members()
        .iter()
        .map(|m| {
            rep.subtree_of(m)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("clique member {m:?} not represented")))
        })
        .collect::<Result<Vec<_>>>()?;
    let common = common_intersection(members.iter());
    let center = common
        .iter()
        .max_by_key(|n| (rep.host().degree(n), std::cmp::Reverse((*n).clone())))
        .cloned()
        .ok_or_else(|| {
            Error::NoNiceCopy("clique subtrees have no common node (Helly witness missing)".into())
        })?;

    // Components of the host minus the common node, in sorted order.
    let mut comp_of: BTreeMap<String, usize> = BTreeMap::new();
    let mut comps: Vec<BTreeSet<String>> = Vec::new();
    for node in rep.host().nodes() {
        if node == center || comp_of.contains_key(node) {
            continue;
        }
        let mut comp: BTreeSet<String> = [node.to_string()].into();
        let mut queue = std::collections::VecDeque::from([node.to_string()]);
        while let Some(x) = queue.pop_front() {
            for w in rep.host().neighbors(&x) {
                if w != center && !comp.contains(w) {
                    comp.insert(w.to_string());
                    queue.push_back(w.to_string());
                }
            }
        }
        for x in &comp {
            comp_of.insert(x.clone(), comps.len());
        }
        comps.push(comp);
    }
    if comps.len() > k {
        return Err(Error::Domain(format!(
            "removing the common node leaves {} components, cannot map onto {k} colors",
            comps.len()
        )));
    }

    let mut failures = Vec::new();
    'copies: for copy in COPIES {
        let mut assignment = BTreeMap::new();
        let mut witnesses = BTreeMap::new();
        for v in labels.vertex_reps_of_copy(copy) {
            let s = rep.subtree_of(v).unwrap();
            if s.contains(&center) {
                failures.push(format!("copy {copy}: {v} contains the common node"));
                continue 'copies;
            }
            let color = comp_of[s.nodes().next().unwrap()];
            let origin = labels.origin_vertex(v).unwrap().to_string();
            assignment.insert(origin, color);
            witnesses.insert(color, comps[color].iter().next().unwrap().clone());
        }
        let coloring = Coloring::new(assignment, k);
        if !coloring.is_proper(original) {
            failures.push(format!("copy {copy}: adjacent origins share a component"));
            continue;
        }
        return Ok(DecodedColoring {
            copy,
            coloring,
            witnesses,
        });
    }
    Err(Error::NoNiceCopy(failures.join("; ")))
}
