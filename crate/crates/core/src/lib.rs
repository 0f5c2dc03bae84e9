//! Toolkit for overlap graphs of subtrees in a tree: exact coloring and
//! connectivity on small graphs, host trees and subtree representations,
//! blocking-gadget reductions from coloring to representation recognition,
//! canonical representation builders with decoders, and an exhaustive
//! bounded search oracle over host trees.

pub mod canonical;
pub mod coloring;
pub mod connectivity;
pub mod graph;
pub mod io;
pub mod reduction;
pub mod represent;
pub mod search;
pub mod tree;

pub use canonical::{
    decode_coloring, find_illegal_pairs, represent_blocked_on_star,
    represent_blocked_on_subdivision, represent_empty_blocked_subpaths, DecodedColoring,
    LayoutConfig,
};
pub use coloring::{find_k_coloring, Coloring};
pub use connectivity::vertex_connectivity;
pub use graph::{graphs_equal, Graph};
pub use reduction::{
    amplify_3con, build_blocked_graph, build_empty_blocked, build_gadget, build_gadget_with,
    reduction_params_for_tree, BlockedLabels, CopyId, GadgetParams, GadgetVertex, Role,
};
pub use represent::{
    derive_graph, lift_representation, verify_representation, Relation, Representation, Verdict,
};
pub use search::{
    audit_gadget_lemmas, audit_spanbranch, enumerate_host_trees, find_representation, AuditReport,
    HostConstraint, SearchConfig, SearchOutcome, SubtreeConstraint,
};
pub use tree::{analyze_tree, is_subdivision_of, set_relation, subdivide, HostTree, SetRelation, Subtree, TreeAnalysis};

use thiserror::Error;

/// Errors shared across the crate. Domain errors signal misuse of an
/// operation; internal errors signal a construction bug and are never
/// silently swallowed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid subtree: {0}")]
    InvalidSubtree(String),
    #[error("subtrees belong to different host trees")]
    HostMismatch,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no copy of the original vertex set decodes to a coloring: {0}")]
    NoNiceCopy(String),
    #[error("internal construction error: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
