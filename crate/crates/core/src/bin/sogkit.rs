//! Command-line front end: thin adapters over the library operations.
//! Every subcommand emits a single JSON outcome object on stdout and exits
//! zero only on success; file outputs are written atomically.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use sogkit::io::{read_json, write_atomic, write_json_atomic, BlockedFile};
use sogkit::{
    amplify_3con, analyze_tree, audit_gadget_lemmas, audit_spanbranch, build_blocked_graph,
    build_empty_blocked, decode_coloring, find_k_coloring, find_representation,
    reduction_params_for_tree, represent_blocked_on_star, represent_blocked_on_subdivision,
    represent_empty_blocked_subpaths, verify_representation, GadgetParams, Graph, HostConstraint,
    HostTree, Relation, Representation, SearchConfig, SearchOutcome, Verdict,
};

#[derive(Parser)]
#[command(name = "sogkit", version, about = "Subtree overlap graph toolkit")]
struct Cli {
    /// Worker threads for search subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    Overlap,
    Intersection,
}

impl From<RelationArg> for Relation {
    fn from(r: RelationArg) -> Relation {
        match r {
            RelationArg::Overlap => Relation::Overlap,
            RelationArg::Intersection => Relation::Intersection,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Star,
    Subdivision,
    Subpaths,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    Containment,
    Leaves,
    Spanbranch,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Graph,
    Tree,
    Rep,
    Blocked,
}

#[derive(Subcommand)]
enum Command {
    /// Build the blocked graph of an input graph.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        /// Number of colors (host leafage) the reduction targets.
        #[arg(long)]
        k: usize,
        /// Derive gadget parameters from this tree instead of from k alone.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Build the gadget-free variant (subpath reductions).
        #[arg(long)]
        empty: bool,
        /// Apply the 3-connectivity amplification to the input first.
        #[arg(long)]
        amplify: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a canonical representation from a graph (coloring it exactly).
    Represent {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
        /// Where to write the role labels (defaults to <out>.labels.json).
        #[arg(long)]
        labels_out: Option<PathBuf>,
    },
    /// Check a representation against a target graph.
    Verify {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "overlap")]
        relation: RelationArg,
    },
    /// Recover a coloring from a blocked-graph representation.
    Decode {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Exhaustively search bounded hosts for a representation.
    Recognize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "overlap")]
        relation: RelationArg,
        #[arg(long)]
        max_host: usize,
        #[arg(long)]
        leafage: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        subdivision_of: Option<PathBuf>,
        #[arg(long)]
        fixed_host: Option<PathBuf>,
        #[arg(long)]
        paths_only: bool,
        /// Time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive audits of gadget representation structure.
    Audit {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long)]
        max_host: usize,
        #[arg(long)]
        leafage: Option<usize>,
        /// Audit the deliberately weakened variant to confirm the auditor
        /// is not vacuous.
        #[arg(long)]
        negative_control: bool,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural analysis of a tree (leaves, twigs, lastbranches).
    Analyze {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Convert stored objects to DOT.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Highlighted vertex (representations only).
        #[arg(long)]
        highlight: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Ok,
    Fail,
    Timeout,
}

#[derive(Serialize)]
struct CommandOutcome {
    status: Status,
    artifacts: Vec<String>,
    diagnostics: Vec<String>,
    result: serde_json::Value,
}

impl CommandOutcome {
    fn ok(result: serde_json::Value) -> Self {
        CommandOutcome {
            status: Status::Ok,
            artifacts: Vec::new(),
            diagnostics: Vec::new(),
            result,
        }
    }

    fn fail(diagnostic: String) -> Self {
        CommandOutcome {
            status: Status::Fail,
            artifacts: Vec::new(),
            diagnostics: vec![diagnostic],
            result: serde_json::Value::Null,
        }
    }

    fn with_artifact(mut self, path: &PathBuf) -> Self {
        self.artifacts.push(path.display().to_string());
        self
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SOGKIT_LOG")).init();
    let cli = Cli::parse();
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .ok();
    }
    let outcome = match run(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => CommandOutcome::fail(e.to_string()),
    };
    println!("{}", serde_json::to_string_pretty(&outcome).expect("outcome serializes"));
    std::process::exit(match outcome.status {
        Status::Ok => 0,
        Status::Fail | Status::Timeout => 1,
    });
}

fn run(command: Command) -> sogkit::Result<CommandOutcome> {
    match command {
        Command::Reduce {
            input,
            k,
            tree,
            empty,
            amplify,
            out,
        } => {
            let mut g: Graph = read_json(&input)?;
            let mut diagnostics = Vec::new();
            if amplify {
                g = amplify_3con(&g)?;
                diagnostics.push(format!(
                    "amplified input to {} vertices / {} edges",
                    g.vertex_count(),
                    g.edge_count()
                ));
            }
            let (graph, labels) = if empty {
                build_empty_blocked(&g)?
            } else {
                let params = match tree {
                    Some(path) => {
                        let t: HostTree = read_json(&path)?;
                        let (p, tree_k) = reduction_params_for_tree(&t)?;
                        if tree_k != k {
                            return Err(sogkit::Error::Domain(format!(
                                "tree has leafage {tree_k}, but --k {k} was given"
                            )));
                        }
                        p
                    }
                    None => {
                        if k < 3 {
                            return Err(sogkit::Error::Domain("reduction needs k >= 3".into()));
                        }
                        let u = if k == 3 { 0 } else { k - 2 };
                        GadgetParams::new(3, u)?
                    }
                };
                build_blocked_graph(&g, params)?
            };
            let file = BlockedFile { graph, labels };
            write_json_atomic(&out, &file)?;
            let mut outcome = CommandOutcome::ok(json!({
                "vertices": file.graph.vertex_count(),
                "edges": file.graph.edge_count(),
            }))
            .with_artifact(&out);
            outcome.diagnostics = diagnostics;
            Ok(outcome)
        }

        Command::Represent {
            mode,
            graph,
            tree,
            k,
            out,
            labels_out,
        } => {
            let g: Graph = read_json(&graph)?;
            let coloring = find_k_coloring(&g, k).ok_or_else(|| {
                sogkit::Error::Domain(format!("input graph admits no {k}-coloring"))
            })?;
            let (rep, blocked, labels) = match mode {
                Mode::Star => represent_blocked_on_star(&g, &coloring, GadgetParams::new(k, 0)?)?,
                Mode::Subdivision => {
                    let path = tree.ok_or_else(|| {
                        sogkit::Error::Domain("--mode subdivision needs --tree".into())
                    })?;
                    let t: HostTree = read_json(&path)?;
                    represent_blocked_on_subdivision(&t, &g, &coloring)?
                }
                Mode::Subpaths => represent_empty_blocked_subpaths(&g, &coloring, k)?,
            };
            write_json_atomic(&out, &rep)?;
            let labels_path = labels_out.unwrap_or_else(|| out.with_extension("labels.json"));
            write_json_atomic(&labels_path, &labels)?;
            Ok(CommandOutcome::ok(json!({
                "host_nodes": rep.host().node_count(),
                "blocked_vertices": blocked.vertex_count(),
            }))
            .with_artifact(&out)
            .with_artifact(&labels_path))
        }

        Command::Verify {
            rep,
            graph,
            relation,
        } => {
            let rep: Representation = read_json(&rep)?;
            let g: Graph = read_json(&graph)?;
            match verify_representation(&rep, &g, relation.into())? {
                Verdict::Pass => Ok(CommandOutcome::ok(json!({"verdict": "pass"}))),
                Verdict::Fail { offending_pairs } => {
                    let mut outcome = CommandOutcome::fail(format!(
                        "{} vertex pairs disagree with the target graph",
                        offending_pairs.len()
                    ));
                    outcome.result = json!({
                        "verdict": "fail",
                        "offending_pairs": offending_pairs,
                    });
                    Ok(outcome)
                }
            }
        }

        Command::Decode {
            rep,
            labels,
            graph,
            k,
        } => {
            let rep: Representation = read_json(&rep)?;
            let labels = read_json(&labels)?;
            let g: Graph = read_json(&graph)?;
            let decoded = decode_coloring(&rep, &labels, &g, k)?;
            Ok(CommandOutcome::ok(serde_json::to_value(&decoded)?))
        }

        Command::Recognize {
            graph,
            relation,
            max_host,
            leafage,
            max_degree,
            subdivision_of,
            fixed_host,
            paths_only,
            budget,
            out,
        } => {
            let g: Graph = read_json(&graph)?;
            let mut cfg = SearchConfig::new(max_host)?.with_relation(relation.into());
            cfg.host_constraint = match (leafage, max_degree, subdivision_of, fixed_host) {
                (Some(k), None, None, None) => HostConstraint::LeafageAtMost(k),
                (None, Some(k), None, None) => HostConstraint::MaxDegreeAtMost(k),
                (None, None, Some(path), None) => HostConstraint::SubdivisionOf(read_json(&path)?),
                (None, None, None, Some(path)) => HostConstraint::Fixed(read_json(&path)?),
                (None, None, None, None) => HostConstraint::Unconstrained,
                _ => {
                    return Err(sogkit::Error::Domain(
                        "at most one host constraint may be given".into(),
                    ))
                }
            };
            if paths_only {
                cfg = cfg.paths_only();
            }
            if let Some(seconds) = budget {
                cfg = cfg.with_budget(seconds);
            }
            match find_representation(&g, &cfg)? {
                SearchOutcome::Found {
                    representation,
                    hosts_checked,
                } => {
                    let mut outcome = CommandOutcome::ok(json!({
                        "status": "found",
                        "hosts_checked": hosts_checked,
                        "host_nodes": representation.host().node_count(),
                    }));
                    if let Some(path) = out {
                        write_json_atomic(&path, &representation)?;
                        outcome = outcome.with_artifact(&path);
                    }
                    Ok(outcome)
                }
                SearchOutcome::BoundedAbsent { hosts_checked } => Ok(CommandOutcome::ok(json!({
                    "status": "bounded_absent",
                    "hosts_checked": hosts_checked,
                }))),
                SearchOutcome::Timeout { hosts_checked } => Ok(CommandOutcome {
                    status: Status::Timeout,
                    artifacts: Vec::new(),
                    diagnostics: vec!["time budget exhausted".into()],
                    result: json!({"status": "timeout", "hosts_checked": hosts_checked}),
                }),
            }
        }

        Command::Audit {
            lemma,
            d,
            max_host,
            leafage,
            negative_control,
            budget,
            out,
        } => {
            let mut cfg = SearchConfig::new(max_host)?;
            if let Some(k) = leafage {
                cfg = cfg.with_constraint(HostConstraint::LeafageAtMost(k));
            }
            if let Some(seconds) = budget {
                cfg = cfg.with_budget(seconds);
            }
            let report = match lemma {
                Lemma::Containment | Lemma::Leaves => audit_gadget_lemmas(d, &cfg)?,
                Lemma::Spanbranch => audit_spanbranch(&cfg, if negative_control { 1 } else { 2 })?,
            };
            let value = serde_json::to_value(&report)?;
            let mut outcome = if report.timed_out {
                CommandOutcome {
                    status: Status::Timeout,
                    artifacts: Vec::new(),
                    diagnostics: vec!["time budget exhausted; coverage is partial".into()],
                    result: value,
                }
            } else {
                CommandOutcome::ok(value)
            };
            if let Some(path) = out {
                write_json_atomic(&path, &report)?;
                outcome = outcome.with_artifact(&path);
            }
            Ok(outcome)
        }

        Command::Analyze { tree } => {
            let t: HostTree = read_json(&tree)?;
            let analysis = analyze_tree(&t);
            Ok(CommandOutcome::ok(serde_json::to_value(&analysis)?))
        }

        Command::Export {
            input,
            kind,
            highlight,
            out,
        } => {
            let dot = match kind {
                Kind::Graph => read_json::<Graph>(&input)?.to_dot(),
                Kind::Blocked => read_json::<BlockedFile>(&input)?.graph.to_dot(),
                Kind::Tree => read_json::<HostTree>(&input)?.to_dot(None),
                Kind::Rep => {
                    let rep: Representation = read_json(&input)?;
                    let subtree = match &highlight {
                        Some(v) => Some(rep.subtree_of(v).ok_or_else(|| {
                            sogkit::Error::Domain(format!("vertex {v:?} is not represented"))
                        })?),
                        None => None,
                    };
                    rep.host().to_dot(subtree)
                }
            };
            match out {
                Some(path) => {
                    write_atomic(&path, dot.as_bytes())?;
                    Ok(CommandOutcome::ok(json!({"bytes": dot.len()})).with_artifact(&path))
                }
                None => Ok(CommandOutcome::ok(json!({ "dot": dot }))),
            }
        }
    }
}
