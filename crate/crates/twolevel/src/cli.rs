//! Command-line surface: one subcommand per operation family, JSON in and
//! JSON out, deterministic reports.
//!
//! Exit status: 0 when every check in the report passes, 1 when the report
//! contains a mathematical violation or counterexample, 2 on input or usage
//! errors. Checking verbs wrap their report in a stamped envelope; the
//! constructive verbs (`complete`, `canonicalize`, `polytope-gen`) emit the
//! raw document so their output can be fed back into the other verbs.
//! Progress chatter goes to standard error only; standard output carries
//! exactly the report.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::{self, Configuration};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{self, SearchMode, SetFamilyInstance};
use crate::polytope::{self, Poset, VPolytope};
use crate::prooftrace::{self, BuildOptions};
use crate::RVector;

#[derive(Parser)]
#[command(
    name = "twolevel",
    version,
    about = "Exact checks for binary pair configurations and 2-level polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report to this file as well as standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Cap the rayon worker count. Results are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::Random => SearchMode::Random,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Hypercube,
    CrossPolytope,
    Simplex,
    Order,
    Chain,
    StableSet,
}

#[derive(Subcommand)]
enum Command {
    /// Check every pairing of a configuration and both spanning conditions.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Complete one side of a configuration to inclusion-maximality.
    Complete {
        #[arg(long)]
        input: PathBuf,
        /// Which side to (re)compute from the other.
        #[arg(long, value_enum, default_value = "b")]
        side: SideArg,
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        include_zero: bool,
    },
    /// Rewrite the configuration in coordinates of a basis of B.
    Canonicalize {
        #[arg(long)]
        input: PathBuf,
    },
    /// Replay the induction and emit a machine-checkable certificate.
    Trace {
        #[arg(long)]
        input: PathBuf,
        /// Force the pivot to this index of B instead of the face-score rule.
        #[arg(long)]
        bd_index: Option<usize>,
        /// Skip the inclusion-maximality precondition check.
        #[arg(long)]
        waive_maximality: bool,
    },
    /// Search one induction level for extension witnesses certifying
    /// non-maximality.
    Witnesses {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        bd_index: Option<usize>,
    },
    /// Enumerate facets exactly, test 2-levelness, and verify the
    /// vertex-facet product bound.
    PolytopeCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        long_running: bool,
    },
    /// Generate a polytope family instance as a vertex list.
    PolytopeGen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Dimension, for hypercube / cross-polytope / simplex.
        #[arg(long)]
        d: Option<usize>,
        /// Poset (order/chain) or graph (stable-set) input file.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Brute-force the extremal configuration product in one dimension.
    Search {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        /// Sample count for random mode.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        long_running: bool,
    },
    /// Verify the slice bound, either over a whole dimension or on an
    /// explicit pair file.
    Lemma {
        /// Dimension for the subset oracle.
        #[arg(long)]
        d: Option<usize>,
        /// Explicit configuration file for the signed-pair form.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        long_running: bool,
    },
    /// Stable-set times clique bound for one graph, or exhaustively for all
    /// labeled graphs on n nodes.
    Graph {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Product bound for two set families with pairwise intersections of at
    /// most one element.
    SetFamily {
        #[arg(long)]
        input: PathBuf,
    },
}

/// Stamped wrapper every checking verb emits.
#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    tool: String,
    version: String,
    verb: String,
    seed: Option<u64>,
    passed: bool,
    report: T,
}

fn envelope<T: Serialize>(verb: &str, seed: Option<u64>, passed: bool, report: T) -> String {
    let env = Envelope {
        tool: "twolevel".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        verb: verb.into(),
        seed,
        passed,
        report,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
    s.push('\n');
    s
}

fn raw_doc<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Serialize)]
struct CanonicalizeReport {
    configuration: Configuration,
    basis_indices: Vec<usize>,
    matrix: Vec<RVector>,
}

#[derive(Serialize)]
struct TraceReport {
    certificate: prooftrace::Certificate,
    audit: prooftrace::AuditReport,
}

#[derive(Serialize)]
struct WitnessReport {
    outcome: String,
    fiber_image: Option<RVector>,
    extension: Option<RVector>,
    orthogonal_companion: Option<RVector>,
    extension_pairs_cleanly: Option<bool>,
}

#[derive(Serialize)]
struct PolytopeCheckReport {
    two_level: polytope::TwoLevelReport,
    facets: Vec<polytope::Facet>,
    non_vertex_points: Vec<usize>,
    bound: Option<polytope::BoundReport>,
}

/// Runs one parsed command; returns the rendered report and its verdict.
fn dispatch(cmd: &Command) -> Result<(String, bool)> {
    match cmd {
        Command::Validate { input } => {
            let cfg: Configuration = read_json(input)?;
            let report = cfg.validate();
            let passed = report.is_valid();
            Ok((envelope("validate", None, passed, report), passed))
        }
        Command::Complete { input, side, include_zero } => {
            let cfg: Configuration = read_json(input)?;
            let completed = match side {
                SideArg::B => {
                    let b = config::complete_b(cfg.a(), *include_zero)?;
                    Configuration::new(cfg.dim(), cfg.a().to_vec(), b)?
                }
                SideArg::A => {
                    let a = config::complete_a(cfg.b(), *include_zero)?;
                    Configuration::new(cfg.dim(), a, cfg.b().to_vec())?
                }
            };
            Ok((raw_doc(&completed), true))
        }
        Command::Canonicalize { input } => {
            let cfg: Configuration = read_json(input)?;
            let (canon, map) = config::canonicalize(&cfg)?;
            let report = CanonicalizeReport {
                configuration: canon,
                basis_indices: map.basis_indices,
                matrix: map.matrix.rows().to_vec(),
            };
            Ok((raw_doc(&report), true))
        }
        Command::Trace { input, bd_index, waive_maximality } => {
            let cfg: Configuration = read_json(input)?;
            let forced_pivot = pivot_from_index(&cfg, *bd_index)?;
            let opts = BuildOptions { forced_pivot, waive_maximality: *waive_maximality };
            let t = prooftrace::trace(&cfg, &opts)?;
            let certificate = t.certificate();
            let audit = prooftrace::audit_certificate(&certificate);
            let passed = certificate.verdict && audit.verdict_agrees && audit.recomputed_verdict;
            Ok((envelope("trace", None, passed, TraceReport { certificate, audit }), passed))
        }
        Command::Witnesses { input, bd_index } => {
            let cfg: Configuration = read_json(input)?;
            let forced_pivot = pivot_from_index(&cfg, *bd_index)?;
            let opts = BuildOptions { forced_pivot, waive_maximality: true };
            let node = prooftrace::build_node(&cfg, &opts)?;
            let witness = prooftrace::construct_witnesses(&node)?;
            let report = match &witness {
                None => WitnessReport {
                    outcome: "no_new_witness".into(),
                    fiber_image: None,
                    extension: None,
                    orthogonal_companion: None,
                    extension_pairs_cleanly: None,
                },
                Some(w) => WitnessReport {
                    outcome: "extension_found".into(),
                    fiber_image: Some(w.fiber_image.clone()),
                    extension: Some(w.extension.clone()),
                    orthogonal_companion: w.orthogonal.clone(),
                    extension_pairs_cleanly: Some(true),
                },
            };
            // a found witness certifies non-maximality: report it as a failure
            let passed = witness.is_none();
            Ok((envelope("witnesses", None, passed, report), passed))
        }
        Command::PolytopeCheck { input, long_running } => {
            let p: VPolytope = read_json(input)?;
            let facets = polytope::facets_with_scale(&p, *long_running)?;
            let non_vertex = polytope::non_vertex_points(&p, &facets)?;
            let two_level = polytope::is_two_level_with_scale(&p, *long_running)?;
            let bound = if two_level.is_two_level {
                Some(polytope::verify_bound_with_scale(&p, *long_running)?)
            } else {
                None
            };
            let passed = two_level.is_two_level
                && non_vertex.is_empty()
                && two_level.product <= two_level.bound
                && bound.as_ref().is_some_and(polytope::BoundReport::passed);
            let report = PolytopeCheckReport {
                two_level,
                facets,
                non_vertex_points: non_vertex,
                bound,
            };
            Ok((envelope("polytope-check", None, passed, report), passed))
        }
        Command::PolytopeGen { family, d, input } => {
            let p = match family {
                FamilyArg::Hypercube => polytope::hypercube(need_d(d)?)?,
                FamilyArg::CrossPolytope => polytope::cross_polytope(need_d(d)?)?,
                FamilyArg::Simplex => polytope::simplex(need_d(d)?)?,
                FamilyArg::Order => {
                    let poset: Poset = read_json(need_input(input)?)?;
                    polytope::order_polytope(&poset)?
                }
                FamilyArg::Chain => {
                    let poset: Poset = read_json(need_input(input)?)?;
                    polytope::chain_polytope(&poset)?
                }
                FamilyArg::StableSet => {
                    let graph: Graph = read_json(need_input(input)?)?;
                    polytope::stable_set_polytope(&graph)?
                }
            };
            Ok((raw_doc(&p), true))
        }
        Command::Search { d, mode, budget, seed, long_running } => {
            eprintln!("searching spanning cube subsets in dimension {d} ...");
            let report =
                oracle::search_extremal(*d, (*mode).into(), *budget, *seed, *long_running)?;
            let passed = report.passed();
            Ok((envelope("search", report.seed, passed, report), passed))
        }
        Command::Lemma { d, input, mode, budget, seed, long_running } => match (d, input) {
            (Some(d), None) => {
                let report =
                    oracle::verify_lemma_slice(*d, (*mode).into(), *budget, *seed, *long_running)?;
                let passed = report.passed();
                Ok((envelope("lemma", report.seed, passed, report), passed))
            }
            (None, Some(path)) => {
                let cfg: Configuration = read_json(path)?;
                let report = oracle::verify_lemma_sliceb(cfg.a(), cfg.b())?;
                let passed = report.passed();
                Ok((envelope("lemma", None, passed, report), passed))
            }
            _ => Err(Error::BadInput("lemma needs exactly one of --d or --input".into())),
        },
        Command::Graph { input, n } => match (input, n) {
            (Some(path), None) => {
                let g: Graph = read_json(path)?;
                let report = oracle::graph_bound(&g);
                let passed = report.passed();
                Ok((envelope("graph", None, passed, report), passed))
            }
            (None, Some(n)) => {
                eprintln!("checking all labeled graphs on {n} nodes ...");
                let report = oracle::graph_bound_all(*n)?;
                let passed = report.passed();
                Ok((envelope("graph", None, passed, report), passed))
            }
            _ => Err(Error::BadInput("graph needs exactly one of --input or --n".into())),
        },
        Command::SetFamily { input } => {
            let instance: SetFamilyInstance = read_json(input)?;
            let report = oracle::verify_set_family(&instance)?;
            let passed = report.passed();
            Ok((envelope("set-family", None, passed, report), passed))
        }
    }
}

fn pivot_from_index(cfg: &Configuration, index: Option<usize>) -> Result<Option<RVector>> {
    match index {
        None => Ok(None),
        Some(i) => {
            let b = cfg
                .b()
                .get(i)
                .ok_or_else(|| Error::BadInput(format!("--bd-index {i} out of range")))?;
            Ok(Some(b.clone()))
        }
    }
}

fn need_d(d: &Option<usize>) -> Result<usize> {
    d.ok_or_else(|| Error::BadInput("this family needs --d".into()))
}

fn need_input(input: &Option<PathBuf>) -> Result<&PathBuf> {
    input.as_ref().ok_or_else(|| Error::BadInput("this family needs --input".into()))
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(t) if t > 0 => {
            match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                Ok(pool) => pool.install(|| dispatch(&cli.command)),
                Err(e) => Err(Error::BadInput(format!("thread pool: {e}"))),
            }
        }
        _ => dispatch(&cli.command),
    };
    match result {
        Ok((rendered, passed)) => {
            print!("{rendered}");
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, &rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
