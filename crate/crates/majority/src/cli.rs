//! Command-line surface. The binary is a thin wrapper over this module;
//! each subcommand parses its inputs, calls the library, and emits a
//! [`ResultDocument`] as JSON.
//!
//! Exit codes: 0 success/verified, 1 verification failed (or no
//! qualifying colouring exists), 2 input error, 3 resource cap exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::constraints::{
    verify_majority, Colouring, ConstraintError, ConstraintSystem, CorrespondenceSystem,
    ListSystem,
};
use crate::fuzz::{fuzz, random_lists, FuzzError, FuzzParams};
use crate::graph::{GraphError, VertexId};
use crate::instance::{
    colouring_names, document_from_parts, emit_edge_list, instance_from_document, lists_names,
    parse_edge_list, parse_instance, sublists_documents, tower_document, ColourTable, GraphSpec,
    Instance, InstanceDocument, InstanceError, LedgerDocument, OracleDocument, ResultDocument,
    TraceDocument,
};
use crate::restriction::{restrict_lists, restrict_pairs, FamilyMembers, RestrictionError};
use crate::solver::{
    brute_force_optimum, dag_greedy, exhaustive_digraph_search, local_search, SolverError,
};
use crate::tower::{
    CountablePresentation, FamilyParams, PrefixGraph, TowerError, TowerParams,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_RESOURCE_CAP: i32 = 3;

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Fuzz(#[from] FuzzError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Restriction(#[from] RestrictionError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(SolverError::SearchSpaceExceeded { .. }) => EXIT_RESOURCE_CAP,
            _ => EXIT_INPUT_ERROR,
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

#[derive(Parser, Debug)]
#[command(
    name = "majority",
    version,
    about = "Majority list- and correspondence-colouring toolkit",
    long_about = "Computes and verifies (1/k)-majority list- and correspondence-colourings \
                  of finite graphs and acyclic digraphs, and runs the prefix tower on \
                  builtin countable families."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a finite instance: conflict-descent local search on graphs,
    /// reverse-topological greedy on acyclic digraphs
    Solve(SolveArgs),
    /// Audit a colouring against an instance at the 1/k threshold
    Verify(VerifyArgs),
    /// Exhaustive oracles: the conflict minimiser for graphs, existence
    /// search for digraphs
    Oracle(OracleArgs),
    /// Shrink uniform (l+1)-lists to l-lists against witness families,
    /// emitting the witness ledger
    Restrict(RestrictArgs),
    /// Run the prefix tower on a builtin countable family: restrict,
    /// solve every prefix, stabilise, certify
    Tower(TowerArgs),
    /// Randomised stress harness for the finite solvers
    Fuzz(FuzzArgs),
    /// Emit a builtin family prefix as a finite instance
    Gen(GenArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum InputFormat {
    Json,
    Edgelist,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    List,
    Correspondence,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::List => "list",
            Mode::Correspondence => "correspondence",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ListsKind {
    Uniform,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MatchingsKind {
    Identity,
    Random,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Instance file; `-` reads stdin
    #[arg(long)]
    input: String,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Input format; edge-list input gets uniform lists c0..c{k-1}
    #[arg(long, value_enum, default_value = "json")]
    format: InputFormat,
    /// Majority parameter for edge-list input (JSON instances carry
    /// their own)
    #[arg(long)]
    k: Option<usize>,
    /// Echoed into the result document
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Instance file, or a result document with an embedded instance and
    /// colouring
    #[arg(long)]
    input: String,
    /// Colouring to audit: a result document or a bare {"vertex":
    /// "colour"} map; unnecessary when --input is a result document
    #[arg(long)]
    colouring: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    input: String,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: InputFormat,
    #[arg(long)]
    k: Option<usize>,
    /// Cap on the number of colourings enumerated
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct RestrictArgs {
    /// Instance with uniform (l+1)-lists and witness families
    #[arg(long)]
    input: String,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Schedule length; overrides the instance's budget field
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args, Debug)]
struct TowerArgs {
    /// Builtin family: ray, two_way_path, grid, binary_tree, star,
    /// complete, rado, directed_ray, random_dag
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Arc density for random_dag
    #[arg(long, default_value_t = 0.25)]
    density: f64,
    /// Tower height: prefixes G_1..G_{n_max} are solved
    #[arg(long, default_value_t = 64)]
    n_max: usize,
    /// Stabilisation target length
    #[arg(long, default_value_t = 16)]
    t: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Restriction schedule length
    #[arg(long, default_value_t = 100)]
    budget: usize,
    /// Minimum surviving prefix colourings behind each stabilised colour
    #[arg(long, default_value_t = 4)]
    survivor_floor: usize,
    /// Certification audit scope (defaults to n_max)
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, value_enum, default_value = "list")]
    mode: Mode,
    /// Base list size before restriction; defaults to the canonical
    /// pairing k+1, overridable for experiments (must be at least 3)
    #[arg(long)]
    list_size: Option<usize>,
    /// Base lists: the same palette everywhere, or seeded random
    /// subsets of a larger palette
    #[arg(long, value_enum, default_value = "uniform")]
    lists: ListsKind,
    /// Palette size for random lists (default k+2)
    #[arg(long)]
    palette: Option<usize>,
    /// Edge matchings in correspondence mode
    #[arg(long, value_enum, default_value = "random")]
    matchings: MatchingsKind,
    /// Assert that the family is directed
    #[arg(long, default_value_t = false)]
    directed: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 6)]
    max_order: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_enum, default_value = "list")]
    mode: Mode,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    family: String,
    /// Prefix size to materialise
    #[arg(long)]
    order: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.25)]
    density: f64,
    /// List size for the emitted uniform lists
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: InputFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses `args` and runs the requested subcommand; returns the process
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Solve(args) => run_solve(args),
        Command::Verify(args) => run_verify(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Restrict(args) => run_restrict(args),
        Command::Tower(args) => run_tower_command(args),
        Command::Fuzz(args) => run_fuzz(args),
        Command::Gen(args) => run_gen(args),
    }
}

fn now() -> Option<u64> {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs())
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|source| CliError::Read {
                path: "<stdin>".to_owned(),
                source,
            })?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })
    }
}

fn write_output(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &str, format: InputFormat, k: Option<usize>) -> Result<Instance, CliError> {
    let text = read_input(path)?;
    match format {
        InputFormat::Json => Ok(parse_instance(&text)?),
        InputFormat::Edgelist => {
            let k = k.unwrap_or(2);
            if k < 2 {
                return Err(usage("--k must be at least 2"));
            }
            let (order, edges) = parse_edge_list(&text)?;
            let document = InstanceDocument {
                graph: GraphSpec {
                    order: Some(order),
                    edges: Some(edges),
                    directed: Some(false),
                    family: None,
                    seed: None,
                    density: None,
                },
                lists: None,
                uniform_list: Some((0..k).map(|i| format!("c{i}")).collect()),
                k,
                correspondence: None,
                families: Vec::new(),
                budget: None,
            };
            Ok(instance_from_document(document)?)
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<i32, CliError> {
    let instance = load_instance(&args.input, args.format, args.k)?;
    let mut document = ResultDocument::new("solve");
    document.seed = args.seed;
    document.timestamp = now();
    if instance.duplicate_edges > 0 {
        document.duplicate_edges_collapsed = Some(instance.duplicate_edges);
    }

    let (chi, trace) = match &instance.host {
        PrefixGraph::Graph(graph) => {
            let (chi, trace) = local_search(graph, &instance.system, instance.k)?;
            (chi, Some(trace))
        }
        PrefixGraph::Digraph(digraph) => {
            let chi = dag_greedy(digraph, &instance.system, instance.k)?;
            (chi, None)
        }
    };
    let report = match &instance.host {
        PrefixGraph::Graph(g) => verify_majority(g, &chi, &instance.system, instance.k)?,
        PrefixGraph::Digraph(d) => verify_majority(d, &chi, &instance.system, instance.k)?,
    };

    let code = if report.overall_pass { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    document.exit_status = code;
    document.colouring = Some(colouring_names(&chi, &instance.colours));
    document.report = Some(report);
    document.trace = trace.map(|t| TraceDocument::from_trace(&t, &instance.colours));
    document.instance = Some(instance.document);
    write_output(&args.output, &document.to_json())?;
    Ok(code)
}

fn colouring_from_names(
    map: &BTreeMap<String, String>,
    order: usize,
    table: &ColourTable,
) -> Result<Colouring, CliError> {
    let mut colours = vec![None; order];
    for (key, name) in map {
        let vertex: usize = key
            .parse()
            .map_err(|_| usage(format!("colouring key {key:?} is not a vertex index")))?;
        if vertex < 1 || vertex > order {
            return Err(usage(format!(
                "colouring names vertex {vertex}, out of range 1..={order}"
            )));
        }
        let colour = table
            .id(name)
            .ok_or_else(|| usage(format!("colouring uses unknown colour {name:?}")))?;
        colours[vertex - 1] = Some(colour);
    }
    let assignment: Result<Vec<_>, CliError> = colours
        .into_iter()
        .enumerate()
        .map(|(pos, slot)| slot.ok_or_else(|| usage(format!("vertex {} is uncoloured", pos + 1))))
        .collect();
    Ok(Colouring::new(assignment?))
}

fn run_verify(args: VerifyArgs) -> Result<i32, CliError> {
    let text = read_input(&args.input)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(InstanceError::Json)?;
    let is_result = value.get("tool").is_some() || value.get("exit_status").is_some();

    let (instance, names): (Instance, BTreeMap<String, String>) = if is_result {
        let result: ResultDocument =
            serde_json::from_value(value).map_err(InstanceError::Json)?;
        let instance_doc = result
            .instance
            .ok_or_else(|| usage("result document has no embedded instance"))?;
        let names = match (&args.colouring, result.colouring) {
            (Some(path), _) => read_colouring_file(path)?,
            (None, Some(names)) => names,
            (None, None) => return Err(usage("result document has no colouring to audit")),
        };
        (instance_from_document(instance_doc)?, names)
    } else {
        let instance = parse_instance(&text)?;
        let path = args
            .colouring
            .as_ref()
            .ok_or_else(|| usage("--colouring is required with a plain instance"))?;
        (instance, read_colouring_file(path)?)
    };

    let chi = colouring_from_names(&names, instance.order(), &instance.colours)?;
    let report = match &instance.host {
        PrefixGraph::Graph(g) => verify_majority(g, &chi, &instance.system, instance.k)?,
        PrefixGraph::Digraph(d) => verify_majority(d, &chi, &instance.system, instance.k)?,
    };

    let code = if report.overall_pass { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    let mut document = ResultDocument::new("verify");
    document.timestamp = now();
    document.exit_status = code;
    document.colouring = Some(names);
    document.report = Some(report);
    document.instance = Some(instance.document);
    write_output(&args.output, &document.to_json())?;
    Ok(code)
}

fn read_colouring_file(path: &str) -> Result<BTreeMap<String, String>, CliError> {
    let text = read_input(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(InstanceError::Json)?;
    if value.get("tool").is_some() || value.get("exit_status").is_some() {
        let result: ResultDocument =
            serde_json::from_value(value).map_err(InstanceError::Json)?;
        result
            .colouring
            .ok_or_else(|| usage(format!("{path}: result document has no colouring")))
    } else {
        serde_json::from_value(value)
            .map_err(|e| usage(format!("{path}: not a colouring map: {e}")))
    }
}

fn run_oracle(args: OracleArgs) -> Result<i32, CliError> {
    let instance = load_instance(&args.input, args.format, args.k)?;
    let mut document = ResultDocument::new("oracle");
    document.seed = args.seed;
    document.timestamp = now();

    let code = match &instance.host {
        PrefixGraph::Graph(graph) => {
            let (minimum, witness) = brute_force_optimum(graph, &instance.system, args.cap)?;
            let report = verify_majority(graph, &witness, &instance.system, instance.k)?;
            document.oracle = Some(OracleDocument {
                exists: true,
                minimum_conflicts: Some(minimum),
                colouring: Some(colouring_names(&witness, &instance.colours)),
                report: Some(report),
            });
            EXIT_OK
        }
        PrefixGraph::Digraph(digraph) => {
            let lists = match &instance.system {
                ConstraintSystem::List(lists) => lists,
                ConstraintSystem::Correspondence { .. } => {
                    return Err(usage(
                        "the digraph oracle searches list instances; drop the correspondence table",
                    ))
                }
            };
            match exhaustive_digraph_search(digraph, lists, instance.k, args.cap)? {
                Some(chi) => {
                    let report = verify_majority(digraph, &chi, &instance.system, instance.k)?;
                    document.oracle = Some(OracleDocument {
                        exists: true,
                        minimum_conflicts: None,
                        colouring: Some(colouring_names(&chi, &instance.colours)),
                        report: Some(report),
                    });
                    EXIT_OK
                }
                None => {
                    document.oracle = Some(OracleDocument {
                        exists: false,
                        minimum_conflicts: None,
                        colouring: None,
                        report: None,
                    });
                    EXIT_VERIFICATION_FAILED
                }
            }
        }
    };
    document.exit_status = code;
    document.instance = Some(instance.document);
    write_output(&args.output, &document.to_json())?;
    Ok(code)
}

fn run_restrict(args: RestrictArgs) -> Result<i32, CliError> {
    let instance = load_instance(&args.input, InputFormat::Json, None)?;
    let budget = args.budget.or(instance.budget).unwrap_or(0);

    let pair_form = instance
        .families
        .iter()
        .any(|f| matches!(f.members, FamilyMembers::Pairs(_)));
    let colour_form = instance
        .families
        .iter()
        .any(|f| matches!(f.members, FamilyMembers::Vertices(_)));
    if pair_form && colour_form {
        return Err(usage("families must be all colour-form or all pair-form"));
    }

    let lists = instance.system.lists();
    let prefix = instance.order();
    let (sublists, ledger) = if pair_form {
        restrict_pairs(prefix, lists, &instance.families, budget)?
    } else {
        restrict_lists(prefix, lists, &instance.families, budget)?
    };

    let (sublist_doc, removed_doc) = sublists_documents(&sublists, &instance.colours);
    let mut document = ResultDocument::new("restrict");
    document.timestamp = now();
    document.exit_status = EXIT_OK;
    document.sublists = Some(sublist_doc);
    document.removed = Some(removed_doc);
    document.ledger = Some(LedgerDocument::from_ledger(&ledger, &instance.colours));
    document.instance = Some(instance.document);
    write_output(&args.output, &document.to_json())?;
    Ok(EXIT_OK)
}

/// Identity or seeded-random partial matchings on every edge of the
/// materialised prefix.
fn build_matchings(
    host: &PrefixGraph,
    lists: &ListSystem,
    kind: MatchingsKind,
    rng: &mut ChaCha8Rng,
) -> CorrespondenceSystem {
    use rand::seq::SliceRandom;
    let edges: Vec<(VertexId, VertexId)> = match host {
        PrefixGraph::Graph(g) => g.edges().to_vec(),
        PrefixGraph::Digraph(d) => d.arcs().to_vec(),
    };
    let mut pairs = CorrespondenceSystem::new();
    for (u, v) in edges {
        match kind {
            MatchingsKind::Identity => {
                for &c in lists.list(u) {
                    if lists.contains(v, c) {
                        pairs.insert_pair(u, v, c, c);
                    }
                }
            }
            MatchingsKind::Random => {
                let mut left = lists.list(u).to_vec();
                let mut right = lists.list(v).to_vec();
                left.shuffle(rng);
                right.shuffle(rng);
                let size = rng.gen_range(0..=left.len().min(right.len()));
                for i in 0..size {
                    pairs.insert_pair(u, v, left[i], right[i]);
                }
            }
        }
    }
    pairs
}

fn run_tower_command(args: TowerArgs) -> Result<i32, CliError> {
    let presentation = CountablePresentation::builtin(
        &args.family,
        FamilyParams {
            seed: args.seed,
            density: args.density,
        },
    )?;
    if args.directed && !presentation.directed() {
        return Err(usage(format!("family {:?} is undirected", args.family)));
    }
    if args.n_max == 0 {
        return Err(usage("--n-max must be at least 1"));
    }
    let horizon = args.horizon.unwrap_or(args.n_max);
    let base_size = args.list_size.unwrap_or(args.k + 1);
    if base_size < 3 {
        return Err(usage("--list-size must be at least 3 (restriction leaves size-1 sublists)"));
    }

    // streams are separated so list noise never shifts matching noise
    let mut list_rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(0x5EED_0001));
    let mut matching_rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(0x5EED_0002));

    let (base_lists, palette_size) = match args.lists {
        ListsKind::Uniform => {
            let palette: Vec<_> = (0..base_size).map(crate::constraints::ColourId::new).collect();
            (ListSystem::uniform(horizon, palette)?, base_size)
        }
        ListsKind::Random => {
            let palette = args.palette.unwrap_or(args.k + 2).max(base_size);
            (
                random_lists(&mut list_rng, horizon, base_size, palette),
                palette,
            )
        }
    };
    let table = ColourTable::canonical(palette_size);

    let base_system = match args.mode {
        Mode::List => ConstraintSystem::List(base_lists),
        Mode::Correspondence => {
            let host = presentation.materialize_prefix(horizon)?;
            let pairs = build_matchings(&host, &base_lists, args.matchings, &mut matching_rng);
            ConstraintSystem::Correspondence {
                lists: base_lists,
                pairs,
            }
        }
    };

    let params = TowerParams {
        k: args.k,
        n_max: args.n_max,
        t: args.t,
        survivor_floor: args.survivor_floor,
        horizon,
        budget: args.budget,
    };
    let outcome = crate::tower::run_tower(&presentation, &base_system, &params)?;

    let code = if outcome.certification.pass { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    let (sublist_doc, removed_doc) = sublists_documents(&outcome.sublists, &table);
    let mut document = ResultDocument::new("tower");
    document.seed = Some(args.seed);
    document.timestamp = now();
    document.exit_status = code;
    document.tower = Some(tower_document(
        &args.family,
        args.mode.name(),
        &outcome,
        &table,
    ));
    document.ledger = Some(LedgerDocument::from_ledger(&outcome.ledger, &table));
    document.sublists = Some(sublist_doc);
    document.removed = Some(removed_doc);
    write_output(&args.output, &document.to_json())?;
    Ok(code)
}

fn run_fuzz(args: FuzzArgs) -> Result<i32, CliError> {
    let report = fuzz(FuzzParams {
        seed: args.seed,
        trials: args.trials,
        max_order: args.max_order,
        k: args.k,
        correspondence: args.mode == Mode::Correspondence,
    })?;
    let code = if report.failures.is_empty() { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    let mut document = ResultDocument::new("fuzz");
    document.seed = Some(args.seed);
    document.timestamp = now();
    document.exit_status = code;
    document.fuzz = Some(report.document());
    write_output(&args.output, &document.to_json())?;
    Ok(code)
}

fn run_gen(args: GenArgs) -> Result<i32, CliError> {
    if args.k < 2 {
        return Err(usage("--k must be at least 2"));
    }
    let presentation = CountablePresentation::builtin(
        &args.family,
        FamilyParams {
            seed: args.seed,
            density: args.density,
        },
    )?;
    let host = presentation.materialize_prefix(args.order)?;

    match args.format {
        InputFormat::Edgelist => {
            let (order, pairs) = match &host {
                PrefixGraph::Graph(g) => (g.order(), g.edges().to_vec()),
                PrefixGraph::Digraph(d) => (d.order(), d.arcs().to_vec()),
            };
            let mut text = format!(
                "# {} prefix, order {}{}\n",
                presentation.name(),
                order,
                if presentation.directed() { ", directed arcs u v" } else { "" }
            );
            text.push_str(&emit_edge_list(order, &pairs));
            write_output(&args.output, &text)?;
        }
        InputFormat::Json => {
            let table = ColourTable::canonical(args.k);
            let palette: Vec<_> = (0..args.k).map(crate::constraints::ColourId::new).collect();
            let lists = ListSystem::uniform(args.order, palette)?;
            let system = ConstraintSystem::List(lists.clone());
            let mut document = document_from_parts(&host, &system, args.k, &table);
            // a uniform instance reads better in the compact shorthand
            document.lists = None;
            document.uniform_list = Some(
                lists_names(&lists, &table)
                    .remove("1")
                    .expect("order >= 1"),
            );
            write_output(&args.output, &crate::instance::emit_instance(&document))?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses_every_subcommand() {
        for argv in [
            vec!["majority", "solve", "--input", "x.json"],
            vec!["majority", "verify", "--input", "x.json", "--colouring", "c.json"],
            vec!["majority", "oracle", "--input", "x.json", "--cap", "1000"],
            vec!["majority", "restrict", "--input", "x.json", "--budget", "10"],
            vec!["majority", "tower", "--family", "ray", "--n-max", "32", "--t", "8"],
            vec!["majority", "fuzz", "--trials", "5", "--max-order", "4"],
            vec!["majority", "gen", "--family", "star", "--order", "8"],
        ] {
            Cli::try_parse_from(&argv).unwrap_or_else(|e| panic!("{argv:?}: {e}"));
        }
    }

    #[test]
    fn unknown_subcommand_is_input_error() {
        assert_eq!(run(["majority", "frobnicate"]), EXIT_INPUT_ERROR);
    }

    #[test]
    fn missing_file_is_input_error() {
        assert_eq!(
            run(["majority", "solve", "--input", "/nonexistent/x.json"]),
            EXIT_INPUT_ERROR
        );
    }
}
