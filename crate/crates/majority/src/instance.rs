//! Instance and result documents.
//!
//! One JSON schema covers every subcommand: a graph (explicit edges or a
//! builtin family prefix), colour lists by name, an optional
//! correspondence table, optional witness families, and the majority
//! parameter `k`. Colour names are arbitrary strings; they map
//! bijectively onto [`ColourId`]s in sorted name order, so "lowest colour
//! id" always means the lexicographically smallest name.
//!
//! Result documents embed the instance they were computed from, so a
//! result file alone is enough to re-verify its colouring.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::{
    validate_correspondence, Colouring, ColourId, ConstraintError, ConstraintSystem,
    CorrespondenceSystem, ListSystem, MajorityReport,
};
use crate::graph::{FiniteDigraph, FiniteGraph, GraphError, VertexId};
use crate::restriction::{
    FamilyOrigin, LedgerEntry, RestrictionError, SublistAssignment, WitnessFamily, WitnessLedger,
};
use crate::solver::SearchTrace;
use crate::tower::{
    CertificationReport, CountablePresentation, FamilyParams, PrefixGraph, StabilizedColouring,
    TowerError, TowerOutcome, TowerParams,
};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("correspondence system violates the matching condition: {0}")]
    Matching(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Restriction(#[from] RestrictionError),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> InstanceError {
    InstanceError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// The graph section of an instance: either explicit (`order` + `edges`)
/// or a builtin family prefix (`family` + `order`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct GraphSpec {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub edges: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub directed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub density: Option<f64>,
}

/// A witness family in an instance file: extensional vertices, extensional
/// (vertex, colour) pairs, or the neighbourhood of a vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct FamilySpec {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pairs: Option<Vec<(usize, String)>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub neighbourhood_of: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub graph: GraphSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lists: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub uniform_list: Option<Vec<String>>,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub correspondence: Option<BTreeMap<String, Vec<(String, String)>>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub families: Vec<FamilySpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget: Option<usize>,
}

/// Bijection between colour names and ids (sorted name order).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColourTable {
    names: Vec<String>,
}

impl ColourTable {
    pub fn from_names<I: IntoIterator<Item = String>>(names: I) -> Self {
        let set: BTreeSet<String> = names.into_iter().collect();
        ColourTable {
            names: set.into_iter().collect(),
        }
    }

    /// The canonical palette `c0..c{size-1}` used by generated instances.
    pub fn canonical(size: usize) -> Self {
        Self::from_names((0..size).map(|i| format!("c{i}")))
    }

    pub fn id(&self, name: &str) -> Option<ColourId> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(ColourId::new)
    }

    pub fn name(&self, c: ColourId) -> &str {
        &self.names[c.id()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A fully validated in-memory instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub document: InstanceDocument,
    pub host: PrefixGraph,
    pub system: ConstraintSystem,
    pub k: usize,
    pub colours: ColourTable,
    pub families: Vec<WitnessFamily>,
    pub budget: Option<usize>,
    /// Duplicate edges collapsed during ingestion (warning, not error).
    pub duplicate_edges: usize,
}

impl Instance {
    pub fn order(&self) -> usize {
        self.host.order()
    }
}

/// Parses and fully validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let document: InstanceDocument = serde_json::from_str(text)?;
    instance_from_document(document)
}

pub fn instance_from_document(document: InstanceDocument) -> Result<Instance, InstanceError> {
    let (host, duplicate_edges) = build_host(&document.graph)?;
    let order = host.order();

    if document.k < 2 {
        return Err(schema("k", "majority parameter k must be at least 2"));
    }

    let colours = collect_colour_table(&document);
    let lists = build_lists(&document, order, &colours)?;
    let system = match &document.correspondence {
        None => ConstraintSystem::List(lists),
        Some(raw) => {
            let pairs = build_correspondence(raw, &host, &colours)?;
            let violations = validate_correspondence(&pairs, &lists);
            if !violations.is_empty() {
                let rendered: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                return Err(InstanceError::Matching(rendered.join("; ")));
            }
            ConstraintSystem::Correspondence { lists, pairs }
        }
    };

    let families = build_families(&document, &host, &colours)?;

    Ok(Instance {
        budget: document.budget,
        k: document.k,
        duplicate_edges,
        host,
        system,
        colours,
        families,
        document,
    })
}

fn build_host(spec: &GraphSpec) -> Result<(PrefixGraph, usize), InstanceError> {
    let order = spec
        .order
        .ok_or_else(|| schema("graph.order", "order is required"))?;
    if order == 0 {
        return Err(schema("graph.order", "order must be at least 1"));
    }
    match (&spec.family, &spec.edges) {
        (Some(_), Some(_)) => Err(schema(
            "graph",
            "give either explicit edges or a family reference, not both",
        )),
        (None, None) => Err(schema("graph", "either edges or family is required")),
        (Some(family), None) => {
            let params = FamilyParams {
                seed: spec.seed.unwrap_or(0),
                density: spec.density.unwrap_or(FamilyParams::default().density),
            };
            let presentation = CountablePresentation::builtin(family, params)?;
            if let Some(directed) = spec.directed {
                if directed != presentation.directed() {
                    return Err(schema(
                        "graph.directed",
                        format!(
                            "family {family:?} is {}",
                            if presentation.directed() { "directed" } else { "undirected" }
                        ),
                    ));
                }
            }
            Ok((presentation.materialize_prefix(order)?, 0))
        }
        (None, Some(edges)) => {
            if spec.directed.unwrap_or(false) {
                let (d, dups) = FiniteDigraph::build(order, edges)?;
                Ok((PrefixGraph::Digraph(d), dups))
            } else {
                let (g, dups) = FiniteGraph::build(order, edges)?;
                Ok((PrefixGraph::Graph(g), dups))
            }
        }
    }
}

fn collect_colour_table(document: &InstanceDocument) -> ColourTable {
    let mut names: BTreeSet<String> = BTreeSet::new();
    if let Some(lists) = &document.lists {
        for list in lists.values() {
            names.extend(list.iter().cloned());
        }
    }
    if let Some(uniform) = &document.uniform_list {
        names.extend(uniform.iter().cloned());
    }
    if let Some(correspondence) = &document.correspondence {
        for pairs in correspondence.values() {
            for (a, b) in pairs {
                names.insert(a.clone());
                names.insert(b.clone());
            }
        }
    }
    for family in &document.families {
        if let Some(pairs) = &family.pairs {
            names.extend(pairs.iter().map(|(_, c)| c.clone()));
        }
    }
    ColourTable::from_names(names)
}

fn named_list(
    names: &[String],
    table: &ColourTable,
    path: &str,
) -> Result<Vec<ColourId>, InstanceError> {
    let mut out = Vec::with_capacity(names.len());
    for name in names {
        out.push(
            table
                .id(name)
                .ok_or_else(|| schema(path, format!("unknown colour {name:?}")))?,
        );
    }
    Ok(out)
}

fn build_lists(
    document: &InstanceDocument,
    order: usize,
    table: &ColourTable,
) -> Result<ListSystem, InstanceError> {
    match (&document.lists, &document.uniform_list) {
        (Some(_), Some(_)) => Err(schema(
            "lists",
            "give either per-vertex lists or uniform_list, not both",
        )),
        (None, None) => Err(schema("lists", "colour lists are required")),
        (None, Some(uniform)) => {
            let list = named_list(uniform, table, "uniform_list")?;
            Ok(ListSystem::uniform(order, list)?)
        }
        (Some(map), None) => {
            let mut lists: Vec<Option<Vec<ColourId>>> = vec![None; order];
            for (key, names) in map {
                let path = format!("lists.{key}");
                let vertex: usize = key
                    .parse()
                    .map_err(|_| schema(&path, "keys must be vertex indices"))?;
                if vertex < 1 || vertex > order {
                    return Err(schema(
                        &path,
                        format!("vertex {vertex} out of range 1..={order}"),
                    ));
                }
                lists[vertex - 1] = Some(named_list(names, table, &path)?);
            }
            let lists: Vec<Vec<ColourId>> = lists
                .into_iter()
                .enumerate()
                .map(|(pos, slot)| {
                    slot.ok_or_else(|| {
                        schema("lists", format!("no list given for vertex {}", pos + 1))
                    })
                })
                .collect::<Result<_, _>>()?;
            Ok(ListSystem::new(lists)?)
        }
    }
}

fn parse_edge_key(key: &str) -> Option<(usize, usize)> {
    let (a, b) = key.split_once('-')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn build_correspondence(
    raw: &BTreeMap<String, Vec<(String, String)>>,
    host: &PrefixGraph,
    table: &ColourTable,
) -> Result<CorrespondenceSystem, InstanceError> {
    let mut system = CorrespondenceSystem::new();
    for (key, pairs) in raw {
        let path = format!("correspondence.{key}");
        let (a, b) = parse_edge_key(key)
            .ok_or_else(|| schema(&path, "edge keys look like \"1-2\""))?;
        let order = host.order();
        if a < 1 || a > order || b < 1 || b > order || a == b {
            return Err(schema(
                &path,
                format!("not an edge over vertices 1..={order}"),
            ));
        }
        let (u, v) = (VertexId::new(a), VertexId::new(b));
        let present = match host {
            PrefixGraph::Graph(g) => g.contains_edge(u, v),
            PrefixGraph::Digraph(d) => d.contains_arc(u, v) || d.contains_arc(v, u),
        };
        if !present {
            return Err(schema(&path, "edge is not in the graph"));
        }
        for (cu_name, cv_name) in pairs {
            let cu = table
                .id(cu_name)
                .ok_or_else(|| schema(&path, format!("unknown colour {cu_name:?}")))?;
            let cv = table
                .id(cv_name)
                .ok_or_else(|| schema(&path, format!("unknown colour {cv_name:?}")))?;
            system.insert_pair(u, v, cu, cv);
        }
    }
    Ok(system)
}

fn build_families(
    document: &InstanceDocument,
    host: &PrefixGraph,
    table: &ColourTable,
) -> Result<Vec<WitnessFamily>, InstanceError> {
    let mut families = Vec::new();
    for (rank, spec) in document.families.iter().enumerate() {
        let path = format!("families[{rank}]");
        let given: usize = [
            spec.vertices.is_some(),
            spec.pairs.is_some(),
            spec.neighbourhood_of.is_some(),
        ]
        .into_iter()
        .filter(|&b| b)
        .count();
        if given != 1 {
            return Err(schema(
                &path,
                "give exactly one of vertices, pairs, or neighbourhood_of",
            ));
        }
        let order = host.order();
        let label = spec
            .label
            .clone()
            .unwrap_or_else(|| format!("X{}", rank + 1));
        let family = if let Some(vertices) = &spec.vertices {
            let mut ids = Vec::with_capacity(vertices.len());
            for &raw in vertices {
                if raw < 1 || raw > order {
                    return Err(schema(
                        &path,
                        format!("vertex {raw} out of range 1..={order}"),
                    ));
                }
                ids.push(VertexId::new(raw));
            }
            ids.sort_unstable();
            WitnessFamily::colour_form(FamilyOrigin::Named(label), ids)?
        } else if let Some(pairs) = &spec.pairs {
            let mut members = Vec::with_capacity(pairs.len());
            for (raw, name) in pairs {
                if *raw < 1 || *raw > order {
                    return Err(schema(
                        &path,
                        format!("vertex {raw} out of range 1..={order}"),
                    ));
                }
                let colour = table
                    .id(name)
                    .ok_or_else(|| schema(&path, format!("unknown colour {name:?}")))?;
                members.push((VertexId::new(*raw), colour));
            }
            members.sort_unstable_by_key(|(v, _)| *v);
            WitnessFamily::pair_form(FamilyOrigin::Named(label), members)?
        } else {
            let raw = spec.neighbourhood_of.expect("checked above");
            if raw < 1 || raw > order {
                return Err(schema(
                    &path,
                    format!("vertex {raw} out of range 1..={order}"),
                ));
            }
            let u = VertexId::new(raw);
            let members = host.audited_neighbours(u).to_vec();
            WitnessFamily::colour_form(FamilyOrigin::Neighbourhood(u), members)?
        };
        families.push(family);
    }
    Ok(families)
}

pub fn emit_instance(document: &InstanceDocument) -> String {
    to_pretty_json(document)
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialise");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------
// result documents
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStepDocument {
    pub vertex: usize,
    pub from: String,
    pub to: String,
    pub conflicts_after: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub initial_conflicts: usize,
    pub final_conflicts: usize,
    pub moves: usize,
    pub steps: Vec<TraceStepDocument>,
}

impl TraceDocument {
    pub fn from_trace(trace: &SearchTrace, table: &ColourTable) -> Self {
        TraceDocument {
            initial_conflicts: trace.initial_conflicts,
            final_conflicts: trace.final_conflicts,
            moves: trace.steps.len(),
            steps: trace
                .steps
                .iter()
                .map(|s| TraceStepDocument {
                    vertex: s.vertex.index(),
                    from: table.name(s.from).to_owned(),
                    to: table.name(s.to).to_owned(),
                    conflicts_after: s.conflicts_after,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntryDocument {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub colour: Option<String>,
    pub witnesses: Vec<usize>,
    pub processed: usize,
    pub shortfalls: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerDocument {
    pub families: Vec<String>,
    pub schedule_length: usize,
    pub entries: Vec<LedgerEntryDocument>,
}

impl LedgerDocument {
    pub fn from_ledger(ledger: &WitnessLedger, table: &ColourTable) -> Self {
        let entry_doc = |e: &LedgerEntry| LedgerEntryDocument {
            family: e.origin.label(),
            colour: e.colour.map(|c| table.name(c).to_owned()),
            witnesses: e.witnesses.iter().map(|v| v.index()).collect(),
            processed: e.processed,
            shortfalls: e.shortfalls,
            skipped: e.skipped,
        };
        LedgerDocument {
            families: ledger.families.iter().map(|f| f.label()).collect(),
            schedule_length: ledger.schedule.len(),
            entries: ledger.entries.iter().map(entry_doc).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDocument {
    /// Whether a qualifying colouring exists (always true for the
    /// undirected minimiser).
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minimum_conflicts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub colouring: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<MajorityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizedDocument {
    pub requested_len: usize,
    pub len: usize,
    pub truncated: bool,
    pub survivor_floor: usize,
    pub colours: BTreeMap<String, String>,
    pub survivor_counts: Vec<usize>,
}

impl StabilizedDocument {
    pub fn from_stabilized(stabilized: &StabilizedColouring, table: &ColourTable) -> Self {
        StabilizedDocument {
            requested_len: stabilized.requested_len,
            len: stabilized.len,
            truncated: stabilized.truncated,
            survivor_floor: stabilized.survivor_floor,
            colours: stabilized
                .colours
                .iter()
                .enumerate()
                .map(|(pos, &c)| ((pos + 1).to_string(), table.name(c).to_owned()))
                .collect(),
            survivor_counts: stabilized.survivor_sets.iter().map(|s| s.len()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnclosedAuditDocument {
    pub vertex: usize,
    pub degree: usize,
    pub conflicts: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessAuditDocument {
    pub vertex: usize,
    pub colour: String,
    pub materialized: usize,
    pub processed: usize,
    pub shortfalls: usize,
    pub skipped: usize,
    pub ledger_witnesses: usize,
    pub witnesses_differ: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationDocument {
    pub pass: bool,
    pub horizon: usize,
    pub stabilized_len: usize,
    pub extension_index: usize,
    pub enclosed: Vec<EnclosedAuditDocument>,
    pub unbounded: Vec<WitnessAuditDocument>,
}

impl CertificationDocument {
    pub fn from_report(report: &CertificationReport, table: &ColourTable) -> Self {
        CertificationDocument {
            pass: report.pass,
            horizon: report.horizon,
            stabilized_len: report.stabilized_len,
            extension_index: report.extension_index,
            enclosed: report
                .enclosed
                .iter()
                .map(|a| EnclosedAuditDocument {
                    vertex: a.vertex.index(),
                    degree: a.degree,
                    conflicts: a.conflicts,
                    pass: a.pass,
                })
                .collect(),
            unbounded: report
                .unbounded
                .iter()
                .map(|a| WitnessAuditDocument {
                    vertex: a.vertex.index(),
                    colour: table.name(a.colour).to_owned(),
                    materialized: a.materialized,
                    processed: a.processed,
                    shortfalls: a.shortfalls,
                    skipped: a.skipped,
                    ledger_witnesses: a.ledger_witnesses,
                    witnesses_differ: a.witnesses_differ,
                    pass: a.pass,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerDocument {
    pub family: String,
    pub mode: String,
    pub params: TowerParams,
    /// Audited conflicts per prefix (bad edges, or bad arcs for
    /// digraphs).
    pub prefix_conflicts: Vec<usize>,
    pub stabilized: StabilizedDocument,
    pub certification: CertificationDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzFindingDocument {
    pub trial: usize,
    pub message: String,
    pub instance: InstanceDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzDocument {
    pub seed: u64,
    pub trials: usize,
    pub mode: String,
    pub max_order: usize,
    pub k: usize,
    pub failures: Vec<FuzzFindingDocument>,
    pub conflict_histogram: BTreeMap<usize, usize>,
}

/// The uniform output envelope of every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub tool: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub exit_status: i32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub duplicate_edges_collapsed: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub instance: Option<InstanceDocument>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub colouring: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<MajorityReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<TraceDocument>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleDocument>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sublists: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub removed: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ledger: Option<LedgerDocument>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tower: Option<TowerDocument>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fuzz: Option<FuzzDocument>,
}

impl ResultDocument {
    pub fn new(command: &str) -> Self {
        ResultDocument {
            tool: format!("majority {}", env!("CARGO_PKG_VERSION")),
            command: command.to_owned(),
            seed: None,
            exit_status: 0,
            timestamp: None,
            duplicate_edges_collapsed: None,
            instance: None,
            colouring: None,
            report: None,
            trace: None,
            oracle: None,
            sublists: None,
            removed: None,
            ledger: None,
            tower: None,
            fuzz: None,
        }
    }

    pub fn to_json(&self) -> String {
        to_pretty_json(self)
    }
}

pub fn colouring_names(chi: &Colouring, table: &ColourTable) -> BTreeMap<String, String> {
    (1..=chi.order())
        .map(|i| {
            let c = chi.get(VertexId::new(i)).expect("within order");
            (i.to_string(), table.name(c).to_owned())
        })
        .collect()
}

pub fn lists_names(lists: &ListSystem, table: &ColourTable) -> BTreeMap<String, Vec<String>> {
    (1..=lists.order())
        .map(|i| {
            let v = VertexId::new(i);
            let names = lists
                .list(v)
                .iter()
                .map(|&c| table.name(c).to_owned())
                .collect();
            (i.to_string(), names)
        })
        .collect()
}

pub fn sublists_documents(
    sublists: &SublistAssignment,
    table: &ColourTable,
) -> (BTreeMap<String, Vec<String>>, BTreeMap<String, String>) {
    let lists = lists_names(&sublists.list_system(), table);
    let removed = (1..=sublists.order())
        .filter_map(|i| {
            let v = VertexId::new(i);
            sublists
                .removed(v)
                .map(|c| (i.to_string(), table.name(c).to_owned()))
        })
        .collect();
    (lists, removed)
}

pub fn tower_document(
    family: &str,
    mode: &str,
    outcome: &TowerOutcome,
    table: &ColourTable,
) -> TowerDocument {
    TowerDocument {
        family: family.to_owned(),
        mode: mode.to_owned(),
        params: outcome.params,
        prefix_conflicts: outcome.trace.conflict_totals.clone(),
        stabilized: StabilizedDocument::from_stabilized(&outcome.stabilized, table),
        certification: CertificationDocument::from_report(&outcome.certification, table),
    }
}

/// Builds the instance document for a fully in-memory instance (used by
/// `gen`, the fuzzer's reproducers, and the tower CLI).
pub fn document_from_parts(
    host: &PrefixGraph,
    system: &ConstraintSystem,
    k: usize,
    table: &ColourTable,
) -> InstanceDocument {
    let (order, edges, directed) = match host {
        PrefixGraph::Graph(g) => (
            g.order(),
            g.edges().iter().map(|(u, v)| (u.index(), v.index())).collect::<Vec<_>>(),
            false,
        ),
        PrefixGraph::Digraph(d) => (
            d.order(),
            d.arcs().iter().map(|(u, v)| (u.index(), v.index())).collect::<Vec<_>>(),
            true,
        ),
    };
    let lists = lists_names(system.lists(), table);
    let correspondence = match system {
        ConstraintSystem::List(_) => None,
        ConstraintSystem::Correspondence { pairs, .. } => Some(
            pairs
                .edges()
                .map(|(u, v)| {
                    let key = format!("{}-{}", u.index(), v.index());
                    let named = pairs
                        .pairs_for(u, v)
                        .into_iter()
                        .map(|(a, b)| (table.name(a).to_owned(), table.name(b).to_owned()))
                        .collect();
                    (key, named)
                })
                .collect(),
        ),
    };
    InstanceDocument {
        graph: GraphSpec {
            order: Some(order),
            edges: Some(edges),
            directed: Some(directed),
            family: None,
            seed: None,
            density: None,
        },
        lists: Some(lists),
        uniform_list: None,
        k,
        correspondence,
        families: Vec::new(),
        budget: None,
    }
}

// ---------------------------------------------------------------------
// edge-list text format
// ---------------------------------------------------------------------

/// Parses the plain text edge-list format: one `u v` pair per line, `#`
/// comments and blank lines ignored. An optional leading line holding a
/// single integer fixes the order; otherwise the largest endpoint is
/// used.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>), InstanceError> {
    let mut declared_order: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_endpoint = 0;
    let mut first_data_line = true;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let path = format!("line {}", lineno + 1);
        match fields.as_slice() {
            [one] if first_data_line => {
                declared_order = Some(
                    one.parse()
                        .map_err(|_| schema(&path, "expected an integer order"))?,
                );
            }
            [a, b] => {
                let u: usize = a
                    .parse()
                    .map_err(|_| schema(&path, "expected integer endpoints"))?;
                let v: usize = b
                    .parse()
                    .map_err(|_| schema(&path, "expected integer endpoints"))?;
                max_endpoint = max_endpoint.max(u).max(v);
                edges.push((u, v));
            }
            _ => {
                return Err(schema(
                    &path,
                    "expected `u v` (or a single leading order line)",
                ))
            }
        }
        first_data_line = false;
    }
    let order = declared_order.unwrap_or(max_endpoint);
    if order == 0 {
        return Err(schema("edge list", "no vertices found"));
    }
    Ok((order, edges))
}

pub fn emit_edge_list(order: usize, edges: &[(VertexId, VertexId)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("{order}\n"));
    for (u, v) in edges {
        out.push_str(&format!("{} {}\n", u.index(), v.index()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_instance_parses() {
        let text = r#"{
            "graph": {"order": 1, "edges": []},
            "lists": {"1": ["a", "b"]},
            "k": 2
        }"#;
        let instance = parse_instance(text).unwrap();
        assert_eq!(instance.order(), 1);
        assert_eq!(instance.k, 2);
        assert_eq!(instance.colours.len(), 2);
    }

    #[test]
    fn out_of_range_vertex_reports_path() {
        let text = r#"{
            "graph": {"order": 3, "edges": [[1,2]]},
            "lists": {"1": ["a"], "2": ["a"], "3": ["a"], "5": ["a"]},
            "k": 2
        }"#;
        let err = parse_instance(text).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("lists.5"), "got: {message}");
    }

    #[test]
    fn duplicated_pair_source_is_a_matching_violation() {
        let text = r#"{
            "graph": {"order": 2, "edges": [[1,2]]},
            "uniform_list": ["a", "b", "c"],
            "k": 2,
            "correspondence": {"1-2": [["a","b"],["a","c"]]}
        }"#;
        assert!(matches!(
            parse_instance(text).unwrap_err(),
            InstanceError::Matching(_)
        ));
    }

    #[test]
    fn uniform_list_expands_to_every_vertex() {
        let text = r#"{
            "graph": {"order": 3, "edges": [[1,2],[2,3]]},
            "uniform_list": ["x", "y"],
            "k": 2
        }"#;
        let instance = parse_instance(text).unwrap();
        assert_eq!(instance.system.lists().uniform_size(), Some(2));
    }

    #[test]
    fn generated_graph_instances_materialize() {
        let text = r#"{
            "graph": {"family": "star", "order": 5},
            "uniform_list": ["a", "b"],
            "k": 2
        }"#;
        let instance = parse_instance(text).unwrap();
        match &instance.host {
            PrefixGraph::Graph(g) => assert_eq!(g.degree(VertexId::new(1)), 4),
            PrefixGraph::Digraph(_) => panic!("star is undirected"),
        }
    }

    #[test]
    fn instance_document_round_trips() {
        let text = r#"{
            "graph": {"order": 4, "edges": [[1,2],[2,3],[3,4],[1,4]], "directed": false},
            "lists": {"1": ["a","b"], "2": ["a","b"], "3": ["a","b"], "4": ["a","b"]},
            "k": 2,
            "correspondence": {"1-4": [["a","b"],["b","a"]], "1-2": [["a","a"]]},
            "families": [{"label": "evens", "vertices": [2, 4]}],
            "budget": 12
        }"#;
        let instance = parse_instance(text).unwrap();
        let emitted = emit_instance(&instance.document);
        let reparsed = parse_instance(&emitted).unwrap();
        assert_eq!(instance.document, reparsed.document);
    }

    #[test]
    fn missing_list_rejected() {
        let text = r#"{
            "graph": {"order": 2, "edges": [[1,2]]},
            "lists": {"1": ["a"]},
            "k": 2
        }"#;
        let err = parse_instance(text).unwrap_err().to_string();
        assert!(err.contains("vertex 2"), "got: {err}");
    }

    #[test]
    fn correspondence_on_missing_edge_rejected() {
        let text = r#"{
            "graph": {"order": 3, "edges": [[1,2]]},
            "uniform_list": ["a", "b"],
            "k": 2,
            "correspondence": {"1-3": [["a","a"]]}
        }"#;
        let err = parse_instance(text).unwrap_err().to_string();
        assert!(err.contains("correspondence.1-3"), "got: {err}");
    }

    #[test]
    fn neighbourhood_families_materialise_from_graph() {
        let text = r#"{
            "graph": {"family": "star", "order": 6},
            "uniform_list": ["a", "b", "c"],
            "k": 2,
            "families": [{"neighbourhood_of": 1}]
        }"#;
        let instance = parse_instance(text).unwrap();
        assert_eq!(instance.families.len(), 1);
        assert_eq!(instance.families[0].len(), 5);
        assert_eq!(
            instance.families[0].origin,
            FamilyOrigin::Neighbourhood(VertexId::new(1))
        );
    }

    #[test]
    fn edge_list_parses_with_order_line_and_comments() {
        let text = "# a path\n5\n1 2\n2 3 # inline\n\n3 4\n";
        let (order, edges) = parse_edge_list(text).unwrap();
        assert_eq!(order, 5);
        assert_eq!(edges, vec![(1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn edge_list_infers_order_without_header() {
        // a single leading pair is data, not an order line
        let text = "1 2\n2 7\n";
        let (order, edges) = parse_edge_list(text).unwrap();
        assert_eq!(order, 7);
        assert_eq!(edges.len(), 2);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = FiniteGraph::new(4, &[(1, 2), (2, 3), (1, 4)]).unwrap();
        let text = emit_edge_list(g.order(), g.edges());
        let (order, edges) = parse_edge_list(&text).unwrap();
        assert_eq!(FiniteGraph::new(order, &edges).unwrap(), g);
    }

    #[test]
    fn colour_table_orders_names() {
        let table = ColourTable::from_names(["b".to_owned(), "a".to_owned(), "b".to_owned()]);
        assert_eq!(table.len(), 2);
        assert_eq!(table.name(ColourId::new(0)), "a");
        assert_eq!(table.id("b"), Some(ColourId::new(1)));
        assert_eq!(table.id("z"), None);
    }

    #[test]
    fn k_below_two_rejected() {
        let text = r#"{
            "graph": {"order": 1, "edges": []},
            "uniform_list": ["a", "b"],
            "k": 1
        }"#;
        assert!(parse_instance(text).is_err());
    }
}
