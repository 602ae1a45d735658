//! Prefix towers over lazily materialised countable graphs.
//!
//! A countable graph enters as a presentation: a pure function giving each
//! vertex its neighbours of lower index, plus declared metadata naming the
//! vertices of infinite degree (infinitude of a lazily presented
//! neighbourhood is not decidable, so it is declared, never detected). The
//! tower solves every prefix `G_1..G_{n_max}` from restricted sublists,
//! stabilises a colouring of `v1..vt` by repeated majority vote over the
//! prefix colourings, and certifies the result: enclosed finite-degree
//! vertices are audited directly, declared infinite-degree vertices are
//! audited against the witness ledger planted by the restriction pass.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::{ColourId, Colouring, ConstraintSystem};
use crate::graph::{FiniteDigraph, FiniteGraph, GraphError, VertexId};
use crate::restriction::{
    build_correspondence_families, restrict_lists, restrict_pairs, FamilyOrigin, RestrictionError,
    SublistAssignment, WitnessFamily, WitnessLedger,
};
use crate::solver::{dag_greedy, local_search, SolverError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TowerError {
    #[error("unknown builtin family {0:?}")]
    UnknownFamily(String),
    #[error("arc density must be a probability in [0, 1], got {0}")]
    InvalidDensity(f64),
    #[error("prefix length must be at least 1")]
    EmptyPrefix,
    #[error("cyclic directed presentations are not supported")]
    CyclicPresentation,
    #[error("cannot stabilise to length {t}: the tower only reaches n_max = {n_max}")]
    StabiliseBeyondTrace { t: usize, n_max: usize },
    #[error("survivor floor must be at least 1")]
    InvalidSurvivorFloor,
    #[error("stabilise length must be at least 1")]
    InvalidStabiliseLength,
    #[error("horizon {horizon} is below the tower height n_max = {n_max}")]
    HorizonBelowTrace { horizon: usize, n_max: usize },
    #[error("constraint system covers {have} vertices but {needed} are required")]
    SystemTooSmall { needed: usize, have: usize },
    #[error("base lists must have a uniform size of at least 3 to restrict and then solve, found {0:?}")]
    BaseListsNotRestrictable(Option<usize>),
    #[error("ledger has no witness family for declared infinite-degree vertex {0}; run the restriction step with that family")]
    LedgerMissingFamily(VertexId),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Restriction(#[from] RestrictionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Builtin generator behind a presentation.
#[derive(Debug, Clone, PartialEq)]
enum FamilyKind {
    Ray,
    TwoWayPath,
    Grid,
    BinaryTree,
    Star,
    Complete,
    Rado,
    DirectedRay,
    RandomDag { seed: u64, density: f64 },
}

/// Extra knobs for [`CountablePresentation::builtin`]; only `random_dag`
/// reads them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub seed: u64,
    pub density: f64,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams {
            seed: 0,
            density: 0.25,
        }
    }
}

/// A finitely presented countable graph: vertices `v1, v2, ...` with the
/// neighbours of lower index computable per vertex, plus declared
/// infinite-degree metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CountablePresentation {
    kind: FamilyKind,
}

pub const BUILTIN_FAMILY_NAMES: &[&str] = &[
    "ray",
    "two_way_path",
    "grid",
    "binary_tree",
    "star",
    "complete",
    "rado",
    "directed_ray",
    "random_dag",
];

impl CountablePresentation {
    /// Looks up a builtin family by name.
    pub fn builtin(name: &str, params: FamilyParams) -> Result<Self, TowerError> {
        let kind = match name {
            "ray" => FamilyKind::Ray,
            "two_way_path" => FamilyKind::TwoWayPath,
            "grid" => FamilyKind::Grid,
            "binary_tree" => FamilyKind::BinaryTree,
            "star" => FamilyKind::Star,
            "complete" => FamilyKind::Complete,
            "rado" => FamilyKind::Rado,
            "directed_ray" => FamilyKind::DirectedRay,
            "random_dag" => {
                if !(params.density >= 0.0 && params.density <= 1.0) {
                    return Err(TowerError::InvalidDensity(params.density));
                }
                FamilyKind::RandomDag {
                    seed: params.seed,
                    density: params.density,
                }
            }
            other => return Err(TowerError::UnknownFamily(other.to_owned())),
        };
        Ok(CountablePresentation { kind })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Ray => "ray",
            FamilyKind::TwoWayPath => "two_way_path",
            FamilyKind::Grid => "grid",
            FamilyKind::BinaryTree => "binary_tree",
            FamilyKind::Star => "star",
            FamilyKind::Complete => "complete",
            FamilyKind::Rado => "rado",
            FamilyKind::DirectedRay => "directed_ray",
            FamilyKind::RandomDag { .. } => "random_dag",
        }
    }

    pub fn directed(&self) -> bool {
        matches!(
            self.kind,
            FamilyKind::DirectedRay | FamilyKind::RandomDag { .. }
        )
    }

    /// Whether a directed presentation is acyclic. Both builtin directed
    /// families orient every arc from higher to lower index.
    pub fn acyclic(&self) -> bool {
        self.directed()
    }

    /// Neighbours of `v_n` with index below `n`; for directed
    /// presentations these are the out-neighbours (every builtin arc runs
    /// from higher to lower index).
    pub fn lower_neighbourhood(&self, n: usize) -> Vec<usize> {
        assert!(n >= 1, "vertex indices are 1-based");
        match &self.kind {
            FamilyKind::Ray | FamilyKind::DirectedRay => {
                if n >= 2 {
                    vec![n - 1]
                } else {
                    vec![]
                }
            }
            FamilyKind::TwoWayPath => {
                let z = two_way_integer(n);
                [z - 1, z + 1]
                    .into_iter()
                    .map(two_way_index)
                    .filter(|&m| m < n)
                    .collect()
            }
            FamilyKind::Grid => {
                let (x, y) = grid_cell(n);
                let mut lower = Vec::with_capacity(2);
                if x > 0 {
                    lower.push(grid_index(x - 1, y));
                }
                if y > 0 {
                    lower.push(grid_index(x, y - 1));
                }
                lower.sort_unstable();
                lower
            }
            FamilyKind::BinaryTree => {
                if n >= 2 {
                    vec![n / 2]
                } else {
                    vec![]
                }
            }
            FamilyKind::Star => {
                if n >= 2 {
                    vec![1]
                } else {
                    vec![]
                }
            }
            FamilyKind::Complete => (1..n).collect(),
            FamilyKind::Rado => (1..n).filter(|&m| rado_adjacent(m, n)).collect(),
            FamilyKind::RandomDag { seed, density } => {
                let mut rng = arc_rng(*seed, n);
                (1..n).filter(|_| rng.gen_bool(*density)).collect()
            }
        }
    }

    /// Arcs into `v_n` from lower indices. Empty for every builtin:
    /// directed builtins orient all arcs from higher to lower index.
    pub fn lower_in_neighbourhood(&self, _n: usize) -> Vec<usize> {
        Vec::new()
    }

    /// Declared infinite-degree metadata (trusted, not detected).
    pub fn declares_infinite_degree(&self, v: usize) -> bool {
        match self.kind {
            FamilyKind::Star => v == 1,
            FamilyKind::Complete | FamilyKind::Rado => true,
            _ => false,
        }
    }

    pub fn infinite_degree_vertices(&self, upto: usize) -> Vec<VertexId> {
        (1..=upto)
            .filter(|&v| self.declares_infinite_degree(v))
            .map(VertexId::new)
            .collect()
    }

    /// Audited neighbours of `u` materialised within `v1..v{prefix}`:
    /// the full neighbourhood for undirected presentations, the
    /// out-neighbourhood for directed ones. Ascending.
    pub fn neighbours_within(&self, u: usize, prefix: usize) -> Vec<usize> {
        let mut result: Vec<usize> = self
            .lower_neighbourhood(u)
            .into_iter()
            .filter(|&m| m <= prefix)
            .collect();
        if self.directed() {
            // arcs u -> n with n > u would be recorded at n as in-arcs
            for n in (u + 1)..=prefix {
                if self.lower_in_neighbourhood(n).contains(&u) {
                    result.push(n);
                }
            }
        } else {
            for n in (u + 1)..=prefix {
                if self.lower_neighbourhood(n).contains(&u) {
                    result.push(n);
                }
            }
        }
        result
    }

    /// The finite structure induced by `v1..vn`.
    pub fn materialize_prefix(&self, n: usize) -> Result<PrefixGraph, TowerError> {
        if n == 0 {
            return Err(TowerError::EmptyPrefix);
        }
        let mut edges = Vec::new();
        for high in 1..=n {
            for low in self.lower_neighbourhood(high) {
                edges.push((high, low));
            }
            for low in self.lower_in_neighbourhood(high) {
                edges.push((low, high));
            }
        }
        if self.directed() {
            Ok(PrefixGraph::Digraph(FiniteDigraph::new(n, &edges)?))
        } else {
            Ok(PrefixGraph::Graph(FiniteGraph::new(n, &edges)?))
        }
    }

    pub fn materialize_graph(&self, n: usize) -> Result<FiniteGraph, TowerError> {
        match self.materialize_prefix(n)? {
            PrefixGraph::Graph(g) => Ok(g),
            PrefixGraph::Digraph(_) => Err(TowerError::CyclicPresentation),
        }
    }

    pub fn materialize_digraph(&self, n: usize) -> Result<FiniteDigraph, TowerError> {
        match self.materialize_prefix(n)? {
            PrefixGraph::Digraph(d) => Ok(d),
            PrefixGraph::Graph(_) => Err(TowerError::CyclicPresentation),
        }
    }
}

/// A materialised prefix: undirected or directed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixGraph {
    Graph(FiniteGraph),
    Digraph(FiniteDigraph),
}

impl PrefixGraph {
    pub fn order(&self) -> usize {
        match self {
            PrefixGraph::Graph(g) => g.order(),
            PrefixGraph::Digraph(d) => d.order(),
        }
    }

    pub fn audited_neighbours(&self, v: VertexId) -> &[VertexId] {
        match self {
            PrefixGraph::Graph(g) => g.neighbours(v),
            PrefixGraph::Digraph(d) => d.out_neighbours(v),
        }
    }
}

fn two_way_integer(n: usize) -> i64 {
    if n == 1 {
        0
    } else if n.is_multiple_of(2) {
        (n / 2) as i64
    } else {
        -(((n - 1) / 2) as i64)
    }
}

fn two_way_index(z: i64) -> usize {
    if z == 0 {
        1
    } else if z > 0 {
        2 * z as usize
    } else {
        1 + 2 * (-z) as usize
    }
}

fn triangular(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Anti-diagonal enumeration of the quarter-plane grid.
fn grid_cell(n: usize) -> (usize, usize) {
    let mut d = 0;
    while triangular(d + 1) < n {
        d += 1;
    }
    let x = n - 1 - triangular(d);
    (x, d - x)
}

fn grid_index(x: usize, y: usize) -> usize {
    triangular(x + y) + x + 1
}

/// The BIT-predicate convention for the Rado graph: `v_m ~ v_n` (m < n)
/// when bit `m-1` of `n-1` is set.
fn rado_adjacent(m: usize, n: usize) -> bool {
    debug_assert!(m < n);
    let bit = m - 1;
    bit < usize::BITS as usize && (n - 1) >> bit & 1 == 1
}

/// Per-vertex arc generator for `random_dag`, a pure function of
/// (seed, vertex) so prefixes are consistent and thread-safe.
fn arc_rng(seed: u64, n: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// The tower of prefix colourings `chi_1 .. chi_{n_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerTrace {
    pub k: usize,
    pub n_max: usize,
    /// The restricted constraint system on `v1..v{n_max}`.
    pub system: ConstraintSystem,
    /// `colourings[n-1]` colours `v1..vn`.
    pub colourings: Vec<Colouring>,
    /// Audited conflicts (bad edges, or bad arcs for digraphs) per prefix.
    pub conflict_totals: Vec<usize>,
}

/// Solves every prefix of the presentation from the given (already
/// restricted) constraint system: conflict-descent local search on
/// undirected prefixes, reverse-topological greedy on acyclic directed
/// ones. Cyclic directed presentations are rejected.
pub fn prefix_colourings(
    presentation: &CountablePresentation,
    system: &ConstraintSystem,
    k: usize,
    n_max: usize,
) -> Result<TowerTrace, TowerError> {
    if n_max == 0 {
        return Err(TowerError::EmptyPrefix);
    }
    if system.lists().order() < n_max {
        return Err(TowerError::SystemTooSmall {
            needed: n_max,
            have: system.lists().order(),
        });
    }
    if presentation.directed() && !presentation.acyclic() {
        return Err(TowerError::CyclicPresentation);
    }

    let mut colourings = Vec::with_capacity(n_max);
    let mut conflict_totals = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let prefix_system = system.prefix(n);
        match presentation.materialize_prefix(n)? {
            PrefixGraph::Graph(graph) => {
                let (chi, trace) = local_search(&graph, &prefix_system, k)?;
                colourings.push(chi);
                conflict_totals.push(trace.final_conflicts);
            }
            PrefixGraph::Digraph(digraph) => {
                let chi = dag_greedy(&digraph, &prefix_system, k)?;
                let bad_arcs = digraph
                    .arcs()
                    .iter()
                    .filter(|&&(u, w)| {
                        let cu = chi.get(u).expect("chi covers the prefix");
                        let cw = chi.get(w).expect("chi covers the prefix");
                        prefix_system.edge_conflicts(u, cu, w, cw)
                    })
                    .count();
                colourings.push(chi);
                conflict_totals.push(bad_arcs);
            }
        }
    }
    Ok(TowerTrace {
        k,
        n_max,
        system: system.prefix(n_max),
        colourings,
        conflict_totals,
    })
}

/// A colouring of `v1..v{len}` voted level by level from the tower, with
/// the surviving prefix indices at every level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizedColouring {
    pub requested_len: usize,
    /// Achieved length; shorter than requested when the survivor floor
    /// stopped the descent.
    pub len: usize,
    pub colours: Vec<ColourId>,
    /// `survivor_sets[j]` is `S_j`: the prefix indices whose colouring
    /// agrees with the first `j` stabilised colours. `S_0` is everything
    /// from `t` to `n_max`.
    pub survivor_sets: Vec<Vec<usize>>,
    pub survivor_floor: usize,
    pub truncated: bool,
}

impl StabilizedColouring {
    pub fn colouring(&self) -> Colouring {
        Colouring::new(self.colours.clone())
    }

    pub fn final_survivors(&self) -> &[usize] {
        self.survivor_sets.last().expect("S_0 always present")
    }
}

/// Finite surrogate for the infinite pigeonhole: starting from the
/// colourings `chi_t .. chi_{n_max}`, level `j` fixes `chi(v_j)` to the
/// colour most frequent among the surviving colourings (ties: lowest
/// colour id) and drops the others. Stops early, marking truncation,
/// whenever the next survivor set would fall below `survivor_floor` —
/// each stabilised colour is therefore backed by at least
/// `survivor_floor` prefix colourings.
pub fn stabilize(
    trace: &TowerTrace,
    t: usize,
    survivor_floor: usize,
) -> Result<StabilizedColouring, TowerError> {
    if t == 0 {
        return Err(TowerError::InvalidStabiliseLength);
    }
    if t > trace.n_max {
        return Err(TowerError::StabiliseBeyondTrace {
            t,
            n_max: trace.n_max,
        });
    }
    if survivor_floor == 0 {
        return Err(TowerError::InvalidSurvivorFloor);
    }

    let mut survivor_sets = vec![(t..=trace.n_max).collect::<Vec<usize>>()];
    let mut colours = Vec::new();
    let mut truncated = false;
    for level in 1..=t {
        let vertex = VertexId::new(level);
        let current = survivor_sets.last().expect("nonempty");
        // vote: most frequent colour, ties to the lowest id
        let mut counts: std::collections::BTreeMap<ColourId, usize> = Default::default();
        for &n in current {
            let c = trace.colourings[n - 1]
                .get(vertex)
                .expect("chi_n colours v1..vn");
            *counts.entry(c).or_default() += 1;
        }
        let (&winner, _) = counts
            .iter()
            .max_by(|(ca, na), (cb, nb)| na.cmp(nb).then(cb.cmp(ca)))
            .expect("at least one survivor");
        let next: Vec<usize> = current
            .iter()
            .copied()
            .filter(|&n| trace.colourings[n - 1].get(vertex) == Some(winner))
            .collect();
        if next.len() < survivor_floor {
            truncated = true;
            break;
        }
        colours.push(winner);
        survivor_sets.push(next);
    }

    Ok(StabilizedColouring {
        requested_len: t,
        len: colours.len(),
        colours,
        survivor_sets,
        survivor_floor,
        truncated,
    })
}

/// Audit row for a stabilised vertex whose whole audited neighbourhood is
/// enclosed in the stabilised prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnclosedAudit {
    pub vertex: VertexId,
    pub degree: usize,
    pub conflicts: usize,
    pub pass: bool,
}

/// Audit row for a declared infinite-degree vertex: how many materialised
/// neighbours are guaranteed non-conflicting by their sublists, against
/// what the ledger promised.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessAudit {
    pub vertex: VertexId,
    pub colour: ColourId,
    /// Neighbours within the horizon whose sublist cannot conflict with
    /// `colour` at this vertex.
    pub materialized: usize,
    pub processed: usize,
    pub shortfalls: usize,
    pub skipped: usize,
    pub ledger_witnesses: usize,
    /// Every ledger witness is provably coloured differently (its sublist
    /// misses the relevant colour), and the extension colouring confirms
    /// it where it reaches.
    pub witnesses_differ: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub k: usize,
    pub horizon: usize,
    pub stabilized_len: usize,
    /// The surviving prefix index whose colouring extends the stabilised
    /// one for the audit.
    pub extension_index: usize,
    pub enclosed: Vec<EnclosedAudit>,
    pub unbounded: Vec<WitnessAudit>,
    pub pass: bool,
}

/// Two-part audit of a stabilised colouring over `G_{horizon}` at the
/// `1/k` threshold.
///
/// Finite-degree vertices of the stabilised prefix whose audited
/// neighbourhood lies entirely within the prefix are checked directly
/// against the `1/k` threshold (their conflict counts coincide with those
/// of the surviving extension colouring, which solved a majority
/// instance). Declared infinite-degree vertices are checked against the
/// ledger: the number of materialised neighbours whose sublist misses the
/// stabilised colour must cover the ledger's processed schedule minus its
/// recorded shortfalls, and every recorded witness must be incapable of
/// conflicting. Refuses to certify when the ledger carries no family for
/// a declared infinite-degree vertex.
pub fn certify(
    presentation: &CountablePresentation,
    stabilized: &StabilizedColouring,
    trace: &TowerTrace,
    horizon_system: &ConstraintSystem,
    ledger: &WitnessLedger,
    k: usize,
    horizon: usize,
) -> Result<CertificationReport, TowerError> {
    if horizon < trace.n_max {
        return Err(TowerError::HorizonBelowTrace {
            horizon,
            n_max: trace.n_max,
        });
    }
    if horizon_system.lists().order() < horizon {
        return Err(TowerError::SystemTooSmall {
            needed: horizon,
            have: horizon_system.lists().order(),
        });
    }

    let t = stabilized.len;
    let chi = stabilized.colouring();
    let extension_index = stabilized
        .final_survivors()
        .iter()
        .copied()
        .min()
        .expect("survivor sets are nonempty");
    let extension = &trace.colourings[extension_index - 1];
    let host = presentation.materialize_prefix(horizon)?;
    let lists = horizon_system.lists();

    let mut enclosed = Vec::new();
    let mut unbounded = Vec::new();
    let mut pass = true;

    for i in 1..=t {
        let v = VertexId::new(i);
        let neighbours = host.audited_neighbours(v);
        if presentation.declares_infinite_degree(i) {
            if !ledger.has_family_for_vertex(v) {
                return Err(TowerError::LedgerMissingFamily(v));
            }
            let colour = chi.get(v).expect("stabilised prefix covers v");
            let entry = match horizon_system {
                ConstraintSystem::List(_) => {
                    ledger.entry(&FamilyOrigin::Neighbourhood(v), Some(colour))
                }
                ConstraintSystem::Correspondence { .. } => {
                    ledger.entry(&FamilyOrigin::MatchedPairs(v, colour), None)
                }
            };
            let (processed, shortfalls, skipped, witnesses) = match entry {
                Some(e) => (e.processed, e.shortfalls, e.skipped, e.witnesses.clone()),
                None => (0, 0, 0, Vec::new()),
            };

            // a neighbour counts when its sublist makes a conflict with
            // `colour` at v impossible
            let materialized = neighbours
                .iter()
                .filter(|&&u| match horizon_system {
                    ConstraintSystem::List(_) => !lists.contains(u, colour),
                    ConstraintSystem::Correspondence { pairs, .. } => pairs
                        .matched_partner(v, colour, u)
                        .is_some_and(|partner| !lists.contains(u, partner)),
                })
                .count();

            let witnesses_differ = witnesses.iter().all(|&w| {
                let provable = match horizon_system {
                    ConstraintSystem::List(_) => !lists.contains(w, colour),
                    ConstraintSystem::Correspondence { pairs, .. } => pairs
                        .matched_partner(v, colour, w)
                        .is_none_or(|partner| !lists.contains(w, partner)),
                };
                let confirmed = match extension.get(w) {
                    Some(cw) => !horizon_system.edge_conflicts(v, colour, w, cw),
                    None => true, // beyond the extension; the sublist argument stands alone
                };
                provable && confirmed
            });

            let row_pass = materialized >= processed.saturating_sub(shortfalls) && witnesses_differ;
            pass &= row_pass;
            unbounded.push(WitnessAudit {
                vertex: v,
                colour,
                materialized,
                processed,
                shortfalls,
                skipped,
                ledger_witnesses: witnesses.len(),
                witnesses_differ,
                pass: row_pass,
            });
        } else if neighbours.iter().all(|u| u.index() <= t) {
            let cv = chi.get(v).expect("stabilised prefix covers v");
            let conflicts = neighbours
                .iter()
                .filter(|&&u| {
                    let cu = chi.get(u).expect("enclosed neighbours are stabilised");
                    horizon_system.edge_conflicts(v, cv, u, cu)
                })
                .count();
            let degree = neighbours.len();
            let row_pass = conflicts * k <= degree;
            pass &= row_pass;
            enclosed.push(EnclosedAudit {
                vertex: v,
                degree,
                conflicts,
                pass: row_pass,
            });
        }
    }

    Ok(CertificationReport {
        k,
        horizon,
        stabilized_len: t,
        extension_index,
        enclosed,
        unbounded,
        pass,
    })
}

/// Parameters of a full tower run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerParams {
    pub k: usize,
    pub n_max: usize,
    pub t: usize,
    pub survivor_floor: usize,
    pub horizon: usize,
    pub budget: usize,
}

/// Everything a tower run produces.
#[derive(Debug, Clone)]
pub struct TowerOutcome {
    pub params: TowerParams,
    pub families: Vec<WitnessFamily>,
    pub sublists: SublistAssignment,
    pub ledger: WitnessLedger,
    pub trace: TowerTrace,
    pub stabilized: StabilizedColouring,
    pub certification: CertificationReport,
}

/// The whole pipeline: build witness families from the declared
/// infinite-degree vertices, restrict the uniform `L`-lists to
/// `(L-1)`-lists, solve every prefix from them, stabilise, certify at
/// the `1/k` threshold.
///
/// `base_system` carries the unrestricted lists on `v1..v{horizon}`,
/// plus the bad pairs in correspondence mode. The canonical pairing is
/// `L = k + 1`; larger bases are legitimate experiments (the guarantee
/// only strengthens), smaller ones may honestly fail certification.
pub fn run_tower(
    presentation: &CountablePresentation,
    base_system: &ConstraintSystem,
    params: &TowerParams,
) -> Result<TowerOutcome, TowerError> {
    let TowerParams {
        k,
        n_max,
        horizon,
        t,
        survivor_floor,
        budget,
    } = *params;
    if horizon < n_max {
        return Err(TowerError::HorizonBelowTrace { horizon, n_max });
    }
    let base_lists = base_system.lists();
    if base_lists.order() < horizon {
        return Err(TowerError::SystemTooSmall {
            needed: horizon,
            have: base_lists.order(),
        });
    }
    // the prefixes are solved from (L-1)-sublists, so L >= 3 is needed
    // for the solvers' k >= 2
    let solve_size = match base_lists.uniform_size() {
        Some(size) if size >= 3 => size - 1,
        other => return Err(TowerError::BaseListsNotRestrictable(other)),
    };

    let (families, sublists, ledger) = match base_system {
        ConstraintSystem::List(lists) => {
            let families: Vec<WitnessFamily> = presentation
                .infinite_degree_vertices(horizon)
                .into_iter()
                .map(|u| {
                    let members = presentation
                        .neighbours_within(u.index(), horizon)
                        .into_iter()
                        .map(VertexId::new)
                        .collect();
                    WitnessFamily::colour_form(FamilyOrigin::Neighbourhood(u), members)
                        .expect("neighbour streams ascend")
                })
                .collect();
            let (sublists, ledger) = restrict_lists(horizon, lists, &families, budget)?;
            (families, sublists, ledger)
        }
        ConstraintSystem::Correspondence { lists, pairs } => {
            let families = build_correspondence_families(presentation, horizon, lists, pairs);
            let (sublists, ledger) = restrict_pairs(horizon, lists, &families, budget)?;
            (families, sublists, ledger)
        }
    };

    let horizon_system = match base_system {
        ConstraintSystem::List(_) => ConstraintSystem::List(sublists.list_system()),
        ConstraintSystem::Correspondence { pairs, .. } => ConstraintSystem::Correspondence {
            lists: sublists.list_system(),
            pairs: pairs.clone(),
        },
    };

    let trace = prefix_colourings(presentation, &horizon_system, solve_size, n_max)?;
    let stabilized = stabilize(&trace, t, survivor_floor)?;
    let certification = certify(
        presentation,
        &stabilized,
        &trace,
        &horizon_system,
        &ledger,
        k,
        horizon,
    )?;

    Ok(TowerOutcome {
        params: *params,
        families,
        sublists,
        ledger,
        trace,
        stabilized,
        certification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{verify_majority, ListSystem};

    fn c(i: usize) -> ColourId {
        ColourId::new(i)
    }
    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    fn presentation(name: &str) -> CountablePresentation {
        CountablePresentation::builtin(name, FamilyParams::default()).unwrap()
    }

    #[test]
    fn ray_prefix_is_a_path() {
        let p = presentation("ray");
        let g = p.materialize_graph(3).unwrap();
        assert_eq!(g.edges(), &[(v(1), v(2)), (v(2), v(3))]);
    }

    #[test]
    fn star_prefix_is_a_star() {
        let p = presentation("star");
        let g = p.materialize_graph(4).unwrap();
        assert_eq!(g.degree(v(1)), 3);
        for i in 2..=4 {
            assert_eq!(g.degree(v(i)), 1);
        }
    }

    #[test]
    fn rado_small_prefix_follows_bit_predicate() {
        let p = presentation("rado");
        // v2 <-> natural 1 (bit 0 set): adjacent to v1
        // v3 <-> natural 2 (bit 1 set): adjacent to v2 only
        let g = p.materialize_graph(3).unwrap();
        assert_eq!(g.edges(), &[(v(1), v(2)), (v(2), v(3))]);
        // v4 <-> natural 3 = 0b11: adjacent to v1 and v2
        let g4 = p.materialize_graph(4).unwrap();
        assert!(g4.contains_edge(v(4), v(1)));
        assert!(g4.contains_edge(v(4), v(2)));
        assert!(!g4.contains_edge(v(4), v(3)));
    }

    #[test]
    fn declared_infinite_degree_metadata() {
        assert_eq!(presentation("star").infinite_degree_vertices(5), vec![v(1)]);
        assert!(presentation("ray").infinite_degree_vertices(5).is_empty());
        assert_eq!(presentation("complete").infinite_degree_vertices(3).len(), 3);
    }

    #[test]
    fn unknown_family_rejected() {
        assert!(matches!(
            CountablePresentation::builtin("moebius", FamilyParams::default()),
            Err(TowerError::UnknownFamily(_))
        ));
    }

    #[test]
    fn bad_density_rejected() {
        let params = FamilyParams { seed: 0, density: 1.5 };
        assert!(matches!(
            CountablePresentation::builtin("random_dag", params),
            Err(TowerError::InvalidDensity(_))
        ));
    }

    #[test]
    fn prefix_consistency_across_builtins() {
        for name in ["ray", "two_way_path", "grid", "binary_tree", "star", "complete", "rado"] {
            let p = presentation(name);
            let big = p.materialize_graph(24).unwrap();
            for m in [1, 2, 7, 12, 24] {
                let direct = p.materialize_graph(m).unwrap();
                assert_eq!(direct, big.induced_prefix(m).unwrap(), "{name} at {m}");
            }
        }
    }

    #[test]
    fn directed_prefix_consistency() {
        for (name, seed) in [("directed_ray", 0), ("random_dag", 7)] {
            let p = CountablePresentation::builtin(
                name,
                FamilyParams { seed, density: 0.4 },
            )
            .unwrap();
            let big = p.materialize_digraph(20).unwrap();
            for m in [1, 5, 13, 20] {
                let direct = p.materialize_digraph(m).unwrap();
                assert_eq!(direct, big.induced_prefix(m).unwrap(), "{name} at {m}");
            }
        }
    }

    #[test]
    fn grid_degrees_bounded_by_four() {
        let g = presentation("grid").materialize_graph(60).unwrap();
        for u in g.vertices() {
            assert!(g.degree(u) <= 4);
        }
    }

    #[test]
    fn two_way_path_degrees_bounded_by_two() {
        let g = presentation("two_way_path").materialize_graph(40).unwrap();
        for u in g.vertices() {
            assert!(g.degree(u) <= 2);
        }
        // a path on 40 vertices has 39 edges
        assert_eq!(g.edge_count(), 39);
    }

    #[test]
    fn random_dag_arcs_descend() {
        let p = CountablePresentation::builtin(
            "random_dag",
            FamilyParams { seed: 3, density: 0.5 },
        )
        .unwrap();
        let d = p.materialize_digraph(30).unwrap();
        for &(u, w) in d.arcs() {
            assert!(w < u);
        }
        assert!(d.reverse_topological_order().is_ok());
    }

    #[test]
    fn neighbours_within_matches_materialisation() {
        for name in ["star", "grid", "rado", "complete"] {
            let p = presentation(name);
            let g = p.materialize_graph(32).unwrap();
            for u in [1usize, 2, 9, 17] {
                let expected: Vec<usize> = g
                    .neighbours(v(u))
                    .iter()
                    .map(|w| w.index())
                    .collect();
                assert_eq!(p.neighbours_within(u, 32), expected, "{name} N(v{u})");
            }
        }
    }

    fn uniform_system(order: usize, colours: &[usize]) -> ConstraintSystem {
        ConstraintSystem::List(
            ListSystem::uniform(order, colours.iter().map(|&i| c(i)).collect()).unwrap(),
        )
    }

    #[test]
    fn every_prefix_colouring_is_majority() {
        let p = presentation("ray");
        let system = uniform_system(12, &[0, 1]);
        let trace = prefix_colourings(&p, &system, 2, 12).unwrap();
        for n in 1..=12 {
            let g = p.materialize_graph(n).unwrap();
            let report =
                verify_majority(&g, &trace.colourings[n - 1], &system.prefix(n), 2).unwrap();
            assert!(report.overall_pass, "prefix {n}");
        }
    }

    #[test]
    fn single_vertex_tower() {
        let p = presentation("star");
        let system = uniform_system(1, &[0, 1]);
        let trace = prefix_colourings(&p, &system, 2, 1).unwrap();
        assert_eq!(trace.colourings.len(), 1);
        assert_eq!(trace.colourings[0].get(v(1)), Some(c(0)));
    }

    #[test]
    fn star_centre_conflicts_stay_under_half() {
        let p = presentation("star");
        let system = uniform_system(9, &[0, 1]);
        let trace = prefix_colourings(&p, &system, 2, 9).unwrap();
        for n in 2..=9 {
            let g = p.materialize_graph(n).unwrap();
            let report =
                verify_majority(&g, &trace.colourings[n - 1], &system.prefix(n), 2).unwrap();
            let centre = &report.vertices[0];
            assert!(centre.conflicts * 2 <= centre.degree, "prefix {n}");
        }
    }

    #[test]
    fn stabilize_full_agreement_keeps_all_survivors() {
        let p = presentation("ray");
        let system = uniform_system(10, &[0, 1]);
        let trace = prefix_colourings(&p, &system, 2, 10).unwrap();
        let stabilized = stabilize(&trace, 4, 1).unwrap();
        assert_eq!(stabilized.len, 4);
        assert!(!stabilized.truncated);
        // the ray's prefix colourings all agree: no survivor is ever lost
        assert_eq!(stabilized.final_survivors().len(), 7);
        assert_eq!(
            stabilized.colours,
            trace.colourings[9].prefix(4).colours().to_vec()
        );
    }

    #[test]
    fn stabilize_votes_majority_class_on_synthetic_split() {
        // build a synthetic trace: chi_n alternate between two colourings
        // of v1..v2, with the even class one heavier
        let lists = ListSystem::uniform(6, vec![c(0), c(1)]).unwrap();
        let system = ConstraintSystem::List(lists);
        let mut colourings = Vec::new();
        for n in 1..=6usize {
            let colour = if n % 2 == 0 { c(0) } else { c(1) };
            colourings.push(Colouring::new(vec![colour; n]));
        }
        let trace = TowerTrace {
            k: 2,
            n_max: 6,
            system,
            colourings,
            conflict_totals: vec![0; 6],
        };
        let stabilized = stabilize(&trace, 2, 1).unwrap();
        // S_0 = {2,3,4,5,6}: three even (c0) vs two odd (c1)
        assert_eq!(stabilized.colours, vec![c(0), c(0)]);
        assert_eq!(stabilized.survivor_sets[1], vec![2, 4, 6]);
        // survivors halve once, then stay
        assert_eq!(stabilized.survivor_sets[2], vec![2, 4, 6]);
    }

    #[test]
    fn stabilize_truncates_at_unattainable_floor() {
        let lists = ListSystem::uniform(4, vec![c(0), c(1)]).unwrap();
        let system = ConstraintSystem::List(lists);
        let mut colourings = Vec::new();
        for n in 1..=4usize {
            let colour = if n % 2 == 0 { c(0) } else { c(1) };
            colourings.push(Colouring::new(vec![colour; n]));
        }
        let trace = TowerTrace {
            k: 2,
            n_max: 4,
            system,
            colourings,
            conflict_totals: vec![0; 4],
        };
        // S_0 = {1,2,3,4}; any vote keeps at most 2 < floor 4
        let stabilized = stabilize(&trace, 2, 4).unwrap();
        assert_eq!(stabilized.len, 0);
        assert!(stabilized.truncated);
    }

    #[test]
    fn stabilize_range_checks() {
        let lists = ListSystem::uniform(2, vec![c(0), c(1)]).unwrap();
        let trace = TowerTrace {
            k: 2,
            n_max: 2,
            system: ConstraintSystem::List(lists),
            colourings: vec![
                Colouring::new(vec![c(0)]),
                Colouring::new(vec![c(0), c(0)]),
            ],
            conflict_totals: vec![0, 0],
        };
        assert!(matches!(
            stabilize(&trace, 3, 1),
            Err(TowerError::StabiliseBeyondTrace { .. })
        ));
        assert!(matches!(
            stabilize(&trace, 1, 0),
            Err(TowerError::InvalidSurvivorFloor)
        ));
        assert!(matches!(
            stabilize(&trace, 0, 1),
            Err(TowerError::InvalidStabiliseLength)
        ));
    }

    fn full_list_run(name: &str, k: usize, params: TowerParams) -> TowerOutcome {
        let p = presentation(name);
        let palette: Vec<ColourId> = (0..=k).map(c).collect();
        let base = ConstraintSystem::List(
            ListSystem::uniform(params.horizon, palette).unwrap(),
        );
        run_tower(&p, &base, &params).unwrap()
    }

    #[test]
    fn ray_tower_certifies_enclosed_vertices() {
        let outcome = full_list_run(
            "ray",
            2,
            TowerParams {
                k: 2,
                n_max: 48,
                t: 16,
                survivor_floor: 4,
                horizon: 48,
                budget: 50,
            },
        );
        assert!(outcome.stabilized.len >= 1);
        let report = &outcome.certification;
        assert!(report.pass);
        assert!(!report.enclosed.is_empty());
        assert!(report.enclosed.iter().all(|a| a.pass));
        assert!(report.unbounded.is_empty());
        // on the ray, v1..v_{t-1} are enclosed, v_t waits on v_{t+1}
        assert_eq!(report.enclosed.len(), outcome.stabilized.len - 1);
    }

    #[test]
    fn star_tower_certifies_centre_witnesses() {
        let outcome = full_list_run(
            "star",
            2,
            TowerParams {
                k: 2,
                n_max: 48,
                t: 8,
                survivor_floor: 4,
                horizon: 48,
                budget: 30,
            },
        );
        let report = &outcome.certification;
        assert!(report.pass, "witness audit failed: {report:?}");
        let centre = report
            .unbounded
            .iter()
            .find(|a| a.vertex == v(1))
            .expect("centre audited");
        assert!(centre.materialized >= centre.processed - centre.shortfalls);
        assert!(centre.witnesses_differ);
    }

    #[test]
    fn certify_refuses_without_centre_family() {
        let p = presentation("star");
        let lists = ListSystem::uniform(12, vec![c(0), c(1), c(2)]).unwrap();
        // restriction run with NO families: the ledger cannot back v1
        let (sublists, ledger) = restrict_lists(12, &lists, &[], 10).unwrap();
        let system = ConstraintSystem::List(sublists.list_system());
        let trace = prefix_colourings(&p, &system, 2, 12).unwrap();
        let stabilized = stabilize(&trace, 4, 1).unwrap();
        assert!(matches!(
            certify(&p, &stabilized, &trace, &system, &ledger, 2, 12),
            Err(TowerError::LedgerMissingFamily(u)) if u == v(1)
        ));
    }

    #[test]
    fn directed_ray_tower_uses_dag_greedy() {
        let outcome = full_list_run(
            "directed_ray",
            2,
            TowerParams {
                k: 2,
                n_max: 32,
                t: 8,
                survivor_floor: 4,
                horizon: 32,
                budget: 0,
            },
        );
        assert!(outcome.certification.pass);
        // every directed-ray vertex has out-degree <= 1 and no conflicts
        assert!(outcome.trace.conflict_totals.iter().all(|&t| t == 0));
    }

    #[test]
    fn enclosed_conflicts_transfer_from_the_extension() {
        // the stabilised colouring agrees with chi_{n*} on the whole
        // stabilised prefix, so an enclosed vertex has the same conflict
        // count in both
        let outcome = full_list_run(
            "grid",
            2,
            TowerParams {
                k: 2,
                n_max: 64,
                t: 20,
                survivor_floor: 4,
                horizon: 64,
                budget: 0,
            },
        );
        let report = &outcome.certification;
        let extension = &outcome.trace.colourings[report.extension_index - 1];
        let chi = outcome.stabilized.colouring();
        let host = presentation("grid").materialize_graph(64).unwrap();
        assert!(!report.enclosed.is_empty());
        for audit in &report.enclosed {
            let under_extension = host
                .neighbours(audit.vertex)
                .iter()
                .filter(|&&u| {
                    extension.get(u).unwrap() == extension.get(audit.vertex).unwrap()
                })
                .count();
            assert_eq!(audit.conflicts, under_extension, "at {}", audit.vertex);
            assert_eq!(chi.get(audit.vertex), extension.get(audit.vertex));
        }
    }

    #[test]
    fn rado_tower_certifies_with_all_vertices_declared_infinite() {
        let outcome = full_list_run(
            "rado",
            2,
            TowerParams {
                k: 2,
                n_max: 48,
                t: 6,
                survivor_floor: 2,
                horizon: 48,
                budget: 60,
            },
        );
        let report = &outcome.certification;
        assert!(outcome.stabilized.len >= 1);
        assert!(report.pass, "{report:?}");
        // every audited vertex goes through the witness path
        assert!(report.enclosed.is_empty());
        assert_eq!(report.unbounded.len(), outcome.stabilized.len);
    }

    #[test]
    fn run_tower_rejects_unrestrictable_base() {
        let p = presentation("ray");
        let params = TowerParams {
            k: 2,
            n_max: 8,
            t: 2,
            survivor_floor: 1,
            horizon: 8,
            budget: 0,
        };
        // 2-lists leave nothing to restrict
        assert!(matches!(
            run_tower(&p, &uniform_system(8, &[0, 1]), &params),
            Err(TowerError::BaseListsNotRestrictable(Some(2)))
        ));
        // ragged bases are rejected too
        let ragged = ConstraintSystem::List(
            ListSystem::new(
                (0..8)
                    .map(|i| (0..=2 + i % 2).map(c).collect())
                    .collect(),
            )
            .unwrap(),
        );
        assert!(matches!(
            run_tower(&p, &ragged, &params),
            Err(TowerError::BaseListsNotRestrictable(None))
        ));
    }

    #[test]
    fn oversized_base_lists_still_certify() {
        // an experimental pairing: 4-lists restricted to 3, audited at
        // the (weaker) 1/2 threshold
        let p = presentation("star");
        let base = uniform_system(32, &[0, 1, 2, 3]);
        let params = TowerParams {
            k: 2,
            n_max: 32,
            t: 4,
            survivor_floor: 2,
            horizon: 32,
            budget: 20,
        };
        let outcome = run_tower(&p, &base, &params).unwrap();
        assert_eq!(outcome.sublists.target_size(), 3);
        assert_eq!(outcome.certification.k, 2);
        assert!(outcome.certification.pass);
    }
}
