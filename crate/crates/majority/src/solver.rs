//! Finite-instance solvers.
//!
//! `local_search` descends on the total number of conflict edges by
//! single-vertex recolourings until no vertex can improve; at that point
//! every vertex keeps at most a `1/k` share of conflicting incident edges
//! (its `k` list colours partition the neighbours it could conflict with,
//! so the least-conflicting colour sees at most `degree/k` of them).
//! `dag_greedy` gets the same bound on acyclic digraphs in one pass.
//! The brute-force routines are independent oracles for both.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::{
    verify_majority, Colouring, ColourId, ConstraintError, ConstraintSystem, ListSystem,
};
use crate::graph::{FiniteDigraph, FiniteGraph, GraphError, VertexId};

/// Default ceiling on the number of colourings a brute-force enumeration
/// may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("lists must all have size {expected}, found size {found} at {vertex}")]
    WrongListSize {
        vertex: VertexId,
        expected: usize,
        found: usize,
    },
    #[error("majority parameter k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("search space of {size} colourings exceeds the cap of {cap}")]
    SearchSpaceExceeded { size: u128, cap: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
}

/// One applied recolouring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub vertex: VertexId,
    pub from: ColourId,
    pub to: ColourId,
    /// Total conflict edges after this step.
    pub conflicts_after: usize,
}

/// Record of a local-search descent. Conflict totals strictly decrease
/// along the steps, so there are at most `initial_conflicts` of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub initial_conflicts: usize,
    pub final_conflicts: usize,
    pub steps: Vec<TraceStep>,
}

/// Deterministic starting point: every vertex takes the lowest colour id
/// in its list.
pub fn initial_colouring(lists: &ListSystem) -> Colouring {
    Colouring::new(
        (1..=lists.order())
            .map(|i| lists.list(VertexId::new(i))[0])
            .collect(),
    )
}

/// Conflicts `v` would have if coloured `candidate`, everyone else as in
/// `colouring`.
fn vertex_conflicts(
    graph: &FiniteGraph,
    system: &ConstraintSystem,
    colouring: &Colouring,
    v: VertexId,
    candidate: ColourId,
) -> usize {
    graph
        .neighbours(v)
        .iter()
        .filter(|&&u| {
            let cu = colouring.get(u).expect("colouring covers the graph");
            system.edge_conflicts(v, candidate, u, cu)
        })
        .count()
}

/// Total conflict edges under `colouring`.
pub fn total_conflicts(
    graph: &FiniteGraph,
    system: &ConstraintSystem,
    colouring: &Colouring,
) -> usize {
    graph
        .edges()
        .iter()
        .filter(|&&(u, v)| {
            let cu = colouring.get(u).expect("colouring covers the graph");
            let cv = colouring.get(v).expect("colouring covers the graph");
            system.edge_conflicts(u, cu, v, cv)
        })
        .count()
}

/// The recolouring of `v` that minimises its conflict count (ties: lowest
/// colour id), provided it is a strict improvement; `None` otherwise.
pub fn improving_move(
    graph: &FiniteGraph,
    colouring: &Colouring,
    v: VertexId,
    system: &ConstraintSystem,
) -> Option<ColourId> {
    let current = colouring.get(v).expect("colouring covers the graph");
    let current_conflicts = vertex_conflicts(graph, system, colouring, v, current);
    if current_conflicts == 0 {
        return None;
    }
    // lists are sorted, so the first strict minimum is the lowest id
    let mut best = current;
    let mut best_conflicts = current_conflicts;
    for &candidate in system.lists().list(v) {
        let conflicts = vertex_conflicts(graph, system, colouring, v, candidate);
        if conflicts < best_conflicts {
            best = candidate;
            best_conflicts = conflicts;
        }
    }
    (best_conflicts < current_conflicts).then_some(best)
}

fn require_uniform(lists: &ListSystem, k: usize) -> Result<(), SolverError> {
    if k < 2 {
        return Err(SolverError::InvalidK(k));
    }
    match lists.uniform_size() {
        Some(size) if size == k => Ok(()),
        _ => {
            let expected = k;
            for i in 1..=lists.order() {
                let v = VertexId::new(i);
                if lists.list(v).len() != expected {
                    return Err(SolverError::WrongListSize {
                        vertex: v,
                        expected,
                        found: lists.list(v).len(),
                    });
                }
            }
            // order 0 with no offending vertex: treat as size mismatch at v1
            Err(SolverError::WrongListSize {
                vertex: VertexId::new(1),
                expected,
                found: 0,
            })
        }
    }
}

/// Conflict-descent local search. Scans vertices in index order, applies
/// the first improving move, and restarts the scan; stops when no vertex
/// can improve. Each applied move removes at least one conflict edge, so
/// at most `|E|` moves are ever applied. The result is a majority
/// colouring at parameter `k`.
pub fn local_search(
    graph: &FiniteGraph,
    system: &ConstraintSystem,
    k: usize,
) -> Result<(Colouring, SearchTrace), SolverError> {
    require_uniform(system.lists(), k)?;
    let mut colouring = initial_colouring(system.lists());
    let initial = total_conflicts(graph, system, &colouring);
    let mut current = initial;
    let mut steps = Vec::new();

    'descend: loop {
        for v in graph.vertices() {
            if let Some(to) = improving_move(graph, &colouring, v, system) {
                let from = colouring.get(v).expect("colouring covers the graph");
                let before = vertex_conflicts(graph, system, &colouring, v, from);
                let after = vertex_conflicts(graph, system, &colouring, v, to);
                colouring.set(v, to);
                current -= before - after;
                steps.push(TraceStep {
                    vertex: v,
                    from,
                    to,
                    conflicts_after: current,
                });
                continue 'descend;
            }
        }
        break;
    }

    debug_assert_eq!(current, total_conflicts(graph, system, &colouring));
    Ok((
        colouring,
        SearchTrace {
            initial_conflicts: initial,
            final_conflicts: current,
            steps,
        },
    ))
}

/// Conflicts `v` would have against its already-coloured out-neighbours.
fn out_conflicts(
    digraph: &FiniteDigraph,
    system: &ConstraintSystem,
    colouring: &[Option<ColourId>],
    v: VertexId,
    candidate: ColourId,
) -> usize {
    digraph
        .out_neighbours(v)
        .iter()
        .filter(|&&u| match colouring[u.pos()] {
            Some(cu) => system.edge_conflicts(v, candidate, u, cu),
            None => false,
        })
        .count()
}

/// One-pass greedy for acyclic digraphs: vertices are coloured in reverse
/// topological order, each taking the list colour least common among its
/// out-neighbours (ties: lowest colour id). Every vertex ends with at most
/// `outdegree/k` conflicting out-arcs by pigeonhole.
pub fn dag_greedy(
    digraph: &FiniteDigraph,
    system: &ConstraintSystem,
    k: usize,
) -> Result<Colouring, SolverError> {
    require_uniform(system.lists(), k)?;
    let order = digraph.reverse_topological_order()?;
    let mut assigned: Vec<Option<ColourId>> = vec![None; digraph.order()];
    for v in order {
        let mut best = None;
        let mut best_conflicts = usize::MAX;
        for &candidate in system.lists().list(v) {
            let conflicts = out_conflicts(digraph, system, &assigned, v, candidate);
            if conflicts < best_conflicts {
                best = Some(candidate);
                best_conflicts = conflicts;
            }
        }
        assigned[v.pos()] = Some(best.expect("lists are nonempty"));
    }
    Ok(Colouring::new(
        assigned.into_iter().map(|c| c.expect("all coloured")).collect(),
    ))
}

/// Iterates every list-respecting colouring in lexicographic order
/// (vertex-major, colour ids ascending), calling `visit` on each.
fn enumerate_colourings<F: FnMut(&Colouring)>(
    lists: &ListSystem,
    cap: u64,
    mut visit: F,
) -> Result<(), SolverError> {
    let mut size: u128 = 1;
    for i in 1..=lists.order() {
        size = size.saturating_mul(lists.list(VertexId::new(i)).len() as u128);
    }
    if size > cap as u128 {
        return Err(SolverError::SearchSpaceExceeded { size, cap });
    }

    let n = lists.order();
    let mut indices = vec![0usize; n];
    loop {
        let colouring = Colouring::new(
            (0..n)
                .map(|pos| lists.list(VertexId::new(pos + 1))[indices[pos]])
                .collect(),
        );
        visit(&colouring);
        // odometer increment, last vertex fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < lists.list(VertexId::new(pos + 1)).len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

/// Exact minimum of total conflict edges over all list-respecting
/// colourings, with the lexicographically first witness. Accepts
/// arbitrary nonempty lists (no uniformity requirement).
pub fn brute_force_optimum(
    graph: &FiniteGraph,
    system: &ConstraintSystem,
    cap: Option<u64>,
) -> Result<(usize, Colouring), SolverError> {
    let cap = cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let mut best: Option<(usize, Colouring)> = None;
    enumerate_colourings(system.lists(), cap, |colouring| {
        let conflicts = total_conflicts(graph, system, colouring);
        let better = match &best {
            Some((current, _)) => conflicts < *current,
            None => true,
        };
        if better {
            best = Some((conflicts, colouring.clone()));
        }
    })?;
    Ok(best.expect("at least the empty colouring is visited"))
}

/// Searches every list-respecting colouring of a digraph for one that
/// passes the directed majority audit at `k`; returns the
/// lexicographically first such colouring, or `None` when none exists.
pub fn exhaustive_digraph_search(
    digraph: &FiniteDigraph,
    lists: &ListSystem,
    k: usize,
    cap: Option<u64>,
) -> Result<Option<Colouring>, SolverError> {
    if k < 2 {
        return Err(SolverError::InvalidK(k));
    }
    let cap = cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let system = ConstraintSystem::List(lists.clone());
    let mut found: Option<Colouring> = None;
    enumerate_colourings(lists, cap, |colouring| {
        if found.is_none() {
            let report = verify_majority(digraph, colouring, &system, k)
                .expect("enumerated colourings respect the lists");
            if report.overall_pass {
                found = Some(colouring.clone());
            }
        }
    })?;
    Ok(found)
}
