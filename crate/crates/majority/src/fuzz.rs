//! Randomised stress harness for the finite solvers.
//!
//! Every trial draws a seeded random graph, random k-uniform lists (and,
//! in correspondence mode, random valid matchings), runs the local
//! search, and checks the majority audit plus the oracle sandwich
//! against the exhaustive minimiser. Majority k-list-colourability of
//! finite graphs is a theorem, so any failure is an implementation bug;
//! findings carry the full reproducing instance.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::constraints::{
    verify_majority, ColourId, ConstraintSystem, CorrespondenceSystem, ListSystem,
};
use crate::graph::FiniteGraph;
use crate::instance::{document_from_parts, ColourTable, FuzzDocument, FuzzFindingDocument};
use crate::solver::{brute_force_optimum, local_search, DEFAULT_ENUMERATION_CAP};
use crate::tower::PrefixGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FuzzError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error("max_order must be at least 1")]
    EmptyOrderRange,
    #[error("majority parameter k must be at least 2, got {0}")]
    InvalidK(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzParams {
    pub seed: u64,
    pub trials: usize,
    pub max_order: usize,
    pub k: usize,
    pub correspondence: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzFinding {
    pub trial: usize,
    pub message: String,
    pub instance: crate::instance::InstanceDocument,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzReport {
    pub params: FuzzParams,
    pub trials_run: usize,
    pub failures: Vec<FuzzFinding>,
    /// Final conflict totals of the local search, by count.
    pub conflict_histogram: BTreeMap<usize, usize>,
}

impl FuzzReport {
    pub fn document(&self) -> FuzzDocument {
        FuzzDocument {
            seed: self.params.seed,
            trials: self.params.trials,
            mode: if self.params.correspondence {
                "correspondence".to_owned()
            } else {
                "list".to_owned()
            },
            max_order: self.params.max_order,
            k: self.params.k,
            failures: self
                .failures
                .iter()
                .map(|f| FuzzFindingDocument {
                    trial: f.trial,
                    message: f.message.clone(),
                    instance: f.instance.clone(),
                })
                .collect(),
            conflict_histogram: self.conflict_histogram.clone(),
        }
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A seeded graph on `1..=order` vertices with independent edge
/// probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, order: usize, p: f64) -> FiniteGraph {
    let mut edges = Vec::new();
    for u in 1..=order {
        for v in (u + 1)..=order {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    FiniteGraph::new(order, &edges).expect("generated endpoints are in range")
}

/// Random k-subsets of a palette of `palette` colours, one per vertex.
pub fn random_lists(rng: &mut ChaCha8Rng, order: usize, k: usize, palette: usize) -> ListSystem {
    assert!(palette >= k);
    let colours: Vec<ColourId> = (0..palette).map(ColourId::new).collect();
    let lists = (0..order)
        .map(|_| {
            let mut pool = colours.clone();
            pool.shuffle(rng);
            pool.truncate(k);
            pool
        })
        .collect();
    ListSystem::new(lists).expect("nonempty distinct lists")
}

/// A random valid partial matching on every edge: for edge `uv`, some
/// prefix of a shuffled copy of `L(u)` is paired with a shuffled copy of
/// `L(v)`, so no colour appears twice on either side.
pub fn random_matchings(
    rng: &mut ChaCha8Rng,
    graph: &FiniteGraph,
    lists: &ListSystem,
) -> CorrespondenceSystem {
    let mut pairs = CorrespondenceSystem::new();
    for &(u, v) in graph.edges() {
        let mut left = lists.list(u).to_vec();
        let mut right = lists.list(v).to_vec();
        left.shuffle(rng);
        right.shuffle(rng);
        let size = rng.gen_range(0..=left.len().min(right.len()));
        for i in 0..size {
            pairs.insert_pair(u, v, left[i], right[i]);
        }
    }
    pairs
}

/// Runs the harness. Deterministic for a fixed seed; findings are
/// collected in trial order.
pub fn fuzz(params: FuzzParams) -> Result<FuzzReport, FuzzError> {
    if params.trials == 0 {
        return Err(FuzzError::NoTrials);
    }
    if params.max_order == 0 {
        return Err(FuzzError::EmptyOrderRange);
    }
    if params.k < 2 {
        return Err(FuzzError::InvalidK(params.k));
    }

    let palette = params.k + 2;
    let table = ColourTable::canonical(palette);
    let mut failures = Vec::new();
    let mut conflict_histogram: BTreeMap<usize, usize> = BTreeMap::new();

    for trial in 0..params.trials {
        let mut rng = trial_rng(params.seed, trial);
        let order = rng.gen_range(1..=params.max_order);
        let p = rng.gen_range(0.0..1.0);
        let graph = random_graph(&mut rng, order, p);
        let lists = random_lists(&mut rng, order, params.k, palette);
        let system = if params.correspondence {
            let pairs = random_matchings(&mut rng, &graph, &lists);
            ConstraintSystem::Correspondence { lists, pairs }
        } else {
            ConstraintSystem::List(lists)
        };

        let mut fail = |message: String| {
            let instance = document_from_parts(
                &PrefixGraph::Graph(graph.clone()),
                &system,
                params.k,
                &table,
            );
            failures.push(FuzzFinding {
                trial,
                message,
                instance,
            });
        };

        let (chi, trace) = match local_search(&graph, &system, params.k) {
            Ok(result) => result,
            Err(err) => {
                fail(format!("local search failed: {err}"));
                continue;
            }
        };
        *conflict_histogram.entry(trace.final_conflicts).or_default() += 1;

        match verify_majority(&graph, &chi, &system, params.k) {
            Ok(report) if report.overall_pass => {}
            Ok(report) => {
                let bad: Vec<String> = report
                    .failing_vertices()
                    .map(|a| format!("{} ({} of {})", a.vertex, a.conflicts, a.degree))
                    .collect();
                fail(format!(
                    "local search output fails the majority audit at {}",
                    bad.join(", ")
                ));
                continue;
            }
            Err(err) => {
                fail(format!("audit error: {err}"));
                continue;
            }
        }

        // oracle sandwich on everything the cap admits
        let space: u128 = (params.k as u128).pow(order as u32);
        if space <= DEFAULT_ENUMERATION_CAP as u128 {
            match brute_force_optimum(&graph, &system, None) {
                Ok((minimum, witness)) => {
                    if minimum > trace.final_conflicts {
                        fail(format!(
                            "exhaustive minimum {minimum} exceeds local search result {}",
                            trace.final_conflicts
                        ));
                        continue;
                    }
                    if trace.final_conflicts > graph.edge_count() {
                        fail("conflict total exceeds the edge count".to_owned());
                        continue;
                    }
                    match verify_majority(&graph, &witness, &system, params.k) {
                        Ok(report) if report.overall_pass => {}
                        _ => {
                            fail("exhaustive witness fails the majority audit".to_owned());
                            continue;
                        }
                    }
                }
                Err(err) => {
                    fail(format!("oracle failed: {err}"));
                    continue;
                }
            }
        }
    }

    Ok(FuzzReport {
        params,
        trials_run: params.trials,
        failures,
        conflict_histogram,
    })
}
