//! Partition the Petersen graph so that every vertex disagrees with at
//! least half of its neighbours, with each vertex choosing from its own
//! two-colour list.
//!
//! ```bash
//! cargo run -p majority --example unfriendly_partition
//! ```

use majority::constraints::{verify_majority, ColourId, ConstraintSystem, ListSystem};
use majority::graph::FiniteGraph;
use majority::solver::local_search;

fn main() {
    let petersen = FiniteGraph::new(
        10,
        &[
            // outer cycle
            (1, 2), (2, 3), (3, 4), (4, 5), (1, 5),
            // spokes
            (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
            // inner pentagram
            (6, 8), (8, 10), (10, 7), (7, 9), (9, 6),
        ],
    )
    .unwrap();

    // every vertex picks from its own list; staggering the lists makes the
    // instance a genuine list-colouring problem rather than a 2-colouring
    let palette = ["red", "green", "blue"];
    let lists = ListSystem::new(
        (0..10)
            .map(|i| vec![ColourId::new(i % 3), ColourId::new((i + 1) % 3)])
            .collect(),
    )
    .unwrap();
    let system = ConstraintSystem::List(lists);

    let (colouring, trace) = local_search(&petersen, &system, 2).unwrap();
    println!(
        "descent: {} -> {} conflict edges in {} moves",
        trace.initial_conflicts,
        trace.final_conflicts,
        trace.steps.len()
    );

    let report = verify_majority(&petersen, &colouring, &system, 2).unwrap();
    for audit in &report.vertices {
        let colour = colouring.get(audit.vertex).unwrap();
        println!(
            "  {}: {} with {} of {} neighbours in conflict [{}]",
            audit.vertex,
            palette[colour.id()],
            audit.conflicts,
            audit.degree,
            if audit.pass { "ok" } else { "FAIL" }
        );
    }
    println!(
        "majority at 1/2 threshold: {}",
        if report.overall_pass { "yes" } else { "no" }
    );
}
