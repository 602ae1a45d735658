//! Sandwich the local search between the exhaustive optimum and the edge
//! count: on small instances the descent result can be compared against
//! the true minimum number of conflict edges.
//!
//! ```bash
//! cargo run -p majority --example oracle_sandwich
//! ```

use majority::constraints::{ColourId, ConstraintSystem, ListSystem};
use majority::graph::FiniteGraph;
use majority::solver::{brute_force_optimum, local_search};

fn sandwich(name: &str, graph: &FiniteGraph, system: &ConstraintSystem) {
    let (_, trace) = local_search(graph, system, 2).unwrap();
    let (minimum, _) = brute_force_optimum(graph, system, None).unwrap();
    println!(
        "{name}: optimum {minimum} <= local search {} <= |E| = {}",
        trace.final_conflicts,
        graph.edge_count()
    );
    assert!(minimum <= trace.final_conflicts);
    assert!(trace.final_conflicts <= graph.edge_count());
}

fn main() {
    let two_lists = |order: usize| {
        ConstraintSystem::List(
            ListSystem::uniform(order, vec![ColourId::new(0), ColourId::new(1)]).unwrap(),
        )
    };

    // a triangle with shared 2-lists cannot avoid one monochromatic edge
    let triangle = FiniteGraph::new(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
    sandwich("triangle", &triangle, &two_lists(3));

    // K4 bottoms out at two: a balanced split leaves two inner edges
    let k4 = FiniteGraph::new(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
    sandwich("K4", &k4, &two_lists(4));

    // odd wheel: the hub plus a 7-cycle
    let wheel = FiniteGraph::new(
        8,
        &[
            (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (1, 8),
            (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 8),
        ],
    )
    .unwrap();
    sandwich("wheel W7", &wheel, &two_lists(8));

    // two overlapping cliques
    let cliques = FiniteGraph::new(
        6,
        &[
            (1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4),
            (3, 5), (4, 5), (3, 6), (4, 6), (5, 6),
        ],
    )
    .unwrap();
    sandwich("glued cliques", &cliques, &two_lists(6));
}
