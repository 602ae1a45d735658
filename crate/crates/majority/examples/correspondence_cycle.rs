//! Correspondence colouring strictly generalises list colouring: the
//! four-cycle with identical 2-lists is trivially list-colourable with
//! zero conflicts, but twisting the matching on one edge makes one bad
//! edge unavoidable.
//!
//! ```bash
//! cargo run -p majority --example correspondence_cycle
//! ```

use majority::constraints::{
    verify_majority, ColourId, ConstraintSystem, CorrespondenceSystem, ListSystem,
};
use majority::graph::{FiniteGraph, VertexId};
use majority::solver::{brute_force_optimum, local_search};

fn main() {
    let c4 = FiniteGraph::new(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
    let lists = ListSystem::uniform(4, vec![ColourId::new(0), ColourId::new(1)]).unwrap();

    // identity matchings everywhere: plain list colouring in disguise
    let mut identity = CorrespondenceSystem::new();
    for &(u, v) in c4.edges() {
        for c in [ColourId::new(0), ColourId::new(1)] {
            identity.insert_pair(u, v, c, c);
        }
    }
    let plain = ConstraintSystem::Correspondence {
        lists: lists.clone(),
        pairs: identity,
    };
    let (_, trace) = local_search(&c4, &plain, 2).unwrap();
    println!("identity matchings: {} bad edges (an even cycle 2-colours)", trace.final_conflicts);

    // twist edge 1-4: a at v1 clashes with b at v4 and vice versa
    let mut twisted = CorrespondenceSystem::new();
    for (a, b) in [(1, 2), (2, 3), (3, 4)] {
        for c in [ColourId::new(0), ColourId::new(1)] {
            twisted.insert_pair(VertexId::new(a), VertexId::new(b), c, c);
        }
    }
    twisted.insert_pair(VertexId::new(1), VertexId::new(4), ColourId::new(0), ColourId::new(1));
    twisted.insert_pair(VertexId::new(1), VertexId::new(4), ColourId::new(1), ColourId::new(0));
    let system = ConstraintSystem::Correspondence { lists, pairs: twisted };

    let (minimum, _) = brute_force_optimum(&c4, &system, None).unwrap();
    println!("twisted matching on edge 1-4: exhaustive minimum over 16 colourings = {minimum}");

    let (colouring, trace) = local_search(&c4, &system, 2).unwrap();
    println!("local search reaches {} bad edge(s)", trace.final_conflicts);

    let report = verify_majority(&c4, &colouring, &system, 2).unwrap();
    for audit in &report.vertices {
        println!(
            "  {}: {} of {} incident edges bad [{}]",
            audit.vertex,
            audit.conflicts,
            audit.degree,
            if audit.pass { "ok" } else { "FAIL" }
        );
    }
    println!(
        "still a majority correspondence colouring: {}",
        report.overall_pass
    );
}
