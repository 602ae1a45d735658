//! The Rado graph from its arithmetic presentation: vertices are the
//! naturals and v_m ~ v_n (m < n) exactly when bit m-1 of n-1 is set.
//! Prefixes of a presentation are always consistent — materialising
//! G_64 and slicing it agrees with materialising G_16 directly — and
//! every prefix solves like any finite instance.
//!
//! ```bash
//! cargo run -p majority --example rado_prefixes
//! ```

use majority::constraints::{verify_majority, ColourId, ConstraintSystem, ListSystem};
use majority::graph::VertexId;
use majority::solver::local_search;
use majority::tower::{CountablePresentation, FamilyParams};

fn main() {
    let rado = CountablePresentation::builtin("rado", FamilyParams::default()).unwrap();

    let g64 = rado.materialize_graph(64).unwrap();
    let g16 = rado.materialize_graph(16).unwrap();
    assert_eq!(g16, g64.induced_prefix(16).unwrap());
    println!("prefix consistency: G_16 == G_64 restricted to v1..v16");

    println!(
        "G_64 has {} edges; every vertex of the full graph is declared infinite-degree",
        g64.edge_count()
    );
    for i in [1, 2, 3, 8, 33] {
        let v = VertexId::new(i);
        println!(
            "  {v}: degree {} within the prefix, neighbours {:?}...",
            g64.degree(v),
            &g64.neighbours(v)[..g64.degree(v).min(6)]
        );
    }

    let lists = ListSystem::uniform(64, vec![ColourId::new(0), ColourId::new(1)]).unwrap();
    let system = ConstraintSystem::List(lists);
    let (chi, trace) = local_search(&g64, &system, 2).unwrap();
    let report = verify_majority(&g64, &chi, &system, 2).unwrap();
    println!(
        "local search on G_64: {} -> {} conflict edges, majority: {}",
        trace.initial_conflicts, trace.final_conflicts, report.overall_pass
    );
}
