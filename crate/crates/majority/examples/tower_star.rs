//! Certifying an infinite-degree vertex. The infinite star's centre can
//! never have its conflicts counted against its degree at any finite
//! scale; instead the restriction pass plants witnesses — leaves whose
//! sublists miss each candidate centre colour — and certification checks
//! the materialised supply against the ledger.
//!
//! ```bash
//! cargo run -p majority --example tower_star
//! ```

use majority::constraints::{ColourId, ConstraintSystem, ListSystem};
use majority::graph::VertexId;
use majority::restriction::FamilyOrigin;
use majority::tower::{run_tower, CountablePresentation, FamilyParams, TowerParams};

fn main() {
    let presentation = CountablePresentation::builtin("star", FamilyParams::default()).unwrap();
    println!(
        "declared infinite-degree vertices: {:?}",
        presentation.infinite_degree_vertices(4)
    );

    let params = TowerParams {
        k: 2,
        n_max: 256,
        t: 16,
        survivor_floor: 8,
        horizon: 256,
        budget: 300,
    };
    let base = ConstraintSystem::List(
        ListSystem::uniform(params.horizon, vec![ColourId::new(0), ColourId::new(1), ColourId::new(2)])
            .unwrap(),
    );
    let outcome = run_tower(&presentation, &base, &params).unwrap();

    let centre = VertexId::new(1);
    let audit = outcome
        .certification
        .unbounded
        .iter()
        .find(|a| a.vertex == centre)
        .expect("the centre is audited");

    println!(
        "stabilised centre colour: {} (backed by {} surviving prefix colourings)",
        audit.colour,
        outcome.stabilized.final_survivors().len()
    );
    println!(
        "ledger for (N(v1), {}): {} processed, {} shortfalls, {} witnesses",
        audit.colour, audit.processed, audit.shortfalls, audit.ledger_witnesses
    );
    println!(
        "leaves within horizon {} whose sublist misses {}: {}",
        params.horizon, audit.colour, audit.materialized
    );
    println!(
        "supply covers the ledger (materialized >= processed - shortfalls): {}",
        audit.materialized >= audit.processed - audit.shortfalls
    );

    // spot-check a few witnesses: whatever colour such a leaf takes, the
    // spoke to the centre cannot be monochromatic
    let entry = outcome
        .ledger
        .entry(&FamilyOrigin::Neighbourhood(centre), Some(audit.colour))
        .unwrap();
    let sublists = outcome.sublists.list_system();
    for &leaf in entry.witnesses.iter().take(5) {
        println!(
            "  witness {leaf}: sublist {:?} (centre colour {} removed)",
            sublists.list(leaf),
            audit.colour
        );
    }
    println!("certification passes: {}", outcome.certification.pass);
}
