//! Shrink 3-colour lists to 2-colour sublists while planting witnesses:
//! for every designated vertex family and every colour, the restriction
//! schedule keeps choosing fresh family members whose sublist drops that
//! colour. The ledger records every choice, so the supply of
//! "guaranteed-different" vertices is auditable afterwards.
//!
//! ```bash
//! cargo run -p majority --example sublist_restriction
//! ```

use majority::constraints::{ColourId, ListSystem};
use majority::graph::VertexId;
use majority::restriction::{restrict_lists, FamilyOrigin, ScheduleOutcome, WitnessFamily};

fn main() {
    let prefix = 1_000;
    let lists = ListSystem::uniform(
        prefix,
        vec![ColourId::new(0), ColourId::new(1), ColourId::new(2)],
    )
    .unwrap();

    // two overlapping families competing for the same vertices
    let members = |step: usize, offset: usize| {
        (0..)
            .map(|i| offset + i * step)
            .take_while(|&x| x <= prefix)
            .map(VertexId::new)
            .collect()
    };
    let families = vec![
        WitnessFamily::colour_form(FamilyOrigin::Named("evens".into()), members(2, 2)).unwrap(),
        WitnessFamily::colour_form(FamilyOrigin::Named("squares".into()), {
            (1..)
                .map(|i: usize| i * i)
                .take_while(|&x| x <= prefix)
                .map(VertexId::new)
                .collect()
        })
        .unwrap(),
    ];

    let budget = 24;
    let (sublists, ledger) = restrict_lists(prefix, &lists, &families, budget).unwrap();

    println!("schedule ({budget} items, round-robin over family x colour):");
    for record in &ledger.schedule {
        let family = ledger.families[record.family].label();
        let colour = record.colour.unwrap();
        let outcome = match &record.outcome {
            ScheduleOutcome::Witness(v) => format!("witness {v}"),
            ScheduleOutcome::ConsumedNoRemoval(v) => format!("consumed {v}, colour absent"),
            ScheduleOutcome::Shortfall => "shortfall".to_owned(),
        };
        println!(
            "  ({family}, {colour}, occurrence {}) -> {outcome}",
            record.occurrence
        );
    }

    println!("\nper-(family, colour) accounts:");
    for entry in &ledger.entries {
        println!(
            "  ({}, {}): {} witnesses, {} processed, {} shortfalls",
            entry.origin.label(),
            entry.colour.unwrap(),
            entry.witnesses.len(),
            entry.processed,
            entry.shortfalls
        );
        for &w in &entry.witnesses {
            assert!(!sublists.sublist(w).contains(&entry.colour.unwrap()));
        }
    }

    let touched = (1..=prefix)
        .filter(|&i| sublists.removed(VertexId::new(i)).is_some())
        .count();
    println!("\n{touched} vertices had a colour removed; the rest default to dropping the highest id");
    println!(
        "v4 keeps {:?}, v16 keeps {:?}, v17 keeps the default {:?}",
        sublists.sublist(VertexId::new(4)),
        sublists.sublist(VertexId::new(16)),
        sublists.sublist(VertexId::new(17)),
    );
}
