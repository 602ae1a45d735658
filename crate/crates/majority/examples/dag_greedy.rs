//! One-pass colouring of an acyclic digraph: processing vertices in
//! reverse topological order and always taking the locally rarest list
//! colour keeps every vertex's conflicting out-arcs at or below a 1/k
//! share, for any k-uniform lists.
//!
//! ```bash
//! cargo run -p majority --example dag_greedy
//! ```

use majority::constraints::{verify_majority, ConstraintSystem};
use majority::fuzz::random_lists;
use majority::solver::dag_greedy;
use majority::tower::{CountablePresentation, FamilyParams};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let k = 3;
    let order = 400;

    let presentation = CountablePresentation::builtin(
        "random_dag",
        FamilyParams {
            seed: 20,
            density: 0.05,
        },
    )
    .unwrap();
    let dag = presentation.materialize_digraph(order).unwrap();
    println!(
        "random DAG: {} vertices, {} arcs (all oriented towards lower indices)",
        dag.order(),
        dag.arc_count()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let lists = random_lists(&mut rng, order, k, k + 2);
    let system = ConstraintSystem::List(lists);

    let colouring = dag_greedy(&dag, &system, k).unwrap();
    let report = verify_majority(&dag, &colouring, &system, k).unwrap();

    let worst = report
        .vertices
        .iter()
        .max_by_key(|a| (a.conflicts * 1000).checked_div(a.degree.max(1)).unwrap_or(0))
        .unwrap();
    println!(
        "every vertex keeps conflicts*{k} <= outdegree: {}",
        report.overall_pass
    );
    println!(
        "tightest vertex: {} with {} conflicting of {} out-arcs (threshold {}/{})",
        worst.vertex, worst.conflicts, worst.degree, worst.degree, k
    );

    let histogram = report.vertices.iter().fold([0usize; 8], |mut h, a| {
        h[a.conflicts.min(7)] += 1;
        h
    });
    println!("conflict histogram (by count): {histogram:?}");
}
