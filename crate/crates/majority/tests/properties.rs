//! Property tests for the structural invariants: prefix consistency,
//! audit equivalences, potential descent, pigeonhole bounds, restriction
//! bookkeeping, and document round-trips.

use std::collections::BTreeSet;

use proptest::prelude::*;

use majority::constraints::{
    list_to_correspondence, verify_majority, ColourId, Colouring, ConstraintSystem,
    CorrespondenceSystem, ListSystem,
};
use majority::graph::{FiniteDigraph, FiniteGraph, VertexId};
use majority::instance::{document_from_parts, emit_instance, parse_instance, ColourTable};
use majority::restriction::{restrict_lists, FamilyOrigin, WitnessFamily};
use majority::solver::{brute_force_optimum, dag_greedy, local_search};
use majority::tower::{prefix_colourings, stabilize, CountablePresentation, FamilyParams, PrefixGraph};

fn v(i: usize) -> VertexId {
    VertexId::new(i)
}

prop_compose! {
    fn small_graph()(order in 1usize..=8)(
        order in Just(order),
        edges in proptest::collection::vec((1usize..=order, 1usize..=order), 0..=20),
    ) -> FiniteGraph {
        let filtered: Vec<(usize, usize)> =
            edges.into_iter().filter(|(a, b)| a != b).collect();
        FiniteGraph::new(order, &filtered).expect("endpoints in range")
    }
}

prop_compose! {
    fn small_dag()(order in 1usize..=10)(
        order in Just(order),
        arcs in proptest::collection::vec((1usize..=order, 1usize..=order), 0..=25),
    ) -> FiniteDigraph {
        // orienting every arc from higher to lower index keeps it acyclic
        let descending: Vec<(usize, usize)> = arcs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| if a > b { (a, b) } else { (b, a) })
            .collect();
        FiniteDigraph::new(order, &descending).expect("endpoints in range")
    }
}

fn uniform_lists(order: usize, k: usize, palette: usize) -> ListSystem {
    // deterministic staggered k-subsets of the palette
    let lists = (0..order)
        .map(|i| (0..k).map(|j| ColourId::new((i + j) % palette)).collect())
        .collect();
    ListSystem::new(lists).expect("distinct nonempty")
}

prop_compose! {
    fn graph_with_lists()(graph in small_graph(), k in 2usize..=3)(
        graph in Just(graph),
        k in Just(k),
        offsets in proptest::collection::vec(0usize..4, 8),
    ) -> (FiniteGraph, ListSystem, usize) {
        let palette = k + 2;
        let lists = (0..graph.order())
            .map(|i| {
                (0..k)
                    .map(|j| ColourId::new((offsets[i % 8] + i + j) % palette))
                    .collect()
            })
            .collect();
        (graph.clone(), ListSystem::new(lists).expect("valid"), k)
    }
}

fn colouring_for(lists: &ListSystem, picks: &[usize]) -> Colouring {
    Colouring::new(
        (1..=lists.order())
            .map(|i| {
                let list = lists.list(v(i));
                list[picks[(i - 1) % picks.len()] % list.len()]
            })
            .collect(),
    )
}

proptest! {
    #[test]
    fn degree_sum_is_twice_edges(graph in small_graph()) {
        let sum: usize = graph.vertices().map(|u| graph.degree(u)).sum();
        prop_assert_eq!(sum, 2 * graph.edge_count());
    }

    #[test]
    fn induced_prefix_composes(graph in small_graph(), data in any::<(usize, usize)>()) {
        let order = graph.order();
        let n = data.0 % order + 1;
        let m = data.1 % n + 1;
        let direct = graph.induced_prefix(m).unwrap();
        let nested = graph.induced_prefix(n).unwrap().induced_prefix(m).unwrap();
        prop_assert_eq!(direct, nested);
    }

    #[test]
    fn reverse_topological_positions(dag in small_dag()) {
        let order = dag.reverse_topological_order().unwrap();
        prop_assert_eq!(order.len(), dag.order());
        let mut position = vec![0usize; dag.order()];
        for (pos, &u) in order.iter().enumerate() {
            position[u.index() - 1] = pos;
        }
        for &(u, w) in dag.arcs() {
            prop_assert!(position[w.index() - 1] < position[u.index() - 1]);
        }
    }

    #[test]
    fn list_audit_equals_embedded_correspondence(
        (graph, lists, k) in graph_with_lists(),
        picks in proptest::collection::vec(0usize..4, 8),
    ) {
        let chi = colouring_for(&lists, &picks);
        let plain = ConstraintSystem::List(lists.clone());
        let embedded = ConstraintSystem::Correspondence {
            pairs: list_to_correspondence(&lists, &graph),
            lists,
        };
        let a = verify_majority(&graph, &chi, &plain, k).unwrap();
        let b = verify_majority(&graph, &chi, &embedded, k).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn audit_invariant_under_colour_renaming(
        (graph, lists, k) in graph_with_lists(),
        picks in proptest::collection::vec(0usize..4, 8),
        shift in 1usize..50,
    ) {
        // an id-shift is a bijective renaming that also reverses relative
        // order for some pairs, exercising the tie-free paths
        let rename = |c: ColourId| ColourId::new((c.id() + shift) * 3 % 251);
        let chi = colouring_for(&lists, &picks);
        let renamed_lists = ListSystem::new(
            (1..=lists.order())
                .map(|i| lists.list(v(i)).iter().map(|&c| rename(c)).collect())
                .collect(),
        )
        .unwrap();
        let renamed_chi = Colouring::new(
            chi.colours().iter().map(|&c| rename(c)).collect(),
        );
        let before =
            verify_majority(&graph, &chi, &ConstraintSystem::List(lists), k).unwrap();
        let after = verify_majority(
            &graph,
            &renamed_chi,
            &ConstraintSystem::List(renamed_lists),
            k,
        )
        .unwrap();
        for (x, y) in before.vertices.iter().zip(&after.vertices) {
            prop_assert_eq!(x.pass, y.pass);
            prop_assert_eq!(x.conflicts, y.conflicts);
        }
    }

    #[test]
    fn unfriendly_partition_equivalence_at_two(
        graph in small_graph(),
        picks in proptest::collection::vec(0usize..2, 8),
    ) {
        let lists = uniform_lists(graph.order(), 2, 2);
        let chi = colouring_for(&lists, &picks);
        let report =
            verify_majority(&graph, &chi, &ConstraintSystem::List(lists), 2).unwrap();
        for audit in &report.vertices {
            let unfriendly = audit.conflicts <= audit.degree - audit.conflicts;
            prop_assert_eq!(audit.pass, unfriendly);
        }
    }

    #[test]
    fn local_search_descends_and_passes((graph, lists, k) in graph_with_lists()) {
        prop_assume!(lists.uniform_size() == Some(k));
        let system = ConstraintSystem::List(lists);
        let (chi, trace) = local_search(&graph, &system, k).unwrap();
        let mut previous = trace.initial_conflicts;
        for step in &trace.steps {
            prop_assert!(step.conflicts_after < previous);
            previous = step.conflicts_after;
        }
        prop_assert!(trace.steps.len() <= graph.edge_count());
        prop_assert!(verify_majority(&graph, &chi, &system, k).unwrap().overall_pass);

        let (minimum, witness) = brute_force_optimum(&graph, &system, None).unwrap();
        prop_assert!(minimum <= trace.final_conflicts);
        prop_assert!(trace.final_conflicts <= graph.edge_count());
        prop_assert!(verify_majority(&graph, &witness, &system, k).unwrap().overall_pass);
    }

    #[test]
    fn dag_greedy_pigeonhole(dag in small_dag(), k in 2usize..=4) {
        let lists = uniform_lists(dag.order(), k, k + 2);
        let system = ConstraintSystem::List(lists);
        let chi = dag_greedy(&dag, &system, k).unwrap();
        let report = verify_majority(&dag, &chi, &system, k).unwrap();
        prop_assert!(report.overall_pass);
        for audit in &report.vertices {
            prop_assert!(audit.conflicts * k <= audit.degree);
        }
    }

    #[test]
    fn restriction_bookkeeping(
        prefix in 10usize..=60,
        strides in proptest::collection::vec((1usize..=4, 1usize..=4), 1..=3),
        budget in 0usize..=40,
    ) {
        let lists = ListSystem::uniform(
            prefix,
            vec![ColourId::new(0), ColourId::new(1), ColourId::new(2)],
        )
        .unwrap();
        let families: Vec<WitnessFamily> = strides
            .iter()
            .enumerate()
            .map(|(rank, &(stride, offset))| {
                let members: Vec<VertexId> = (0..)
                    .map(|i| offset + i * stride)
                    .take_while(|&x| x <= prefix)
                    .map(VertexId::new)
                    .collect();
                WitnessFamily::colour_form(
                    FamilyOrigin::Named(format!("F{rank}")),
                    members,
                )
                .unwrap()
            })
            .collect();

        let (sublists, ledger) = restrict_lists(prefix, &lists, &families, budget).unwrap();

        // size preservation and subset property
        for i in 1..=prefix {
            let sub = sublists.sublist(v(i));
            prop_assert_eq!(sub.len(), 2);
            for c in sub {
                prop_assert!(lists.contains(v(i), *c));
            }
        }
        // single consumption and soundness
        let mut seen = BTreeSet::new();
        for entry in &ledger.entries {
            prop_assert_eq!(
                entry.processed,
                entry.witnesses.len() + entry.shortfalls + entry.skipped
            );
            for &w in &entry.witnesses {
                prop_assert!(seen.insert(w));
                prop_assert!(!sublists.sublist(w).contains(&entry.colour.unwrap()));
            }
        }
        prop_assert_eq!(ledger.schedule.len(), budget);

        // the ledger for a smaller budget is a prefix of this one
        if budget > 0 {
            let (_, shorter) =
                restrict_lists(prefix, &lists, &families, budget - 1).unwrap();
            prop_assert_eq!(&shorter.schedule[..], &ledger.schedule[..budget - 1]);
        }
    }

    #[test]
    fn materialised_prefixes_are_consistent(
        family in proptest::sample::select(vec![
            "ray", "two_way_path", "grid", "binary_tree", "star", "complete", "rado",
        ]),
        bounds in any::<(usize, usize)>(),
    ) {
        let n = bounds.0 % 48 + 1;
        let m = bounds.1 % n + 1;
        let p = CountablePresentation::builtin(family, FamilyParams::default()).unwrap();
        let big = p.materialize_graph(n).unwrap();
        let direct = p.materialize_graph(m).unwrap();
        prop_assert_eq!(direct, big.induced_prefix(m).unwrap());
    }

    #[test]
    fn nested_survivors_agree_with_stabilised_prefix(
        seed in 0u64..1000,
        n_max in 6usize..=24,
    ) {
        let p = CountablePresentation::builtin(
            "random_dag",
            FamilyParams { seed, density: 0.3 },
        )
        .unwrap();
        let lists = uniform_lists(n_max, 2, 3);
        let system = ConstraintSystem::List(lists);
        let trace = prefix_colourings(&p, &system, 2, n_max).unwrap();
        let t = n_max / 2;
        let stabilized = stabilize(&trace, t, 1).unwrap();
        for (j, survivors) in stabilized.survivor_sets.iter().enumerate().skip(1) {
            // S_j is nested in S_{j-1}
            let previous: BTreeSet<usize> =
                stabilized.survivor_sets[j - 1].iter().copied().collect();
            for &n in survivors {
                prop_assert!(previous.contains(&n));
                // chi_n agrees with the stabilised colours up to level j
                for i in 1..=j {
                    prop_assert_eq!(
                        trace.colourings[n - 1].get(v(i)),
                        Some(stabilized.colours[i - 1])
                    );
                }
            }
        }
    }

    #[test]
    fn instance_documents_round_trip(
        (graph, lists, k) in graph_with_lists(),
        twisted in any::<bool>(),
    ) {
        let palette = k + 2;
        let table = ColourTable::canonical(palette);
        let system = if twisted {
            ConstraintSystem::Correspondence {
                pairs: list_to_correspondence(&lists, &graph),
                lists,
            }
        } else {
            ConstraintSystem::List(lists)
        };
        let document =
            document_from_parts(&PrefixGraph::Graph(graph), &system, k, &table);
        let emitted = emit_instance(&document);
        let parsed = parse_instance(&emitted).unwrap();
        prop_assert_eq!(&parsed.document, &document);
        prop_assert_eq!(emit_instance(&parsed.document), emitted);
    }
}

// the twisted four-cycle needs its own deterministic check: the pair
// orientation must survive a document round-trip exactly
#[test]
fn correspondence_orientation_survives_round_trip() {
    let graph = FiniteGraph::new(2, &[(1, 2)]).unwrap();
    let lists = ListSystem::uniform(2, vec![ColourId::new(0), ColourId::new(1)]).unwrap();
    let mut pairs = CorrespondenceSystem::new();
    pairs.insert_pair(v(1), v(2), ColourId::new(0), ColourId::new(1));
    let system = ConstraintSystem::Correspondence {
        lists,
        pairs: pairs.clone(),
    };
    let table = ColourTable::canonical(2);
    let document = document_from_parts(&PrefixGraph::Graph(graph), &system, 2, &table);
    let parsed = parse_instance(&emit_instance(&document)).unwrap();
    match &parsed.system {
        ConstraintSystem::Correspondence { pairs: reparsed, .. } => {
            assert_eq!(reparsed, &pairs);
        }
        ConstraintSystem::List(_) => panic!("correspondence lost in round trip"),
    }
}
