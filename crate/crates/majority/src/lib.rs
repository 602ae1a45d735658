#![forbid(unsafe_code)]

//! Majority (unfriendly-partition style) list- and correspondence-
//! colouring of finite graphs, acyclic digraphs, and finitely presented
//! countable graphs.
//!
//! A colouring is a *(1/k)-majority* colouring when every vertex has at
//! most a `1/k` proportion of its incident edges (out-arcs, for
//! digraphs) in conflict — monochromatic in list mode, a forbidden pair
//! in correspondence mode. The crate provides:
//!
//! - [`solver`]: conflict-descent local search and a one-pass DAG
//!   greedy, both guaranteed majority at parameter `k` for `k`-uniform
//!   lists, plus exhaustive oracles for small instances;
//! - [`constraints`]: list systems, correspondence (bad-pair) systems,
//!   and the exact integer majority audit;
//! - [`restriction`]: shrinking `(l+1)`-lists to `l`-lists while
//!   planting auditable witnesses for designated vertex families, with a
//!   full ledger of the run;
//! - [`tower`]: prefix towers over lazily presented countable graphs —
//!   solve every prefix, stabilise a colouring by repeated majority
//!   vote, and certify it (directly for enclosed finite-degree vertices,
//!   through the witness ledger for declared infinite-degree ones);
//! - [`instance`] and [`cli`]: a JSON instance/result format and the
//!   `majority` binary's subcommands (`solve`, `verify`, `oracle`,
//!   `restrict`, `tower`, `fuzz`, `gen`).
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release -p majority --example unfriendly_partition
//! cargo run --release -p majority --example oracle_sandwich
//! cargo run --release -p majority --example dag_greedy
//! cargo run --release -p majority --example correspondence_cycle
//! cargo run --release -p majority --example sublist_restriction
//! cargo run --release -p majority --example tower_ray
//! cargo run --release -p majority --example tower_star
//! cargo run --release -p majority --example rado_prefixes
//! cargo run --release -p majority --example fuzz_quick
//! ```
//!
//! The same flows are scriptable through the binary:
//!
//! ```bash
//! cargo run --release -p majority -- gen --family star --order 16 > star.json
//! cargo run --release -p majority -- solve --input star.json
//! cargo run --release -p majority -- tower --family star --n-max 256 --t 16 --budget 300
//! ```

pub mod cli;
pub mod constraints;
pub mod fuzz;
pub mod graph;
pub mod instance;
pub mod restriction;
pub mod solver;
pub mod tower;

pub use constraints::{
    verify_majority, Colouring, ColourId, ConstraintSystem, CorrespondenceSystem, ListSystem,
    MajorityReport,
};
pub use graph::{FiniteDigraph, FiniteGraph, VertexId};
pub use solver::{brute_force_optimum, dag_greedy, local_search, SearchTrace};
pub use tower::{CountablePresentation, PrefixGraph};
