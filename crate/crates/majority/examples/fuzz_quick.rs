//! A quick in-process fuzz run: every finite graph with k-uniform lists
//! admits a majority colouring, so the harness treats any audit failure
//! as an implementation bug and dumps a reproducing instance.
//!
//! ```bash
//! cargo run -p majority --example fuzz_quick
//! ```

use majority::fuzz::{fuzz, FuzzParams};

fn main() {
    for correspondence in [false, true] {
        let params = FuzzParams {
            seed: 2024,
            trials: 200,
            max_order: 6,
            k: 2,
            correspondence,
        };
        let report = fuzz(params).unwrap();
        let mode = if correspondence { "correspondence" } else { "list" };
        println!(
            "{mode} mode: {} trials, {} failures",
            report.trials_run,
            report.failures.len()
        );
        println!("  final-conflict histogram: {:?}", report.conflict_histogram);
        for finding in &report.failures {
            println!("  BUG at trial {}: {}", finding.trial, finding.message);
            println!("{}", majority::instance::emit_instance(&finding.instance));
        }
    }
}
