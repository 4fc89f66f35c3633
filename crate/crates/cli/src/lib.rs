//! Experiment harness behind the `randreal` binary.
//!
//! Every experiment is a grid of `(n, d)` cells, each run for a number of
//! independent trials. Trial `t` draws all of its randomness from
//! `derive_seed(seed, t)`: stream 0 for the graph or tree, 1 for the
//! embedding, 2 for the member draws of the graph census. Results are
//! aggregated by trial index, so any `--jobs` value gives the same rows.

pub mod harness;

pub use harness::{
    run_experiment, run_graph_sweep, run_lowerbound_experiment, run_tree_sweep, trial_seed,
    write_rows, ExperimentConfig, ExperimentKind, FamilyKind, HarnessError, SweepRow, TrialOutcome,
};
