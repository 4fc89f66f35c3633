//! Threshold realization of graphs on random binary embeddings.
//!
//! Given a graph `G` on `n` vertices and a random map `f: V -> {x,y}^d`,
//! the census algorithms in [`tree_realizer`] and [`graph_realizer`] pick
//! Boolean coordinate weights `w` so that, with high probability, a pair is
//! an edge exactly when its weighted squared distance falls below some
//! threshold. [`separability`] decides the same question exactly with a
//! rational simplex and tests convex-hull intersection for the matching
//! impossibility results.

pub mod embedding;
pub mod error;
pub mod graph;
pub mod graph_realizer;
pub mod rng;
pub mod separability;
pub mod tree_realizer;

pub use embedding::{
    feature_vector, sample_embedding, weighted_l1_distance, weighted_sq_distance, Embedding,
    FeatureVector, WeightMode, WeightVector,
};
pub use error::{Error, Result};
pub use graph::{
    complement, effective_resistance, forest_partition, sample_er_graph, sample_random_tree,
    tree_path_length, uniform_spanning_tree, ForestFamily, Graph, ResistanceTable, Tree,
};
pub use graph_realizer::{
    predict_dimension_graph, realize_graph, worst_case_dimension, FamilySpec, GraphRealization,
};
pub use separability::{
    hulls_intersect, lp_realizability, radon_experiment, verify_realization, FeasibilityResult,
    RealizationReport,
};
pub use tree_realizer::{
    gap_lower_bound, pr_agree_predicted, realize_tree, realize_tree_sampling,
    required_dimension_tree, theoretical_threshold, CensusParams, CensusTrace, CensusVariant,
};
