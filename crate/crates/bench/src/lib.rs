//! Fixed inputs shared by the benchmarks.

use randreal::{sample_embedding, sample_er_graph, sample_random_tree, Embedding, Graph, Tree};

/// A random tree on `n` vertices with a `d`-dimensional embedding.
pub fn tree_instance(n: usize, d: usize, seed: u64) -> (Tree, Embedding) {
    let t = sample_random_tree(n, seed).expect("n >= 2");
    let f = sample_embedding(n, d, 0.0, 1.0, seed ^ 0x5eed).expect("n, d >= 1");
    (t, f)
}

/// A `G(n, p)` graph with a `d`-dimensional embedding.
pub fn graph_instance(n: usize, p: f64, d: usize, seed: u64) -> (Graph, Embedding) {
    let g = sample_er_graph(n, p, seed).expect("valid p");
    let f = sample_embedding(n, d, 0.0, 1.0, seed ^ 0x5eed).expect("n, d >= 1");
    (g, f)
}
