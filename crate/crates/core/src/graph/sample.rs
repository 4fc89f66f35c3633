use rand::Rng as _;

use super::{Graph, Tree};
use crate::error::{invalid, Result};
use crate::rng::rng_from_seed;

/// G(n, p): each of the `n(n-1)/2` pairs is an edge independently with
/// probability `p`.
pub fn sample_er_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("edge probability {p} outside [0,1]"));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Uniform labeled tree on `n` vertices via a uniform Prüfer sequence.
pub fn sample_random_tree(n: usize, seed: u64) -> Result<Tree> {
    if n < 2 {
        return invalid("random tree needs n >= 2");
    }
    let mut rng = rng_from_seed(seed);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(n, &seq)
}

/// Decodes a Prüfer sequence of length `n - 2` into its labeled tree.
pub fn prufer_decode(n: usize, seq: &[usize]) -> Result<Tree> {
    if n < 2 || seq.len() != n - 2 {
        return invalid(format!("Prüfer sequence for n={n} must have length n-2"));
    }
    if let Some(&x) = seq.iter().find(|&&x| x >= n) {
        return invalid(format!("Prüfer entry {x} out of range"));
    }
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    // Linear-time decoding: `ptr` scans for the smallest leaf, `leaf`
    // follows the chain when removing a leaf creates a smaller one.
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    Tree::new(n, edges)
}
