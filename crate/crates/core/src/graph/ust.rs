use rand::Rng as _;

use super::{Graph, Tree};
use crate::error::{invalid, Result};
use crate::rng::{rng_from_seed, Rng};

/// Uniform spanning tree of a connected graph (Wilson's loop-erased
/// random walk algorithm, rooted at vertex 0).
pub fn uniform_spanning_tree(g: &Graph, seed: u64) -> Result<Tree> {
    let mut rng = rng_from_seed(seed);
    uniform_spanning_tree_with(g, &mut rng)
}

pub(crate) fn uniform_spanning_tree_with(g: &Graph, rng: &mut Rng) -> Result<Tree> {
    let edges = ust_edges(g, rng)?;
    Tree::new(g.n(), edges)
}

/// Edge list of a uniform spanning tree, without building a [`Tree`].
pub(crate) fn ust_edges(g: &Graph, rng: &mut Rng) -> Result<Vec<(usize, usize)>> {
    let n = g.n();
    if n == 0 || !g.is_connected() {
        return invalid("uniform spanning tree needs a connected graph");
    }
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[0] = true;
    for start in 1..n {
        // Random walk until the tree is hit; overwriting `next` erases loops.
        let mut u = start;
        while !in_tree[u] {
            let nbrs = g.neighbors(u);
            next[u] = nbrs[rng.gen_range(0..nbrs.len())];
            u = next[u];
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u];
        }
    }
    Ok((1..n).map(|v| (v, next[v])).collect())
}
