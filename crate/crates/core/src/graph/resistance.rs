use nalgebra::{DMatrix, SymmetricEigen};

use super::Graph;
use crate::error::{invalid, Result};

/// Relative cutoff below which Laplacian eigenvalues count as zero.
const EIGEN_CUTOFF: f64 = 1e-9;

/// Pairwise effective resistances of a connected graph with unit edge
/// resistances.
#[derive(Debug, Clone)]
pub struct ResistanceTable {
    n: usize,
    values: Vec<f64>,
}

impl ResistanceTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.values[u * self.n + v]
    }

    /// Minimum resistance over the edges of `g`; `None` if `g` has no edges.
    pub fn min_over_edges(&self, g: &Graph) -> Option<f64> {
        g.edges().iter().map(|&(u, v)| self.get(u, v)).reduce(f64::min)
    }
}

/// `effres(u,v) = (e_u - e_v)^T L^+ (e_u - e_v)` via the Moore-Penrose
/// pseudoinverse of the Laplacian, from its symmetric eigendecomposition.
pub fn effective_resistance(g: &Graph) -> Result<ResistanceTable> {
    let n = g.n();
    if n == 0 || !g.is_connected() {
        return invalid("effective resistance needs a connected graph");
    }
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for &(u, v) in g.edges() {
        lap[(u, v)] -= 1.0;
        lap[(v, u)] -= 1.0;
        lap[(u, u)] += 1.0;
        lap[(v, v)] += 1.0;
    }
    let eig = SymmetricEigen::new(lap);
    let max = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let cutoff = EIGEN_CUTOFF * max;
    let mut pinv = DMatrix::<f64>::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= cutoff {
            continue;
        }
        let vk = eig.eigenvectors.column(k);
        pinv += (vk * vk.transpose()) / lambda;
    }
    let mut values = vec![0.0; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let r = pinv[(u, u)] + pinv[(v, v)] - 2.0 * pinv[(u, v)];
            values[u * n + v] = r;
            values[v * n + u] = r;
        }
    }
    Ok(ResistanceTable { n, values })
}
