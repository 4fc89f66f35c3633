//! Census strategy for trees and the analytic quantities behind it.
//!
//! For each coordinate `i` the census counts the tree edges whose
//! endpoints agree there, `p_i = agree / |E|`, and selects the coordinate
//! (`w_i = 1`) when `1/2 + alpha/sqrt(n) <= p_i <= 3/4`. Both bounds are
//! inclusive and are compared exactly on the integer counts.

mod analysis;

pub use analysis::{
    binomial_tail_estimate, dimension_from_gap, empirical_q, gap_lower_bound,
    path_agreement_frequency, pr_agree_predicted, required_dimension_tree, theoretical_threshold,
    Estimate, TREE_DIMENSION_CONSTANT,
};

use std::fmt::Write as _;

use rand::Rng as _;

use crate::embedding::{Embedding, WeightVector};
use crate::error::{invalid, Error, Result};
use crate::graph::Tree;
use crate::rng::rng_from_seed;

pub const DEFAULT_ALPHA: f64 = 0.25;

/// Which edges the census tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusVariant {
    /// Select when enough edges agree; realizes the tree itself.
    Agreement,
    /// Select when enough edges disagree; realizes the complement.
    Disagreement,
    /// Per coordinate, sample one edge uniformly and select iff it agrees.
    RandomSample { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusParams {
    alpha: f64,
    variant: CensusVariant,
}

impl CensusParams {
    pub fn new(alpha: f64, variant: CensusVariant) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 0.5) {
            return invalid(format!("alpha must lie in (0, 1/2), got {alpha}"));
        }
        Ok(CensusParams { alpha, variant })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn variant(&self) -> CensusVariant {
        self.variant
    }

    pub fn with_variant(self, variant: CensusVariant) -> Self {
        CensusParams { variant, ..self }
    }
}

impl Default for CensusParams {
    fn default() -> Self {
        CensusParams { alpha: DEFAULT_ALPHA, variant: CensusVariant::Agreement }
    }
}

/// Census outcome at one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoordinateCensus {
    pub agree: u32,
    pub edges: u32,
    pub selected: bool,
}

/// Per-coordinate census record of one run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CensusTrace {
    coords: Vec<CoordinateCensus>,
}

impl CensusTrace {
    pub(crate) fn from_coords(coords: Vec<CoordinateCensus>) -> Self {
        CensusTrace { coords }
    }

    pub fn coordinates(&self) -> &[CoordinateCensus] {
        &self.coords
    }

    pub fn selected_count(&self) -> usize {
        self.coords.iter().filter(|c| c.selected).count()
    }

    /// Realized selection rate `#selected / d`.
    pub fn q_hat(&self) -> f64 {
        if self.coords.is_empty() {
            0.0
        } else {
            self.selected_count() as f64 / self.coords.len() as f64
        }
    }

    pub fn weights(&self) -> WeightVector {
        WeightVector::boolean(&self.coords.iter().map(|c| c.selected).collect::<Vec<_>>())
    }

    /// CSV with columns `coordinate,agree_count,p_num,p_den,selected`;
    /// `p_num/p_den` is the agreeing fraction in lowest terms.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("coordinate,agree_count,p_num,p_den,selected\n");
        for (i, c) in self.coords.iter().enumerate() {
            let g = gcd(c.agree, c.edges).max(1);
            writeln!(out, "{i},{},{},{},{}", c.agree, c.agree / g, c.edges / g, u8::from(c.selected))
                .unwrap();
        }
        out
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `1/2 + alpha/sqrt(n) <= count/edges <= 3/4`, decided on integers.
///
/// The lower bound is squared: `(2 count - edges)^2 * n >= 4 edges^2 alpha^2`,
/// exact whenever `alpha` is dyadic (e.g. the default 1/4).
pub fn in_census_window(count: u32, edges: u32, n: usize, alpha: f64) -> bool {
    if edges == 0 {
        return false;
    }
    let (c, m) = (count as u64, edges as u64);
    if 4 * c > 3 * m || 2 * c < m {
        return false;
    }
    let excess = (2 * c - m) as f64;
    excess * excess * n as f64 >= 4.0 * (m * m) as f64 * alpha * alpha
}

/// Census of one coordinate over an arbitrary acyclic edge set. `n` is the
/// vertex count of the host graph and enters only through `alpha/sqrt(n)`.
pub(crate) fn census_coordinate(
    f: &Embedding,
    edges: &[(usize, usize)],
    i: usize,
    n: usize,
    alpha: f64,
    disagreement: bool,
) -> CoordinateCensus {
    let agree = edges.iter().filter(|&&(u, v)| f.agrees(u, v, i)).count() as u32;
    let m = edges.len() as u32;
    let tally = if disagreement { m - agree } else { agree };
    CoordinateCensus { agree, edges: m, selected: in_census_window(tally, m, n, alpha) }
}

fn check_tree_input(t: &Tree, f: &Embedding) -> Result<()> {
    if t.n() < 2 {
        return invalid("tree realization needs at least 2 vertices");
    }
    if f.n() != t.n() {
        return Err(Error::DimensionMismatch { expected: t.n(), actual: f.n() });
    }
    Ok(())
}

/// Boolean weights for `t` on `f` by the census rule, with its trace.
pub fn realize_tree(
    t: &Tree,
    f: &Embedding,
    params: &CensusParams,
) -> Result<(WeightVector, CensusTrace)> {
    check_tree_input(t, f)?;
    let disagreement = match params.variant {
        CensusVariant::Agreement => false,
        CensusVariant::Disagreement => true,
        CensusVariant::RandomSample { seed } => {
            let trace = sampling_trace(t, f, seed);
            return Ok((trace.weights(), trace));
        }
    };
    let coords = (0..f.d())
        .map(|i| census_coordinate(f, t.edges(), i, t.n(), params.alpha, disagreement))
        .collect();
    let trace = CensusTrace::from_coords(coords);
    Ok((trace.weights(), trace))
}

fn sampling_trace(t: &Tree, f: &Embedding, seed: u64) -> CensusTrace {
    let mut rng = rng_from_seed(seed);
    let edges = t.edges();
    let coords = (0..f.d())
        .map(|i| {
            let (u, v) = edges[rng.gen_range(0..edges.len())];
            let agree = f.agrees(u, v, i);
            CoordinateCensus { agree: agree as u32, edges: 1, selected: agree }
        })
        .collect();
    CensusTrace::from_coords(coords)
}

/// Random-sample strategy: per coordinate draw one tree edge uniformly and
/// select the coordinate iff its endpoints agree there.
pub fn realize_tree_sampling(t: &Tree, f: &Embedding, seed: u64) -> Result<WeightVector> {
    check_tree_input(t, f)?;
    Ok(sampling_trace(t, f, seed).weights())
}
