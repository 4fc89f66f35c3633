//! Closed-form quantities and Monte Carlo estimators for the census
//! strategy. Logarithms are natural throughout.

use rand::Rng as _;

use super::in_census_window;
use crate::error::{invalid, Result};
use crate::rng::rng_from_seed;

/// Multiplier in `d = 864 n ln n`, i.e. `6 / (2 q alpha)^2` at `q = 1/6`,
/// `alpha = 1/4`.
pub const TREE_DIMENSION_CONSTANT: f64 = 864.0;

/// Agreement probability of two vertices `t` edges apart when each edge
/// agrees independently with probability `p`: `(1 + (2p - 1)^t) / 2`.
pub fn pr_agree_predicted(p: f64, t: u32) -> f64 {
    0.5 * (1.0 + (2.0 * p - 1.0).powi(t as i32))
}

/// `s^2 q (2 alpha / sqrt(n)) (1 - alpha / sqrt(n))`.
pub fn gap_lower_bound(s: f64, q: f64, alpha: f64, n: usize) -> f64 {
    let b = alpha / (n as f64).sqrt();
    s * s * q * 2.0 * b * (1.0 - b)
}

/// `ceil(864 n ln n)`; only established for `n >= 20`.
pub fn required_dimension_tree(n: usize) -> Result<u64> {
    if n < 20 {
        return invalid(format!("tree dimension bound needs n >= 20, got {n}"));
    }
    let n = n as f64;
    Ok((TREE_DIMENSION_CONSTANT * n * n.ln()).ceil() as u64)
}

/// `ceil(6 s^4 ln n / delta^2)` for a caller-supplied per-coordinate gap.
pub fn dimension_from_gap(s: f64, delta: f64, n: usize) -> Result<u64> {
    if !(delta > 0.0) || n < 2 {
        return invalid("gap must be positive and n >= 2");
    }
    Ok((6.0 * s.powi(4) * (n as f64).ln() / (delta * delta)).ceil() as u64)
}

/// `theta = d delta / 2` with `delta = gap_lower_bound(s, q_hat, alpha, n)`.
pub fn theoretical_threshold(d: u64, s: f64, n: usize, alpha: f64, q_hat: f64) -> f64 {
    d as f64 * gap_lower_bound(s, q_hat, alpha, n) / 2.0
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl Estimate {
    fn from_hits(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Estimate { mean: p, std_error: (p * (1.0 - p) / samples as f64).sqrt(), samples }
    }

    /// `|mean - value| <= k * std_error`, with a floor on the error so a
    /// degenerate all-hit or no-hit estimate still compares sensibly.
    pub fn within(&self, value: f64, k: f64) -> bool {
        let floor = 1.0 / self.samples as f64;
        (self.mean - value).abs() <= k * self.std_error.max(floor)
    }
}

/// Estimates `q = Pr[w_i = 1]` for one coordinate of a uniformly random
/// embedding of a path on `n` vertices. On a tree the edge agreements are
/// i.i.d. fair coins whatever its shape, so the path stands in for any tree.
pub fn empirical_q(n: usize, alpha: f64, trials: u64, seed: u64) -> Result<Estimate> {
    if n < 2 || trials == 0 {
        return invalid("empirical_q needs n >= 2 and trials >= 1");
    }
    let mut rng = rng_from_seed(seed);
    let edges = (n - 1) as u32;
    let mut hits = 0;
    for _ in 0..trials {
        let mut prev: bool = rng.gen();
        let mut agree = 0u32;
        for _ in 1..n {
            let cur: bool = rng.gen();
            agree += u32::from(cur == prev);
            prev = cur;
        }
        hits += u64::from(in_census_window(agree, edges, n, alpha));
    }
    Ok(Estimate::from_hits(hits, trials))
}

/// Frequency with which the endpoints of a `t`-edge path agree when each
/// edge independently copies its parent's value with probability `p` and
/// flips it otherwise. Values are propagated vertex by vertex.
pub fn path_agreement_frequency(p: f64, t: u32, samples: u64, seed: u64) -> Result<Estimate> {
    if !(0.0..=1.0).contains(&p) || samples == 0 {
        return invalid("need p in [0,1] and samples >= 1");
    }
    let mut rng = rng_from_seed(seed);
    let mut hits = 0;
    for _ in 0..samples {
        let start: bool = rng.gen();
        let mut value = start;
        for _ in 0..t {
            if !rng.gen_bool(p) {
                value = !value;
            }
        }
        hits += u64::from(value == start);
    }
    Ok(Estimate::from_hits(hits, samples))
}

/// Estimates `Pr[Z >= E Z + alpha sqrt(n)]` for `Z ~ Binomial(n - 1, 1/2)`.
pub fn binomial_tail_estimate(n: usize, alpha: f64, samples: u64, seed: u64) -> Result<Estimate> {
    if n < 2 || samples == 0 {
        return invalid("need n >= 2 and samples >= 1");
    }
    let mut rng = rng_from_seed(seed);
    let cut = (n - 1) as f64 / 2.0 + alpha * (n as f64).sqrt();
    let mut hits = 0;
    for _ in 0..samples {
        let z = (1..n).filter(|_| rng.gen::<bool>()).count();
        hits += u64::from(z as f64 >= cut);
    }
    Ok(Estimate::from_hits(hits, samples))
}
