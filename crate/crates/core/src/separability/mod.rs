//! Exact realizability decisions.
//!
//! [`verify_realization`] checks given weights, [`lp_realizability`] decides
//! whether any weights exist, and [`hulls_intersect`] / [`radon_experiment`]
//! probe the convex-hull obstruction behind the lower bounds. Edges sit
//! strictly below the threshold: `D(u, v) < theta` iff `uv` is an edge.
//!
//! The LP works in disagreement units: pair features are the 0/1 indicators
//! of differing coordinates, so a witness `(w, theta)` corresponds to the
//! squared-distance threshold `s^2 * theta`.

mod simplex;

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng as _;

use crate::embedding::{weighted_disagreement, Embedding, FeatureVector, WeightVector};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::rng::{derive_seed, rng_from_seed};

use simplex::{int, LinearSystem, Relation};

/// Open lower end, closed upper end: any `theta` with
/// `lower < theta <= upper` realizes the graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaWindow {
    pub lower: f64,
    /// `f64::INFINITY` when the graph has no non-edges.
    pub upper: f64,
}

impl ThetaWindow {
    pub fn contains(&self, theta: f64) -> bool {
        self.lower < theta && theta <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationReport {
    /// Largest edge distance; `None` without edges.
    pub max_edge_dist: Option<f64>,
    /// Smallest non-edge distance; `None` for the complete graph.
    pub min_nonedge_dist: Option<f64>,
    /// Every edge distance is strictly below every non-edge distance.
    pub separable: bool,
    /// Some `theta > 0` realizes the graph.
    pub realized: bool,
    pub theta_window: Option<ThetaWindow>,
}

impl RealizationReport {
    pub const CSV_HEADER: &'static str = "max_edge_dist,min_nonedge_dist,separable,realized";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{}",
            opt(self.max_edge_dist),
            opt(self.min_nonedge_dist),
            self.separable as u8,
            self.realized as u8
        )
    }

    /// Whether a given threshold (e.g. a theoretical one) realizes the graph.
    pub fn admits(&self, theta: f64) -> bool {
        self.theta_window.is_some_and(|w| w.contains(theta))
    }
}

fn check_inputs(g: &Graph, f: &Embedding) -> Result<()> {
    if g.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), actual: f.n() });
    }
    if g.n() < 2 {
        return invalid("need at least two vertices");
    }
    Ok(())
}

/// All `C(n, 2)` weighted squared distances, classified by adjacency.
pub fn verify_realization(g: &Graph, f: &Embedding, w: &WeightVector) -> Result<RealizationReport> {
    check_inputs(g, f)?;
    if w.len() != f.d() {
        return Err(Error::DimensionMismatch { expected: f.d(), actual: w.len() });
    }
    let s2 = f.span() * f.span();
    let mask = w.mask();
    let n = g.n();
    let mut max_edge: Option<f64> = None;
    let mut min_non: Option<f64> = None;
    for u in 0..n {
        for v in u + 1..n {
            let dist = match &mask {
                Some(m) => s2 * f.disagreements_masked(u, v, m) as f64,
                None => s2 * weighted_disagreement(f, u, v, w),
            };
            if g.has_edge(u, v) {
                max_edge = Some(max_edge.map_or(dist, |m| m.max(dist)));
            } else {
                min_non = Some(min_non.map_or(dist, |m| m.min(dist)));
            }
        }
    }
    let separable = match (max_edge, min_non) {
        (Some(a), Some(b)) => a < b,
        _ => true,
    };
    let lower = max_edge.map_or(0.0, |a| a.max(0.0));
    let upper = min_non.unwrap_or(f64::INFINITY);
    let realized = lower < upper;
    Ok(RealizationReport {
        max_edge_dist: max_edge,
        min_nonedge_dist: min_non,
        separable,
        realized,
        theta_window: realized.then_some(ThetaWindow { lower, upper }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpMode {
    /// `w >= 0` and `theta > 0`: the realization problem itself.
    Nonnegative,
    /// `w` and `theta` unrestricted: pure linear separability of edge
    /// features from non-edge features.
    Free,
}

impl LpMode {
    pub fn name(self) -> &'static str {
        match self {
            LpMode::Nonnegative => "nonneg",
            LpMode::Free => "free",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible,
}

/// Exact weights and threshold in disagreement units, with margin 1:
/// `<w, b(e)> + 1 <= theta` on edges and `<w, b(e')> >= theta + 1` on
/// non-edges, where `b` is the 0/1 disagreement indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub weights: Vec<BigRational>,
    pub theta: BigRational,
}

impl Witness {
    /// Replays every pair constraint in exact arithmetic.
    pub fn check(&self, g: &Graph, f: &Embedding) -> bool {
        if g.n() != f.n() || self.weights.len() != f.d() {
            return false;
        }
        let one = BigRational::one();
        let n = g.n();
        for u in 0..n {
            for v in u + 1..n {
                let mut dot = BigRational::zero();
                for (i, w) in self.weights.iter().enumerate() {
                    if !w.is_zero() && !f.agrees(u, v, i) {
                        dot += w;
                    }
                }
                let ok = if g.has_edge(u, v) {
                    dot + &one <= self.theta
                } else {
                    dot >= &self.theta + &one
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    pub fn weight_vector(&self) -> WeightVector {
        let values: Vec<f64> = self.weights.iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect();
        if self.weights.iter().all(|w| !w.is_negative()) {
            WeightVector::nonnegative(values).unwrap_or_else(|_| WeightVector::free(Vec::new()))
        } else {
            WeightVector::free(values)
        }
    }

    /// The squared-distance threshold for an embedding with span `s`.
    pub fn threshold(&self, span: f64) -> f64 {
        span * span * self.theta.to_f64().unwrap_or(f64::NAN)
    }

    /// `theta <q>` on the first line, then one rational per coordinate.
    pub fn to_text(&self) -> String {
        let mut out = format!("theta {}\n", self.theta);
        for w in &self.weights {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Witness> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_q = |line: usize, s: &str| {
            s.trim().parse::<BigRational>().map_err(|_| Error::Parse {
                line: line + 1,
                msg: format!("not a rational: `{}`", s.trim()),
            })
        };
        let (i, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty witness".into() })?;
        let theta = match first.trim().strip_prefix("theta") {
            Some(rest) => parse_q(i, rest)?,
            None => return Err(Error::Parse { line: i + 1, msg: "expected `theta`".into() }),
        };
        let weights = lines.map(|(i, l)| parse_q(i, l)).collect::<Result<Vec<_>>>()?;
        Ok(Witness { weights, theta })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult {
    pub status: Feasibility,
    pub witness: Option<Witness>,
    pub mode: LpMode,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        self.status == Feasibility::Feasible
    }
}

/// Disagreement pattern of each coordinate over the pair list, as bitsets.
fn coordinate_columns(f: &Embedding, pairs: &[(usize, usize)]) -> Vec<Vec<u64>> {
    let words = pairs.len().div_ceil(64);
    let mut cols = vec![vec![0u64; words]; f.d()];
    for (p, &(u, v)) in pairs.iter().enumerate() {
        for (k, (a, b)) in f.column_words(u).iter().zip(f.column_words(v)).enumerate() {
            let mut diff = a ^ b;
            while diff != 0 {
                let i = k * 64 + diff.trailing_zeros() as usize;
                cols[i][p / 64] |= 1 << (p % 64);
                diff &= diff - 1;
            }
        }
    }
    cols
}

fn column_bit(col: &[u64], p: usize) -> bool {
    col[p / 64] >> (p % 64) & 1 == 1
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Greedy independent columns modulo a prime. Independence mod p implies
/// independence over the rationals, so a full-rank answer is exact.
fn independent_columns_mod_p(cols: &[&Vec<u64>], rows: usize) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for (c, col) in cols.iter().enumerate() {
        if basis.len() == rows {
            break;
        }
        let mut v: Vec<u64> = (0..rows).map(|p| column_bit(col, p) as u64).collect();
        for (pivot, b) in &basis {
            let factor = v[*pivot];
            if factor == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(b) {
                if y != 0 {
                    *x = (*x + PRIME - mul_mod(factor, y)) % PRIME;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[pivot]);
            v.iter_mut().for_each(|x| *x = mul_mod(*x, inv));
            basis.push((pivot, v));
            chosen.push(c);
        }
    }
    chosen
}

/// Indices of a maximal linearly independent subset of `cols`, scanned in
/// order. Stops early once the rank reaches `rows`.
fn independent_columns(cols: &[&Vec<u64>], rows: usize) -> Vec<usize> {
    let fast = independent_columns_mod_p(cols, rows);
    if fast.len() == rows {
        return fast;
    }
    // Reduced basis: vectors with a unit pivot, zero at earlier pivots.
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut chosen = Vec::new();
    for (c, col) in cols.iter().enumerate() {
        if basis.len() == rows {
            break;
        }
        let mut v: Vec<BigRational> =
            (0..rows).map(|p| if column_bit(col, p) { int(1) } else { int(0) }).collect();
        for (pivot, b) in &basis {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            let lead = v[pivot].clone();
            for x in v.iter_mut() {
                *x /= &lead;
            }
            for (_, b) in basis.iter_mut() {
                if !b[pivot].is_zero() {
                    let factor = b[pivot].clone();
                    for (x, y) in b.iter_mut().zip(&v) {
                        if !y.is_zero() {
                            *x -= &factor * y;
                        }
                    }
                }
            }
            basis.push((pivot, v));
            chosen.push(c);
        }
    }
    chosen
}

/// Decides whether some weights `w` (and threshold `theta`) realize `g` on
/// `f`, using an exact rational phase-one simplex.
///
/// Zero columns are dropped and identical columns merged before solving;
/// in free mode the columns are further reduced to an independent set
/// spanning the same space, which leaves feasibility unchanged.
pub fn lp_realizability(g: &Graph, f: &Embedding, mode: LpMode) -> Result<FeasibilityResult> {
    check_inputs(g, f)?;
    let n = g.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let all_cols = if f.span() == 0.0 {
        vec![vec![0u64; pairs.len().div_ceil(64)]; f.d()]
    } else {
        coordinate_columns(f, &pairs)
    };

    let mut seen: HashMap<&Vec<u64>, usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for (i, col) in all_cols.iter().enumerate() {
        if col.iter().all(|&w| w == 0) {
            continue;
        }
        seen.entry(col).or_insert_with(|| {
            reps.push(i);
            i
        });
    }
    if mode == LpMode::Free {
        let cols: Vec<&Vec<u64>> = reps.iter().map(|&i| &all_cols[i]).collect();
        reps = independent_columns(&cols, pairs.len()).into_iter().map(|c| reps[c]).collect();
    }

    // Variables: one weight per representative column, then theta.
    let k = reps.len();
    let free = match mode {
        LpMode::Nonnegative => vec![false; k + 1],
        LpMode::Free => vec![true; k + 1],
    };
    let mut sys = LinearSystem::new(free);
    for (p, &(u, v)) in pairs.iter().enumerate() {
        let mut coeffs: Vec<BigRational> =
            reps.iter().map(|&i| int(column_bit(&all_cols[i], p) as i64)).collect();
        if g.has_edge(u, v) {
            // <w, b> - theta <= -1
            coeffs.push(int(-1));
            sys.add(coeffs, Relation::Le, int(-1));
        } else {
            // <w, b> - theta >= 1
            coeffs.push(int(-1));
            sys.add(coeffs, Relation::Ge, int(1));
        }
    }
    if mode == LpMode::Nonnegative {
        let mut coeffs = vec![int(0); k];
        coeffs.push(int(1));
        sys.add(coeffs, Relation::Ge, int(1));
    }

    Ok(match sys.solve() {
        Some(x) => {
            let mut weights = vec![BigRational::zero(); f.d()];
            for (j, &i) in reps.iter().enumerate() {
                weights[i] = x[j].clone();
            }
            let witness = Witness { weights, theta: x[k].clone() };
            debug_assert!(witness.check(g, f));
            FeasibilityResult { status: Feasibility::Feasible, witness: Some(witness), mode }
        }
        None => FeasibilityResult { status: Feasibility::Infeasible, witness: None, mode },
    })
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("non-finite coordinate {x}")))
}

fn distinct(points: &[FeatureVector]) -> Vec<&FeatureVector> {
    let mut out: Vec<&FeatureVector> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.0 == p.0) {
            out.push(p);
        }
    }
    out
}

/// Whether the convex hulls of two point sets meet, decided exactly by
/// searching for convex combinations `sum l_r r = sum m_b b`.
pub fn hulls_intersect(red: &[FeatureVector], blue: &[FeatureVector]) -> Result<bool> {
    if red.is_empty() || blue.is_empty() {
        return invalid("both point sets must be nonempty");
    }
    let d = red[0].dim();
    if let Some(p) = red.iter().chain(blue).find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: p.dim() });
    }
    let red = distinct(red);
    let blue = distinct(blue);
    if red.iter().any(|r| blue.iter().any(|b| r.0 == b.0)) {
        return Ok(true);
    }
    let to_exact = |ps: &[&FeatureVector]| -> Result<Vec<Vec<BigRational>>> {
        ps.iter().map(|p| p.0.iter().map(|&x| exact(x)).collect()).collect()
    };
    let (r, b) = (to_exact(&red)?, to_exact(&blue)?);
    let (nr, nb) = (r.len(), b.len());
    let mut sys = LinearSystem::new(vec![false; nr + nb]);
    let mut sum_red = vec![int(0); nr + nb];
    let mut sum_blue = vec![int(0); nr + nb];
    for j in 0..nr {
        sum_red[j] = int(1);
    }
    for j in nr..nr + nb {
        sum_blue[j] = int(1);
    }
    sys.add(sum_red, Relation::Eq, int(1));
    sys.add(sum_blue, Relation::Eq, int(1));
    for coord in 0..d {
        let row: Vec<BigRational> = r
            .iter()
            .map(|p| p[coord].clone())
            .chain(b.iter().map(|p| -&p[coord]))
            .collect();
        if row.iter().all(|x| x.is_zero()) {
            continue;
        }
        sys.add(row, Relation::Eq, int(0));
    }
    Ok(sys.solve().is_some())
}

/// Result of [`radon_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadonOutcome {
    pub trials: usize,
    pub intersecting: usize,
    /// Fraction of sampled points equal to an earlier point of the same
    /// trial, averaged over trials.
    pub duplicate_rate: f64,
}

impl RadonOutcome {
    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.intersecting as f64 / self.trials as f64
        }
    }
}

impl fmt::Display for RadonOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} intersecting ({:.4}), duplicate rate {:.4}",
            self.intersecting,
            self.trials,
            self.fraction(),
            self.duplicate_rate
        )
    }
}

/// Samples `m` points from `{0,1}^d` with replacement.
pub fn sample_cube_points(d: usize, m: usize, seed: u64) -> Vec<FeatureVector> {
    let mut rng = rng_from_seed(seed);
    (0..m)
        .map(|_| FeatureVector((0..d).map(|_| if rng.gen::<bool>() { 1.0 } else { 0.0 }).collect()))
        .collect()
}

fn split(points: &[FeatureVector], red_mask: impl Fn(usize) -> bool) -> (Vec<FeatureVector>, Vec<FeatureVector>) {
    let mut red = Vec::new();
    let mut blue = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if red_mask(i) {
            red.push(p.clone());
        } else {
            blue.push(p.clone());
        }
    }
    (red, blue)
}

/// Whether one coloring has intersecting hulls; an empty class never does.
pub fn coloring_intersects(points: &[FeatureVector], red_mask: impl Fn(usize) -> bool) -> Result<bool> {
    let (red, blue) = split(points, red_mask);
    if red.is_empty() || blue.is_empty() {
        return Ok(false);
    }
    hulls_intersect(&red, &blue)
}

/// One Radon trial: `m` points from `{0,1}^d` (stream 0 of `trial_seed`)
/// and a fair coloring (stream 1). Returns whether the color classes have
/// intersecting hulls and how many points repeat an earlier one.
pub fn radon_trial(d: usize, m: usize, trial_seed: u64) -> Result<(bool, usize)> {
    if d == 0 || m < 2 {
        return invalid("radon experiment needs d >= 1 and m >= 2");
    }
    let points = sample_cube_points(d, m, derive_seed(trial_seed, 0));
    let duplicates = m - distinct(&points).len();
    let mut rng = rng_from_seed(derive_seed(trial_seed, 1));
    let colors: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
    Ok((coloring_intersects(&points, |i| colors[i])?, duplicates))
}

/// Random points in `{0,1}^d` with independent fair colorings, counting
/// trials whose color classes have intersecting hulls. Trial `t` uses
/// `derive_seed(seed, t)`.
pub fn radon_experiment(d: usize, m: usize, trials: usize, seed: u64) -> Result<RadonOutcome> {
    if d == 0 || m < 2 {
        return invalid("radon experiment needs d >= 1 and m >= 2");
    }
    let mut intersecting = 0;
    let mut dup_total = 0.0;
    for t in 0..trials {
        let (hit, dups) = radon_trial(d, m, derive_seed(seed, t as u64))?;
        intersecting += hit as usize;
        dup_total += dups as f64 / m as f64;
    }
    Ok(RadonOutcome {
        trials,
        intersecting,
        duplicate_rate: if trials == 0 { 0.0 } else { dup_total / trials as f64 },
    })
}

/// Number of the `2^m` colorings of `points` with intersecting hulls.
pub fn radon_exhaustive(points: &[FeatureVector]) -> Result<usize> {
    let m = points.len();
    if m > 20 {
        return invalid("exhaustive enumeration is limited to 20 points");
    }
    let mut count = 0;
    for mask in 0u32..(1 << m) {
        if coloring_intersects(points, |i| mask >> i & 1 == 1)? {
            count += 1;
        }
    }
    Ok(count)
}
