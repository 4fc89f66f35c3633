//! Exact phase-one simplex over `BigRational`.
//!
//! Decides whether `{x : A x (<=|>=|=) b}` with some variables free and the
//! rest nonnegative is nonempty, and returns a feasible point when it is.
//! Pricing is Dantzig's rule, switching to Bland's rule during long runs
//! of degenerate pivots so the method cannot cycle. Pivots touch only the
//! nonzero entries of the pivot row.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub(crate) struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Relation,
    pub rhs: BigRational,
}

#[derive(Debug, Clone)]
pub(crate) struct LinearSystem {
    pub free: Vec<bool>,
    pub constraints: Vec<Constraint>,
}

pub(crate) fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl LinearSystem {
    pub fn new(free: Vec<bool>) -> Self {
        LinearSystem { free, constraints: Vec::new() }
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, rel: Relation, rhs: BigRational) {
        debug_assert_eq!(coeffs.len(), self.free.len());
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// A feasible point, or `None` when the system is infeasible.
    ///
    /// A floating-point pass proposes either a point (checked exactly) or a
    /// basis, which is then re-solved exactly on its own columns; tall
    /// systems are screened through their Farkas alternative, whose tableau
    /// has one row per variable instead of per constraint. Every verdict is
    /// exact; when the hints fail the full exact simplex decides.
    pub fn solve(&self) -> Option<Vec<BigRational>> {
        let tall = self.constraints.len() > 2 * (self.free.len() + 1);
        let dual = self.farkas_system();
        let certified_infeasible = |d: &LinearSystem| {
            float_phase_one(d, 0.0).is_some_and(|hint| d.restricted(&hint.support).solve_exact().is_some())
        };
        if tall && dual.as_ref().is_some_and(certified_infeasible) {
            return None;
        }
        if let Some(hint) = float_phase_one(self, 1e-7) {
            let rounders: [&dyn Fn(f64) -> Option<BigRational>; 3] =
                [&|v| small_rational(v, 1e-5), &|v| small_rational(v, 1e-9), &BigRational::from_float];
            for round in rounders {
                let x: Option<Vec<BigRational>> = hint.x.iter().map(|&v| round(v)).collect();
                if let Some(x) = x.filter(|x| self.satisfied_by(x)) {
                    return Some(x);
                }
            }
            if let Some(xs) = self.restricted(&hint.support).solve_exact() {
                let mut x = vec![BigRational::zero(); self.free.len()];
                for (v, &j) in xs.into_iter().zip(&hint.support) {
                    x[j] = v;
                }
                return Some(x);
            }
        } else if !tall && dual.as_ref().is_some_and(certified_infeasible) {
            return None;
        }
        if tall && dual.is_some_and(|d| d.solve_exact().is_some()) {
            return None;
        }
        self.solve_exact()
    }

    /// Exact simplex with no hints.
    pub fn solve_exact(&self) -> Option<Vec<BigRational>> {
        Tableau::build(self).phase_one()
    }

    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        if x.len() != self.free.len() || x.iter().zip(&self.free).any(|(v, &free)| !free && v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let mut lhs = BigRational::zero();
            for (a, v) in c.coeffs.iter().zip(x) {
                if !a.is_zero() && !v.is_zero() {
                    lhs += a * v;
                }
            }
            match c.rel {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }

    /// The same system with every variable outside `keep` fixed at zero.
    fn restricted(&self, keep: &[usize]) -> LinearSystem {
        let mut sys = LinearSystem::new(keep.iter().map(|&j| self.free[j]).collect());
        for c in &self.constraints {
            sys.add(keep.iter().map(|&j| c.coeffs[j].clone()).collect(), c.rel, c.rhs.clone());
        }
        sys
    }

    /// The Farkas alternative: solvable exactly when `self` is not. With
    /// every row written as `a x >= b` (equalities keep a free multiplier),
    /// it asks for `y` with `y^T A_j <= 0` on nonnegative columns,
    /// `y^T A_j = 0` on free ones and `y^T b = 1`. `None` when `b = 0`, in
    /// which case `self` is trivially feasible.
    pub fn farkas_system(&self) -> Option<LinearSystem> {
        let free_y: Vec<bool> = self.constraints.iter().map(|c| c.rel == Relation::Eq).collect();
        let sign = |c: &Constraint| if c.rel == Relation::Le { int(-1) } else { int(1) };
        let b: Vec<BigRational> = self.constraints.iter().map(|c| &c.rhs * sign(c)).collect();
        if b.iter().all(|x| x.is_zero()) {
            return None;
        }
        let mut dual = LinearSystem::new(free_y);
        for (j, &free) in self.free.iter().enumerate() {
            let row: Vec<BigRational> =
                self.constraints.iter().map(|c| &c.coeffs[j] * sign(c)).collect();
            if row.iter().all(|a| a.is_zero()) {
                continue;
            }
            dual.add(row, if free { Relation::Eq } else { Relation::Le }, int(0));
        }
        dual.add(b, Relation::Eq, int(1));
        Some(dual)
    }
}

/// The first continued-fraction convergent of `v` within relative
/// distance `rel` of it.
fn small_rational(v: f64, rel: f64) -> Option<BigRational> {
    if !v.is_finite() || v.abs() > 1e12 {
        return None;
    }
    let tol = rel * v.abs().max(1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut rest = v;
    for _ in 0..40 {
        let a = rest.floor();
        let (p2, q2) = (a as i64 * p1 + p0, a as i64 * q1 + q0);
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (p1 as f64 / q1 as f64 - v).abs() <= tol || q1 > 1 << 40 {
            break;
        }
        let frac = rest - a;
        if frac == 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}

struct FloatHint {
    x: Vec<f64>,
    /// Variables that ended in the basis.
    support: Vec<usize>,
}

/// Floating-point phase one on the system with inequality rows tightened
/// by `tighten * (1 + |rhs|)`. Only a hint: `None` means "no suggestion".
fn float_phase_one(sys: &LinearSystem, tighten: f64) -> Option<FloatHint> {
    const EPS: f64 = 1e-9;
    const COST_EPS: f64 = 1e-7;
    const PIVOT_EPS: f64 = 1e-7;
    let nvars = sys.free.len();
    let mut col_var: Vec<(usize, f64)> = Vec::new();
    for (j, &free) in sys.free.iter().enumerate() {
        col_var.push((j, 1.0));
        if free {
            col_var.push((j, -1.0));
        }
    }
    let structural = col_var.len();
    let m = sys.constraints.len();
    let n_slack = sys.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
    let width = structural + n_slack + m;
    let stride = width + 1;
    let mut t = vec![0.0f64; m * stride];
    let mut basis = vec![0usize; m];
    let mut next_slack = structural;
    for (i, c) in sys.constraints.iter().enumerate() {
        let row = &mut t[i * stride..(i + 1) * stride];
        let mut rhs = c.rhs.to_f64()?;
        match c.rel {
            Relation::Le => rhs -= tighten * (1.0 + rhs.abs()),
            Relation::Ge => rhs += tighten * (1.0 + rhs.abs()),
            Relation::Eq => {}
        }
        for (k, &(j, sgn)) in col_var.iter().enumerate() {
            row[k] = sgn * c.coeffs[j].to_f64()?;
        }
        match c.rel {
            Relation::Le => row[next_slack] = 1.0,
            Relation::Ge => row[next_slack] = -1.0,
            Relation::Eq => {}
        }
        if c.rel != Relation::Eq {
            next_slack += 1;
        }
        row[width] = rhs;
        if rhs < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
        }
        // Every row gets an artificial; it is cheap and keeps the start simple.
        row[structural + n_slack + i] = 1.0;
        basis[i] = structural + n_slack + i;
    }
    let is_art = |j: usize| j >= structural + n_slack;
    let mut cost = vec![0.0f64; stride];
    for i in 0..m {
        for j in 0..stride {
            if !is_art(j) || j == width {
                cost[j] -= t[i * stride + j];
            }
        }
    }
    let max_iter = 50 * (m + width) + 1000;
    let mut degenerate_run = 0;
    for _ in 0..max_iter {
        let mut entering = None;
        let mut best = -COST_EPS;
        for j in 0..width {
            if is_art(j) || cost[j] >= -COST_EPS {
                continue;
            }
            if degenerate_run >= 32 {
                entering = Some(j);
                break;
            }
            if cost[j] < best {
                best = cost[j];
                entering = Some(j);
            }
        }
        let Some(e) = entering else {
            if -cost[width] > 1e-7 {
                return None;
            }
            let mut x = vec![0.0; nvars];
            let mut support = Vec::new();
            for (i, &b) in basis.iter().enumerate() {
                if b < structural {
                    let (j, sgn) = col_var[b];
                    x[j] += sgn * t[i * stride + width];
                    support.push(j);
                }
            }
            support.sort_unstable();
            support.dedup();
            return Some(FloatHint { x, support });
        };
        // Harris two-pass ratio test: bound the step with a small
        // feasibility tolerance, then take the largest pivot within it.
        let mut bound = f64::INFINITY;
        for i in 0..m {
            let a = t[i * stride + e];
            if a > PIVOT_EPS {
                bound = bound.min((t[i * stride + width].max(0.0) + EPS) / a);
            }
        }
        if bound == f64::INFINITY {
            return None;
        }
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = t[i * stride + e];
            if a > PIVOT_EPS && t[i * stride + width].max(0.0) / a <= bound {
                if leave.is_none_or(|(li, la)| a > la || (a == la && basis[i] < basis[li])) {
                    leave = Some((i, a));
                }
            }
        }
        let (r, a) = leave.expect("bound comes from some row");
        let ratio = t[r * stride + width].max(0.0) / a;
        degenerate_run = if ratio.abs() <= EPS { degenerate_run + 1 } else { 0 };
        let piv = t[r * stride + e];
        for v in &mut t[r * stride..(r + 1) * stride] {
            *v /= piv;
        }
        let pivot_row: Vec<f64> = t[r * stride..(r + 1) * stride].to_vec();
        let nz: Vec<usize> = (0..stride).filter(|&j| pivot_row[j] != 0.0).collect();
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = t[i * stride + e];
            if f == 0.0 {
                continue;
            }
            for &j in &nz {
                t[i * stride + j] -= f * pivot_row[j];
            }
            t[i * stride + e] = 0.0;
        }
        let f = cost[e];
        for &j in &nz {
            cost[j] -= f * pivot_row[j];
        }
        cost[e] = 0.0;
        basis[r] = e;
    }
    None
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Col {
    /// `x_j` (or its positive part if free).
    Pos(usize),
    /// Negative part of free `x_j`.
    Neg(usize),
    Slack,
    Artificial,
}

struct Tableau {
    /// rows x (cols + 1); last entry of each row is the right-hand side.
    rows: Vec<Vec<BigRational>>,
    /// Reduced costs of the phase-one objective, last entry is -objective.
    cost: Vec<BigRational>,
    kinds: Vec<Col>,
    basis: Vec<usize>,
    nvars: usize,
}

impl Tableau {
    fn build(sys: &LinearSystem) -> Tableau {
        let nvars = sys.free.len();
        let mut kinds = Vec::new();
        for (j, &free) in sys.free.iter().enumerate() {
            kinds.push(Col::Pos(j));
            if free {
                kinds.push(Col::Neg(j));
            }
        }
        let structural = kinds.len();
        // Normalize every row to a nonnegative right-hand side.
        let rows_in: Vec<(Vec<BigRational>, Relation, BigRational)> = sys
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|a| -a).collect(), rel, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.rel, c.rhs.clone())
                }
            })
            .collect();
        let n_slack = rows_in.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows_in.iter().filter(|r| r.1 != Relation::Le).count();
        kinds.extend(std::iter::repeat_n(Col::Slack, n_slack));
        kinds.extend(std::iter::repeat_n(Col::Artificial, n_art));
        let width = kinds.len();
        let mut rows = Vec::with_capacity(rows_in.len());
        let mut basis = Vec::with_capacity(rows_in.len());
        let (mut next_slack, mut next_art) = (structural, structural + n_slack);
        for (coeffs, rel, rhs) in rows_in {
            let mut row = vec![BigRational::zero(); width + 1];
            let mut k = 0;
            for (j, a) in coeffs.into_iter().enumerate() {
                if sys.free[j] {
                    row[k + 1] = -&a;
                    row[k] = a;
                    k += 2;
                } else {
                    row[k] = a;
                    k += 1;
                }
            }
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = BigRational::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -BigRational::one();
                    next_slack += 1;
                    row[next_art] = BigRational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = BigRational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        // Phase-one objective: minimize the sum of artificials. Reduced
        // cost of column j is c_j minus the sum over artificial-basic rows.
        let mut cost = vec![BigRational::zero(); width + 1];
        for (j, kind) in kinds.iter().enumerate() {
            if *kind == Col::Artificial {
                cost[j] = BigRational::one();
            }
        }
        for (r, &b) in basis.iter().enumerate() {
            if kinds[b] == Col::Artificial {
                for (c, v) in cost.iter_mut().zip(&rows[r]) {
                    if !v.is_zero() {
                        *c -= v;
                    }
                }
            }
        }
        Tableau { rows, cost, kinds, basis, nvars }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.rows[r][e].clone();
        if !piv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
        }
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let factor = row[e].clone();
            for &j in &nz {
                row[j] -= &factor * &pivot_row[j];
            }
        }
        if !self.cost[e].is_zero() {
            let factor = self.cost[e].clone();
            for &j in &nz {
                self.cost[j] -= &factor * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = e;
    }

    fn phase_one(mut self) -> Option<Vec<BigRational>> {
        const STALL: usize = 16;
        let width = self.kinds.len();
        let mut degenerate_run = 0;
        loop {
            let candidates =
                (0..width).filter(|&j| self.kinds[j] != Col::Artificial && self.cost[j].is_negative());
            let entering = if degenerate_run >= STALL {
                candidates.min()
            } else {
                candidates.fold(None, |best: Option<usize>, j| match best {
                    Some(b) if self.cost[b] <= self.cost[j] => Some(b),
                    _ => Some(j),
                })
            };
            let Some(e) = entering else { break };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = &row[width] / &row[e];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            // The phase-one objective is bounded below by zero.
            let (r, ratio) = best.expect("phase-one LP cannot be unbounded");
            if ratio.is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, e);
        }
        // -objective sits in the last cost entry.
        if !self.cost[width].is_zero() {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.nvars];
        for (r, &b) in self.basis.iter().enumerate() {
            let val = &self.rows[r][width];
            match self.kinds[b] {
                Col::Pos(j) => x[j] += val,
                Col::Neg(j) => x[j] -= val,
                _ => {}
            }
        }
        Some(x)
    }
}
