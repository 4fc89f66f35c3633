//! Graph realization by running the census on acyclic subgraphs drawn from
//! a covering family, plus the dimension predictors that go with it.
//!
//! A member is drawn independently for every coordinate, and the census at
//! that coordinate tallies only the member's edges. Families with a single
//! member (a tree's own partition) never touch the random stream, so on
//! trees the result is bit-identical to [`realize_tree`](crate::realize_tree).

use rand::Rng as _;

use crate::embedding::{Embedding, WeightVector};
use crate::error::{invalid, Error, Result};
use crate::graph::ust::ust_edges;
use crate::graph::{effective_resistance, forest_partition, ForestFamily, Graph};
use crate::rng::{rng_from_seed, Rng};
use crate::tree_realizer::{
    census_coordinate, CensusParams, CensusTrace, CensusVariant, CoordinateCensus,
    TREE_DIMENSION_CONSTANT,
};

/// Which acyclic family covers the graph.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// Edge-disjoint forests from [`forest_partition`]; `r(e) = 1/k`.
    ForestPartition,
    /// All spanning trees, drawn uniformly; `r(e) = effres(e)`. Connected
    /// graphs only.
    SpanningTrees,
    /// A caller-supplied family over the host's edge indices.
    Explicit(ForestFamily),
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::ForestPartition => "forest",
            FamilySpec::SpanningTrees => "ust",
            FamilySpec::Explicit(_) => "explicit",
        }
    }
}

/// Draws members of a family for one host graph.
#[derive(Debug, Clone)]
pub struct FamilySampler<'g> {
    host: &'g Graph,
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Members { members: Vec<Vec<(usize, usize)>>, r_min: Option<f64> },
    SpanningTrees { r_min: Option<f64> },
}

impl<'g> FamilySampler<'g> {
    pub fn new(host: &'g Graph, spec: &FamilySpec) -> Result<Self> {
        let from_family = |fam: &ForestFamily| {
            let members = (0..fam.len()).map(|i| fam.member_edges(host, i)).collect();
            SamplerKind::Members { members, r_min: fam.r_min() }
        };
        let kind = match spec {
            FamilySpec::ForestPartition => from_family(&forest_partition(host)),
            FamilySpec::Explicit(fam) => {
                if fam.inclusion().len() != host.m() {
                    return invalid("explicit family was built for a different host graph");
                }
                from_family(fam)
            }
            FamilySpec::SpanningTrees => {
                if host.n() == 0 || !host.is_connected() {
                    return invalid("spanning-tree family needs a connected graph");
                }
                let r_min = if host.m() == 0 {
                    None
                } else {
                    effective_resistance(host)?.min_over_edges(host)
                };
                SamplerKind::SpanningTrees { r_min }
            }
        };
        Ok(FamilySampler { host, kind })
    }

    /// Number of members, when the family is listed explicitly.
    pub fn len(&self) -> Option<usize> {
        match &self.kind {
            SamplerKind::Members { members, .. } => Some(members.len()),
            SamplerKind::SpanningTrees { .. } => None,
        }
    }

    /// Minimum per-edge inclusion probability `r`.
    pub fn r_min(&self) -> Option<f64> {
        match &self.kind {
            SamplerKind::Members { r_min, .. } | SamplerKind::SpanningTrees { r_min } => *r_min,
        }
    }

    /// Draws a member with at least one edge. Returns its index for listed
    /// families. Must not be called on an edgeless host.
    pub fn draw(&self, rng: &mut Rng) -> (Option<usize>, Vec<(usize, usize)>) {
        match &self.kind {
            SamplerKind::Members { members, .. } => {
                if members.len() == 1 {
                    return (Some(0), members[0].clone());
                }
                loop {
                    let i = rng.gen_range(0..members.len());
                    if !members[i].is_empty() {
                        return (Some(i), members[i].clone());
                    }
                }
            }
            SamplerKind::SpanningTrees { .. } => {
                (None, ust_edges(self.host, rng).expect("host checked connected"))
            }
        }
    }
}

/// Output of [`realize_graph`].
#[derive(Debug, Clone, PartialEq)]
pub struct GraphRealization {
    pub weights: WeightVector,
    pub trace: CensusTrace,
    /// Member index used at each coordinate (listed families only).
    pub member_per_coordinate: Option<Vec<usize>>,
    /// Number of members in a listed family.
    pub family_size: Option<usize>,
    pub r_min: Option<f64>,
}

/// Boolean weights for `g` on `f`: at every coordinate draw a member `A` of
/// the family and apply the census rule to `A`'s edges (denominator `|A|`,
/// margin `alpha / sqrt(n)` with `n = |V|`). An edgeless graph gets the
/// all-ones vector, which realizes it whenever `f` is injective.
pub fn realize_graph(
    g: &Graph,
    f: &Embedding,
    family: &FamilySpec,
    params: &CensusParams,
    seed: u64,
) -> Result<GraphRealization> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), actual: f.n() });
    }
    let disagreement = match params.variant() {
        CensusVariant::Agreement => false,
        CensusVariant::Disagreement => true,
        CensusVariant::RandomSample { .. } => {
            return invalid("the random-sample strategy is only defined for trees")
        }
    };
    let sampler = FamilySampler::new(g, family)?;
    let d = f.d();
    if g.m() == 0 {
        let coords = vec![CoordinateCensus { agree: 0, edges: 0, selected: true }; d];
        return Ok(GraphRealization {
            weights: WeightVector::ones(d),
            trace: CensusTrace::from_coords(coords),
            member_per_coordinate: sampler.len().map(|_| Vec::new()),
            family_size: sampler.len(),
            r_min: None,
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut ids = Vec::new();
    let mut coords = Vec::with_capacity(d);
    for i in 0..d {
        let (id, edges) = sampler.draw(&mut rng);
        ids.extend(id);
        coords.push(census_coordinate(f, &edges, i, g.n(), params.alpha(), disagreement));
    }
    let trace = CensusTrace::from_coords(coords);
    Ok(GraphRealization {
        weights: trace.weights(),
        trace,
        member_per_coordinate: sampler.len().map(|_| ids),
        family_size: sampler.len(),
        r_min: sampler.r_min(),
    })
}

/// Which graph the convenience wrapper ran the census on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Graph,
    Complement,
}

/// Realizes `g` through whichever of `g` and its complement has the smaller
/// forest partition. On the complement side the disagreement census is
/// used, which targets the complement of the complement, i.e. `g`.
pub fn realize_graph_smaller_side(
    g: &Graph,
    f: &Embedding,
    params: &CensusParams,
    seed: u64,
) -> Result<(GraphRealization, Side)> {
    let comp = g.complement();
    let k_g = forest_partition(g).len();
    let k_c = forest_partition(&comp).len();
    if k_c < k_g {
        let params = params.with_variant(CensusVariant::Disagreement);
        Ok((realize_graph(&comp, f, &FamilySpec::ForestPartition, &params, seed)?, Side::Complement))
    } else {
        Ok((realize_graph(g, f, &FamilySpec::ForestPartition, params, seed)?, Side::Graph))
    }
}

/// `ceil(864 (n / r_min^2) ln n)`; the multiplier is inherited from the tree
/// bound (the general bound leaves it unstated).
pub fn predict_dimension_graph(n: usize, r_min: f64) -> Result<u64> {
    predict_dimension_graph_with(n, r_min, TREE_DIMENSION_CONSTANT)
}

pub fn predict_dimension_graph_with(n: usize, r_min: f64, multiplier: f64) -> Result<u64> {
    if !(r_min > 0.0 && r_min <= 1.0) {
        return invalid(format!("r_min must lie in (0, 1], got {r_min}"));
    }
    if n < 2 {
        return invalid("dimension prediction needs n >= 2");
    }
    let n = n as f64;
    Ok((multiplier * n / (r_min * r_min) * n.ln()).ceil() as u64)
}

/// Worst case over graphs with `m` edges, using `a <= ceil(sqrt(m/2))`.
/// Returns 0 for `m = 0`: an edgeless graph needs no census at all.
pub fn worst_case_dimension(n: usize, m: usize) -> Result<u64> {
    if m == 0 {
        return Ok(0);
    }
    predict_dimension_graph(n, 1.0 / worst_case_arboricity(m) as f64)
}

/// `ceil(sqrt(m / 2))`, computed on integers.
pub fn worst_case_arboricity(m: usize) -> usize {
    // smallest a with 2 a^2 >= m
    let mut a = ((m as f64 / 2.0).sqrt()) as usize;
    while 2 * a * a < m {
        a += 1;
    }
    while a > 0 && 2 * (a - 1) * (a - 1) >= m {
        a -= 1;
    }
    a
}
