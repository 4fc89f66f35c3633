use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use randreal::graph_realizer::FamilySpec;
use randreal::rng::derive_seed;
use randreal::separability::{radon_trial, LpMode};
use randreal::{
    lp_realizability, realize_graph, realize_tree, sample_embedding, sample_er_graph,
    sample_random_tree, verify_realization, CensusParams, CensusVariant, Graph, RealizationReport,
    Tree,
};

/// Version of the CSV layout, written as the first header cell.
pub const SCHEMA_VERSION: u32 = 1;

/// Seed of the sampled host graph in a graph sweep; out of reach of any
/// trial index so it never collides with a trial seed.
const GRAPH_STREAM: u64 = u64::MAX;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl HarnessError {
    /// 1 usage, 2 I/O, 3 invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 1,
            HarnessError::Io(_) => 2,
            HarnessError::Invariant(_) => 3,
        }
    }
}

impl From<randreal::Error> for HarnessError {
    fn from(e: randreal::Error) -> Self {
        match e {
            randreal::Error::Io(_) | randreal::Error::Parse { .. } => HarnessError::Io(e.to_string()),
            _ => HarnessError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Census on trees, verified by `verify_realization`.
    TreeSweep,
    /// Census through a forest family on a general graph.
    GraphSweep,
    /// `G(n, p)` graphs against the LP oracle.
    RandomGraph,
    /// Random labeled trees against the LP oracle.
    RandomTree,
    /// Hull intersection of randomly colored cube points.
    Radon,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::TreeSweep => "tree",
            ExperimentKind::GraphSweep => "graph",
            ExperimentKind::RandomGraph => "random-graph",
            ExperimentKind::RandomTree => "random-tree",
            ExperimentKind::Radon => "radon",
        }
    }

    /// What a trial counts as a success.
    pub fn event(self) -> &'static str {
        match self {
            ExperimentKind::TreeSweep | ExperimentKind::GraphSweep => "realized",
            ExperimentKind::RandomGraph | ExperimentKind::RandomTree => "infeasible",
            ExperimentKind::Radon => "intersect",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Forest,
    Ust,
}

impl FamilyKind {
    pub fn spec(self) -> FamilySpec {
        match self {
            FamilyKind::Forest => FamilySpec::ForestPartition,
            FamilyKind::Ust => FamilySpec::SpanningTrees,
        }
    }

    pub fn name(self) -> &'static str {
        self.spec().name()
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    /// Strictly increasing dimensions, one row each.
    pub d_grid: Vec<usize>,
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    pub family: FamilyKind,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; 0 means one per core, 1 runs serially.
    pub jobs: usize,
    /// Fixed input graph; otherwise graphs are sampled.
    pub graph: Option<Graph>,
    /// Edge probability of sampled `G(n, p)` graphs.
    pub edge_probability: f64,
    pub mode: LpMode,
    /// Points per Radon trial.
    pub points: usize,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, n: usize, d_grid: Vec<usize>) -> Self {
        ExperimentConfig {
            kind,
            n,
            d_grid,
            x: 0.0,
            y: 1.0,
            alpha: 0.25,
            family: FamilyKind::Forest,
            trials: 50,
            seed: 0,
            jobs: 0,
            graph: None,
            edge_probability: 0.5,
            mode: LpMode::Free,
            points: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |msg: String| Err(HarnessError::Usage(msg));
        if self.trials == 0 {
            return usage("trials must be at least 1".into());
        }
        if self.d_grid.is_empty() || self.d_grid[0] == 0 {
            return usage("dimensions must be positive".into());
        }
        if self.d_grid.windows(2).any(|w| w[0] >= w[1]) {
            return usage("the d grid must be strictly increasing".into());
        }
        if !(self.x.is_finite() && self.y.is_finite()) {
            return usage("alphabet values must be finite".into());
        }
        if !(0.0..=1.0).contains(&self.edge_probability) {
            return usage(format!("edge probability {} is outside [0, 1]", self.edge_probability));
        }
        if self.kind == ExperimentKind::Radon {
            if self.points < 2 {
                return usage("radon needs at least two points".into());
            }
            return Ok(());
        }
        if let Some(g) = &self.graph {
            if g.n() != self.n {
                return usage(format!("graph has {} vertices but n = {}", g.n(), self.n));
            }
        }
        if self.n < 2 {
            return usage("n must be at least 2".into());
        }
        CensusParams::new(self.alpha, CensusVariant::Agreement)?;
        Ok(())
    }

    pub fn span(&self) -> f64 {
        (self.x - self.y).abs()
    }
}

/// Seed of trial `t` under master seed `seed`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    derive_seed(seed, t as u64)
}

/// What one trial produced.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub success: bool,
    /// `upper - lower` of the realizing threshold window, when finite.
    pub window_width: Option<f64>,
    pub duplicates: Option<usize>,
}

impl TrialOutcome {
    fn from_report(report: &RealizationReport) -> Self {
        TrialOutcome {
            success: report.realized,
            window_width: report
                .theta_window
                .map(|w| w.upper - w.lower)
                .filter(|w| w.is_finite()),
            duplicates: None,
        }
    }

    fn flag(success: bool) -> Self {
        TrialOutcome { success, window_width: None, duplicates: None }
    }
}

/// One CSV row: the configuration of a cell and its aggregate outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "schema=1")]
    pub schema: u32,
    pub kind: &'static str,
    pub n: Option<usize>,
    pub d: usize,
    pub m: Option<usize>,
    pub x: f64,
    pub y: f64,
    pub s: f64,
    pub alpha: Option<f64>,
    pub family: Option<&'static str>,
    pub members: Option<usize>,
    pub r_min: Option<f64>,
    pub mode: Option<&'static str>,
    pub seed: u64,
    pub trials: usize,
    pub event: &'static str,
    pub success_count: usize,
    pub success_rate: f64,
    pub mean_window_width: Option<f64>,
    pub duplicate_rate: Option<f64>,
    pub wall_time: f64,
}

impl SweepRow {
    fn new(cfg: &ExperimentConfig, d: usize, outcomes: &[TrialOutcome], wall_time: f64) -> Self {
        let success_count = outcomes.iter().filter(|o| o.success).count();
        let widths: Vec<f64> = outcomes.iter().filter_map(|o| o.window_width).collect();
        let dups: Vec<usize> = outcomes.iter().filter_map(|o| o.duplicates).collect();
        let census = matches!(cfg.kind, ExperimentKind::TreeSweep | ExperimentKind::GraphSweep);
        let radon = cfg.kind == ExperimentKind::Radon;
        SweepRow {
            schema: SCHEMA_VERSION,
            kind: cfg.kind.name(),
            n: (!radon).then_some(cfg.n),
            d,
            m: radon.then_some(cfg.points),
            x: cfg.x,
            y: cfg.y,
            s: cfg.span(),
            alpha: census.then_some(cfg.alpha),
            family: (cfg.kind == ExperimentKind::GraphSweep).then(|| cfg.family.name()),
            members: None,
            r_min: None,
            mode: matches!(cfg.kind, ExperimentKind::RandomGraph | ExperimentKind::RandomTree)
                .then(|| cfg.mode.name()),
            seed: cfg.seed,
            trials: outcomes.len(),
            event: cfg.kind.event(),
            success_count,
            success_rate: success_count as f64 / outcomes.len() as f64,
            mean_window_width: (!widths.is_empty())
                .then(|| widths.iter().sum::<f64>() / widths.len() as f64),
            duplicate_rate: (radon && !dups.is_empty()).then(|| {
                dups.iter().sum::<usize>() as f64 / (dups.len() * cfg.points) as f64
            }),
            wall_time,
        }
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Invariant(format!("thread pool: {e}")))
}

/// Runs every cell of the grid; `trial(d, t)` must depend only on its
/// arguments so that rows do not depend on scheduling.
fn run_grid<F>(cfg: &ExperimentConfig, trial: F) -> Result<Vec<SweepRow>>
where
    F: Fn(usize, usize) -> Result<TrialOutcome> + Sync,
{
    cfg.validate()?;
    let pool = if cfg.jobs == 1 { None } else { Some(pool(cfg.jobs)?) };
    let mut rows = Vec::with_capacity(cfg.d_grid.len());
    for &d in &cfg.d_grid {
        let start = Instant::now();
        let outcomes: Vec<TrialOutcome> = match &pool {
            None => (0..cfg.trials).map(|t| trial(d, t)).collect::<Result<_>>()?,
            Some(p) => p.install(|| {
                (0..cfg.trials).into_par_iter().map(|t| trial(d, t)).collect::<Result<_>>()
            })?,
        };
        rows.push(SweepRow::new(cfg, d, &outcomes, start.elapsed().as_secs_f64()));
    }
    Ok(rows)
}

fn fixed_tree(cfg: &ExperimentConfig) -> Result<Option<Tree>> {
    match &cfg.graph {
        Some(g) => Ok(Some(Tree::from_graph(g.clone())?)),
        None => Ok(None),
    }
}

/// Census on a tree per trial (the fixed input tree, or a uniform random
/// labeled tree from stream 0), checked by `verify_realization`.
pub fn run_tree_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let fixed = fixed_tree(cfg)?;
    let params = CensusParams::new(cfg.alpha, CensusVariant::Agreement)?;
    run_grid(cfg, |d, t| {
        let ts = trial_seed(cfg.seed, t);
        let sampled;
        let tree = match &fixed {
            Some(tree) => tree,
            None => {
                sampled = sample_random_tree(cfg.n, derive_seed(ts, 0))?;
                &sampled
            }
        };
        let f = sample_embedding(cfg.n, d, cfg.x, cfg.y, derive_seed(ts, 1))?;
        let (w, _) = realize_tree(tree, &f, &params)?;
        Ok(TrialOutcome::from_report(&verify_realization(tree.graph(), &f, &w)?))
    })
}

/// Census through a forest family. The host graph is the input graph or a
/// single `G(n, p)` sample shared by all trials.
pub fn run_graph_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let g = match &cfg.graph {
        Some(g) => g.clone(),
        None => sample_er_graph(cfg.n, cfg.edge_probability, derive_seed(cfg.seed, GRAPH_STREAM))?,
    };
    let params = CensusParams::new(cfg.alpha, CensusVariant::Agreement)?;
    let spec = cfg.family.spec();
    let probe = randreal::graph_realizer::FamilySampler::new(&g, &spec)?;
    let (members, r_min) = (probe.len(), probe.r_min());
    let mut rows = run_grid(cfg, |d, t| {
        let ts = trial_seed(cfg.seed, t);
        let f = sample_embedding(cfg.n, d, cfg.x, cfg.y, derive_seed(ts, 1))?;
        let real = realize_graph(&g, &f, &spec, &params, derive_seed(ts, 2))?;
        Ok(TrialOutcome::from_report(&verify_realization(&g, &f, &real.weights)?))
    })?;
    for row in &mut rows {
        row.members = members;
        row.r_min = r_min;
    }
    Ok(rows)
}

fn lp_infeasible(g: &Graph, f: &randreal::Embedding, mode: LpMode) -> Result<bool> {
    let res = lp_realizability(g, f, mode)?;
    if let Some(w) = &res.witness {
        if !w.check(g, f) {
            return Err(HarnessError::Invariant("LP witness fails exact replay".into()));
        }
    }
    Ok(!res.is_feasible())
}

/// Impossibility experiments: the fraction of random instances the exact
/// oracle proves unrealizable, or for `Radon` the fraction of colorings
/// whose hulls intersect.
pub fn run_lowerbound_experiment(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let params = CensusParams::new(cfg.alpha, CensusVariant::Agreement);
    match cfg.kind {
        ExperimentKind::RandomGraph => run_grid(cfg, |d, t| {
            let ts = trial_seed(cfg.seed, t);
            let g = sample_er_graph(cfg.n, cfg.edge_probability, derive_seed(ts, 0))?;
            let f = sample_embedding(cfg.n, d, cfg.x, cfg.y, derive_seed(ts, 1))?;
            Ok(TrialOutcome::flag(lp_infeasible(&g, &f, cfg.mode)?))
        }),
        ExperimentKind::RandomTree => {
            let params = params?;
            run_grid(cfg, |d, t| {
                let ts = trial_seed(cfg.seed, t);
                let tree = sample_random_tree(cfg.n, derive_seed(ts, 0))?;
                let f = sample_embedding(cfg.n, d, cfg.x, cfg.y, derive_seed(ts, 1))?;
                // Census weights that realize the tree are an exact
                // feasibility certificate in either mode.
                let (w, _) = realize_tree(&tree, &f, &params)?;
                if verify_realization(tree.graph(), &f, &w)?.realized {
                    return Ok(TrialOutcome::flag(false));
                }
                Ok(TrialOutcome::flag(lp_infeasible(tree.graph(), &f, cfg.mode)?))
            })
        }
        ExperimentKind::Radon => run_grid(cfg, |d, t| {
            let (hit, dups) = radon_trial(d, cfg.points, trial_seed(cfg.seed, t))?;
            Ok(TrialOutcome { success: hit, window_width: None, duplicates: Some(dups) })
        }),
        other => Err(HarnessError::Usage(format!("`{}` is not a lower-bound experiment", other.name()))),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    match cfg.kind {
        ExperimentKind::TreeSweep => run_tree_sweep(cfg),
        ExperimentKind::GraphSweep => run_graph_sweep(cfg),
        _ => run_lowerbound_experiment(cfg),
    }
}

pub fn write_rows<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: ExperimentKind, n: usize, d: Vec<usize>) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(kind, n, d);
        c.trials = 6;
        c.seed = 9;
        c
    }

    #[test]
    fn validation() {
        assert!(cfg(ExperimentKind::TreeSweep, 10, vec![5, 5]).validate().is_err());
        assert!(cfg(ExperimentKind::TreeSweep, 10, vec![]).validate().is_err());
        assert!(cfg(ExperimentKind::TreeSweep, 1, vec![5]).validate().is_err());
        let mut c = cfg(ExperimentKind::TreeSweep, 10, vec![5, 8]);
        c.trials = 0;
        assert_eq!(c.validate().unwrap_err().exit_code(), 1);
        c.trials = 1;
        c.alpha = 0.7;
        assert!(c.validate().is_err());
        let mut r = cfg(ExperimentKind::Radon, 0, vec![3]);
        assert!(r.validate().is_err());
        r.points = 4;
        assert!(r.validate().is_ok());
    }

    #[test]
    fn row_aggregates() {
        let c = cfg(ExperimentKind::TreeSweep, 10, vec![5]);
        let outcomes = vec![
            TrialOutcome { success: true, window_width: Some(2.0), duplicates: None },
            TrialOutcome { success: true, window_width: Some(4.0), duplicates: None },
            TrialOutcome::flag(false),
            TrialOutcome::flag(false),
        ];
        let row = SweepRow::new(&c, 5, &outcomes, 0.0);
        assert_eq!(row.success_count, 2);
        assert_eq!(row.success_rate, 0.5);
        assert_eq!(row.mean_window_width, Some(3.0));
        assert_eq!(row.event, "realized");
        assert_eq!(row.family, None);
    }

    #[test]
    fn csv_header_carries_schema() {
        let c = cfg(ExperimentKind::TreeSweep, 10, vec![5]);
        let row = SweepRow::new(&c, 5, &[TrialOutcome::flag(true)], 0.25);
        let mut buf = Vec::new();
        write_rows(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("schema=1,kind,n,d,"));
        assert!(header.ends_with(",wall_time"));
        assert!(text.lines().nth(1).unwrap().starts_with("1,tree,10,5,"));
    }

    #[test]
    fn lowerbound_rejects_sweep_kinds() {
        let c = cfg(ExperimentKind::TreeSweep, 10, vec![5]);
        assert!(run_lowerbound_experiment(&c).is_err());
    }
}
