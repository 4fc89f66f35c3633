use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use randreal::rng::derive_seed;
use randreal::separability::LpMode;
use randreal::{
    lp_realizability, realize_graph, realize_tree, sample_embedding, sample_er_graph,
    sample_random_tree, theoretical_threshold, verify_realization, CensusParams, CensusVariant,
    Embedding, Graph, RealizationReport, Tree, WeightVector,
};
use randreal_cli::{
    run_experiment, write_rows, ExperimentConfig, ExperimentKind, FamilyKind, HarnessError,
};

type Result<T> = std::result::Result<T, HarnessError>;

/// Threshold realization of graphs on random binary embeddings.
#[derive(Parser)]
#[command(name = "randreal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Census weights for a tree; writes the per-coordinate trace as CSV.
    RealizeTree(RealizeArgs),
    /// Census weights for a graph through a forest family.
    RealizeGraph(RealizeArgs),
    /// Check given weights against a graph and embedding.
    Verify(VerifyArgs),
    /// Decide exactly whether any weights realize a graph.
    Oracle(OracleArgs),
    /// Success rate of the census over a grid of dimensions.
    Sweep(SweepArgs),
    /// Fraction of random instances proven unrealizable.
    Lowerbound(LowerboundArgs),
    /// Hull intersection of randomly colored cube points.
    Radon(RadonArgs),
}

#[derive(Args, Clone)]
struct AlphabetArgs {
    /// First alphabet value.
    #[arg(long)]
    x: Option<f64>,
    /// Second alphabet value.
    #[arg(long)]
    y: Option<f64>,
    /// Spacing |x - y|; sets y = x + s.
    #[arg(long)]
    s: Option<f64>,
}

impl AlphabetArgs {
    fn resolve(&self) -> Result<(f64, f64)> {
        let x = self.x.unwrap_or(0.0);
        match (self.y, self.s) {
            (Some(y), Some(s)) if (x - y).abs() != s => {
                Err(HarnessError::Usage(format!("--s {s} disagrees with |x - y| = {}", (x - y).abs())))
            }
            (Some(y), _) => Ok((x, y)),
            (None, Some(s)) if s < 0.0 => Err(HarnessError::Usage("--s must be nonnegative".into())),
            (None, Some(s)) => Ok((x, x + s)),
            (None, None) => Ok((x, 1.0)),
        }
    }
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Single dimension.
    #[arg(long, conflicts_with = "d_grid")]
    d: Option<usize>,
    /// Comma-separated, strictly increasing dimensions.
    #[arg(long, value_delimiter = ',')]
    d_grid: Vec<usize>,
}

impl GridArgs {
    fn resolve(&self) -> Result<Vec<usize>> {
        match self.d {
            Some(d) => Ok(vec![d]),
            None if self.d_grid.is_empty() => Err(HarnessError::Usage("one of --d or --d-grid is required".into())),
            None => Ok(self.d_grid.clone()),
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Family {
    Forest,
    Ust,
}

impl From<Family> for FamilyKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Forest => FamilyKind::Forest,
            Family::Ust => FamilyKind::Ust,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    Nonneg,
    Free,
}

impl From<Mode> for LpMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Nonneg => LpMode::Nonnegative,
            Mode::Free => LpMode::Free,
        }
    }
}

#[derive(Args)]
struct RealizeArgs {
    /// Vertices of the sampled graph or tree.
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Dimension of the sampled embedding.
    #[arg(long)]
    d: Option<usize>,
    #[command(flatten)]
    alphabet: AlphabetArgs,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list file (`n m` header, one `u v` per line) instead of sampling.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Embedding dump instead of sampling.
    #[arg(long)]
    embedding: Option<PathBuf>,
    /// Edge probability of a sampled graph.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, value_enum, default_value_t = Family::Forest)]
    family: Family,
    /// Where to write the weights, one per line.
    #[arg(long)]
    save_weights: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    embedding: PathBuf,
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long)]
    d: Option<usize>,
    #[command(flatten)]
    alphabet: AlphabetArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    embedding: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, value_enum, default_value_t = Mode::Nonneg)]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum SweepKind {
    Tree,
    Graph,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepKind::Tree)]
    kind: SweepKind,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    alphabet: AlphabetArgs,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = Family::Forest)]
    family: Family,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores, 1 = serial reference run).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Fixed input graph (a tree for `--kind tree`).
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum LowerKind {
    RandomGraph,
    RandomTree,
    Radon,
}

#[derive(Args)]
struct LowerboundArgs {
    #[arg(long, value_enum, default_value_t = LowerKind::RandomGraph)]
    kind: LowerKind,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    alphabet: AlphabetArgs,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = Mode::Free)]
    mode: Mode,
    /// Points per trial for `--kind radon` (default 6d).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RadonArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Points per trial (default 6d).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| HarnessError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_graph(path: &PathBuf) -> Result<Graph> {
    Graph::read(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

fn read_embedding(path: &PathBuf) -> Result<Embedding> {
    Embedding::read(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

/// The embedding from `--embedding`, or a sample from stream 1 of `seed`.
fn embedding_for(
    path: &Option<PathBuf>,
    n: usize,
    d: Option<usize>,
    alphabet: &AlphabetArgs,
    seed: u64,
) -> Result<Embedding> {
    match path {
        Some(p) => read_embedding(p),
        None => {
            let d = d.ok_or_else(|| HarnessError::Usage("--d is required without --embedding".into()))?;
            let (x, y) = alphabet.resolve()?;
            Ok(sample_embedding(n, d, x, y, derive_seed(seed, 1))?)
        }
    }
}

fn check_sizes(g: &Graph, f: &Embedding) -> Result<()> {
    if g.n() != f.n() {
        return Err(HarnessError::Usage(format!(
            "graph has {} vertices, embedding has {}",
            g.n(),
            f.n()
        )));
    }
    Ok(())
}

fn save_weights(path: &Option<PathBuf>, w: &WeightVector) -> Result<()> {
    if let Some(p) = path {
        let mut out = output(&Some(p.clone()))?;
        for v in w.values() {
            writeln!(out, "{v}")?;
        }
        out.flush()?;
    }
    Ok(())
}

fn summarize(report: &RealizationReport, selected: usize, d: usize) {
    eprintln!("selected {selected} of {d} coordinates; realized: {}", report.realized);
    if let Some(w) = report.theta_window {
        eprintln!("threshold window: ({}, {}]", w.lower, w.upper);
    }
}

fn realize_tree_cmd(a: &RealizeArgs) -> Result<()> {
    let tree = match &a.graph {
        Some(p) => Tree::from_graph(read_graph(p)?)?,
        None => sample_random_tree(a.n, derive_seed(a.seed, 0))?,
    };
    let f = embedding_for(&a.embedding, tree.n(), a.d, &a.alphabet, a.seed)?;
    check_sizes(tree.graph(), &f)?;
    let params = CensusParams::new(a.alpha, CensusVariant::Agreement)?;
    let (w, trace) = realize_tree(&tree, &f, &params)?;
    let report = verify_realization(tree.graph(), &f, &w)?;
    summarize(&report, trace.selected_count(), f.d());
    let theta = theoretical_threshold(f.d() as u64, f.span(), tree.n(), a.alpha, trace.q_hat());
    eprintln!("theoretical threshold {theta}: inside window: {}", report.admits(theta));
    save_weights(&a.save_weights, &w)?;
    let mut out = output(&a.out)?;
    out.write_all(trace.to_csv().as_bytes())?;
    out.flush()?;
    Ok(())
}

fn realize_graph_cmd(a: &RealizeArgs) -> Result<()> {
    let g = match &a.graph {
        Some(p) => read_graph(p)?,
        None => sample_er_graph(a.n, a.p, derive_seed(a.seed, 0))?,
    };
    let f = embedding_for(&a.embedding, g.n(), a.d, &a.alphabet, a.seed)?;
    check_sizes(&g, &f)?;
    let params = CensusParams::new(a.alpha, CensusVariant::Agreement)?;
    let spec = FamilyKind::from(a.family).spec();
    let real = realize_graph(&g, &f, &spec, &params, derive_seed(a.seed, 2))?;
    let report = verify_realization(&g, &f, &real.weights)?;
    if let Some(k) = real.family_size {
        eprintln!("family: {} with {k} members", spec.name());
    }
    summarize(&report, real.trace.selected_count(), f.d());
    save_weights(&a.save_weights, &real.weights)?;
    let mut out = output(&a.out)?;
    out.write_all(real.trace.to_csv().as_bytes())?;
    out.flush()?;
    Ok(())
}

fn verify_cmd(a: &VerifyArgs) -> Result<()> {
    let g = read_graph(&a.graph)?;
    let f = read_embedding(&a.embedding)?;
    check_sizes(&g, &f)?;
    let text = std::fs::read_to_string(&a.weights)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", a.weights.display())))?;
    let w = WeightVector::parse(&text)?;
    let report = verify_realization(&g, &f, &w)?;
    let mut out = output(&a.out)?;
    writeln!(out, "{}", RealizationReport::CSV_HEADER)?;
    writeln!(out, "{}", report.csv_row())?;
    out.flush()?;
    Ok(())
}

fn oracle_cmd(a: &OracleArgs) -> Result<()> {
    let g = match &a.graph {
        Some(p) => read_graph(p)?,
        None => sample_er_graph(a.n, a.p, derive_seed(a.seed, 0))?,
    };
    let f = embedding_for(&a.embedding, g.n(), a.d, &a.alphabet, a.seed)?;
    check_sizes(&g, &f)?;
    let res = lp_realizability(&g, &f, a.mode.into())?;
    let mut out = output(&a.out)?;
    writeln!(out, "status {}", if res.is_feasible() { "feasible" } else { "infeasible" })?;
    writeln!(out, "mode {}", res.mode.name())?;
    if let Some(w) = &res.witness {
        if !w.check(&g, &f) {
            return Err(HarnessError::Invariant("witness fails exact replay".into()));
        }
        let report = verify_realization(&g, &f, &w.weight_vector())?;
        if !report.separable || (res.mode == LpMode::Nonnegative && !report.realized) {
            return Err(HarnessError::Invariant("witness fails verification".into()));
        }
        out.write_all(w.to_text().as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn emit(cfg: &ExperimentConfig, out: &Option<PathBuf>) -> Result<()> {
    let rows = run_experiment(cfg)?;
    if rows.iter().any(|r| !(0.0..=1.0).contains(&r.success_rate)) {
        return Err(HarnessError::Invariant("success rate outside [0, 1]".into()));
    }
    let mut w = output(out)?;
    write_rows(&rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn sweep_cmd(a: &SweepArgs) -> Result<()> {
    let kind = match a.kind {
        SweepKind::Tree => ExperimentKind::TreeSweep,
        SweepKind::Graph => ExperimentKind::GraphSweep,
    };
    let graph = a.graph.as_ref().map(read_graph).transpose()?;
    let n = graph.as_ref().map_or(a.n, Graph::n);
    let mut cfg = ExperimentConfig::new(kind, n, a.grid.resolve()?);
    (cfg.x, cfg.y) = a.alphabet.resolve()?;
    cfg.alpha = a.alpha;
    cfg.family = a.family.into();
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.jobs = a.jobs;
    cfg.graph = graph;
    cfg.edge_probability = a.p;
    emit(&cfg, &a.out)
}

fn radon_config(grid: Vec<usize>, m: Option<usize>) -> ExperimentConfig {
    let points = m.unwrap_or(6 * grid[0]);
    let mut cfg = ExperimentConfig::new(ExperimentKind::Radon, 0, grid);
    cfg.points = points;
    cfg
}

fn lowerbound_cmd(a: &LowerboundArgs) -> Result<()> {
    let grid = a.grid.resolve()?;
    let mut cfg = match a.kind {
        LowerKind::RandomGraph => ExperimentConfig::new(ExperimentKind::RandomGraph, a.n, grid),
        LowerKind::RandomTree => ExperimentConfig::new(ExperimentKind::RandomTree, a.n, grid),
        LowerKind::Radon => radon_config(grid, a.m),
    };
    if a.kind != LowerKind::Radon {
        (cfg.x, cfg.y) = a.alphabet.resolve()?;
    }
    cfg.alpha = a.alpha;
    cfg.mode = a.mode.into();
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.jobs = a.jobs;
    cfg.edge_probability = a.p;
    emit(&cfg, &a.out)
}

fn radon_cmd(a: &RadonArgs) -> Result<()> {
    let mut cfg = radon_config(a.grid.resolve()?, a.m);
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.jobs = a.jobs;
    emit(&cfg, &a.out)
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::RealizeTree(a) => realize_tree_cmd(a),
        Command::RealizeGraph(a) => realize_graph_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Lowerbound(a) => lowerbound_cmd(a),
        Command::Radon(a) => radon_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(HarnessError::Io(msg)) if msg.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
