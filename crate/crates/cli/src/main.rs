//! `graphon`: simulate graphs, estimate their entropy, run Monte-Carlo benchmarks and
//! build entropy time series from timestamped edge lists.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphon_entropy::config::{GraphonConfig, KIND_NAMES};
use graphon_entropy::estimators::EntropyEstimate;
use graphon_entropy::ingest::{self, ParseOptions, SnapshotMode, Window};
use graphon_entropy::sampler::derive_seed;
use graphon_entropy::simharness::{self, BatchSettings, SweepRow};
use graphon_entropy::{
    estimate, rho_schedule, sample_graph, sample_latents, BlockCount, Error, Estimator, EstimatorOptions, FitOptions,
    Graph, Normalization, Regime, UsvtOptions,
};

#[derive(Parser, Debug)]
#[command(name = "graphon", version, about = "Entropy estimation for exchangeable random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one graph and write `graph.edges` and `latents.csv`
    Simulate(SimulateArgs),
    /// Estimate the entropy of an edge-list file
    Estimate(EstimateArgs),
    /// Monte-Carlo batches writing batch.csv, summary.csv and sweep.csv
    Benchmark(BenchmarkArgs),
    /// Entropy of the snapshots of a timestamped edge list
    Timeseries(TimeseriesArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Graphon kind (constant, separable, block, lowrank, grid, f1, f2) or a config file
    #[arg(long, default_value = "f1")]
    graphon: String,
    /// Sparsity level; overrides the kind's default (1, or 0.25 for f1 and separable)
    #[arg(long)]
    rho: Option<f64>,
    /// Sparsity schedule: dense keeps rho fixed, sparse uses min(rho, (ln n)^3.5 / n)
    #[arg(long, default_value = "dense")]
    regime: Regime,
}

#[derive(Args, Debug)]
struct EstimatorArgs {
    /// Number of blocks for H3, or auto for round(sqrt(n))
    #[arg(long, default_value = "auto")]
    k: BlockCount,
    /// USVT threshold slack for H4
    #[arg(long, default_value_t = graphon_entropy::estimators::DEFAULT_ETA)]
    eta: f64,
    /// Degree normalization for H2 (paper or configuration)
    #[arg(long = "ghat-norm", default_value = "configuration")]
    ghat_norm: Normalization,
}

impl EstimatorArgs {
    fn options(&self, fit_seed: u64) -> EstimatorOptions {
        EstimatorOptions {
            normalization: self.ghat_norm,
            k: self.k,
            fit: FitOptions { seed: fit_seed, ..FitOptions::default() },
            usvt: UsvtOptions { eta: self.eta, ..UsvtOptions::default() },
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    threads: Option<usize>,
    /// Report entropies in bits instead of nats
    #[arg(long)]
    bits: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Number of nodes
    #[arg(long, default_value_t = 600)]
    n: usize,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Edge-list file: `u v` per line, `#` comments; `# nodes: n` fixes the node count
    #[arg(long)]
    input: PathBuf,
    /// Lines carry a third timestamp column, which is ignored
    #[arg(long)]
    timestamps: bool,
    /// Comma-separated estimators
    #[arg(long, default_value = "h1,h2,h3,h4")]
    estimators: String,
    #[command(flatten)]
    est: EstimatorArgs,
    /// Seed for the block model fit
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write estimates.csv into this directory instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct BenchmarkArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated node counts
    #[arg(long, default_value = "600")]
    n: String,
    /// Trials per node count (at least 2)
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated estimators
    #[arg(long, default_value = "h1,h2,h3,h4")]
    estimators: String,
    #[command(flatten)]
    est: EstimatorArgs,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct TimeseriesArgs {
    /// Timestamped edge list: `u v t` per line, t an integer or YYYY-MM[-DD] date
    #[arg(long)]
    input: PathBuf,
    /// Accepted for symmetry with estimate; timestamps are always read
    #[arg(long)]
    timestamps: bool,
    /// Snapshot window: monthly, yearly, or comma-separated boundaries
    #[arg(long, default_value = "yearly")]
    window: Window,
    /// cumulative (all edges up to the window end) or windowed
    #[arg(long, default_value = "cumulative")]
    mode: SnapshotMode,
    /// Estimator applied to each snapshot
    #[arg(long, default_value = "h3")]
    estimators: String,
    #[command(flatten)]
    est: EstimatorArgs,
    /// Seed for the block model fit
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write timeseries.csv into this directory instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

/// Failure with the exit code it maps to: 2 for invalid input, 1 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Config(_) | Error::Parse { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Estimate(a) => with_threads(a.run.threads, || estimate_cmd(&a)),
        Command::Benchmark(a) => with_threads(a.run.threads, || benchmark(&a)),
        Command::Timeseries(a) => with_threads(a.run.threads, || timeseries(&a)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn with_threads(threads: Option<usize>, f: impl FnOnce() -> CliResult<()> + Send) -> CliResult<()> {
    match threads {
        None => f(),
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| usage(e.to_string()))?;
            pool.install(f)
        }
    }
}

fn load_config(model: &ModelArgs) -> CliResult<GraphonConfig> {
    if let Some(r) = model.rho {
        if !(r > 0.0 && r <= 1.0) {
            return Err(usage(format!("--rho must lie in (0, 1], got {r}")));
        }
    }
    if KIND_NAMES.contains(&model.graphon.as_str()) {
        return Ok(GraphonConfig::preset(&model.graphon, model.rho)?);
    }
    let path = Path::new(&model.graphon);
    if !path.is_file() {
        return Err(usage(format!(
            "--graphon {:?} is neither a kind ({}) nor a config file",
            model.graphon,
            KIND_NAMES.join(", ")
        )));
    }
    let mut cfg = GraphonConfig::load(path)?;
    if let Some(r) = model.rho {
        cfg.set_rho(r);
    }
    Ok(cfg)
}

fn create_out(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| Failure { code: 1, message: format!("{}: {e}", dir.display()) })
}

fn simulate(a: SimulateArgs) -> CliResult<()> {
    if a.n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let cfg = load_config(&a.model)?;
    let rho_n = rho_schedule(a.n, a.model.regime, cfg.rho())?;
    let spec = cfg.to_spec()?.with_rho(rho_n)?;
    let xi = sample_latents(a.n, derive_seed(a.seed, 0))?;
    let g = sample_graph(&spec, &xi, derive_seed(a.seed, 1));
    create_out(&a.out)?;
    let mut w = BufWriter::new(File::create(a.out.join("graph.edges"))?);
    g.write_edge_list(&mut w)?;
    w.flush()?;
    let mut w = BufWriter::new(File::create(a.out.join("latents.csv"))?);
    writeln!(w, "node,xi")?;
    for (i, x) in xi.as_slice().iter().enumerate() {
        writeln!(w, "{i},{x}")?;
    }
    w.flush()?;
    let rho_hat = g.edge_count() as f64 / graphon_entropy::graph::pair_count(a.n) as f64;
    println!("n={} edges={} rho_n={} rho_hat={}", a.n, g.edge_count(), rho_n, rho_hat);
    Ok(())
}

/// Reads the canonical integer format, falling back to arbitrary node tokens.
fn read_graph(path: &Path, timestamps: bool) -> CliResult<Graph> {
    let file = File::open(path).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })?;
    if !timestamps {
        if let Ok(g) = Graph::read_edge_list(BufReader::new(file)) {
            return Ok(g);
        }
    }
    let opts = ParseOptions { has_timestamps: timestamps, ..ParseOptions::default() };
    let parsed = ingest::parse_edge_list(path, &opts)?;
    report_parse(&parsed);
    Ok(parsed.to_graph().0)
}

fn report_parse(p: &ingest::ParsedEdges) {
    if p.self_loops > 0 || p.duplicates > 0 {
        eprintln!("dropped {} self-loops and {} duplicate edges", p.self_loops, p.duplicates);
    }
    for (line, msg) in &p.malformed {
        eprintln!("skipped line {line}: {msg}");
    }
}

fn output(dir: Option<&Path>, name: &str) -> CliResult<Box<dyn Write>> {
    Ok(match dir {
        Some(d) => {
            create_out(d)?;
            Box::new(BufWriter::new(File::create(d.join(name))?))
        }
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn estimate_cmd(a: &EstimateArgs) -> CliResult<()> {
    let estimators = Estimator::parse_list(&a.estimators)?;
    let g = read_graph(&a.input, a.timestamps)?;
    let opts = a.est.options(a.seed);
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for &e in &estimators {
        match estimate::<f64>(&g, e, &opts) {
            Ok(est) => rows.push(est),
            Err(err) => failed.push(format!("{e}: {err}")),
        }
    }
    let mut w = output(a.out.as_deref(), "estimates.csv")?;
    writeln!(w, "{}", EntropyEstimate::<f64>::CSV_HEADER)?;
    for r in &rows {
        writeln!(w, "{}", r.csv_row(a.run.bits))?;
    }
    w.flush()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: 1, message: failed.join("; ") })
    }
}

fn parse_n_list(s: &str) -> CliResult<Vec<usize>> {
    let ns = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| usage(format!("--n: cannot parse {t:?} as a node count"))))
        .collect::<CliResult<Vec<_>>>()?;
    if ns.is_empty() {
        return Err(usage("--n: no node counts given"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("--n: node counts must be strictly increasing"));
    }
    Ok(ns)
}

fn benchmark(a: &BenchmarkArgs) -> CliResult<()> {
    if a.trials < 2 {
        return Err(usage(format!("--trials must be at least 2, got {}", a.trials)));
    }
    let ns = parse_n_list(&a.n)?;
    let estimators = Estimator::parse_list(&a.estimators)?;
    let cfg = load_config(&a.model)?;
    let shape = cfg.to_spec()?;
    let spec_id = cfg.kind_name();
    let settings = BatchSettings {
        estimators,
        trials: a.trials,
        master_seed: a.seed,
        options: a.est.options(0),
        regime: a.model.regime,
        ..BatchSettings::default()
    };
    let mut batches = Vec::new();
    let mut sweep = Vec::new();
    for &n in &ns {
        let rho_n = rho_schedule(n, a.model.regime, cfg.rho())?;
        let spec = shape.with_rho(rho_n)?;
        let s = BatchSettings { master_seed: derive_seed(a.seed, n as u64), ..settings.clone() };
        for b in simharness::run_batch(&spec, spec_id, n, &s)? {
            let b = if a.run.bits { b.in_bits() } else { b };
            if let Some(m) = b.summary {
                sweep.push(SweepRow { n, srmse: m.srmse, regime: a.model.regime, estimator: b.estimator, rho_n });
            }
            batches.push(b);
        }
    }
    sweep.sort_by_key(|r| (r.estimator, r.n));
    create_out(&a.out)?;
    let mut w = BufWriter::new(File::create(a.out.join("batch.csv"))?);
    simharness::write_batch_csv(&mut w, &batches)?;
    w.flush()?;
    let mut w = BufWriter::new(File::create(a.out.join("summary.csv"))?);
    simharness::write_summary_csv(&mut w, &batches)?;
    w.flush()?;
    let mut w = BufWriter::new(File::create(a.out.join("sweep.csv"))?);
    simharness::write_sweep_csv(&mut w, &sweep)?;
    w.flush()?;
    for b in &batches {
        if let Some(m) = b.summary {
            println!(
                "{} n={} truth={:.6} mean={:.6} rmse={:.3e} bias2={:.3e} variance={:.3e} failures={}",
                b.estimator,
                b.n,
                b.truth,
                m.mean,
                m.rmse,
                m.bias2,
                m.variance,
                b.failures()
            );
        }
    }
    Ok(())
}

fn timeseries(a: &TimeseriesArgs) -> CliResult<()> {
    let estimators = Estimator::parse_list(&a.estimators)?;
    let [estimator] = estimators[..] else {
        return Err(usage("timeseries takes exactly one estimator"));
    };
    let opts = ParseOptions { has_timestamps: true, ..ParseOptions::default() };
    let parsed = ingest::parse_edge_list(&a.input, &opts)?;
    report_parse(&parsed);
    let series = ingest::build_snapshots(&parsed, &a.window, a.mode)?;
    let eopts = a.est.options(a.seed);
    let rows = ingest::entropy_timeseries(&series, estimator, &eopts, true)?;
    let header = vec![
        ("input".to_string(), a.input.display().to_string()),
        ("estimator".into(), estimator.to_string()),
        ("window".into(), window_name(&a.window)),
        ("mode".into(), format!("{:?}", a.mode).to_lowercase()),
        ("k".into(), a.est.k.to_string()),
        ("eta".into(), a.est.eta.to_string()),
        ("ghat_norm".into(), a.est.ghat_norm.to_string()),
        ("seed".into(), a.seed.to_string()),
        ("units".into(), if a.run.bits { "bits" } else { "nats" }.into()),
        ("nodes".into(), "active".into()),
    ];
    let mut w = output(a.out.as_deref(), "timeseries.csv")?;
    ingest::write_timeseries_csv(&mut w, &rows, &header, a.run.bits)?;
    w.flush()?;
    Ok(())
}

fn window_name(w: &Window) -> String {
    match w {
        Window::Monthly => "monthly".into(),
        Window::Yearly => "yearly".into(),
        Window::Custom(b) => b.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
    }
}
