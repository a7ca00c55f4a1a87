//! Command-line front end: detection, benchmark generation, evaluation, the
//! significance-level sweep and the binomial-approximation check.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit status: 0 on success, 1 when the command fails (bad input data,
//! infeasible parameters, I/O), 2 on a usage error.

mod report;
mod sweep;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use essc::bench::BenchmarkSpec;
use essc::detect::{essc, summarize, EsscConfig, SeedStrategy, DEFAULT_ALPHA, DEFAULT_MAX_ITER};
use essc::graph::{parse_edge_list, write_edge_list, MultiGraph};
use essc::io::{align, read_communities, write_communities, ResolvedCover};
use essc::metrics::{best_match_score, binomial_approximation_check, gnmi_cover, jaccard, nmi_partition, Cover};
use essc::VertexSet;
use rand::Rng;
use serde_json::json;

pub use report::RunReport;
pub use sweep::{sweep_alpha, SweepRow};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] essc::Error),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "essc", version, about = "Statistically significant community extraction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Detect communities in an edge-list graph.
    Detect(DetectArgs),
    /// Generate a benchmark graph and its ground truth.
    Generate(GenerateArgs),
    /// Compare a community file against ground truth.
    Eval(EvalArgs),
    /// Run detection at several significance levels.
    SweepAlpha(SweepArgs),
    /// Total variation between the configuration-model law of d(u:B) and its binomial approximation.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    MaxDegree,
    AllNeighborhoods,
}

impl From<StrategyArg> for SeedStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::MaxDegree => SeedStrategy::MaxDegree,
            StrategyArg::AllNeighborhoods => SeedStrategy::AllNeighborhoods,
        }
    }
}

#[derive(Args, Debug)]
struct DetectionOptions {
    /// Edge list: `u v [multiplicity]` per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "max-degree")]
    seed_strategy: StrategyArg,
    /// Cap on Community-Search updates per seed.
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Collapse parallel edges and drop self-loops before detection.
    #[arg(long)]
    simplify: bool,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[command(flatten)]
    common: DetectionOptions,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Community file to write; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Er,
    Config,
    SbmSingle,
    Lfr,
    LfrBg,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: KindArg,
    /// Flat `key = value` file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dbar: Option<f64>,
    #[arg(long)]
    tau1: Option<f64>,
    #[arg(long)]
    tau2: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    smin: Option<usize>,
    #[arg(long)]
    smax: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    pi: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Drawn from system entropy and printed when omitted.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Edge-list output path.
    #[arg(long)]
    out: PathBuf,
    /// Ground-truth community file.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    /// Jaccard score of the two background sets.
    Jaccard,
    /// Mean over truth communities of the best Jaccard match among predictions.
    BestMatch,
    /// NMI of the two partitions (communities plus background); both must be disjoint.
    Nmi,
    /// Overlapping NMI with the background as one more community.
    Gnmi,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, value_enum, default_value = "gnmi")]
    metric: MetricArg,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: DetectionOptions,
    /// Comma-separated significance levels.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.1"
    )]
    alphas: Vec<f64>,
    /// Level whose background every row is compared with.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    reference_alpha: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    tau1: f64,
    #[arg(long, default_value_t = 20.0)]
    dbar: f64,
    /// |B| / n.
    #[arg(long, default_value_t = 0.1)]
    set_fraction: f64,
    /// Target degree of the test vertex.
    #[arg(long, default_value_t = 10)]
    degree: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long)]
    rng_seed: Option<u64>,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Runs one command line (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let echo: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli.command, echo) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(command: Command, echo: Vec<String>) -> CliResult<()> {
    let started = Instant::now();
    let mut report = RunReport::new(echo);
    let report_path = match command {
        Command::Detect(args) => {
            let path = args.summary.clone();
            detect(args, &mut report)?;
            path
        }
        Command::Generate(args) => {
            let path = args.report.clone();
            generate(args, &mut report)?;
            path
        }
        Command::Eval(args) => {
            let path = args.report.clone();
            eval(args, &mut report)?;
            path
        }
        Command::SweepAlpha(args) => {
            let path = args.report.clone();
            sweep(args, &mut report)?;
            path
        }
        Command::Oracle(args) => {
            let path = args.report.clone();
            oracle(args, &mut report)?;
            path
        }
    };
    report.duration_seconds = started.elapsed().as_secs_f64();
    if let Some(path) = report_path {
        let file = create(&path)?;
        let mut out = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
        out.flush()?;
    }
    Ok(())
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn create(path: &Path) -> CliResult<File> {
    File::create(path).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(t) => Ok(rayon::ThreadPoolBuilder::new().num_threads(t).build()?.install(f)),
    }
}

fn load_graph(opts: &DetectionOptions) -> CliResult<MultiGraph> {
    let g = parse_edge_list(open(&opts.input)?)?;
    Ok(if opts.simplify { g.simplify() } else { g })
}

fn detection_parameters(opts: &DetectionOptions) -> serde_json::Value {
    json!({
        "input": opts.input,
        "seed_strategy": SeedStrategy::from(opts.seed_strategy),
        "max_iter": opts.max_iter,
        "simplify": opts.simplify,
        "threads": opts.threads,
    })
}

fn detect(args: DetectArgs, report: &mut RunReport) -> CliResult<()> {
    let g = load_graph(&args.common)?;
    let config = EsscConfig {
        alpha: args.alpha,
        seed_strategy: args.common.seed_strategy.into(),
        max_iter: args.common.max_iter,
    };
    let result = with_threads(args.common.threads, || essc(&g, &config))??;

    let mut params = detection_parameters(&args.common);
    params["alpha"] = json!(args.alpha);
    params["output"] = json!(args.output);
    report.parameters = params;
    report.summary = Some(summarize(&g, &result));
    report.seed_log = Some(result.seed_log.clone());

    match &args.output {
        Some(path) => write_communities(
            BufWriter::new(create(path)?),
            &result.communities,
            &result.background,
            Some(g.labels()),
        )?,
        None => write_communities(io::stdout().lock(), &result.communities, &result.background, Some(g.labels()))?,
    }
    Ok(())
}

fn generate(args: GenerateArgs, report: &mut RunReport) -> CliResult<()> {
    let mut text = match &args.config {
        Some(path) => io::read_to_string(open(path)?)?,
        None => String::new(),
    };
    let kind = match args.kind {
        KindArg::Er => "er",
        KindArg::Config => "config",
        KindArg::SbmSingle => "sbm-single",
        KindArg::Lfr => "lfr",
        KindArg::LfrBg => "lfr-bg",
    };
    text.push_str(&format!("\nkind = {kind}\n"));
    let flags: [(&str, Option<String>); 11] = [
        ("n", args.n.map(|v| v.to_string())),
        ("dbar", args.dbar.map(|v| v.to_string())),
        ("tau1", args.tau1.map(|v| v.to_string())),
        ("tau2", args.tau2.map(|v| v.to_string())),
        ("mu", args.mu.map(|v| v.to_string())),
        ("smin", args.smin.map(|v| v.to_string())),
        ("smax", args.smax.map(|v| v.to_string())),
        ("rho", args.rho.map(|v| v.to_string())),
        ("pi", args.pi.map(|v| v.to_string())),
        ("kappa", args.kappa.map(|v| v.to_string())),
        ("theta", args.theta.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(value) = value {
            text.push_str(&format!("{key} = {value}\n"));
        }
    }
    let (spec, file_seed) = BenchmarkSpec::from_key_values(&text)?;
    let seed = resolve_seed(args.rng_seed.or(file_seed));
    let (g, truth) = spec.generate(seed)?;

    write_edge_list(&g, BufWriter::new(create(&args.out)?))?;
    if let Some(path) = &args.truth {
        write_communities(BufWriter::new(create(path)?), &truth.communities, &truth.background, Some(g.labels()))?;
    }
    report.parameters = json!({
        "spec": spec,
        "rng_seed": seed,
        "out": args.out,
        "truth": args.truth,
    });
    report.metrics = Some(json!({
        "vertices": g.n(),
        "edges": g.edge_count(),
        "communities": truth.communities.len(),
        "background": truth.background.len(),
    }));
    Ok(())
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let seed = rand::rng().random();
        eprintln!("rng seed: {seed}");
        seed
    })
}

fn partition_blocks(cover: &ResolvedCover) -> Vec<VertexSet> {
    cover
        .communities
        .iter()
        .chain(std::iter::once(&cover.background))
        .filter(|c| !c.is_empty())
        .cloned()
        .collect()
}

fn eval(args: EvalArgs, report: &mut RunReport) -> CliResult<()> {
    let pred_file = read_communities(open(&args.pred)?)?;
    let truth_file = read_communities(open(&args.truth)?)?;
    let (pred, truth, labels) = align(&pred_file, &truth_file);
    let n = labels.len();

    let score = match args.metric {
        MetricArg::Jaccard => jaccard(&pred.background, &truth.background),
        MetricArg::BestMatch => {
            let targets: Vec<&VertexSet> = truth.communities.iter().filter(|c| !c.is_empty()).collect();
            if targets.is_empty() {
                return Err(essc::Error::Domain("truth file has no non-empty community".into()).into());
            }
            targets.iter().map(|t| best_match_score(&pred.communities, t)).sum::<f64>() / targets.len() as f64
        }
        MetricArg::Nmi => nmi_partition(&partition_blocks(&pred), &partition_blocks(&truth), n)?,
        MetricArg::Gnmi => gnmi_cover(
            Cover::new(&pred.communities, &pred.background),
            Cover::new(&truth.communities, &truth.background),
            n,
        )?,
    };
    println!("{score}");
    let metric = args.metric.to_possible_value().unwrap().get_name().to_owned();
    report.parameters = json!({ "pred": args.pred, "truth": args.truth, "metric": metric, "vertices": n });
    report.metrics = Some(json!({ metric: score }));
    Ok(())
}

fn sweep(args: SweepArgs, report: &mut RunReport) -> CliResult<()> {
    let g = load_graph(&args.common)?;
    let strategy = args.common.seed_strategy.into();
    let max_iter = args.common.max_iter;
    let rows = with_threads(args.common.threads, || {
        sweep_alpha(&g, &args.alphas, args.reference_alpha, strategy, max_iter)
    })??;

    let mut out = io::stdout().lock();
    writeln!(out, "alpha\tN_C\tmean_size\tsd_size\tmean_membership\tdeg_C\tdeg_B\tP_B\tJ_B")?;
    let fmt = |x: Option<f64>| x.map_or("NA".to_owned(), |v| format!("{v:.4}"));
    for row in &rows {
        let s = &row.summary;
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.4}\t{:.4}",
            row.alpha,
            s.community_count,
            fmt(s.mean_size),
            fmt(s.size_std_dev),
            fmt(s.mean_membership),
            fmt(s.mean_degree_community),
            fmt(s.mean_degree_background),
            s.background_proportion,
            row.background_jaccard,
        )?;
    }
    let mut params = detection_parameters(&args.common);
    params["alphas"] = json!(args.alphas);
    params["reference_alpha"] = json!(args.reference_alpha);
    report.parameters = params;
    report.rows = Some(rows);
    Ok(())
}

fn oracle(args: OracleArgs, report: &mut RunReport) -> CliResult<()> {
    let seed = resolve_seed(args.rng_seed);
    let check = binomial_approximation_check(
        args.n,
        args.tau1,
        args.dbar,
        args.set_fraction,
        args.degree,
        args.samples,
        seed,
    )?;
    println!("{}", check.tv_distance);
    report.parameters = json!({
        "n": args.n,
        "tau1": args.tau1,
        "dbar": args.dbar,
        "set_fraction": args.set_fraction,
        "degree": args.degree,
        "samples": args.samples,
        "rng_seed": seed,
    });
    report.metrics = Some(serde_json::to_value(&check)?);
    Ok(())
}
