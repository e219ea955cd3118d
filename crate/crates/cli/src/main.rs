use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use dplp_core::{
    audit_random_suite, generate, latent_rank_loss, load_external_scores, radius_for_omega,
    rank_loss_bound, recommend, sweep, task_rng, AuditReport, BoundParams, BoundReport, DpConfig,
    Error, EvalReport, Graph, Heuristic, Mechanism, Purpose, ScoreFunction, SplitSpec,
    DEFAULT_DELTA_P,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "dplp",
    version,
    about = "Differentially private top-K link prediction"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a private top-K list for one query node.
    Recommend(RecommendArgs),
    /// Expected MAP@K of one mechanism and heuristic on held-out splits.
    Evaluate(EvaluateArgs),
    /// Expected MAP@K over heuristics, mechanisms and privacy budgets.
    Sweep(SweepArgs),
    /// Ranking loss of a mechanism on a latent geometric graph, with its bound.
    LatentSim(LatentSimArgs),
    /// Evaluate the ranking-loss bound for given parameters.
    Bounds(BoundsArgs),
    /// Exact privacy audit over random small graphs.
    Audit(AuditArgs),
}

#[derive(Args, Debug, Clone)]
struct ScoreArgs {
    /// Whitespace-separated `u v score` file for the external heuristic.
    #[arg(long)]
    scores: Option<PathBuf>,
    /// Sensitivity of the external score table.
    #[arg(long)]
    sensitivity: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct GraphSource {
    /// Edge list file (`u v` per line, `#` comments).
    #[arg(long, conflicts_with = "latent_n")]
    graph: Option<PathBuf>,
    /// Generate a latent geometric graph with this many nodes instead.
    #[arg(long)]
    latent_n: Option<usize>,
    /// Latent dimension for a generated graph.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Edge probability of a generated graph.
    #[arg(long, default_value_t = 0.05)]
    omega: f64,
}

#[derive(Args, Debug)]
struct RecommendArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "cn")]
    heuristic: Heuristic,
    #[arg(long, default_value = "dplp")]
    mechanism: Mechanism,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Query node label as written in the edge list.
    #[arg(long)]
    query: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DELTA_P)]
    delta_p: f64,
    #[command(flatten)]
    score: ScoreArgs,
}

#[derive(Args, Debug)]
struct SplitArgs {
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Fraction of each query's neighbors kept for training.
    #[arg(long, default_value_t = 0.85)]
    keep: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DELTA_P)]
    delta_p: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value = "cn")]
    heuristic: Heuristic,
    #[arg(long, default_value = "dplp")]
    mechanism: Mechanism,
    #[arg(long)]
    epsilon: f64,
    #[command(flatten)]
    split: SplitArgs,
    #[command(flatten)]
    score: ScoreArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, value_delimiter = ',', default_value = "cn,aa,jc")]
    heuristic: Vec<Heuristic>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "dplp,laplace,gaussian,exponential"
    )]
    mechanism: Vec<Mechanism>,
    #[arg(long, value_delimiter = ',', required = true)]
    epsilon: Vec<f64>,
    #[command(flatten)]
    split: SplitArgs,
    #[command(flatten)]
    score: ScoreArgs,
}

#[derive(Args, Debug)]
struct LatentSimArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Edge probability; converted to the connection radius.
    #[arg(long, conflicts_with = "r")]
    omega: Option<f64>,
    /// Connection radius.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value = "cn")]
    heuristic: Heuristic,
    #[arg(long, default_value = "dplp")]
    mechanism: Mechanism,
    #[arg(long, value_delimiter = ',', required = true)]
    epsilon: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Failure probability of the bound.
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    /// Mechanism draws per query.
    #[arg(long, default_value_t = 10)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DELTA_P)]
    delta_p: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, value_delimiter = ',', default_value = "cn,aa,jc")]
    heuristic: Vec<Heuristic>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, conflicts_with = "r")]
    omega: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    /// Expected top-K score gap; one row per value.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    gamma_bar: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// Nodes per random graph (at most 8).
    #[arg(long, default_value_t = 7)]
    nodes: usize,
    #[arg(long, default_value_t = 50)]
    graphs: usize,
    #[arg(long, default_value = "cn")]
    heuristic: Heuristic,
    #[arg(long, default_value = "dplp")]
    mechanism: Mechanism,
    #[arg(long, value_delimiter = ',', required = true)]
    epsilon: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::Io(_))
            | Some(Error::Parse { .. })
            | Some(Error::EnumerationTooLarge { .. }) => EXIT_RUNTIME,
            Some(_) => EXIT_VALIDATION,
            None if error.downcast_ref::<io::Error>().is_some() => EXIT_RUNTIME,
            None => EXIT_VALIDATION,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        anyhow::Error::from(error).into()
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = match &cli.command {
        Command::Recommend(a) => a.seed,
        Command::Evaluate(a) => a.split.seed,
        Command::Sweep(a) => a.split.seed,
        Command::LatentSim(a) => a.seed,
        Command::Bounds(_) => 0,
        Command::Audit(a) => a.seed,
    };
    eprintln!(
        "# seed={seed} cmd={} version={}",
        argv.iter()
            .skip(1)
            .fold(String::from("dplp"), |acc, a| acc + " " + a),
        env!("CARGO_PKG_VERSION")
    );
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_VALIDATION);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }
    let result = match cli.command {
        Command::Recommend(a) => run_recommend(a),
        Command::Evaluate(a) => run_evaluate(a),
        Command::Sweep(a) => run_sweep(a),
        Command::LatentSim(a) => run_latent_sim(a),
        Command::Bounds(a) => run_bounds(a),
        Command::Audit(a) => run_audit(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    let file = File::open(path)
        .with_context(|| format!("cannot open graph file {}", path.display()))
        .map_err(|e| Failure {
            code: EXIT_RUNTIME,
            error: e,
        })?;
    let (g, report) = Graph::load_edge_list(BufReader::new(file))
        .map_err(|e| Failure::from(anyhow::Error::from(e).context(path.display().to_string())))?;
    log::info!(
        "loaded {} nodes, {} edges ({} self-loops, {} duplicates dropped)",
        g.node_count(),
        g.edge_count(),
        report.self_loops,
        report.duplicates
    );
    Ok(g)
}

fn resolve_graph(source: &GraphSource, seed: u64) -> CliResult<Graph> {
    match (&source.graph, source.latent_n) {
        (Some(path), None) => load_graph(path),
        (None, Some(n)) => {
            let r = radius_for_omega::<f64>(source.dim, source.omega)?;
            let mut rng = task_rng(seed, Purpose::Generator, 0, 0);
            Ok(generate::<f64, _>(n, source.dim, r, &mut rng)?.1)
        }
        _ => Err(anyhow!("exactly one of --graph or --latent-n is required").into()),
    }
}

fn score_function(h: Heuristic, score: &ScoreArgs) -> CliResult<ScoreFunction<f64>> {
    if h != Heuristic::External {
        return Ok(ScoreFunction::from_heuristic(h)?);
    }
    let (Some(path), Some(sensitivity)) = (&score.scores, score.sensitivity) else {
        return Err(anyhow!("the external heuristic needs --scores and --sensitivity").into());
    };
    let file = File::open(path)
        .with_context(|| format!("cannot open score file {}", path.display()))
        .map_err(|e| Failure {
            code: EXIT_RUNTIME,
            error: e,
        })?;
    Ok(load_external_scores(BufReader::new(file), sensitivity)?)
}

fn resolve_radius(dim: usize, omega: Option<f64>, r: Option<f64>) -> CliResult<f64> {
    match (omega, r) {
        (Some(o), None) => Ok(radius_for_omega(dim, o)?),
        (None, Some(r)) => Ok(r),
        _ => Err(anyhow!("exactly one of --omega or --r is required").into()),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    let written = match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .context("cannot write stdout"),
    };
    written.map_err(|e| Failure {
        code: EXIT_RUNTIME,
        error: e,
    })
}

fn run_recommend(a: RecommendArgs) -> CliResult<u8> {
    let g = load_graph(&a.graph)?;
    let f = score_function(a.heuristic, &a.score)?;
    let cfg = DpConfig::new(a.mechanism, a.epsilon, a.k)?
        .with_delta_p(a.delta_p)?
        .with_seed(a.seed);
    let q = g.node_of(a.query)?;
    let sc = f.score_non_neighbors(&g, q)?;
    let mut rng = task_rng(a.seed, Purpose::Mechanism, q as u64, 0);
    let rec = recommend(&sc, &cfg, f.sensitivity(), &mut rng)?;
    let text: String = rec
        .items
        .iter()
        .map(|&v| format!("{}\n", g.label(v)))
        .collect();
    emit(&None, &text)?;
    Ok(0)
}

fn split_spec(s: &SplitArgs) -> CliResult<SplitSpec> {
    Ok(SplitSpec::new(s.keep, s.k, s.trials, s.seed)?)
}

fn run_evaluate(a: EvaluateArgs) -> CliResult<u8> {
    let g = resolve_graph(&a.source, a.split.seed)?;
    let f = score_function(a.heuristic, &a.score)?;
    let spec = split_spec(&a.split)?;
    let cfg = DpConfig::new(a.mechanism, a.epsilon, a.split.k)?
        .with_delta_p(a.split.delta_p)?
        .with_seed(a.split.seed);
    let row = dplp_core::evaluate(&g, &f, &cfg, &spec)?;
    if row.skipped_queries > 0 {
        log::info!(
            "{} eligible queries had nothing to hide",
            row.skipped_queries
        );
    }
    emit(&a.split.out, &EvalReport { rows: vec![row] }.to_csv())?;
    Ok(0)
}

fn run_sweep(a: SweepArgs) -> CliResult<u8> {
    let g = resolve_graph(&a.source, a.split.seed)?;
    let functions = a
        .heuristic
        .iter()
        .map(|&h| score_function(h, &a.score))
        .collect::<CliResult<Vec<_>>>()?;
    let spec = split_spec(&a.split)?;
    let first = *a
        .mechanism
        .first()
        .ok_or_else(|| anyhow!("--mechanism is empty"))?;
    let template = DpConfig::new(first, a.epsilon[0], a.split.k)?
        .with_delta_p(a.split.delta_p)?
        .with_seed(a.split.seed);
    let report = sweep(&g, &functions, &template, &a.mechanism, &a.epsilon, &spec)?;
    emit(&a.split.out, &report.to_csv())?;
    Ok(0)
}

const LATENT_HEADER: &str =
    "heuristic,mechanism,n_nodes,D,K,r,omega,epsilon_p,delta,queries,draws,\
mean_rank_loss,mean_surrogate_loss,gamma_bar,bound,trivial_max,informative,status";

fn run_latent_sim(a: LatentSimArgs) -> CliResult<u8> {
    let r = resolve_radius(a.dim, a.omega, a.r)?;
    let omega = dplp_core::omega::<f64>(a.dim, r)?;
    let f = score_function(
        a.heuristic,
        &ScoreArgs {
            scores: None,
            sensitivity: None,
        },
    )?;
    let mut rng = task_rng(a.seed, Purpose::Generator, 0, 0);
    let (model, g) = generate::<f64, _>(a.n, a.dim, r, &mut rng)?;
    log::info!(
        "latent graph: {} nodes, {} edges",
        g.node_count(),
        g.edge_count()
    );
    let mut csv = format!("{LATENT_HEADER}\n");
    for &eps in &a.epsilon {
        let cfg = DpConfig::new(a.mechanism, eps, a.k)?
            .with_delta_p(a.delta_p)?
            .with_seed(a.seed);
        let summary = latent_rank_loss(&model, &g, &f, &cfg, a.draws)?;
        let params = BoundParams {
            n_nodes: a.n,
            dimension: a.dim,
            k: a.k,
            r,
            delta: a.delta,
            gamma_bar: summary.gamma_bar,
            heuristic: a.heuristic,
        };
        let (bound, trivial, informative, status) = match rank_loss_bound(&params) {
            Ok(rep) => bound_cells(&rep),
            Err(Error::UndefinedBound(msg)) => {
                log::warn!("{msg}");
                (
                    String::new(),
                    String::new(),
                    "false".into(),
                    "skipped_bound_undefined".into(),
                )
            }
            Err(e) => return Err(e.into()),
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            a.heuristic,
            a.mechanism,
            a.n,
            a.dim,
            a.k,
            r,
            omega,
            eps,
            a.delta,
            summary.queries,
            summary.draws,
            summary.mean_rank_loss,
            summary.mean_surrogate_loss,
            summary.gamma_bar,
            bound,
            trivial,
            informative,
            status
        ));
    }
    emit(&a.out, &csv)?;
    Ok(0)
}

fn bound_cells(rep: &BoundReport<f64>) -> (String, String, String, String) {
    if rep.bound.is_finite() {
        let status = if rep.informative { "ok" } else { "vacuous" };
        (
            rep.bound.to_string(),
            rep.trivial_max.to_string(),
            rep.informative.to_string(),
            status.into(),
        )
    } else {
        (
            String::new(),
            rep.trivial_max.to_string(),
            "false".into(),
            "skipped_overflow".into(),
        )
    }
}

fn run_bounds(a: BoundsArgs) -> CliResult<u8> {
    let r = resolve_radius(a.dim, a.omega, a.r)?;
    let mut csv = format!("{},status\n", BoundReport::<f64>::CSV_HEADER);
    for &h in &a.heuristic {
        for &gamma_bar in &a.gamma_bar {
            let params = BoundParams {
                n_nodes: a.n,
                dimension: a.dim,
                k: a.k,
                r,
                delta: a.delta,
                gamma_bar,
                heuristic: h,
            };
            match rank_loss_bound(&params) {
                Ok(rep) if rep.bound.is_finite() => {
                    let status = if rep.informative { "ok" } else { "vacuous" };
                    csv.push_str(&format!("{},{status}\n", rep.csv_row()));
                }
                Ok(rep) => csv.push_str(&format!(
                    "{h},{},{},{},{r},{},{gamma_bar},{},,false,skipped_overflow\n",
                    a.n, a.dim, a.k, a.delta, rep.epsilon
                )),
                Err(Error::UndefinedBound(msg)) => {
                    log::warn!("{msg}");
                    let eps = dplp_core::concentration_epsilon(a.n, a.delta)?;
                    csv.push_str(&format!(
                        "{h},{},{},{},{r},{},{gamma_bar},{eps},,false,skipped_bound_undefined\n",
                        a.n, a.dim, a.k, a.delta
                    ));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    emit(&a.out, &csv)?;
    Ok(0)
}

fn run_audit(a: AuditArgs) -> CliResult<u8> {
    let f = ScoreFunction::<f64>::from_heuristic(a.heuristic)?;
    if a.nodes < 2 {
        return Err(anyhow!("--nodes must be at least 2").into());
    }
    let mut csv = format!("{}\n", AuditReport::<f64>::CSV_HEADER);
    let mut all_passed = true;
    for (ki, &k) in a.k.iter().enumerate() {
        for (ei, &eps) in a.epsilon.iter().enumerate() {
            let cfg = DpConfig::new(a.mechanism, eps, k)?.with_seed(a.seed);
            let mut rng = task_rng(a.seed, Purpose::Audit, ki as u64, ei as u64);
            let report = audit_random_suite(a.graphs, a.nodes, &f, &cfg, &mut rng)?;
            if !report.passed {
                if let Some(w) = &report.witness {
                    log::warn!(
                        "K={k} epsilon={eps}: log-ratio {} exceeds {} at query {} under {:?}",
                        report.max_abs_log_ratio,
                        report.claimed_bound,
                        w.query,
                        w.perturbation
                    );
                }
            }
            all_passed &= report.passed;
            csv.push_str(&report.csv_row());
            csv.push('\n');
        }
    }
    emit(&a.out, &csv)?;
    Ok(if all_passed { 0 } else { EXIT_RUNTIME })
}
