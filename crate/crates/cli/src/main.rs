use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spectra_cert::analysis::{analyze, AnalysisOptions, BoundReport};
use spectra_cert::clustering::{EmbeddingScaling, DEFAULT_RESTARTS};
use spectra_cert::experiment::{output_paths, run_experiment, ExperimentConfig, ExperimentKind, GeneratorSection};
use spectra_cert::generators::Fixture;
use spectra_cert::graph::{Graph, Partition};
use spectra_cert::spectral::RepresentationKind;
use spectra_cert::{io, Error};

const MAX_VERTICES: usize = 5000;

#[derive(Parser)]
#[command(name = "spectra-cert", version, about = "Certified bounds for spectral clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a graph and report every applicable bound as JSON.
    Analyze(AnalyzeArgs),
    /// Run a configured sweep of seeded trials.
    Experiment(ExperimentArgs),
    /// Write a synthetic instance as an edge list plus labels.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Edge list (`u v [w]` per line, `#` comments).
    graph: Option<PathBuf>,
    /// Built-in instance instead of a file.
    #[arg(long, conflicts_with = "graph")]
    fixture: Option<String>,
    /// Ground-truth labels (`vertex cluster` per line), certified separately.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Treat the edge list as directed.
    #[arg(long)]
    directed: bool,
    /// Number of clusters (required unless a fixture or labels fix it).
    #[arg(long)]
    k: Option<usize>,
    /// Eigenvectors embedded (default k, or 1 for digraphs).
    #[arg(long)]
    k_tilde: Option<usize>,
    /// Root of unity in the Hermitian adjacency (default k).
    #[arg(long)]
    root_order: Option<usize>,
    /// combinatorial_laplacian, normalized_laplacian, hermitian_laplacian or
    /// normalized_hermitian_laplacian.
    #[arg(long)]
    representation: Option<RepresentationKind>,
    /// Embedding row scaling: paper_literal or cluster_constant.
    #[arg(long)]
    scaling: Option<EmbeddingScaling>,
    /// Eigenvalue group boundaries for the recursive bound, e.g. `2` or `0,2,4`.
    #[arg(long, value_delimiter = ',')]
    groups: Option<Vec<usize>>,
    /// k-means seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// k-means restarts; the lowest objective wins.
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lift the vertex cap.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML experiment description.
    config: PathBuf,
    /// Directory for `summary.csv` and per-point JSON (default: `experiment.output`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// What goes to stdout when no output directory is set.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Override `experiment.trials`.
    #[arg(long)]
    trials: Option<usize>,
    /// Override `experiment.master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Lift the vertex cap.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// geometric_sweep, sbm_hierarchy, sbm_threshold, dsbm_path, dsbm_cycle or fixture.
    kind: String,
    /// Output prefix: writes `<out>.edges` and `<out>.labels`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertices per block.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Intra-block edge probability.
    #[arg(long)]
    p: Option<f64>,
    /// Inter-block edge probability.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Orientation noise for the directed block models.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Horizontal separation of the Gaussian centres.
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    points_per_centre: Option<usize>,
    #[arg(long)]
    std_dev: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    /// two_clique_matching, perfect_cycle or perfect_path.
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long)]
    block: Option<usize>,
    /// Lift the vertex cap.
    #[arg(long)]
    allow_large: bool,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_numerical() { 2 } else { 1 }, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

fn check_size(n: usize, allow_large: bool) -> Result<(), Failure> {
    if n > MAX_VERTICES && !allow_large {
        return Err(usage(format!(
            "{n} vertices exceeds the dense-solver cap of {MAX_VERTICES}; pass --allow-large to proceed"
        )));
    }
    Ok(())
}

fn load_input(a: &AnalyzeArgs) -> Result<(Graph, Option<Partition>, String), Failure> {
    match (&a.fixture, &a.graph) {
        (Some(name), _) => {
            let (g, p) = Fixture::by_name(name)?.generate()?;
            if a.labels.is_some() {
                return Err(usage("--labels cannot be combined with --fixture"));
            }
            Ok((g, Some(p), format!("fixture:{name}")))
        }
        (None, Some(path)) => {
            let g = io::load_edge_list(path, a.directed)?;
            let truth = a.labels.as_deref().map(|l| io::load_labels(l, &g)).transpose()?;
            Ok((g, truth, path.display().to_string()))
        }
        (None, None) => Err(usage("give a graph file or --fixture NAME")),
    }
}

fn normalise_groups(q: &[usize], k: usize) -> Vec<usize> {
    let mut out = q.to_vec();
    if out.first() != Some(&0) {
        out.insert(0, 0);
    }
    if out.last() != Some(&k) {
        out.push(k);
    }
    out
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let (g, truth, source) = load_input(&a)?;
    check_size(g.n_vertices(), a.allow_large)?;
    let k = match (a.k, &truth) {
        (Some(k), _) => k,
        (None, Some(t)) => t.k(),
        (None, None) => return Err(usage("--k is required without labels")),
    };
    let directed = g.is_directed();
    let mut opts = AnalysisOptions::defaults(k, directed);
    let c = &mut opts.cluster;
    if let Some(kind) = a.representation {
        c.kind = kind;
    }
    c.num_vectors = a.k_tilde.unwrap_or(c.num_vectors);
    c.root_order = a.root_order.unwrap_or(c.root_order);
    c.scaling = a.scaling.unwrap_or(c.scaling);
    c.restarts = a.restarts;
    c.seed = a.seed;
    opts.groups = a.groups.as_deref().map(|q| normalise_groups(q, k));
    let report = analyze(&g, &opts, truth.as_ref(), &source)?;
    emit_report(&report, a.out.as_deref())
}

fn emit_report(report: &BoundReport, out: Option<&Path>) -> Result<(), Failure> {
    let json = serde_json::to_string_pretty(report).map_err(|e| usage(e.to_string()))?;
    match out {
        Some(path) => fs::write(path, json + "\n").map_err(|e| io_failure(path, e)),
        None => write_stdout(&(json + "\n")),
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn write_stdout(text: &str) -> Result<(), Failure> {
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(usage(e.to_string())),
        _ => Ok(()),
    }
}

/// Upper estimate of the vertex count at one sweep point.
fn planned_vertices(kind: ExperimentKind, gen: &GeneratorSection) -> Option<usize> {
    match kind {
        ExperimentKind::GeometricSweep => Some(4 * gen.points_per_centre.unwrap_or(100)),
        ExperimentKind::SbmHierarchy => {
            Some(gen.probabilities.as_ref().map_or(4, Vec::len) * gen.n.unwrap_or(0))
        }
        ExperimentKind::SbmThreshold => Some(2 * gen.n.unwrap_or(0)),
        ExperimentKind::DsbmPath | ExperimentKind::DsbmCycle => Some(4 * gen.n.unwrap_or(100)),
        ExperimentKind::Fixture | ExperimentKind::File => None,
    }
}

fn cmd_experiment(a: ExperimentArgs) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::load(&a.config)?;
    if let Some(t) = a.trials {
        if t == 0 {
            return Err(usage("--trials must be at least 1"));
        }
        cfg.experiment.trials = t;
    }
    if let Some(s) = a.seed {
        cfg.experiment.master_seed = s;
    }
    let kind = cfg.kind()?;
    for v in cfg.sweep_values()? {
        if let Some(n) = planned_vertices(kind, &cfg.generator_at(v)?) {
            check_size(n, a.allow_large)?;
        }
    }
    let base = a.config.parent().unwrap_or(Path::new("."));
    let result = run_experiment(&cfg, base)?;
    let failed: usize = result.points.iter().map(|p| p.trials.len() - p.reports().count()).sum();
    if failed > 0 {
        log::warn!("{failed} trials failed numerically and are excluded from the means");
    }
    let dir = a.out.or_else(|| cfg.experiment.output.as_ref().map(|o| base.join(o)));
    match dir {
        Some(dir) => {
            fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
            let (csv, points) = output_paths(&dir, result.points.len());
            fs::write(&csv, result.to_csv()).map_err(|e| io_failure(&csv, e))?;
            for (path, point) in points.iter().zip(&result.points) {
                let json = serde_json::to_string_pretty(point).map_err(|e| usage(e.to_string()))?;
                fs::write(path, json + "\n").map_err(|e| io_failure(path, e))?;
            }
            let cfg_path = dir.join("config.toml");
            fs::write(&cfg_path, cfg.to_toml()?).map_err(|e| io_failure(&cfg_path, e))?;
            eprintln!("wrote {} and {} point files to {}", csv.display(), points.len(), dir.display());
        }
        None => {
            let text = match a.format {
                Format::Csv => result.to_csv(),
                Format::Json => serde_json::to_string_pretty(&result).map_err(|e| usage(e.to_string()))? + "\n",
            };
            write_stdout(&text)?;
        }
    }
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> Result<(), Failure> {
    let kind = ExperimentKind::parse(&a.kind)?;
    if kind == ExperimentKind::File {
        return Err(usage("`file` is not a generator"));
    }
    let gen = GeneratorSection {
        n: a.n,
        k: a.k,
        p: a.p,
        q: a.q,
        alpha: a.alpha,
        beta: a.beta,
        epsilon: a.epsilon,
        d: a.d,
        points_per_centre: a.points_per_centre,
        std_dev: a.std_dev,
        threshold: a.threshold,
        fixture: a.fixture,
        block: a.block,
        ..Default::default()
    };
    if let Some(n) = planned_vertices(kind, &gen) {
        check_size(n, a.allow_large)?;
    }
    let cfg = ExperimentConfig::from_toml(&format!("[experiment]\nkind = \"{}\"\n", a.kind))?;
    let (g, truth) = cfg.instance(&gen, a.seed, Path::new("."))?;
    let isolated = (0..g.n_vertices()).filter(|&u| g.degree(u) == 0.0).count();
    if isolated > 0 {
        log::warn!("{isolated} isolated vertices cannot be represented in an edge list and are dropped on reload");
    }
    let edges = a.out.with_extension("edges");
    io::write_edge_list(&edges, &g)?;
    if let Some(p) = truth {
        io::write_labels(&a.out.with_extension("labels"), &g, &p)?;
    }
    eprintln!("wrote {} ({} vertices, {} edges)", edges.display(), g.n_vertices(), g.n_edges());
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("SPECTRA_CERT_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| usage(format!("SPECTRA_CERT_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let run = || -> Result<(), Failure> {
        configure_threads()?;
        match cli.command {
            Command::Analyze(a) => cmd_analyze(a),
            Command::Experiment(a) => cmd_experiment(a),
            Command::Generate(a) => cmd_generate(a),
        }
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
