// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! `spreadrank` command-line tool.
//!
//! All stages share one output directory:
//!
//! ```text
//! graph.tsv      canonical edge list (written by `ingest`)
//! idmap.csv      original label for every dense node id
//! config.json    the run configuration of the last command
//! spread.csv     per-node expected spread (`simulate`)
//! centrality/    one score file per measure (`centrality`)
//! report.csv     tau, epsilon and monotonicity per measure (`evaluate`)
//! scatter.csv    density-versus-metric rows (`evaluate`)
//! ```

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use spreadrank::centrality::KatzAlpha;
use spreadrank::eval::{self, EvaluationReport};
use spreadrank::pipeline::{evaluate_network, ic_network};
use spreadrank::propagation::{spread_all_with_progress, SpreadEstimate};
use spreadrank::{
    apply_wcs, load_edge_list, orient_undirected, read_canonical, write_canonical, Error,
    MeasureSet, Network, Probabilities, RunConfig, MEASURE_IDS,
};

const GRAPH_FILE: &str = "graph.tsv";
const IDMAP_FILE: &str = "idmap.csv";
const CONFIG_FILE: &str = "config.json";
const SPREAD_FILE: &str = "spread.csv";
const REPORT_FILE: &str = "report.csv";
const SCATTER_FILE: &str = "scatter.csv";
const CENTRALITY_DIR: &str = "centrality";

#[derive(Parser)]
#[command(
    name = "spreadrank",
    version,
    about = "Rank nodes by centrality and check the ranking against simulated influence spread"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read an edge list and store it in canonical form.
    Ingest(IngestArgs),
    /// Estimate every node's expected spread as a single seed.
    Simulate(RunArgs),
    /// Write score files for the selected measures.
    Centrality(RunArgs),
    /// Score the selected measures against the stored spread.
    Evaluate(EvaluateArgs),
    /// Combine report files and append geometric means.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbabilitiesArg {
    Wcs,
    AsIs,
}

#[derive(Args)]
struct ConfigArgs {
    /// Cascades per seed node.
    #[arg(long, default_value_t = 20_000)]
    runs: usize,
    /// Master seed all randomness derives from.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Size of the top set used by the ranking error.
    #[arg(long = "top-k", default_value_t = 50)]
    top_k: usize,
    /// Comma-separated measure ids, or `all`.
    #[arg(long, default_value = "all")]
    measures: String,
    /// Katz attenuation: `auto` or a number.
    #[arg(long = "katz-alpha", default_value = "auto")]
    katz_alpha: String,
    /// Hop radius of gravity neighbourhoods.
    #[arg(long, default_value_t = 3)]
    radius: usize,
    /// Fold point of the modified closeness.
    #[arg(long = "closeness-threshold", default_value_t = 0.04)]
    closeness_threshold: f64,
    /// Cascade probabilities: in-degree based or the stored weights.
    #[arg(long, value_enum, default_value = "wcs")]
    probabilities: ProbabilitiesArg,
}

#[derive(Args)]
struct OutputArgs {
    /// Directory holding the pipeline files.
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
    /// Leave generation-time comments out of output files.
    #[arg(long = "no-timestamps")]
    no_timestamps: bool,
    /// Worker threads (results never depend on it).
    #[arg(long)]
    threads: Option<usize>,
    /// Suppress progress output.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct IngestArgs {
    /// Whitespace-separated edge list (`u v` or `u v w`).
    input: PathBuf,
    /// Treat lines as directed edges.
    #[arg(long)]
    directed: bool,
    /// Read a weight from the third column.
    #[arg(long)]
    weighted: bool,
    /// Dataset name used in reports (defaults to the file stem).
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Dataset name (defaults to the name recorded at ingestion).
    #[arg(long)]
    dataset: Option<String>,
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReportArgs {
    /// Report files written by `evaluate`.
    #[arg(required = true)]
    reports: Vec<PathBuf>,
    /// Destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Convergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 3,
            Failure::Convergence(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) => Failure::Usage(e.to_string()),
            Error::UnknownMeasure(m) => Failure::Usage(format!(
                "unknown measure `{m}`; valid ids: {}",
                MEASURE_IDS.join(", ")
            )),
            Error::Convergence { .. } => Failure::Convergence(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn parse_alpha(s: &str) -> CliResult<KatzAlpha> {
    if s == "auto" {
        return Ok(KatzAlpha::AutoSpectral);
    }
    match s.parse::<f64>() {
        Ok(a) if a > 0.0 && a.is_finite() => Ok(KatzAlpha::Fixed(a)),
        _ => Err(Failure::Usage(format!(
            "--katz-alpha expects `auto` or a positive number, got `{s}`"
        ))),
    }
}

impl ConfigArgs {
    fn build(&self) -> CliResult<RunConfig> {
        let mut cfg = RunConfig {
            runs: self.runs,
            master_seed: self.seed,
            top_k: self.top_k,
            probabilities: match self.probabilities {
                ProbabilitiesArg::Wcs => Probabilities::Wcs,
                ProbabilitiesArg::AsIs => Probabilities::AsIs,
            },
            ..RunConfig::default()
        };
        cfg.params.katz_alpha = parse_alpha(&self.katz_alpha)?;
        cfg.params.gravity_radius = self.radius;
        cfg.params.closeness_threshold = self.closeness_threshold;
        if self.measures != "all" {
            cfg.measures = self
                .measures
                .split(',')
                .map(|m| m.trim().to_string())
                .filter(|m| !m.is_empty())
                .collect();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

struct Ctx {
    cfg: RunConfig,
    out: OutputArgs,
}

impl Ctx {
    fn new(config: &ConfigArgs, out: OutputArgs) -> CliResult<Self> {
        let cfg = config.build()?;
        if let Some(t) = out.threads {
            if t == 0 {
                return Err(Failure::Usage("--threads must be at least 1".into()));
            }
        }
        fs::create_dir_all(&out.out_dir)?;
        let ctx = Ctx { cfg, out };
        fs::write(ctx.path(CONFIG_FILE), ctx.cfg.to_json() + "\n")?;
        Ok(ctx)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.out_dir.join(name)
    }

    /// Provenance comment lines shared by every output file.
    fn comments(&self, graph_hash: &str) -> Vec<String> {
        let mut c = vec![
            format!("graph={graph_hash}"),
            format!("config={}", self.cfg.hash()),
        ];
        if !self.out.no_timestamps {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            c.push(format!("generated_unix={secs}"));
        }
        c
    }

    fn note(&self, msg: &str) {
        if !self.out.quiet {
            eprintln!("{msg}");
        }
    }

    fn load_graph(&self) -> CliResult<(Network, String)> {
        let path = self.path(GRAPH_FILE);
        let file = File::open(&path).map_err(|e| {
            Failure::Data(format!(
                "cannot open {}: {e} (run `ingest` first)",
                path.display()
            ))
        })?;
        let net = read_canonical(BufReader::new(file))?;
        let hash = net.content_hash();
        Ok((net, hash))
    }

    fn dataset_name(&self) -> CliResult<String> {
        let text = fs::read_to_string(self.path(GRAPH_FILE))?;
        Ok(text
            .lines()
            .filter(|l| l.starts_with('#'))
            .find_map(|l| {
                l.trim_start_matches('#')
                    .trim()
                    .strip_prefix("dataset=")
                    .map(str::to_string)
            })
            .unwrap_or_else(|| "dataset".to_string()))
    }

    fn create(&self, name: &str) -> CliResult<BufWriter<File>> {
        Ok(BufWriter::new(File::create(self.path(name))?))
    }
}

fn comment_value<'a>(comments: &'a [String], key: &str) -> Option<&'a str> {
    comments
        .iter()
        .find_map(|c| c.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

fn ingest(args: IngestArgs) -> CliResult {
    let ctx = Ctx::new(&args.config, args.output)?;
    let raw = load_edge_list(&args.input, args.directed, args.weighted)?;
    if raw.stats.self_loops > 0 {
        ctx.note(&format!("dropped {} self-loop(s)", raw.stats.self_loops));
    }
    if raw.stats.duplicates > 0 {
        ctx.note(&format!(
            "dropped {} duplicate edge(s)",
            raw.stats.duplicates
        ));
    }
    let mut net = orient_undirected(&raw.network);
    let dropped = raw.network.edge_count() - net.edge_count();
    if dropped > 0 {
        ctx.note(&format!(
            "dropped {dropped} edge(s) that became parallel after orientation"
        ));
    }
    if !args.weighted {
        net = apply_wcs(&net);
    }
    let name = args.name.unwrap_or_else(|| {
        args.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into())
    });
    if name.contains(|c: char| c.is_whitespace() || c == ',') {
        return Err(Failure::Usage(format!(
            "dataset name `{name}` may not contain spaces or commas"
        )));
    }

    let mut w = ctx.create(GRAPH_FILE)?;
    write_canonical(&net, &mut w)?;
    writeln!(w, "# dataset={name}")?;
    w.flush()?;
    let mut w = ctx.create(IDMAP_FILE)?;
    raw.id_map.write_csv(&mut w)?;
    w.flush()?;

    println!(
        "nodes={} edges={} density={:.4}",
        net.node_count(),
        net.edge_count(),
        net.density()
    );
    Ok(())
}

fn simulate(args: RunArgs) -> CliResult {
    let ctx = Ctx::new(&args.config, args.output)?;
    let (net, graph_hash) = ctx.load_graph()?;
    let sim_hash = ctx.cfg.simulation_hash(&graph_hash);
    let path = ctx.path(SPREAD_FILE);
    if let Ok(file) = File::open(&path) {
        match SpreadEstimate::read_csv(BufReader::new(file)) {
            Ok((_, comments)) if comment_value(&comments, "sim") == Some(sim_hash.as_str()) => {
                ctx.note("spread cache is current; nothing to do");
                return Ok(());
            }
            _ => ctx.note("spread cache is stale or unreadable; recomputing"),
        }
    }

    let ic = ic_network(&net, ctx.cfg.probabilities)?;
    let last = AtomicUsize::new(0);
    let quiet = ctx.out.quiet;
    let progress = |done: usize, total: usize| {
        let pct = done * 100 / total.max(1);
        if !quiet && last.fetch_max(pct, Ordering::Relaxed) < pct {
            eprintln!("simulate: {pct}% ({done}/{total} seeds)");
        }
    };
    let est = spread_all_with_progress(&ic, &ctx.cfg.simulation(ctx.out.threads), &progress)?;

    let mut comments = ctx.comments(&graph_hash);
    comments.insert(1, format!("sim={sim_hash}"));
    let mut w = ctx.create(SPREAD_FILE)?;
    est.write_csv(&mut w, &comments)?;
    w.flush()?;
    ctx.note(&format!("wrote {}", path.display()));
    Ok(())
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(t) => rayon_pool(t).map(|p| p.install(f)),
    }
}

fn rayon_pool(threads: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

fn centrality(args: RunArgs) -> CliResult {
    let ctx = Ctx::new(&args.config, args.output)?;
    let (net, graph_hash) = ctx.load_graph()?;
    fs::create_dir_all(ctx.path(CENTRALITY_DIR))?;
    let comments = ctx.comments(&graph_hash);
    let scores = with_threads(ctx.out.threads, || -> Result<Vec<_>, Error> {
        let mut set = MeasureSet::new(&net, ctx.cfg.params);
        ctx.cfg
            .measures
            .iter()
            .map(|m| set.get(m).cloned())
            .collect()
    })??;
    for s in scores {
        let name = format!("{CENTRALITY_DIR}/{}.csv", s.measure());
        let mut w = ctx.create(&name)?;
        s.write_csv(&mut w, &comments)?;
        w.flush()?;
        ctx.note(&format!("wrote {}", ctx.path(&name).display()));
    }
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> CliResult {
    let ctx = Ctx::new(&args.config, args.output)?;
    let (net, graph_hash) = ctx.load_graph()?;
    let path = ctx.path(SPREAD_FILE);
    let file = File::open(&path).map_err(|e| {
        Failure::Data(format!(
            "cannot open {}: {e} (run `simulate` first)",
            path.display()
        ))
    })?;
    let (spread, spread_comments) = SpreadEstimate::read_csv(BufReader::new(file))?;
    if comment_value(&spread_comments, "graph") != Some(graph_hash.as_str()) {
        return Err(Failure::Data(format!(
            "{} was computed for a different graph; rerun `simulate`",
            path.display()
        )));
    }
    if comment_value(&spread_comments, "sim") != Some(ctx.cfg.simulation_hash(&graph_hash).as_str())
    {
        return Err(Failure::Data(format!(
            "{} was computed with different --runs, --seed or --probabilities; rerun `simulate` with matching flags",
            path.display()
        )));
    }
    let dataset = match args.dataset {
        Some(d) => d,
        None => ctx.dataset_name()?,
    };
    let report = with_threads(ctx.out.threads, || {
        evaluate_network(&dataset, &net, &spread, &ctx.cfg)
    })??;

    let comments = ctx.comments(&graph_hash);
    let mut w = ctx.create(REPORT_FILE)?;
    report.write_csv(&mut w, &comments)?;
    w.flush()?;
    let mut w = ctx.create(SCATTER_FILE)?;
    for c in &comments {
        writeln!(w, "# {c}")?;
    }
    report.write_scatter(&mut w, true)?;
    w.flush()?;

    print_report(&report);
    Ok(())
}

fn fmt_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |x| format!("{x:.5}"))
}

fn print_report(report: &EvaluationReport) {
    println!(
        "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "measure", "tau", "tau_norm", "eps", "eps_norm", "mono"
    );
    for r in &report.records {
        println!(
            "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10}",
            r.measure,
            fmt_cell(r.tau),
            fmt_cell(r.tau_norm),
            fmt_cell(r.epsilon),
            fmt_cell(r.epsilon_norm),
            fmt_cell(r.monotonicity)
        );
    }
}

fn report(args: ReportArgs) -> CliResult {
    let mut reports = Vec::new();
    let mut config: Option<String> = None;
    for p in &args.reports {
        let file = File::open(p)
            .map_err(|e| Failure::Data(format!("cannot open {}: {e}", p.display())))?;
        let (rep, comments) = EvaluationReport::read_csv(BufReader::new(file))
            .map_err(|e| Failure::Data(format!("{}: {e}", p.display())))?;
        let hash = comment_value(&comments, "config").unwrap_or("").to_string();
        match &config {
            None => config = Some(hash),
            Some(h) if *h != hash => {
                return Err(Failure::Data(format!(
                    "{} was produced with a different configuration; refusing to mix reports",
                    p.display()
                )))
            }
            _ => {}
        }
        reports.push(rep);
    }
    let agg = eval::aggregate(&reports);

    let mut out: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(out, "# config={}", config.unwrap_or_default())?;
    writeln!(out, "{}", eval::REPORT_HEADER)?;
    for rep in reports.iter().chain([&agg]) {
        let mut buf = Vec::new();
        rep.write_csv(&mut buf, &[])?;
        let text = String::from_utf8(buf).expect("utf8");
        for line in text
            .lines()
            .filter(|l| !l.starts_with('#') && *l != eval::REPORT_HEADER)
        {
            writeln!(out, "{line}")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Simulate(a) => simulate(a),
        Command::Centrality(a) => centrality(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Report(a) => report(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Data(m) | Failure::Convergence(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
