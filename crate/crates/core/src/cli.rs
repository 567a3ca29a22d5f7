// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Every subcommand loads its input, runs the
//! analysis and writes plot-ready files plus a `manifest.json` echoing the
//! resolved configuration into `--out`.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::ensemble::{generate_scale_free, job_seed, nucleus_scaling, EnsembleSpec};
use crate::error::{Error, Result};
use crate::fractal::{
    cluster_size_distribution, fractal_dimension, shell_contribution, ClusterDistribution, FractalDimension,
};
use crate::graph::{load_edge_list, Graph, IngestOptions, IngestReport};
use crate::kshell::{decompose, k_crust, ShellAssignment};
use crate::medusa::{classify, MedusaReport};
use crate::percolation::{crust_profile, detect_transition, CrustProfile, TransitionReport};
use crate::traversal::{connected_components, DistanceConfig};

pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ANALYSIS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "medusa", version, about = "k-shell decomposition and crust analysis of network topologies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shell index of every node.
    Decompose(DecomposeArgs),
    /// Crust sizes, components and distances for every k; transition location.
    Profile(ProfileArgs),
    /// Nucleus, peer-connected and isolated components.
    Medusa(MedusaArgs),
    /// Box dimension and finite-cluster statistics of a crust.
    Fractal(FractalArgs),
    /// Nucleus scaling over seeded scale-free graphs.
    Ensemble(EnsembleArgs),
    /// profile, medusa and fractal on one input.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    /// Edge list: one `u v` pair per line, `#` comments.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, short, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; defaults to all cores. Does not affect results.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Format of tabular outputs.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistanceArgs {
    /// Components up to this size get exact all-pairs distances.
    #[arg(long, default_value_t = 1000)]
    pub exact_threshold: usize,
    /// BFS sources sampled in larger components.
    #[arg(long, default_value_t = 200)]
    pub sample_sources: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoxArgs {
    /// Crust to analyse; defaults to the detected transition.
    #[arg(long)]
    pub crust: Option<u32>,
    /// Box sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32")]
    pub l_range: Vec<u32>,
    /// Random coverings averaged per box size.
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    /// Also cover the largest component of the whole graph.
    #[arg(long)]
    pub full_graph: bool,
    /// Box sizes for `--full-graph`.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,6,8,12,16,24,32")]
    pub full_l_range: Vec<u32>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub distance: DistanceArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MedusaArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FractalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub distance: DistanceArgs,
    #[command(flatten)]
    pub boxes: BoxArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub distance: DistanceArgs,
    #[command(flatten)]
    pub boxes: BoxArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnsembleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Graph sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1000,3000,10000,30000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub replicates: usize,
    #[arg(long, default_value_t = 2.1)]
    pub gamma: f64,
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    /// Maximum degree; defaults to the natural cutoff.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Write every generated graph as an edge list under `graphs/`.
    #[arg(long)]
    pub emit_graphs: bool,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_input_error() => EXIT_INPUT,
        Error::InvalidArgument(_) | Error::InvalidSpec(_) => EXIT_USAGE,
        _ => EXIT_ANALYSIS,
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let threads = match &cli.command {
        Command::Decompose(a) => a.common.threads,
        Command::Profile(a) => a.common.threads,
        Command::Medusa(a) => a.common.threads,
        Command::Fractal(a) => a.common.threads,
        Command::Ensemble(a) => a.common.threads,
        Command::Report(a) => a.common.threads,
    };
    match threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| dispatch(&cli.command)),
        None => dispatch(&cli.command),
    }
}

fn dispatch(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Medusa(a) => cmd_medusa(a),
        Command::Fractal(a) => cmd_fractal(a),
        Command::Ensemble(a) => cmd_ensemble(a),
        Command::Report(a) => cmd_report(a),
    }
}

/// Loads an edge-list file, tagging parse failures with the path.
pub fn load_graph(path: &Path) -> Result<(Graph, IngestReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_edge_list(BufReader::new(file), IngestOptions::default()).map_err(|e| match e {
        Error::Io { .. } => e,
        other => Error::Input {
            path: path.to_owned(),
            source: Box::new(other),
        },
    })
}

struct Output {
    dir: PathBuf,
    format: Format,
    written: Vec<String>,
}

impl Output {
    fn create(common: &CommonArgs) -> Result<Self> {
        fs::create_dir_all(&common.out).map_err(|e| Error::io(&common.out, e))?;
        Ok(Self {
            dir: common.out.clone(),
            format: common.format,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.written.push(name.to_owned());
        Ok(())
    }

    fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    /// Tabular output as `<stem>.csv` or `<stem>.json` per `--format`.
    fn table<T: Serialize + ?Sized>(&mut self, stem: &str, csv: impl FnOnce() -> String, rows: &T) -> Result<()> {
        match self.format {
            Format::Csv => self.write(&format!("{stem}.csv"), &csv()),
            Format::Json => self.json(&format!("{stem}.json"), rows),
        }
    }

    fn manifest(mut self, command: &str, config: &impl Serialize, input: Option<Value>) -> Result<()> {
        self.written.push("manifest.json".into());
        let manifest = json!({
            "tool": "medusa",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": config,
            "input": input,
            "outputs": self.written,
        });
        self.json("manifest.json", &manifest)
    }
}

fn require_input(common: &CommonArgs) -> Result<&Path> {
    common
        .input
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--input is required".into()))
}

fn input_summary(path: &Path, g: &Graph, report: &IngestReport) -> Value {
    json!({
        "path": path,
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "ingest": report,
    })
}

fn distance_config(d: &DistanceArgs, seed: u64) -> DistanceConfig {
    DistanceConfig {
        exact_threshold: d.exact_threshold,
        sample_sources: d.sample_sources,
        seed,
    }
}

#[derive(Serialize)]
struct ShellRow<'a> {
    node: &'a str,
    shell: u32,
}

fn cmd_decompose(a: &DecomposeArgs) -> Result<()> {
    let path = require_input(&a.common)?;
    let (g, report) = load_graph(path)?;
    let sa = decompose(&g);
    let mut out = Output::create(&a.common)?;
    write_shells(&mut out, &g, &sa)?;
    out.json(
        "summary.json",
        &json!({
            "nodes": g.node_count(),
            "edges": g.edge_count(),
            "k_max": sa.k_max,
            "shell_sizes": sa.shell_sizes,
        }),
    )?;
    out.manifest("decompose", a, Some(input_summary(path, &g, &report)))
}

fn write_shells(out: &mut Output, g: &Graph, sa: &ShellAssignment) -> Result<()> {
    let csv = sa.to_csv(g);
    let rows: Vec<ShellRow> = csv
        .lines()
        .skip(1)
        .filter_map(|l| l.rsplit_once(','))
        .map(|(node, shell)| ShellRow {
            node,
            shell: shell.parse().unwrap_or_default(),
        })
        .collect();
    out.table("shells", || csv.clone(), &rows)
}

fn run_profile(out: &mut Output, g: &Graph, sa: &ShellAssignment, cfg: &DistanceConfig) -> Result<(CrustProfile, TransitionReport)> {
    let profile = crust_profile(g, sa, cfg);
    let transition = detect_transition(&profile);
    out.table("profile", || profile.to_csv(), &profile.rows)?;
    out.json("transition.json", &transition)?;
    Ok((profile, transition))
}

fn cmd_profile(a: &ProfileArgs) -> Result<()> {
    let path = require_input(&a.common)?;
    let (g, report) = load_graph(path)?;
    let sa = decompose(&g);
    let mut out = Output::create(&a.common)?;
    run_profile(&mut out, &g, &sa, &distance_config(&a.distance, a.common.seed))?;
    out.manifest("profile", a, Some(input_summary(path, &g, &report)))
}

fn cmd_medusa(a: &MedusaArgs) -> Result<()> {
    let path = require_input(&a.common)?;
    let (g, report) = load_graph(path)?;
    let sa = decompose(&g);
    let mut out = Output::create(&a.common)?;
    out.json("medusa.json", &MedusaReport::build(&g, &classify(&g, &sa)))?;
    out.manifest("medusa", a, Some(input_summary(path, &g, &report)))
}

#[derive(Serialize)]
struct BoxSection<'a> {
    component_size: usize,
    fit: &'a crate::fit::PowerLawFit,
    exponential_fit: &'a crate::fit::ExponentialFit,
    regime: crate::fractal::Regime,
    dimension: f64,
}

impl<'a> BoxSection<'a> {
    fn new(size: usize, fd: &'a FractalDimension) -> Self {
        Self {
            component_size: size,
            fit: &fd.fit,
            exponential_fit: &fd.exponential_fit,
            regime: fd.regime,
            dimension: fd.dimension(),
        }
    }
}

#[derive(Serialize)]
struct ClusterRow {
    size: usize,
    count: usize,
    probability: f64,
}

fn cluster_rows(cd: &ClusterDistribution) -> Vec<ClusterRow> {
    cd.histogram
        .iter()
        .map(|(&size, &count)| ClusterRow {
            size,
            count,
            probability: count as f64 / cd.finite_clusters as f64,
        })
        .collect()
}

fn run_fractal(
    out: &mut Output,
    g: &Graph,
    sa: &ShellAssignment,
    transition: Option<TransitionReport>,
    boxes: &BoxArgs,
    seed: u64,
) -> Result<()> {
    let k = match (boxes.crust, transition) {
        (Some(k), _) => k,
        (None, Some(t)) => t.k_star_second.ok_or_else(|| {
            Error::InsufficientForFit("no crust has a second component; pass --crust".into())
        })?,
        (None, None) => unreachable!("transition is computed when --crust is absent"),
    };
    if k > sa.k_max {
        return Err(Error::InvalidArgument(format!("--crust {k} exceeds k_max {}", sa.k_max)));
    }
    let crust = k_crust(sa, k);
    let largest = connected_components(g, Some(&crust)).members(0);
    let fd = fractal_dimension(g, &largest, &boxes.l_range, boxes.trials, seed)?;
    out.table("fractal", || fd.to_csv(), &fd.curve)?;

    let full = if boxes.full_graph {
        let giant = connected_components(g, None).members(0);
        let fd = fractal_dimension(g, &giant, &boxes.full_l_range, boxes.trials, seed)?;
        out.table("fractal_full", || fd.to_csv(), &fd.curve)?;
        Some((giant.len(), fd))
    } else {
        None
    };

    // Finite clusters and shell contributions need enough structure to fit;
    // when absent they are reported as null.
    let clusters = cluster_size_distribution(g, sa, k).ok();
    match &clusters {
        Some(cd) => out.table("clusters", || cd.to_csv(), &cluster_rows(cd))?,
        None => out.table("clusters", || "size,count,probability\n".to_owned(), &Vec::<ClusterRow>::new())?,
    }
    let shells = shell_contribution(&classify(g, sa), sa).ok();

    out.json(
        "fits.json",
        &json!({
            "crust": k,
            "box": BoxSection::new(largest.len(), &fd),
            "full_graph": full.as_ref().map(|(n, fd)| BoxSection::new(*n, fd)),
            "clusters": clusters.as_ref().map(|cd| json!({
                "finite_clusters": cd.finite_clusters,
                "largest_excluded": cd.largest_excluded,
                "tau": cd.fit,
            })),
            "shell_contribution": shells,
        }),
    )
}

fn cmd_fractal(a: &FractalArgs) -> Result<()> {
    let path = require_input(&a.common)?;
    let (g, report) = load_graph(path)?;
    let sa = decompose(&g);
    let mut out = Output::create(&a.common)?;
    let transition = match a.boxes.crust {
        Some(_) => None,
        None => Some(detect_transition(&crust_profile(
            &g,
            &sa,
            &distance_config(&a.distance, a.common.seed),
        ))),
    };
    run_fractal(&mut out, &g, &sa, transition, &a.boxes, a.common.seed)?;
    out.manifest("fractal", a, Some(input_summary(path, &g, &report)))
}

fn cmd_report(a: &ReportArgs) -> Result<()> {
    let path = require_input(&a.common)?;
    let (g, report) = load_graph(path)?;
    let sa = decompose(&g);
    let mut out = Output::create(&a.common)?;
    let (_, transition) = run_profile(&mut out, &g, &sa, &distance_config(&a.distance, a.common.seed))?;
    out.json("medusa.json", &MedusaReport::build(&g, &classify(&g, &sa)))?;
    run_fractal(&mut out, &g, &sa, Some(transition), &a.boxes, a.common.seed)?;
    out.manifest("report", a, Some(input_summary(path, &g, &report)))
}

fn cmd_ensemble(a: &EnsembleArgs) -> Result<()> {
    let base = EnsembleSpec {
        n: a.sizes.first().copied().unwrap_or_default(),
        gamma: a.gamma,
        k_min: a.k_min,
        cutoff: a.cutoff,
        seed: a.common.seed,
        replicates: a.replicates,
    };
    for &n in &a.sizes {
        EnsembleSpec { n, ..base }.validate()?;
    }
    let result = nucleus_scaling(&a.sizes, &base, a.replicates, a.common.seed)?;
    let mut out = Output::create(&a.common)?;
    out.table("scaling", || result.to_csv(), &result.rows)?;
    out.json(
        "fits.json",
        &json!({
            "k_max": result.k_max_fit,
            "nucleus_size": result.nucleus_fit,
        }),
    )?;
    if a.emit_graphs {
        for &n in &a.sizes {
            for rep in 0..a.replicates {
                let spec = EnsembleSpec {
                    n,
                    seed: job_seed(a.common.seed, n, rep),
                    ..base
                };
                let gg = generate_scale_free(&spec)?;
                out.write(&format!("graphs/n{n}_r{rep}.edges"), &gg.graph.to_edge_list())?;
            }
        }
    }
    out.manifest("ensemble", a, None)
}
