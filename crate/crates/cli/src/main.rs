mod commands;
mod corpus;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use momentdist::baselines::Method;
use momentdist::graph::Indexing;
use momentdist::metrics::{Metric, Scaling};
use serde::Serialize;

use crate::error::{CliError, ExitKind};

/// Graph comparison through moment matrices of adjacency spectral distributions.
#[derive(Parser, Debug)]
#[command(name = "momentdist", version)]
struct Cli {
    /// Worker threads; defaults to all cores. Output does not depend on it.
    #[arg(long, global = true, env = "MOMENTDIST_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moment sequence of one graph as JSON.
    Moments(MomentsArgs),
    /// Pairwise distance matrix of several graphs as CSV or JSON.
    Pairwise(PairwiseArgs),
    /// Kernel k-means on a labeled corpus; writes an experiment report.
    Cluster(ClusterArgs),
    /// Cross-validated KNN on a labeled corpus; writes an experiment report.
    Classify(ClassifyArgs),
    /// Spectral distribution (stem-plot data) of one graph as CSV.
    Spectrum(SpectrumArgs),
    /// Time moment extraction and pairwise distances on generated graphs.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexingArg {
    Auto,
    Zero,
    One,
}

impl From<IndexingArg> for Indexing {
    fn from(a: IndexingArg) -> Self {
        match a {
            IndexingArg::Auto => Indexing::Auto,
            IndexingArg::Zero => Indexing::Zero,
            IndexingArg::One => Indexing::One,
        }
    }
}

#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Named graph such as `K4`, `C4uK1`, `P5` or `K3,3`.
    #[arg(long)]
    pub named: Option<String>,
    /// Edge-list file.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateArg {
    Vector,
    Trace,
}

#[derive(Args, Debug, Serialize)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, value_enum, default_value = "auto")]
    pub indexing: IndexingArg,
    /// Highest moment order K.
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "vector")]
    pub state: StateArg,
    /// Write JSON here (plus a manifest sidecar) instead of stdout.
    #[serde(skip)]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DistanceArgs {
    /// Moment matrix degree d; the matrix is (d+1)x(d+1) and uses moments up to 2d.
    #[arg(long, default_value_t = momentdist::hankel::DEFAULT_DEGREE)]
    pub degree: usize,
    /// frobenius, affine-invariant, log-frobenius, cholesky-frobenius or j-divergence.
    #[arg(long, default_value = "affine-invariant")]
    pub metric: Metric,
    /// none or log1p.
    #[arg(long, default_value = "none")]
    pub scale: Scaling,
    /// Added to the diagonal of every moment matrix before comparing.
    #[arg(long, default_value_t = 0.0)]
    pub reg: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MethodArgs {
    /// moment, cov, nclm, eigs, gk3 or gk4.
    #[arg(long, default_value = "moment")]
    pub method: Method,
    #[command(flatten)]
    pub distance: DistanceArgs,
    /// Highest moment order in the covariance descriptor.
    #[arg(long, default_value_t = 4)]
    pub cov_order: usize,
    /// Fixed diagonal jitter for the covariance baseline; per-pair default otherwise.
    #[arg(long)]
    pub cov_jitter: Option<f64>,
    /// Number of leading eigenvalues for the eigs baseline.
    #[arg(long, default_value_t = 10)]
    pub eigs_k: usize,
    /// Sampled 4-vertex subsets per graph for gk4.
    #[arg(long, default_value_t = 10_000)]
    pub gk4_samples: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixFormat {
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
pub struct PairwiseArgs {
    /// Edge-list files or directories of them (sorted by name).
    pub inputs: Vec<PathBuf>,
    /// Comma-separated named graphs, placed before any files.
    #[arg(long, value_delimiter = ',')]
    pub named: Vec<String>,
    #[arg(long, value_enum, default_value = "auto")]
    pub indexing: IndexingArg,
    #[command(flatten)]
    pub method: MethodArgs,
    /// Seed for sampled baselines.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output format; inferred from the --out extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<MatrixFormat>,
    #[serde(skip)]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ClusterArgs {
    /// Corpus manifest JSON.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub indexing: IndexingArg,
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of clusters; defaults to the number of classes.
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[serde(skip)]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ClassifyArgs {
    /// Corpus manifest JSON.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub indexing: IndexingArg,
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Neighbors consulted per prediction.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[serde(skip)]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, value_enum, default_value = "auto")]
    pub indexing: IndexingArg,
    /// CSV output path; stdout when omitted.
    #[serde(skip)]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Size {
    pub nv: usize,
    pub ne: usize,
}

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected NV:NE, got `{s}`"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        Ok(Size {
            nv: parse(a)?,
            ne: parse(b)?,
        })
    }
}

#[derive(Args, Debug, Serialize)]
pub struct BenchArgs {
    /// Comma-separated NV:NE pairs.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<Size>,
    /// Graphs generated per size.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rewiring probability of the generator; 1 gives uniformly random edges.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Timing repeats; the median is reported.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[command(flatten)]
    pub distance: DistanceArgs,
    /// CSV output path; stdout when omitted.
    #[serde(skip)]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::config("--threads must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ExitKind::Config as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = configure_threads(cli.threads).and_then(|()| match &cli.command {
        Command::Moments(a) => commands::moments(a),
        Command::Pairwise(a) => commands::pairwise(a),
        Command::Cluster(a) => commands::cluster(a),
        Command::Classify(a) => commands::classify(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Bench(a) => commands::bench(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
