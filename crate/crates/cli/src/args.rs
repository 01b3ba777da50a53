use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rcd", version, about = "Robust community detection experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Repeated trials on synthetic two-block graphs with outliers.
    Synth(SynthArgs),
    /// Trials over a range of `lambda` or within-cluster probability values.
    Sweep(SweepArgs),
    /// Cluster a graph read from an edge list.
    Real(RealArgs),
    /// Spectral clustering only, on synthetic graphs.
    Baseline(BaselineArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    #[arg(long, default_value_t = 500)]
    pub n1: usize,
    #[arg(long, default_value_t = 500)]
    pub n2: usize,
    /// Within-cluster edge probability.
    #[arg(long, default_value_t = 0.17)]
    pub p: f64,
    /// Cross-cluster edge probability.
    #[arg(long, default_value_t = 0.11)]
    pub q: f64,
    /// Number of outlier nodes.
    #[arg(long, default_value_t = 30)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = OutlierArg::Mixed)]
    pub outliers: OutlierArg,
    /// Edge probability inside the outlier block.
    #[arg(long, default_value_t = 0.7)]
    pub p_w: f64,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Trial `t` uses seed `seed + t`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutlierArg {
    /// Dense outlier block, squared-uniform attachment per inlier.
    Mixed,
    /// Dense outlier block with no edges to the inliers.
    Clique,
    /// Each outlier attaches to every inlier with a uniform[0, 1] probability.
    Random,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Fix `lambda` instead of estimating it from the degrees.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    /// k-means restarts.
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[arg(long, value_enum, default_value_t = MetricArg::Both)]
    pub metric: MetricArg,
    /// Add a wall-clock column (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Write the table here instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricArg {
    Pairs,
    Matched,
    Both,
}

impl MetricArg {
    pub fn pairs(self) -> bool {
        self != MetricArg::Matched
    }

    pub fn matched(self) -> bool {
        self != MetricArg::Pairs
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianArg {
    Unnormalized,
    SymNormalized,
    RandomWalk,
    NormalizedAdjacency,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Laplacian used by the spectral baseline columns.
    #[arg(long, value_enum, default_value_t = LaplacianArg::Unnormalized)]
    pub laplacian: LaplacianArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisArg {
    Lambda,
    P,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub step: f64,
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Plain,
    DegreeCorrected,
}

#[derive(Args, Debug)]
pub struct RealArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    pub edges: PathBuf,
    /// Optional `node label` file for scoring.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Number of clusters.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::DegreeCorrected)]
    pub mode: ModeArg,
    /// Keep every node instead of only the largest connected component.
    #[arg(long)]
    pub all_components: bool,
    /// Write predicted `node label` lines here.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenArg {
    LargestAbs,
    Smallest,
}

#[derive(Args, Debug)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Embed with the adjacency matrix instead of a Laplacian.
    #[arg(long)]
    pub adjacency: bool,
    #[arg(long, value_enum, default_value_t = LaplacianArg::Unnormalized)]
    pub laplacian: LaplacianArg,
    /// Number of eigenvectors and clusters; defaults to the cluster count.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = EigenArg::LargestAbs)]
    pub eigen: EigenArg,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[arg(long, value_enum, default_value_t = MetricArg::Both)]
    pub metric: MetricArg,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}
