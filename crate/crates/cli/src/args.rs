use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kappa_core::deformation::CFamily;
use kappa_core::harness::{MetricSpec, Suite};

#[derive(Debug, Parser)]
#[command(name = "kappa", version, about = "Deformation map and identity checks for kappa-Poincare/kappa-Weyl realizations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and report residuals.
    Verify(VerifyArgs),
    /// Apply the deformation map (or its inverse) to one point.
    Map(MapArgs),
    /// Compose two deformed momenta.
    Add(AddArgs),
    /// Classical and deformed mass squared at a point.
    Casimir(CasimirArgs),
    /// Classical-limit gap scan over kappa = 10, 20, 40, 80.
    Limits(LimitsArgs),
    /// Show the built-in metrics.
    ListMetrics(OutputArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit a single JSON document.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Preset name or inline JSON {"n": .., "rows": [[..], ..]}.
    #[arg(long, default_value = "minkowski4")]
    pub metric: MetricSpec,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub kappa: f64,
    /// kappa, constant:<c> or affine:<lambda>.
    #[arg(long, default_value = "kappa")]
    pub c_family: CFamily,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub metric: Option<MetricSpec>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub c_family: Option<CFamily>,
    /// Comma-separated subset of closure, ode, intertwine, roundtrip, casimir, coproduct, limit, weyl.
    #[arg(long, value_delimiter = ',')]
    pub suites: Option<Vec<Suite>>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,
    /// Half-width of the sampling box.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub momentum_box: Option<f64>,
    /// Relative kappa perturbation of one deformed boost (closure fault injection).
    #[arg(long, allow_hyphen_values = true)]
    pub perturb_kappa: Option<f64>,
    /// Evaluate points on the calling thread only.
    #[arg(long)]
    pub serial: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated components p0,p1,...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub point: Vec<f64>,
    /// Treat the point as deformed and map it back; needs --m2.
    #[arg(long, requires = "m2")]
    pub inverse: bool,
    /// Classical mass squared used by the inverse map.
    #[arg(long, allow_hyphen_values = true, requires = "inverse")]
    pub m2: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AddArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub kappa: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub left: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub right: Vec<f64>,
    /// Also print right + left and the sup-norm gap between the two orders.
    #[arg(long)]
    pub both_orders: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CasimirArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub point: Vec<f64>,
    /// Treat the point as deformed: print its mass squared and the recovered classical one.
    #[arg(long)]
    pub deformed: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[arg(long, default_value = "minkowski4")]
    pub metric: MetricSpec,
    #[command(flatten)]
    pub output: OutputArgs,
}
