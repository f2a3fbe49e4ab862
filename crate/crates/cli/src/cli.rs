//! Flag grammar of the `peelshape` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "peelshape",
    version,
    about = "Convex and semiconvex peeling of point clouds, limit shapes and Monte Carlo estimates of alpha",
    after_help = "Exit status: 0 on success, 1 on usage or input errors, 2 when a verification suite fails.\n\
                  Without --out, outputs go to $PEELSHAPE_OUT_DIR/<command>.<ext> when that variable is set, \
                  and to standard output otherwise.\n\
                  Precedence: command-line flags, then the --config file, then built-in defaults."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Flags shared by every command.
#[derive(Debug, Args)]
pub struct Common {
    /// Base seed of all random streams.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Ambient dimension (only 2 is implemented for peeling).
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub dim: Option<u8>,
    /// Worker threads for trial-parallel experiments (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// `key = value` file supplying defaults for any long flag of the command.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Peel a point cloud read from CSV and write layer indices.
    Peel(PeelArgs),
    /// Draw a Poisson or i.i.d. sample and write it as CSV.
    Sample(SampleArgs),
    /// Estimate alpha by the cell, maxdepth or profile route.
    EstimateAlpha(AlphaArgs),
    /// Grid sup error of rescaled heights against alpha h.
    LimitShape(ShapeArgs),
    /// Points per layer against the continuum profile N(t).
    LayerCounts(CountsArgs),
    /// Mean counts of the outermost layers.
    BoundaryLayer(BoundaryArgs),
    /// Run the property suites; exit 2 and print the first counterexample on failure.
    Verify(VerifyArgs),
    /// Cell-problem estimator at one cylinder size.
    Cell(CellArgs),
}

#[derive(Debug, Args)]
pub struct PeelArgs {
    #[command(flatten)]
    pub common: Common,
    /// Input point cloud (CSV, optional header x1,...,xd).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Also write an SVG drawing to this file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Draw every k-th layer (default: at most ten outlines).
    #[arg(long)]
    pub k: Option<usize>,
    /// Peel with parabolas instead of half-planes (points must have x2 > 0).
    #[arg(long)]
    pub semiconvex: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Poisson,
    Iid,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    /// `ball`, `gaussian`, or a density file.
    #[arg(long)]
    pub density: Option<String>,
    /// Poisson process of intensity n, or exactly n i.i.d. points.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Intensity m (poisson) or count n (iid).
    #[arg(long)]
    pub n: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Cell,
    Maxdepth,
    Profile,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    #[command(flatten)]
    pub common: Common,
    /// Estimation route (default maxdepth).
    #[arg(long, value_enum)]
    pub route: Option<RouteArg>,
    /// Size schedule: `a:b:k` (k log-spaced values), a list, or one value.
    #[arg(long)]
    pub n: Option<String>,
    /// Trials per size.
    #[arg(long)]
    pub trials: Option<usize>,
    /// `ball`, `gaussian`, or a density file.
    #[arg(long)]
    pub density: Option<String>,
    /// Query heights for the cell route.
    #[arg(long)]
    pub r: Option<String>,
    /// Cylinder half-side over r for the cell route.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Grid pitch for the profile route.
    #[arg(long)]
    pub pitch: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    #[command(flatten)]
    pub common: Common,
    /// `ball`, `gaussian`, or a density file.
    #[arg(long)]
    pub density: Option<String>,
    /// Intensity schedule.
    #[arg(long)]
    pub m: Option<String>,
    /// Trials per intensity.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Constant multiplying the limit solution.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Grid pitch.
    #[arg(long)]
    pub pitch: Option<f64>,
    /// Frame radius of the grid (default: support radius, or 3).
    #[arg(long)]
    pub grid_radius: Option<f64>,
    /// Also write the grid values `x1,x2,h` of the limit solution here.
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountsArgs {
    #[command(flatten)]
    pub common: Common,
    /// `ball`, `gaussian`, or a density file.
    #[arg(long)]
    pub density: Option<String>,
    /// Poisson intensity.
    #[arg(long)]
    pub n: Option<f64>,
    /// Number of trials.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Constant used in the predicted profile.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub common: Common,
    /// `ball`, `gaussian`, or a density file.
    #[arg(long)]
    pub density: Option<String>,
    /// Size schedule.
    #[arg(long)]
    pub n: Option<String>,
    /// Trials per size.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Number of outer layers to count.
    #[arg(long)]
    pub layers: Option<usize>,
    /// Flag factor for layer 1 against the mean of layers 2..=5.
    #[arg(long)]
    pub factor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated suites: dpp, semidpp, affine, monotone, correspondence, F, barrier, closed-forms.
    #[arg(long)]
    pub suite: Option<String>,
    /// Largest cloud size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Random cases per suite.
    #[arg(long)]
    pub cases: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CellArgs {
    #[command(flatten)]
    pub common: Common,
    /// Height of the query point; the estimate is s(r e_2) / r.
    #[arg(long)]
    pub r: Option<f64>,
    /// The sampling cylinder has half-side beta * r.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Number of trials.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Add shell points of this pitch on the cylinder sides and top.
    #[arg(long)]
    pub shell_pitch: Option<f64>,
    /// Horizontal offset of the query point and cylinder.
    #[arg(long)]
    pub offset: Option<f64>,
    /// Also run at beta + 1 and report the difference.
    #[arg(long)]
    pub beta_sensitivity: bool,
}
