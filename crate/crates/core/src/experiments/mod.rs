//! Experiment runners that confront simulated peels with the limit laws.
//!
//! Every runner is deterministic given its configuration: trial `k` of
//! schedule level `j` draws from the random stream `(j << 32) | k` of the
//! configured seed, and aggregates are reduced in trial order.

mod alpha;
mod counts;
mod depth;
mod shape;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pde::RadialDensity;
use crate::sampling::SamplerSpec;
use crate::trial::RNG_ALGORITHM;

pub use alpha::{cross_route, estimate_alpha, AlphaParams, AlphaReport, CrossRouteReport};
pub use counts::{
    exp_boundary_layer, exp_layer_counts, BoundaryConfig, BoundaryLevel, BoundaryReport, CountPoint, CountWindow,
    LayerCountsConfig, LayerCountsReport,
};
pub use depth::{
    exp_max_depth_scaling, poisson_iid_bridge, BridgeConfig, BridgeReport, MaxDepthConfig, MaxDepthLevel,
    MaxDepthReport, MaxDepthTrial,
};
pub use shape::{
    exp_limit_shape, sup_grid, LimitShapeConfig, LimitShapeReport, ShapeLevel, ShapeTrial, UNBOUNDED_GRID_RADIUS,
};

/// Identifier of the build that produced a report.
pub const BUILD_ID: &str = env!("PEELSHAPE_BUILD_ID");

/// Provenance block embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub experiment: String,
    pub build_id: String,
    pub rng: String,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl ReportHeader {
    pub fn new(experiment: &str, seed: u64) -> Self {
        ReportHeader {
            experiment: experiment.to_string(),
            build_id: BUILD_ID.to_string(),
            rng: RNG_ALGORITHM.to_string(),
            seed,
            notes: Vec::new(),
        }
    }
}

/// Whether a trial draws `Poisson(m f)` or exactly `n` i.i.d. points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Draw {
    Poisson,
    Iid,
}

impl Draw {
    pub fn spec(self, density: &RadialDensity, scale: f64, seed: u64) -> SamplerSpec {
        match self {
            Draw::Poisson => SamplerSpec::poisson(density.clone(), scale, seed),
            Draw::Iid => SamplerSpec::iid(density.clone(), scale.round() as usize, seed),
        }
    }
}

/// Random stream of trial `trial` at schedule level `level`.
pub fn stream_of(level: usize, trial: usize) -> u64 {
    ((level as u64) << 32) | trial as u64
}

/// `m^{2/(d+1)}`, the height scale at intensity `m`.
pub fn height_scale(m: f64, dim: usize) -> f64 {
    m.powf(2.0 / (dim as f64 + 1.0))
}

pub(crate) fn require_trials(trials: usize) -> Result<()> {
    if trials < 2 {
        return Err(Error::TooFewTrials { min: 2, got: trials });
    }
    Ok(())
}

pub(crate) fn require_planar(density: &RadialDensity) -> Result<()> {
    density.validate()?;
    match density.dim {
        2 => Ok(()),
        3 => Err(Error::UnsupportedDimension(3)),
        d => Err(Error::DimensionMismatch { expected: 2, got: d }),
    }
}

pub(crate) fn require_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::OutOfRange("empty schedule".into()));
    }
    if let Some(v) = schedule.iter().find(|v| !(v.is_finite() && **v >= 1.0)) {
        return Err(Error::OutOfRange(format!("schedule value {v} must be at least 1")));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::OutOfRange("schedule must be strictly increasing".into()));
    }
    Ok(())
}
