//! Uniform convergence `m^{-2/(d+1)} h_{X_m} → α h` on a grid, and the
//! profile estimate of `α`.

use serde::{Deserialize, Serialize};

use super::{height_scale, require_planar, require_schedule, require_trials, stream_of, Draw, ReportHeader};
use crate::convex::peel;
use crate::error::{Error, Result};
use crate::pde::{LimitSolution, RadialDensity};
use crate::sampling::sample_trial;
use crate::semiconvex::{AlphaEstimate, Route};
use crate::stats::{median, Summary};
use crate::trial::run_trials;

/// Grid radius used in frame coordinates when the density has unbounded support.
pub const UNBOUNDED_GRID_RADIUS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitShapeConfig {
    pub density: RadialDensity,
    pub m_schedule: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub alpha: f64,
    /// Lattice pitch in frame coordinates.
    pub pitch: f64,
    /// Frame radius of the grid; defaults to the support radius.
    pub grid_radius: Option<f64>,
    pub draw: Draw,
}

impl LimitShapeConfig {
    pub fn new(density: RadialDensity, m_schedule: Vec<f64>, trials: usize, seed: u64, alpha: f64) -> Self {
        LimitShapeConfig { density, m_schedule, trials, seed, alpha, pitch: 0.02, grid_radius: None, draw: Draw::Poisson }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeTrial {
    pub m: f64,
    pub trial: usize,
    pub stream: u64,
    pub n_points: usize,
    pub layers: usize,
    /// `max over the grid of |m^{-2/(d+1)} h_X(x) - α h(x)|`.
    pub sup_error: f64,
    pub sup_at: [f64; 2],
    /// Least-squares slope of `m^{-2/(d+1)} h_X` against `h` over the grid.
    pub alpha_fit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeLevel {
    pub m: f64,
    pub median_sup_error: f64,
    pub mean_sup_error: f64,
    pub sup_error_stderr: f64,
    pub alpha_hat: f64,
    pub alpha_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitShapeReport {
    pub header: ReportHeader,
    pub config: LimitShapeConfig,
    pub grid_points: usize,
    pub peak: f64,
    pub records: Vec<ShapeTrial>,
    pub levels: Vec<ShapeLevel>,
    /// Medians of the sup error strictly decrease along the schedule.
    pub median_decreasing: bool,
}

impl LimitShapeReport {
    /// Profile-route estimate at the largest `m`.
    pub fn profile_estimate(&self) -> AlphaEstimate {
        let last = self.levels[self.levels.len() - 1];
        AlphaEstimate {
            alpha_hat: last.alpha_hat,
            stderr: last.alpha_stderr,
            trials: self.config.trials,
            r: last.m.powf(1.0 / 3.0),
            route: Route::Profile,
        }
    }
}

/// Lattice points `pitch·Z^2` with frame radius at most `radius`, mapped
/// back to the coordinates of the cloud.
pub fn sup_grid(density: &RadialDensity, pitch: f64, radius: f64) -> Result<Vec<[f64; 2]>> {
    if !(pitch > 0.0 && pitch.is_finite() && radius > 0.0 && radius.is_finite()) {
        return Err(Error::OutOfRange(format!("bad grid: pitch {pitch}, radius {radius}")));
    }
    if density.dim != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: density.dim });
    }
    let inverse = density.inverse_frame()?;
    let k = (radius / pitch).floor() as i64;
    let mut grid = Vec::new();
    for i in -k..=k {
        for j in -k..=k {
            let z = [i as f64 * pitch, j as f64 * pitch];
            if z[0].hypot(z[1]) <= radius {
                grid.push(match &inverse {
                    Some(map) => {
                        let x = map.apply_point(&z);
                        [x[0], x[1]]
                    }
                    None => z,
                });
            }
        }
    }
    Ok(grid)
}

pub fn exp_limit_shape(cfg: &LimitShapeConfig) -> Result<LimitShapeReport> {
    require_planar(&cfg.density)?;
    require_schedule(&cfg.m_schedule)?;
    require_trials(cfg.trials)?;
    if !(cfg.alpha > 0.0 && cfg.alpha.is_finite()) {
        return Err(Error::OutOfRange(format!("alpha must be positive, got {}", cfg.alpha)));
    }
    let solution = LimitSolution::new(cfg.density.clone())?;
    let radius = cfg.grid_radius.or(cfg.density.support_radius()).unwrap_or(UNBOUNDED_GRID_RADIUS);
    let grid = sup_grid(&cfg.density, cfg.pitch, radius)?;
    let limit: Vec<f64> = grid.iter().map(|x| solution.eval(x)).collect::<Result<_>>()?;
    let limit_sq: f64 = limit.iter().map(|h| h * h).sum();
    let mut records = Vec::new();
    let mut levels = Vec::new();
    for (level, &m) in cfg.m_schedule.iter().enumerate() {
        let spec = cfg.draw.spec(&cfg.density, m, cfg.seed);
        let scale = height_scale(m, cfg.density.dim);
        let rows = run_trials(cfg.trials, |trial| {
            let stream = stream_of(level, trial);
            let layering = peel(&sample_trial(&spec, stream)?)?;
            let mut sup_error = 0.0;
            let mut sup_at = grid.first().copied().unwrap_or([0.0, 0.0]);
            let mut cross = 0.0;
            for (x, h) in grid.iter().zip(&limit) {
                let y = layering.height(x)? as f64 / scale;
                let err = (y - cfg.alpha * h).abs();
                if err > sup_error {
                    sup_error = err;
                    sup_at = *x;
                }
                cross += y * h;
            }
            Ok(ShapeTrial {
                m,
                trial,
                stream,
                n_points: layering.len(),
                layers: layering.num_layers(),
                sup_error,
                sup_at,
                alpha_fit: cross / limit_sq,
            })
        })?;
        let errors: Vec<f64> = rows.iter().map(|r| r.sup_error).collect();
        let fits: Vec<f64> = rows.iter().map(|r| r.alpha_fit).collect();
        let (e, a) = (Summary::of(&errors), Summary::of(&fits));
        levels.push(ShapeLevel {
            m,
            median_sup_error: median(&errors),
            mean_sup_error: e.mean,
            sup_error_stderr: e.stderr,
            alpha_hat: a.mean,
            alpha_stderr: a.stderr,
        });
        records.extend(rows);
    }
    let median_decreasing = levels.windows(2).all(|w| w[1].median_sup_error < w[0].median_sup_error);
    let mut header = ReportHeader::new("limit_shape", cfg.seed);
    header.notes.push(format!("grid: pitch {} in frame coordinates, frame radius <= {radius}", cfg.pitch));
    header.notes.push("the grid sup is a lower bound for the sup over the closed domain".into());
    Ok(LimitShapeReport {
        header,
        config: cfg.clone(),
        grid_points: grid.len(),
        peak: solution.peak()?,
        records,
        levels,
        median_decreasing,
    })
}
