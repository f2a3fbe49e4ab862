//! Monte Carlo estimator for the cell-problem constant
//! `α = lim (1/r) s(r e_2)` with `X ∼ Poisson(1)` on the half-plane.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::s_height_at;
use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::stats::{linear_fit, Summary};
use crate::trial::{run_trials, trial_rng};

/// How an estimate of `α` was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Cell,
    #[serde(rename = "maxdepth")]
    MaxDepth,
    Profile,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Cell => "cell",
            Route::MaxDepth => "maxdepth",
            Route::Profile => "profile",
        })
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cell" => Ok(Route::Cell),
            "maxdepth" => Ok(Route::MaxDepth),
            "profile" => Ok(Route::Profile),
            other => Err(Error::OutOfRange(format!("unknown route {other:?}"))),
        }
    }
}

/// An estimate of `α` with its standard error.
///
/// `r` is the length scale of the estimate: the cylinder size for the
/// cell route and `m^{1/3}` at the largest intensity for the others.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaEstimate {
    pub alpha_hat: f64,
    pub stderr: f64,
    pub trials: usize,
    pub r: f64,
    pub route: Route,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellConfig {
    pub r: f64,
    pub beta: f64,
    pub trials: usize,
    pub seed: u64,
    /// Adds points of pitch `shell_pitch` on the sides and top of the
    /// sampling cylinder, standing in for a solid exterior.
    pub shell_pitch: Option<f64>,
    /// Horizontal shift of both the query point and the cylinder.
    pub offset: f64,
    /// First random stream; trial `k` uses stream `stream_offset + k`.
    pub stream_offset: u64,
}

impl CellConfig {
    pub fn new(r: f64, beta: f64, trials: usize, seed: u64) -> Self {
        CellConfig { r, beta, trials, seed, shell_pitch: None, offset: 0.0, stream_offset: 0 }
    }
}

/// One row of the trial-level output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellTrial {
    pub trial: usize,
    pub r: f64,
    pub beta: f64,
    pub s_value: usize,
    pub n_points: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRun {
    pub config: CellConfig,
    pub estimate: AlphaEstimate,
    pub records: Vec<CellTrial>,
}

fn validate(cfg: &CellConfig) -> Result<()> {
    if cfg.trials == 0 {
        return Err(Error::TooFewTrials { min: 1, got: 0 });
    }
    if !(cfg.r >= 1.0 && cfg.r.is_finite()) {
        return Err(Error::OutOfRange(format!("r must be at least 1, got {}", cfg.r)));
    }
    if !(cfg.beta >= 1.0 && cfg.beta.is_finite()) {
        return Err(Error::OutOfRange(format!("beta must be at least 1, got {}", cfg.beta)));
    }
    if let Some(p) = cfg.shell_pitch {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::OutOfRange(format!("shell pitch must be positive, got {p}")));
        }
    }
    Ok(())
}

/// Poisson(1) sample on `Q_{βr}` shifted by `offset`, plus the optional shell.
pub(crate) fn sample_cell<R: Rng>(rng: &mut R, cfg: &CellConfig) -> Result<(PointCloud, usize)> {
    let side = cfg.beta * cfg.r;
    let area = 2.0 * side * side;
    let count = Poisson::new(area)
        .map_err(|e| Error::OutOfRange(e.to_string()))?
        .sample(rng) as usize;
    let mut coords = Vec::with_capacity(2 * count);
    for _ in 0..count {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        coords.push(cfg.offset + side * (2.0 * u - 1.0));
        coords.push(side * (1.0 - v));
    }
    if let Some(pitch) = cfg.shell_pitch {
        let steps = (side / pitch).floor() as usize;
        for k in 1..=steps {
            let t = k as f64 * pitch;
            coords.extend_from_slice(&[cfg.offset - side, t, cfg.offset + side, t]);
        }
        for k in 0..=2 * steps {
            coords.extend_from_slice(&[cfg.offset - side + k as f64 * pitch, side]);
        }
    }
    Ok((PointCloud::from_flat(2, coords)?, count))
}

/// Run the estimator described by `cfg`.
pub fn cell_run(cfg: &CellConfig) -> Result<CellRun> {
    validate(cfg)?;
    let records = run_trials(cfg.trials, |trial| {
        let start = Instant::now();
        let mut rng = trial_rng(cfg.seed, cfg.stream_offset + trial as u64);
        let (cloud, n_points) = sample_cell(&mut rng, cfg)?;
        let s_value = s_height_at(&cloud, &[cfg.offset, cfg.r])?;
        Ok(CellTrial {
            trial,
            r: cfg.r,
            beta: cfg.beta,
            s_value,
            n_points,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    })?;
    let scaled: Vec<f64> = records.iter().map(|t| t.s_value as f64 / cfg.r).collect();
    let summary = Summary::of(&scaled);
    let estimate = AlphaEstimate {
        alpha_hat: summary.mean,
        stderr: summary.stderr,
        trials: cfg.trials,
        r: cfg.r,
        route: Route::Cell,
    };
    Ok(CellRun { config: cfg.clone(), estimate, records })
}

/// `s_{X ∩ Q_{βr}}(r e_2) / r` averaged over `trials` Poisson samples.
pub fn cell_estimate(r: f64, beta: f64, trials: usize, seed: u64) -> Result<CellRun> {
    cell_run(&CellConfig::new(r, beta, trials, seed))
}

/// The estimator at `β` and `β + 1`, on disjoint random streams.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaSensitivity {
    pub at_beta: CellRun,
    pub at_beta_plus_one: CellRun,
    pub difference: f64,
    pub combined_stderr: f64,
}

impl BetaSensitivity {
    pub fn within(&self, k: f64) -> bool {
        self.difference.abs() <= k * self.combined_stderr
    }
}

pub fn beta_sensitivity(cfg: &CellConfig) -> Result<BetaSensitivity> {
    let at_beta = cell_run(cfg)?;
    let bumped = CellConfig {
        beta: cfg.beta + 1.0,
        stream_offset: cfg.stream_offset + cfg.trials as u64,
        ..cfg.clone()
    };
    let at_beta_plus_one = cell_run(&bumped)?;
    let (a, b) = (at_beta.estimate, at_beta_plus_one.estimate);
    Ok(BetaSensitivity {
        difference: b.alpha_hat - a.alpha_hat,
        combined_stderr: a.stderr.hypot(b.stderr),
        at_beta,
        at_beta_plus_one,
    })
}

/// Fit of `α̂(r) = α + a r^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub alpha: f64,
    pub alpha_stderr: f64,
    pub coefficient: f64,
    pub coefficient_stderr: f64,
}

pub fn extrapolate(estimates: &[AlphaEstimate]) -> Result<Extrapolation> {
    let x: Vec<f64> = estimates.iter().map(|e| e.r.powf(-0.5)).collect();
    let y: Vec<f64> = estimates.iter().map(|e| e.alpha_hat).collect();
    let s: Vec<f64> = estimates.iter().map(|e| e.stderr).collect();
    let fit = linear_fit(&x, &y, Some(&s))?;
    Ok(Extrapolation {
        alpha: fit.intercept,
        alpha_stderr: fit.intercept_stderr,
        coefficient: fit.slope,
        coefficient_stderr: fit.slope_stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(cell_estimate(5.0, 3.0, 0, 1), Err(Error::TooFewTrials { .. })));
        assert!(cell_estimate(0.5, 3.0, 1, 1).is_err());
        assert!(cell_estimate(5.0, 0.5, 1, 1).is_err());
    }

    #[test]
    fn replayable() {
        let a = cell_estimate(4.0, 2.0, 3, 9).unwrap();
        let b = cell_estimate(4.0, 2.0, 3, 9).unwrap();
        let sv = |run: &CellRun| run.records.iter().map(|t| (t.s_value, t.n_points)).collect::<Vec<_>>();
        assert_eq!(sv(&a), sv(&b));
        assert_eq!(a.estimate.alpha_hat, b.estimate.alpha_hat);
    }

    #[test]
    fn shell_only_raises_heights() {
        let base = CellConfig::new(4.0, 2.0, 4, 3);
        let shell = CellConfig { shell_pitch: Some(0.25), ..base.clone() };
        let (a, b) = (cell_run(&base).unwrap(), cell_run(&shell).unwrap());
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.n_points, y.n_points);
            assert!(y.s_value >= x.s_value);
        }
    }

    #[test]
    fn extrapolation_recovers_exact_model() {
        let est: Vec<AlphaEstimate> = [16.0f64, 64.0, 256.0]
            .iter()
            .map(|&r| AlphaEstimate { alpha_hat: 1.3 - 0.8 / r.sqrt(), stderr: 0.01, trials: 10, r, route: Route::Cell })
            .collect();
        let e = extrapolate(&est).unwrap();
        assert!((e.alpha - 1.3).abs() < 1e-12);
        assert!((e.coefficient + 0.8).abs() < 1e-12);
    }
}
