//! Growth of the deepest layer, `E[max h_{X_n}] ≍ n^{2/(d+1)}`, and the
//! Poisson/i.i.d. bridge.

use serde::{Deserialize, Serialize};

use super::{height_scale, require_planar, require_schedule, require_trials, stream_of, Draw, ReportHeader};
use crate::convex::peel;
use crate::error::Result;
use crate::pde::{LimitSolution, RadialDensity};
use crate::sampling::{sample_count, sample_trial, SampleDomain};
use crate::semiconvex::{AlphaEstimate, Route};
use crate::stats::{ks_two_sample, linear_fit, KsTest, LinearFit, Summary};
use crate::trial::{run_trials, trial_rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxDepthConfig {
    pub density: RadialDensity,
    pub n_schedule: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub draw: Draw,
}

impl MaxDepthConfig {
    pub fn new(density: RadialDensity, n_schedule: Vec<f64>, trials: usize, seed: u64) -> Self {
        MaxDepthConfig { density, n_schedule, trials, seed, draw: Draw::Iid }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxDepthTrial {
    pub n: f64,
    pub trial: usize,
    pub stream: u64,
    pub n_points: usize,
    /// `max h_X`, the number of layers with nonempty interior.
    pub max_height: usize,
    pub layers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxDepthLevel {
    pub n: f64,
    pub mean: f64,
    pub stderr: f64,
    /// `mean / (n^{2/(d+1)} h(0))`.
    pub alpha_hat: f64,
    pub alpha_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxDepthReport {
    pub header: ReportHeader,
    pub config: MaxDepthConfig,
    /// `h(0)` of the limit solution.
    pub peak: f64,
    pub records: Vec<MaxDepthTrial>,
    pub levels: Vec<MaxDepthLevel>,
    /// Least squares of `log mean` on `log n`; absent for a single level.
    pub fit: Option<LinearFit>,
    /// Prefactor estimate at the largest `n`.
    pub alpha: AlphaEstimate,
}

pub fn exp_max_depth_scaling(cfg: &MaxDepthConfig) -> Result<MaxDepthReport> {
    require_planar(&cfg.density)?;
    require_schedule(&cfg.n_schedule)?;
    require_trials(cfg.trials)?;
    let peak = LimitSolution::new(cfg.density.clone())?.peak()?;
    let mut records = Vec::new();
    let mut levels = Vec::new();
    for (level, &n) in cfg.n_schedule.iter().enumerate() {
        let spec = cfg.draw.spec(&cfg.density, n, cfg.seed);
        let rows = run_trials(cfg.trials, |trial| {
            let stream = stream_of(level, trial);
            let layering = peel(&sample_trial(&spec, stream)?)?;
            Ok(MaxDepthTrial {
                n,
                trial,
                stream,
                n_points: layering.len(),
                max_height: layering.max_height(),
                layers: layering.num_layers(),
            })
        })?;
        let depths: Vec<f64> = rows.iter().map(|r| r.max_height as f64).collect();
        let s = Summary::of(&depths);
        let scale = height_scale(n, cfg.density.dim) * peak;
        levels.push(MaxDepthLevel {
            n,
            mean: s.mean,
            stderr: s.stderr,
            alpha_hat: s.mean / scale,
            alpha_stderr: s.stderr / scale,
        });
        records.extend(rows);
    }
    let fit = if levels.len() >= 2 {
        let x: Vec<f64> = levels.iter().map(|l| l.n.ln()).collect();
        let y: Vec<f64> = levels.iter().map(|l| l.mean.ln()).collect();
        Some(linear_fit(&x, &y, None)?)
    } else {
        None
    };
    let last = levels[levels.len() - 1];
    let alpha = AlphaEstimate {
        alpha_hat: last.alpha_hat,
        stderr: last.alpha_stderr,
        trials: cfg.trials,
        r: last.n.powf(1.0 / (cfg.density.dim as f64 + 1.0)),
        route: Route::MaxDepth,
    };
    let mut header = ReportHeader::new("max_depth_scaling", cfg.seed);
    header.notes.push("slope: ordinary least squares of ln(mean max height) on ln(n)".into());
    header.notes.push("alpha: prefactor at the largest n, mean max height / (n^(2/(d+1)) h(0))".into());
    Ok(MaxDepthReport { header, config: cfg.clone(), peak, records, levels, fit, alpha })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeConfig {
    pub density: RadialDensity,
    pub intensity: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Max heights of Poisson clouds and of i.i.d. clouds with the same counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub header: ReportHeader,
    pub config: BridgeConfig,
    pub counts: Vec<usize>,
    pub poisson_max_height: Vec<usize>,
    pub iid_max_height: Vec<usize>,
    pub ks: KsTest,
}

/// Conditioned on its count `k`, a Poisson cloud is an i.i.d. `k`-sample.
/// Trial `t` draws a Poisson cloud on stream `(0, t)` and an independent
/// i.i.d. cloud of the same size on stream `(1, t)`; the two max-height
/// samples are compared by a two-sample KS test at the 1% level.
pub fn poisson_iid_bridge(cfg: &BridgeConfig) -> Result<BridgeReport> {
    require_planar(&cfg.density)?;
    require_trials(cfg.trials)?;
    let spec = Draw::Poisson.spec(&cfg.density, cfg.intensity, cfg.seed);
    let domain = SampleDomain::Radial(cfg.density.clone());
    let rows = run_trials(cfg.trials, |trial| {
        let poisson = sample_trial(&spec, stream_of(0, trial))?;
        let mut rng = trial_rng(cfg.seed, stream_of(1, trial));
        let iid = sample_count(&domain, poisson.len(), &mut rng)?;
        Ok((poisson.len(), peel(&poisson)?.max_height(), peel(&iid)?.max_height()))
    })?;
    let counts = rows.iter().map(|r| r.0).collect();
    let poisson_max_height: Vec<usize> = rows.iter().map(|r| r.1).collect();
    let iid_max_height: Vec<usize> = rows.iter().map(|r| r.2).collect();
    let as_f64 = |v: &[usize]| v.iter().map(|&x| x as f64).collect::<Vec<_>>();
    let ks = ks_two_sample(&as_f64(&poisson_max_height), &as_f64(&iid_max_height));
    Ok(BridgeReport {
        header: ReportHeader::new("poisson_iid_bridge", cfg.seed),
        config: cfg.clone(),
        counts,
        poisson_max_height,
        iid_max_height,
        ks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_replayable_and_ordered() {
        let cfg = MaxDepthConfig::new(RadialDensity::uniform_ball(2), vec![50.0, 200.0], 4, 9);
        let a = exp_max_depth_scaling(&cfg).unwrap();
        let b = exp_max_depth_scaling(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 8);
        assert!(a.records.iter().all(|r| r.n_points == r.n as usize));
        assert!(a.records.iter().all(|r| r.max_height <= r.layers));
        assert_eq!(a.records[5].stream, stream_of(1, 1));
        assert!(a.fit.is_some());
        assert_eq!(a.alpha.route, Route::MaxDepth);
    }

    #[test]
    fn rejects_bad_configs() {
        let ball = RadialDensity::uniform_ball(2);
        assert!(exp_max_depth_scaling(&MaxDepthConfig::new(ball.clone(), vec![100.0], 1, 0)).is_err());
        assert!(exp_max_depth_scaling(&MaxDepthConfig::new(ball, vec![100.0, 50.0], 3, 0)).is_err());
        let ball3 = RadialDensity::uniform_ball(3);
        assert!(exp_max_depth_scaling(&MaxDepthConfig::new(ball3, vec![100.0], 3, 0)).is_err());
    }

    #[test]
    fn bridge_pairs_counts() {
        let cfg = BridgeConfig { density: RadialDensity::gaussian(2), intensity: 100.0, trials: 6, seed: 3 };
        let r = poisson_iid_bridge(&cfg).unwrap();
        assert_eq!(r.counts.len(), 6);
        assert_eq!(r.poisson_max_height.len(), r.iid_max_height.len());
    }
}
