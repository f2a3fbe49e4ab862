//! Three independent routes to the constant `α` and their comparison.

use serde::{Deserialize, Serialize};

use super::{stream_of, Draw, LimitShapeConfig, LimitShapeReport, MaxDepthConfig, MaxDepthReport, ReportHeader};
use super::{exp_limit_shape, exp_max_depth_scaling};
use crate::error::{Error, Result};
use crate::pde::RadialDensity;
use crate::semiconvex::{cell_run, extrapolate, AlphaEstimate, CellConfig, CellRun, Extrapolation, Route};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaParams {
    pub route: Route,
    pub density: RadialDensity,
    /// Sizes for the max-depth route; the profile route uses the largest.
    pub n_schedule: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Cylinder sizes for the cell route.
    pub r_schedule: Vec<f64>,
    pub beta: f64,
    pub pitch: f64,
}

impl AlphaParams {
    pub fn new(route: Route, seed: u64) -> Self {
        AlphaParams {
            route,
            density: RadialDensity::uniform_ball(2),
            n_schedule: vec![1e3, 10f64.powf(3.5), 1e4, 10f64.powf(4.5), 1e5],
            trials: 20,
            seed,
            r_schedule: vec![20.0, 40.0, 80.0],
            beta: 3.0,
            pitch: 0.02,
        }
    }

    fn cell_config(&self, level: usize, r: f64) -> CellConfig {
        CellConfig { stream_offset: stream_of(level, 0), ..CellConfig::new(r, self.beta, self.trials, self.seed) }
    }

    fn shape_config(&self) -> Result<LimitShapeConfig> {
        let m = *self.n_schedule.last().ok_or_else(|| Error::OutOfRange("empty schedule".into()))?;
        Ok(LimitShapeConfig {
            pitch: self.pitch,
            draw: Draw::Poisson,
            ..LimitShapeConfig::new(self.density.clone(), vec![m], self.trials, self.seed, 4.0 / 3.0)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub header: ReportHeader,
    pub params: AlphaParams,
    pub estimate: AlphaEstimate,
    pub max_depth: Option<MaxDepthReport>,
    pub shape: Option<LimitShapeReport>,
    pub cell: Vec<CellRun>,
    pub extrapolation: Option<Extrapolation>,
}

fn cell_route(params: &AlphaParams) -> Result<(Vec<CellRun>, Option<Extrapolation>, AlphaEstimate)> {
    if params.r_schedule.is_empty() {
        return Err(Error::OutOfRange("empty r schedule".into()));
    }
    let runs: Vec<CellRun> = params
        .r_schedule
        .iter()
        .enumerate()
        .map(|(level, &r)| cell_run(&params.cell_config(level, r)))
        .collect::<Result<_>>()?;
    let raw: Vec<AlphaEstimate> = runs.iter().map(|r| r.estimate).collect();
    let last = raw[raw.len() - 1];
    if raw.len() < 2 {
        return Ok((runs, None, last));
    }
    let ex = extrapolate(&raw)?;
    let estimate = AlphaEstimate { alpha_hat: ex.alpha, stderr: ex.alpha_stderr, ..last };
    Ok((runs, Some(ex), estimate))
}

/// Estimate `α` by the requested route.
///
/// `maxdepth` is the prefactor of the mean max height at the largest `n`;
/// `profile` is the grid least-squares slope of `m^{-2/(d+1)} h_{X_m}`
/// against `h` at the largest `n`; `cell` extrapolates the cell estimator
/// in `r^{-1/2}` over the `r` schedule.
pub fn estimate_alpha(params: &AlphaParams) -> Result<AlphaReport> {
    let mut report = AlphaReport {
        header: ReportHeader::new("estimate_alpha", params.seed),
        params: params.clone(),
        estimate: AlphaEstimate { alpha_hat: f64::NAN, stderr: f64::NAN, trials: params.trials, r: 0.0, route: params.route },
        max_depth: None,
        shape: None,
        cell: Vec::new(),
        extrapolation: None,
    };
    match params.route {
        Route::MaxDepth => {
            let cfg = MaxDepthConfig::new(params.density.clone(), params.n_schedule.clone(), params.trials, params.seed);
            let md = exp_max_depth_scaling(&cfg)?;
            report.estimate = md.alpha;
            report.max_depth = Some(md);
        }
        Route::Profile => {
            let shape = exp_limit_shape(&params.shape_config()?)?;
            report.estimate = shape.profile_estimate();
            report.shape = Some(shape);
        }
        Route::Cell => {
            let (runs, ex, estimate) = cell_route(params)?;
            report.estimate = estimate;
            report.cell = runs;
            report.extrapolation = ex;
            report.header.notes.push("estimate: intercept of a weighted fit in r^(-1/2)".into());
        }
    }
    report.header.notes.push(format!("route: {}", params.route));
    Ok(report)
}

/// Agreement between routes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossRouteReport {
    pub header: ReportHeader,
    pub maxdepth: AlphaEstimate,
    pub profile: AlphaEstimate,
    pub difference: f64,
    pub combined_stderr: f64,
    /// `|difference| ≤ 2 combined_stderr`.
    pub agree: bool,
    /// Raw cell estimates along the `r` schedule.
    pub cell: Vec<AlphaEstimate>,
    /// `|cell(r) - maxdepth|` along the schedule.
    pub cell_gaps: Vec<f64>,
    pub gaps_decreasing: bool,
    pub final_gap: f64,
}

impl CrossRouteReport {
    pub fn from_estimates(seed: u64, maxdepth: AlphaEstimate, profile: AlphaEstimate, cell: Vec<AlphaEstimate>) -> Self {
        let difference = maxdepth.alpha_hat - profile.alpha_hat;
        let combined_stderr = maxdepth.stderr.hypot(profile.stderr);
        let cell_gaps: Vec<f64> = cell.iter().map(|c| (c.alpha_hat - maxdepth.alpha_hat).abs()).collect();
        CrossRouteReport {
            header: ReportHeader::new("cross_route", seed),
            maxdepth,
            profile,
            difference,
            combined_stderr,
            agree: difference.abs() <= 2.0 * combined_stderr,
            gaps_decreasing: cell_gaps.windows(2).all(|w| w[1] < w[0]),
            final_gap: cell_gaps.last().copied().unwrap_or(f64::NAN),
            cell,
            cell_gaps,
        }
    }
}

/// Run all three routes with shared parameters.
pub fn cross_route(params: &AlphaParams) -> Result<CrossRouteReport> {
    let md = estimate_alpha(&AlphaParams { route: Route::MaxDepth, ..params.clone() })?;
    let pr = estimate_alpha(&AlphaParams { route: Route::Profile, ..params.clone() })?;
    let (runs, _, _) = cell_route(params)?;
    let cell = runs.iter().map(|r| r.estimate).collect();
    Ok(CrossRouteReport::from_estimates(params.seed, md.estimate, pr.estimate, cell))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(route: Route) -> AlphaParams {
        AlphaParams {
            n_schedule: vec![100.0, 400.0],
            trials: 3,
            r_schedule: vec![4.0, 8.0],
            beta: 2.0,
            pitch: 0.1,
            ..AlphaParams::new(route, 11)
        }
    }

    #[test]
    fn every_route_returns_an_estimate() {
        for route in [Route::MaxDepth, Route::Profile, Route::Cell] {
            let r = estimate_alpha(&small(route)).unwrap();
            assert_eq!(r.estimate.route, route);
            assert!(r.estimate.alpha_hat.is_finite());
        }
    }

    #[test]
    fn cross_route_gaps() {
        let e = |a: f64, s: f64, route| AlphaEstimate { alpha_hat: a, stderr: s, trials: 2, r: 1.0, route };
        let r = CrossRouteReport::from_estimates(
            0,
            e(1.33, 0.01, Route::MaxDepth),
            e(1.31, 0.01, Route::Profile),
            vec![e(1.1, 0.02, Route::Cell), e(1.2, 0.02, Route::Cell)],
        );
        assert!(r.agree);
        assert!(r.gaps_decreasing);
        assert!((r.final_gap - 0.13).abs() < 1e-12);
    }
}
