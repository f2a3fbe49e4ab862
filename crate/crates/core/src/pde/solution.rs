//! The radial solution `h(x) = ∫_{|Ax+b|}^∞ r^{(d-1)/(d+1)} f_0(r)^{2/(d+1)} dr`
//! and the layer-count profile `N(t)`.

use statrs::function::gamma::{gamma, gamma_ur};

use super::density::{unit_ball_volume, RadialDensity, RadialProfile};
use super::quadrature::integrate;
use crate::error::{Error, Result};

/// Absolute tolerance of the generic quadrature path.
pub const QUADRATURE_TOL: f64 = 1e-13;
/// The integrand tail below this value is dropped.
pub const TAIL_CUTOFF: f64 = 1e-16;

fn exponents(d: usize) -> (f64, f64) {
    let d = d as f64;
    ((d - 1.0) / (d + 1.0), 2.0 / (d + 1.0))
}

fn integrand(density: &RadialDensity, s: f64) -> f64 {
    let (pr, pf) = exponents(density.dim);
    let f = density.profile_at(s);
    if f == 0.0 {
        0.0
    } else {
        s.powf(pr) * f.powf(pf)
    }
}

fn check_query(r: f64, density: &RadialDensity) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::OutOfRange(format!("radius must be finite and nonnegative, got {r}")));
    }
    if let RadialProfile::Table { r: rs, .. } = &density.profile {
        let (lo, hi) = (rs[0], rs[rs.len() - 1]);
        if r < lo || r > hi {
            return Err(Error::OutsideTable { query: r, lo, hi });
        }
    }
    Ok(())
}

/// Upper integration limit: the support radius, or where the integrand
/// drops below [`TAIL_CUTOFF`].
fn upper_limit(density: &RadialDensity, from: f64) -> f64 {
    if let Some(r) = density.support_radius() {
        return r;
    }
    let mut hi = from.max(1.0);
    while integrand(density, hi) >= TAIL_CUTOFF {
        hi *= 1.5;
    }
    hi
}

/// `h(r)` by adaptive quadrature of the defining integral.
pub fn h_radial_quadrature(r: f64, density: &RadialDensity) -> Result<f64> {
    check_query(r, density)?;
    let hi = upper_limit(density, r);
    if r >= hi {
        return Ok(0.0);
    }
    // Split at table nodes so each panel sees a smooth integrand.
    let mut cuts = vec![r];
    if let RadialProfile::Table { r: rs, .. } = &density.profile {
        cuts.extend(rs.iter().copied().filter(|&v| v > r && v < hi));
    }
    cuts.push(hi);
    Ok(cuts.windows(2).map(|w| integrate(|s| integrand(density, s), w[0], w[1], QUADRATURE_TOL)).sum())
}

/// `h(r)`, using the closed forms for the uniform ball and the Gaussian.
pub fn h_radial(r: f64, density: &RadialDensity) -> Result<f64> {
    check_query(r, density)?;
    let d = density.dim as f64;
    match density.profile {
        RadialProfile::UniformBall { radius } => {
            if r >= radius {
                return Ok(0.0);
            }
            let c0 = 1.0 / (unit_ball_volume(density.dim) * radius.powf(d));
            let q = 2.0 * d / (d + 1.0);
            Ok(c0.powf(2.0 / (d + 1.0)) * (d + 1.0) / (2.0 * d) * (radius.powf(q) - r.powf(q)))
        }
        RadialProfile::Gaussian => {
            let a = d / (d + 1.0);
            let x = r * r / (d + 1.0);
            let q = if x == 0.0 { 1.0 } else { gamma_ur(a, x) };
            Ok(0.5 * ((d + 1.0) / (2.0 * std::f64::consts::PI)).powf(a) * q * gamma(a))
        }
        RadialProfile::Table { .. } => h_radial_quadrature(r, density),
    }
}

/// `h(x) = h_radial(|Ax + b|)`.
pub fn h_affine(x: &[f64], density: &RadialDensity) -> Result<f64> {
    h_radial(density.frame_radius(x)?, density)
}

/// A density together with its evaluator `x ↦ h(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSolution {
    pub density: RadialDensity,
}

impl LimitSolution {
    pub fn new(density: RadialDensity) -> Result<Self> {
        density.validate()?;
        Ok(LimitSolution { density })
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        h_affine(x, &self.density)
    }

    /// `h` at the center of the frame.
    pub fn peak(&self) -> Result<f64> {
        let r0 = match &self.density.profile {
            RadialProfile::Table { r, .. } => r[0],
            _ => 0.0,
        };
        h_radial(r0, &self.density)
    }
}

/// Solve `h(r) = value` on the monotone profile by bisection.
fn invert<H: Fn(f64) -> Result<f64>>(h: H, value: f64, lo: f64, mut hi: f64, bounded: bool) -> Result<f64> {
    if !bounded {
        while h(hi)? > value {
            hi *= 2.0;
        }
    }
    let mut lo = lo;
    for _ in 0..200 {
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if h(mid)? > value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_t(t: f64, alpha: f64, peak: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::OutOfRange(format!("alpha must be positive, got {alpha}")));
    }
    if !(t >= 0.0 && t < alpha * peak) {
        return Err(Error::OutOfRange(format!("t = {t} is outside [0, {})", alpha * peak)));
    }
    Ok(())
}

fn n_radial(density: &RadialDensity, alpha: f64, r: f64) -> f64 {
    let d = density.dim as f64;
    d * unit_ball_volume(density.dim) / alpha
        * density.profile_at(r).powf((d - 1.0) / (d + 1.0))
        * r.powf(d * (d - 1.0) / (d + 1.0))
}

fn inner_radius(density: &RadialDensity) -> f64 {
    match &density.profile {
        RadialProfile::Table { r, .. } => r[0],
        _ => 0.0,
    }
}

/// `N(t)` through quadrature of `h` and bisection, for any radial profile.
pub fn n_of_t_generic(t: f64, density: &RadialDensity, alpha: f64) -> Result<f64> {
    let lo = inner_radius(density);
    let peak = h_radial_quadrature(lo, density)?;
    check_t(t, alpha, peak)?;
    if t == 0.0 && density.support_radius().is_none() {
        return Ok(0.0);
    }
    let bounded = density.support_radius().is_some();
    let hi = density.support_radius().unwrap_or(1.0);
    let r = invert(|s| h_radial_quadrature(s, density), t / alpha, lo, hi, bounded)?;
    Ok(n_radial(density, alpha, r))
}

/// `N(t)`, the limiting number of points per layer at rescaled depth `t`.
///
/// Closed forms are used for the uniform ball and for the Gaussian (where
/// only the inversion of `h` is numeric); tables use the generic path.
pub fn n_of_t(t: f64, density: &RadialDensity, alpha: f64) -> Result<f64> {
    let d = density.dim as f64;
    match density.profile {
        RadialProfile::UniformBall { radius } => {
            let peak = h_radial(0.0, density)?;
            check_t(t, alpha, peak)?;
            if radius == 1.0 {
                let b = unit_ball_volume(density.dim).powf(2.0 / (d + 1.0));
                let c = 2.0 * d * b / (alpha * (d + 1.0));
                return Ok(d * b / alpha * (1.0 - c * t).powf((d - 1.0) / 2.0));
            }
            let q = 2.0 * d / (d + 1.0);
            let rq = radius.powf(q) * (1.0 - t / (alpha * peak));
            Ok(n_radial(density, alpha, rq.powf(1.0 / q)))
        }
        RadialProfile::Gaussian => {
            let peak = h_radial(0.0, density)?;
            check_t(t, alpha, peak)?;
            if t == 0.0 {
                return Ok(0.0);
            }
            let r = invert(|s| h_radial(s, density), t / alpha, 0.0, 1.0, false)?;
            let e = d * (d - 1.0) / (d + 1.0);
            Ok(d * unit_ball_volume(density.dim) / alpha
                * (r / (2.0 * std::f64::consts::PI).sqrt()).powf(e)
                * (-r * r * (d - 1.0) / (2.0 * (d + 1.0))).exp())
        }
        RadialProfile::Table { .. } => n_of_t_generic(t, density, alpha),
    }
}

/// The radius `r` with `h_radial(r) = value`, for `0 < value < h_radial(inner)`.
pub fn radius_at_height(value: f64, density: &RadialDensity) -> Result<f64> {
    let lo = inner_radius(density);
    let peak = h_radial(lo, density)?;
    if !(value > 0.0 && value < peak) {
        return Err(Error::OutOfRange(format!("height {value} is outside (0, {peak})")));
    }
    let bounded = density.support_radius().is_some();
    let hi = density.support_radius().unwrap_or(1.0);
    invert(|s| h_radial(s, density), value, lo, hi, bounded)
}

/// `d|B_1| ∫_{r0}^{r1} f_0(s) s^{d-1} ds`, the mass of a radial shell.
pub fn shell_mass(density: &RadialDensity, r0: f64, r1: f64) -> Result<f64> {
    if !(0.0 <= r0 && r0 <= r1 && r1.is_finite()) {
        return Err(Error::OutOfRange(format!("bad shell [{r0}, {r1}]")));
    }
    let d = density.dim as f64;
    let c = d * unit_ball_volume(density.dim);
    let mut cuts = vec![r0];
    match &density.profile {
        RadialProfile::Table { r, .. } => cuts.extend(r.iter().copied().filter(|&v| v > r0 && v < r1)),
        RadialProfile::UniformBall { radius } if *radius > r0 && *radius < r1 => cuts.push(*radius),
        _ => {}
    }
    cuts.push(r1);
    let total: f64 = cuts
        .windows(2)
        .map(|w| integrate(|s| density.profile_at(s) * s.powf(d - 1.0), w[0], w[1], 1e-14))
        .sum();
    Ok(c * total)
}
