//! Radial densities, optionally composed with an affine frame
//! `f(x) = |A| f_0(|Ax + b|)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::geometry::{determinant, AffineMap};

/// `|B_1|` in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0 + 1.0)
}

/// Radial profile `f_0(r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialProfile {
    /// Uniform probability density on the ball of the given radius.
    UniformBall { radius: f64 },
    /// Standard normal density `(2π)^{-d/2} e^{-r²/2}`.
    Gaussian,
    /// Piecewise-linear profile through `(r_i, f_i)`, zero beyond the last node.
    Table { r: Vec<f64>, f: Vec<f64> },
}

/// Affine frame `x ↦ Ax + b` with `A` row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFrame {
    pub matrix: Vec<f64>,
    pub offset: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialDensity {
    pub dim: usize,
    pub profile: RadialProfile,
    pub frame: Option<AffineFrame>,
}

/// Tolerance on `∫ f = 1` for tabulated profiles.
pub const TABLE_MASS_TOL: f64 = 1e-6;

impl RadialDensity {
    pub fn uniform_ball(dim: usize) -> Self {
        RadialDensity { dim, profile: RadialProfile::UniformBall { radius: 1.0 }, frame: None }
    }

    pub fn gaussian(dim: usize) -> Self {
        RadialDensity { dim, profile: RadialProfile::Gaussian, frame: None }
    }

    /// A tabulated profile; fails unless it is a probability density.
    pub fn table(dim: usize, r: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        let d = RadialDensity { dim, profile: RadialProfile::Table { r, f }, frame: None };
        d.validate()?;
        Ok(d)
    }

    /// A tabulated profile rescaled to unit mass.
    pub fn table_normalized(dim: usize, r: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        let mut d = RadialDensity { dim, profile: RadialProfile::Table { r, f }, frame: None };
        d.validate_shape()?;
        let mass = d.radial_mass();
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidDensity("table has zero mass".into()));
        }
        if let RadialProfile::Table { f, .. } = &mut d.profile {
            f.iter_mut().for_each(|v| *v /= mass);
        }
        Ok(d)
    }

    pub fn with_frame(mut self, frame: AffineFrame) -> Result<Self> {
        self.frame = Some(frame);
        self.validate()?;
        Ok(self)
    }

    /// Gaussian with mean `μ` and covariance `Σ`: frame `A = Σ^{-1/2}`, `b = -Aμ`.
    pub fn gaussian_with(dim: usize, mean: &[f64], covariance: &[f64]) -> Result<Self> {
        if mean.len() != dim || covariance.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim, got: mean.len() });
        }
        let cov = nalgebra::DMatrix::from_row_slice(dim, dim, covariance);
        let eig = nalgebra::SymmetricEigen::new((&cov + cov.transpose()) * 0.5);
        if eig.eigenvalues.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::InvalidDensity("covariance must be positive definite".into()));
        }
        let inv_sqrt = &eig.eigenvectors
            * nalgebra::DMatrix::from_diagonal(&eig.eigenvalues.map(|e| 1.0 / e.sqrt()))
            * eig.eigenvectors.transpose();
        let mu = nalgebra::DVector::from_column_slice(mean);
        let b = -(&inv_sqrt * mu);
        let matrix: Vec<f64> = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| inv_sqrt[(i, j)]).collect();
        RadialDensity::gaussian(dim).with_frame(AffineFrame { matrix, offset: b.iter().copied().collect() })
    }

    fn validate_shape(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::InvalidDensity("dimension must be positive".into()));
        }
        match &self.profile {
            RadialProfile::UniformBall { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidDensity(format!("radius must be positive, got {radius}")));
                }
            }
            RadialProfile::Gaussian => {}
            RadialProfile::Table { r, f } => {
                if r.len() != f.len() || r.len() < 2 {
                    return Err(Error::InvalidDensity("table needs at least two (r, f) rows".into()));
                }
                if r[0] < 0.0 || r.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::InvalidDensity("table radii must be nonnegative and strictly increasing".into()));
                }
                if f.iter().any(|v| !(*v >= 0.0 && v.is_finite())) || r.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidDensity("table values must be finite and nonnegative".into()));
                }
            }
        }
        if let Some(frame) = &self.frame {
            if frame.matrix.len() != self.dim * self.dim || frame.offset.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: frame.offset.len() });
            }
            if determinant(self.dim, &frame.matrix) == 0.0 {
                return Err(Error::SingularMap);
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        if matches!(self.profile, RadialProfile::Table { .. }) {
            let mass = self.radial_mass();
            if (mass - 1.0).abs() > TABLE_MASS_TOL {
                return Err(Error::InvalidDensity(format!("table mass is {mass}, expected 1")));
            }
        }
        Ok(())
    }

    /// `d|B_1| ∫ f_0(r) r^{d-1} dr`.
    pub fn radial_mass(&self) -> f64 {
        let d = self.dim as f64;
        let c = d * unit_ball_volume(self.dim);
        match &self.profile {
            RadialProfile::UniformBall { .. } | RadialProfile::Gaussian => 1.0,
            RadialProfile::Table { r, .. } => {
                let mut total = 0.0;
                for w in r.windows(2) {
                    total += integrate(|s| self.profile_at(s) * s.powf(d - 1.0), w[0], w[1], 1e-14);
                }
                c * total
            }
        }
    }

    /// `f_0(r)`.
    pub fn profile_at(&self, r: f64) -> f64 {
        let d = self.dim as f64;
        match &self.profile {
            RadialProfile::UniformBall { radius } => {
                if r < *radius {
                    1.0 / (unit_ball_volume(self.dim) * radius.powf(d))
                } else {
                    0.0
                }
            }
            RadialProfile::Gaussian => (2.0 * PI).powf(-d / 2.0) * (-0.5 * r * r).exp(),
            RadialProfile::Table { r: rs, f } => {
                if r < rs[0] || r > rs[rs.len() - 1] {
                    return 0.0;
                }
                let j = rs.partition_point(|&v| v <= r).clamp(1, rs.len() - 1);
                let t = (r - rs[j - 1]) / (rs[j] - rs[j - 1]);
                f[j - 1] + t * (f[j] - f[j - 1])
            }
        }
    }

    /// Radius beyond which the profile vanishes, if any.
    pub fn support_radius(&self) -> Option<f64> {
        match &self.profile {
            RadialProfile::UniformBall { radius } => Some(*radius),
            RadialProfile::Gaussian => None,
            RadialProfile::Table { r, .. } => Some(r[r.len() - 1]),
        }
    }

    /// `|Ax + b|`, or `|x|` without a frame.
    pub fn frame_radius(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(match &self.frame {
            None => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Some(fr) => (0..self.dim)
                .map(|i| {
                    let row = &fr.matrix[i * self.dim..(i + 1) * self.dim];
                    row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + fr.offset[i]
                })
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt(),
        })
    }

    pub fn frame_det_abs(&self) -> f64 {
        self.frame.as_ref().map_or(1.0, |fr| determinant(self.dim, &fr.matrix).abs())
    }

    /// `f(x) = |A| f_0(|Ax + b|)`.
    pub fn density_at(&self, x: &[f64]) -> Result<f64> {
        Ok(self.frame_det_abs() * self.profile_at(self.frame_radius(x)?))
    }

    /// The inverse frame map `z ↦ A^{-1}(z - b)`, used by the samplers.
    pub fn inverse_frame(&self) -> Result<Option<AffineMap<f64>>> {
        let Some(fr) = &self.frame else { return Ok(None) };
        let a = nalgebra::DMatrix::from_row_slice(self.dim, self.dim, &fr.matrix);
        let inv = a.try_inverse().ok_or(Error::SingularMap)?;
        let b = nalgebra::DVector::from_column_slice(&fr.offset);
        let off = -(&inv * b);
        let matrix: Vec<f64> =
            (0..self.dim).flat_map(|i| (0..self.dim).map(move |j| (i, j))).map(|(i, j)| inv[(i, j)]).collect();
        Ok(Some(AffineMap::new(self.dim, matrix, off.iter().copied().collect())?))
    }

    /// Short name used in reports.
    pub fn kind_name(&self) -> &'static str {
        match self.profile {
            RadialProfile::UniformBall { .. } => "uniform_ball",
            RadialProfile::Gaussian => "gaussian",
            RadialProfile::Table { .. } => "table",
        }
    }
}
