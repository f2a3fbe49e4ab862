//! Poisson and i.i.d. samplers for radial densities and convex polygons.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PointCloud, Scalar, Sign};
use crate::pde::{RadialDensity, RadialProfile};
use crate::trial::trial_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SampleMode {
    /// `X ∼ Poisson(m f)`: a Poisson(m) count of i.i.d. points.
    Poisson { intensity: f64 },
    /// Exactly `n` i.i.d. points.
    Iid { n: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "domain", rename_all = "snake_case")]
pub enum SampleDomain {
    Radial(RadialDensity),
    /// Uniform density on a convex polygon (vertices in either orientation).
    ConvexPolygon { vertices: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub mode: SampleMode,
    pub domain: SampleDomain,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn iid(density: RadialDensity, n: usize, seed: u64) -> Self {
        SamplerSpec { mode: SampleMode::Iid { n }, domain: SampleDomain::Radial(density), seed }
    }

    pub fn poisson(density: RadialDensity, intensity: f64, seed: u64) -> Self {
        SamplerSpec { mode: SampleMode::Poisson { intensity }, domain: SampleDomain::Radial(density), seed }
    }

    pub fn dim(&self) -> usize {
        match &self.domain {
            SampleDomain::Radial(d) => d.dim,
            SampleDomain::ConvexPolygon { .. } => 2,
        }
    }

    /// Expected number of points.
    pub fn mean_count(&self) -> f64 {
        match self.mode {
            SampleMode::Poisson { intensity } => intensity,
            SampleMode::Iid { n } => n as f64,
        }
    }
}

/// Draw from `spec` on random stream 0.
pub fn sample(spec: &SamplerSpec) -> Result<PointCloud> {
    sample_trial(spec, 0)
}

/// Draw from `spec` on the given random stream.
pub fn sample_trial(spec: &SamplerSpec, stream: u64) -> Result<PointCloud> {
    sample_with(spec, &mut trial_rng(spec.seed, stream))
}

pub fn sample_with<R: Rng>(spec: &SamplerSpec, rng: &mut R) -> Result<PointCloud> {
    let count = match spec.mode {
        SampleMode::Poisson { intensity } => {
            if !(intensity >= 0.0 && intensity.is_finite()) {
                return Err(Error::OutOfRange(format!("intensity must be nonnegative, got {intensity}")));
            }
            if intensity == 0.0 {
                0
            } else {
                Poisson::new(intensity).map_err(|e| Error::OutOfRange(e.to_string()))?.sample(rng) as usize
            }
        }
        SampleMode::Iid { n } => n,
    };
    sample_count(&spec.domain, count, rng)
}

/// `count` i.i.d. points from the domain's density.
pub fn sample_count<R: Rng>(domain: &SampleDomain, count: usize, rng: &mut R) -> Result<PointCloud> {
    match domain {
        SampleDomain::Radial(density) => sample_radial(density, count, rng),
        SampleDomain::ConvexPolygon { vertices } => sample_polygon(vertices, count, rng),
    }
}

fn sample_radial<R: Rng>(density: &RadialDensity, count: usize, rng: &mut R) -> Result<PointCloud> {
    density.validate()?;
    let d = density.dim;
    let inverse = density.inverse_frame()?;
    let mut coords = Vec::with_capacity(count * d);
    let mut z = vec![0.0; d];
    for _ in 0..count {
        match &density.profile {
            RadialProfile::Gaussian => z.iter_mut().for_each(|v| *v = rng.sample(StandardNormal)),
            RadialProfile::UniformBall { radius } => loop {
                z.iter_mut().for_each(|v| *v = radius * (2.0 * rng.random::<f64>() - 1.0));
                if z.iter().map(|v| v * v).sum::<f64>() < radius * radius {
                    break;
                }
            },
            RadialProfile::Table { r, f } => {
                let reach = r[r.len() - 1];
                let top = f.iter().cloned().fold(0.0, f64::max);
                loop {
                    z.iter_mut().for_each(|v| *v = reach * (2.0 * rng.random::<f64>() - 1.0));
                    let rad = z.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if rng.random::<f64>() * top < density.profile_at(rad) {
                        break;
                    }
                }
            }
        }
        match &inverse {
            Some(map) => coords.extend(map.apply_point(&z)),
            None => coords.extend_from_slice(&z),
        }
    }
    PointCloud::from_flat(d, coords)
}

fn sample_polygon<R: Rng>(vertices: &[[f64; 2]], count: usize, rng: &mut R) -> Result<PointCloud> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::InvalidDensity("polygon needs at least three vertices".into()));
    }
    let turn = |k: usize| f64::orient2d(&vertices[k], &vertices[(k + 1) % n], &vertices[(k + 2) % n]);
    let orientation = turn(0);
    if orientation == Sign::Zero || (1..n).any(|k| turn(k) != orientation) {
        return Err(Error::InvalidDensity("polygon must be strictly convex".into()));
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in vertices {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    let mut coords = Vec::with_capacity(2 * count);
    while coords.len() < 2 * count {
        let p = [lo[0] + (hi[0] - lo[0]) * rng.random::<f64>(), lo[1] + (hi[1] - lo[1]) * rng.random::<f64>()];
        if (0..n).all(|k| f64::orient2d(&vertices[k], &vertices[(k + 1) % n], &p) == orientation) {
            coords.extend_from_slice(&p);
        }
    }
    PointCloud::from_flat(2, coords)
}
