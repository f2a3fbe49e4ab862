use serde::{Deserialize, Serialize};

use super::scalar::{Rational, Scalar};
use crate::error::{Error, Result};

/// A point of `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point<T = f64> {
    coords: Vec<T>,
}

impl<T: Scalar> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch { expected: 2, got: 0 });
        }
        if !coords.iter().all(Scalar::is_finite_value) {
            return Err(Error::NonFinite(0));
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// Last coordinate `x_d`.
    pub fn height(&self) -> &T {
        self.coords.last().expect("nonempty")
    }
}

impl Point<f64> {
    pub fn xy(x: f64, y: f64) -> Self {
        Point { coords: vec![x, y] }
    }
}

/// A finite list of points sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud<T = f64> {
    dim: usize,
    coords: Vec<T>,
}

impl<T: Scalar> PointCloud<T> {
    pub fn empty(dim: usize) -> Self {
        PointCloud { dim, coords: Vec::new() }
    }

    /// Build from a flat row-major coordinate buffer.
    pub fn from_flat(dim: usize, coords: Vec<T>) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch { expected: dim, got: coords.len() % dim.max(1) });
        }
        if let Some(bad) = coords.iter().position(|c| !c.is_finite_value()) {
            return Err(Error::NonFinite(bad / dim));
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn from_rows(dim: usize, rows: impl IntoIterator<Item = Vec<T>>) -> Result<Self> {
        let mut coords = Vec::new();
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            coords.extend(row);
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_planar(points: impl IntoIterator<Item = [T; 2]>) -> Result<Self> {
        Self::from_flat(2, points.into_iter().flatten().collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn push(&mut self, p: &[T]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        if !p.iter().all(Scalar::is_finite_value) {
            return Err(Error::NonFinite(self.len()));
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    /// Sub-cloud made of the listed indices, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud { dim: self.dim, coords }
    }

    pub(crate) fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else if self.dim == 3 && dim == 2 {
            Err(Error::UnsupportedDimension(3))
        } else {
            Err(Error::DimensionMismatch { expected: dim, got: self.dim })
        }
    }

    /// Copy the points out as planar pairs; fails unless `d = 2`.
    pub fn to_planar(&self) -> Result<Vec<[T; 2]>> {
        self.require_dim(2)?;
        Ok(self.iter().map(|p| [p[0].clone(), p[1].clone()]).collect())
    }

    pub fn to_f64(&self) -> PointCloud<f64> {
        PointCloud { dim: self.dim, coords: self.coords.iter().map(Scalar::as_f64).collect() }
    }

    pub fn to_rational(&self) -> PointCloud<Rational> {
        PointCloud { dim: self.dim, coords: self.coords.iter().map(Scalar::to_rational).collect() }
    }

    pub fn flat(&self) -> &[T] {
        &self.coords
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_and_non_finite() {
        assert!(PointCloud::<f64>::from_flat(2, vec![1.0, 2.0, 3.0]).is_err());
        assert_eq!(
            PointCloud::<f64>::from_flat(2, vec![1.0, 2.0, f64::NAN, 0.0]),
            Err(Error::NonFinite(1))
        );
        assert!(PointCloud::<f64>::from_rows(2, vec![vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    #[test]
    fn select_and_accessors() {
        let c = PointCloud::from_planar([[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]]).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.point(1), &[2.0, 3.0]);
        let s = c.select(&[2, 0]);
        assert_eq!(s.flat(), &[4.0, 5.0, 0.0, 1.0]);
        assert!(c.to_planar().is_ok());
        let c3 = PointCloud::from_flat(3, vec![0.0; 6]).unwrap();
        assert_eq!(c3.to_planar(), Err(Error::UnsupportedDimension(3)));
    }
}
