use serde::{Deserialize, Serialize};

use super::point::PointCloud;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `x ↦ M x + b` with `M` nonsingular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMap<T = f64> {
    dim: usize,
    matrix: Vec<T>,
    offset: Vec<T>,
    det_abs: T,
}

/// Determinant by Gaussian elimination over the field `T`.
pub fn determinant<T: Scalar>(dim: usize, matrix: &[T]) -> T {
    let mut a = matrix.to_vec();
    let mut det = T::one();
    for col in 0..dim {
        let Some(pivot) = (col..dim).max_by(|&i, &j| {
            a[i * dim + col].abs().total_cmp(&a[j * dim + col].abs())
        }) else {
            return T::zero();
        };
        if a[pivot * dim + col].is_zero() {
            return T::zero();
        }
        if pivot != col {
            for k in 0..dim {
                a.swap(pivot * dim + k, col * dim + k);
            }
            det = -det;
        }
        let p = a[col * dim + col].clone();
        det = det * p.clone();
        for row in col + 1..dim {
            let factor = a[row * dim + col].clone() / p.clone();
            if factor.is_zero() {
                continue;
            }
            for k in col..dim {
                let v = a[col * dim + k].clone() * factor.clone();
                a[row * dim + k] = a[row * dim + k].clone() - v;
            }
        }
    }
    det
}

impl<T: Scalar> AffineMap<T> {
    /// `matrix` is row-major `dim × dim`.
    pub fn new(dim: usize, matrix: Vec<T>, offset: Vec<T>) -> Result<Self> {
        if matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: matrix.len() });
        }
        if offset.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: offset.len() });
        }
        let det_abs = determinant(dim, &matrix).abs();
        if det_abs.is_zero() {
            return Err(Error::SingularMap);
        }
        Ok(AffineMap { dim, matrix, offset, det_abs })
    }

    pub fn identity(dim: usize) -> Self {
        let mut matrix = vec![T::zero(); dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = T::one();
        }
        AffineMap { dim, matrix, offset: vec![T::zero(); dim], det_abs: T::one() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &[T] {
        &self.matrix
    }

    pub fn offset(&self) -> &[T] {
        &self.offset
    }

    pub fn det_abs(&self) -> &T {
        &self.det_abs
    }

    pub fn apply_point(&self, x: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(self.offset[i].clone(), |acc, j| {
                    acc + self.matrix[i * self.dim + j].clone() * x[j].clone()
                })
            })
            .collect()
    }
}

/// Pointwise image of a cloud.
pub fn affine_apply<T: Scalar>(map: &AffineMap<T>, cloud: &PointCloud<T>) -> Result<PointCloud<T>> {
    if map.dim != cloud.dim() {
        return Err(Error::DimensionMismatch { expected: map.dim, got: cloud.dim() });
    }
    PointCloud::from_rows(cloud.dim(), cloud.iter().map(|p| map.apply_point(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{ratio, Rational};

    #[test]
    fn examples() {
        let c = PointCloud::from_planar([[1.0, 0.0]]).unwrap();
        assert_eq!(affine_apply(&AffineMap::identity(2), &c).unwrap(), c);
        let dbl = AffineMap::new(2, vec![2.0, 0.0, 0.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(affine_apply(&dbl, &c).unwrap().flat(), &[2.0, 0.0]);
        let shear = AffineMap::new(2, vec![1.0, 1.0, 0.0, 1.0], vec![0.0, 0.0]).unwrap();
        let sq = PointCloud::from_planar([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(
            affine_apply(&shear, &sq).unwrap().flat(),
            &[0.0, 0.0, 1.0, 0.0, 2.0, 1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(
            AffineMap::new(2, vec![1.0, 2.0, 2.0, 4.0], vec![0.0, 0.0]),
            Err(Error::SingularMap)
        );
    }

    #[test]
    fn rational_determinant() {
        let m: Vec<Rational> = vec![ratio(1, 2), ratio(3, 1), ratio(0, 1), ratio(0, 1), ratio(2, 3), ratio(1, 1), ratio(5, 1), ratio(0, 1), ratio(1, 1)];
        // 1/2 * (2/3 - 0) - 3 * (0 - 5) + 0 = 1/3 + 15
        assert_eq!(determinant(3, &m), ratio(46, 3));
    }
}
