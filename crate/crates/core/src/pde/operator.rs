//! The operator `F(p, A) = ⟨p, cof(-A) p⟩` when `A ≤ 0` on `p^⊥`, and 0 otherwise.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative tolerance of the symmetry check.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative tolerance of the `A ≤ 0 on p^⊥` test.
pub const ADMISSIBLE_TOL: f64 = 1e-10;

fn scale(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

fn square(d: usize, a: &[f64]) -> Result<DMatrix<f64>> {
    if a.len() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, got: a.len() });
    }
    let m = DMatrix::from_row_slice(d, d, a);
    let s = scale(&m);
    for i in 0..d {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL * s {
                return Err(Error::NotSymmetric);
            }
        }
    }
    Ok(m)
}

/// Orthonormal basis of `p^⊥` as the columns of a `d × (d-1)` matrix,
/// taken from the Householder reflection sending `p/|p|` to `±e_1`.
pub(crate) fn complement_basis(p: &DVector<f64>) -> DMatrix<f64> {
    let d = p.len();
    let u = p / p.norm();
    let mut v = u.clone();
    let s = if u[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += s;
    let h = DMatrix::identity(d, d) - (&v * v.transpose()) * (2.0 / v.norm_squared());
    h.columns(1, d - 1).into_owned()
}

/// Whether `⟨q, A q⟩ ≤ 0` for every `q ⊥ p`, up to [`ADMISSIBLE_TOL`].
pub fn admissible(p: &[f64], a: &[f64]) -> Result<bool> {
    let d = p.len();
    let m = square(d, a)?;
    Ok(admissible_matrix(&DVector::from_column_slice(p), &m))
}

fn admissible_matrix(p: &DVector<f64>, a: &DMatrix<f64>) -> bool {
    let d = p.len();
    let tol = ADMISSIBLE_TOL * scale(a);
    let projected = if p.norm() == 0.0 {
        a.clone()
    } else if d == 1 {
        return true;
    } else {
        let b = complement_basis(p);
        b.transpose() * a * b
    };
    let sym = (&projected + projected.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().all(|&e| e <= tol)
}

/// `F(p, A)` with `A` given row-major. `F(0, ·) = 0`.
pub fn operator_f(p: &[f64], a: &[f64]) -> Result<f64> {
    let d = p.len();
    if d == 0 {
        return Err(Error::DimensionMismatch { expected: 2, got: 0 });
    }
    let m = square(d, a)?;
    let pv = DVector::from_column_slice(p);
    if pv.norm() == 0.0 || !admissible_matrix(&pv, &m) {
        return Ok(0.0);
    }
    // ⟨p, adj(M) p⟩ = -det [[M, p], [pᵀ, 0]] with M = -A.
    let mut bordered = DMatrix::zeros(d + 1, d + 1);
    bordered.view_mut((0, 0), (d, d)).copy_from(&(-m));
    for i in 0..d {
        bordered[(i, d)] = p[i];
        bordered[(d, i)] = p[i];
    }
    Ok((-bordered.determinant()).max(0.0))
}
