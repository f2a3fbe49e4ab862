use super::scalar::{Scalar, Sign};
use crate::error::{Error, Result};

/// Orientation of a `d`-simplex given by `d + 1` points of dimension `d`:
/// the sign of the determinant of its edge matrix `[p_1 - p_0, ..., p_d - p_0]`.
///
/// Supports `d = 2` and `d = 3`.
pub fn orientation<T: Scalar>(simplex: &[&[T]]) -> Result<Sign> {
    let d = simplex.len().saturating_sub(1);
    if let Some(bad) = simplex.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: bad.len() });
    }
    match d {
        2 => {
            let p = |i: usize| [simplex[i][0].clone(), simplex[i][1].clone()];
            Ok(T::orient2d(&p(0), &p(1), &p(2)))
        }
        3 => {
            let p = |i: usize| [simplex[i][0].clone(), simplex[i][1].clone(), simplex[i][2].clone()];
            Ok(T::orient3d(&p(0), &p(1), &p(2), &p(3)))
        }
        other => Err(Error::UnsupportedDimension(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::ratio;

    #[test]
    fn unit_triangle_examples() {
        let s = |pts: [[f64; 2]; 3]| {
            let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
            orientation(&refs).unwrap()
        };
        assert_eq!(s([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), Sign::Positive);
        assert_eq!(s([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]), Sign::Zero);
        assert_eq!(s([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]), Sign::Negative);
    }

    #[test]
    fn exact_mode_matches() {
        let pts = [[ratio(0, 1), ratio(0, 1)], [ratio(1, 3), ratio(0, 1)], [ratio(0, 1), ratio(1, 7)]];
        let refs: Vec<&[_]> = pts.iter().map(|p| p.as_slice()).collect();
        assert_eq!(orientation(&refs).unwrap(), Sign::Positive);
    }

    #[test]
    fn dimension_mismatch() {
        let a = [0.0, 0.0];
        let b = [1.0, 0.0, 0.0];
        assert!(matches!(
            orientation::<f64>(&[&a, &b, &a]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(orientation::<f64>(&[&[0.0], &[1.0]]), Err(Error::UnsupportedDimension(1))));
    }
}
