//! The barrier `ψ(x) = 2 x_d^{2/(d+1)} (1 - |x^d|²/2)^{(d-1)/(d+1)}` on
//! `B_1 ∩ {x_d > 0}`, and a finite-difference check that `F(Dψ, D²ψ) ≥ 1`.

use serde::{Deserialize, Serialize};

use super::operator::operator_f;
use crate::error::{Error, Result};

/// Central-difference step for the derivative check.
pub const FD_STEP: f64 = 1e-5;

pub fn barrier_psi(x: &[f64]) -> Result<f64> {
    let d = x.len();
    if d < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: d });
    }
    let xd = x[d - 1];
    let horizontal: f64 = x[..d - 1].iter().map(|v| v * v).sum();
    if xd < 0.0 || horizontal + xd * xd > 1.0 {
        return Err(Error::OutOfRange("barrier is defined on B_1 ∩ {x_d ≥ 0}".into()));
    }
    let df = d as f64;
    Ok(2.0 * xd.powf(2.0 / (df + 1.0)) * (1.0 - 0.5 * horizontal).powf((df - 1.0) / (df + 1.0)))
}

/// Gradient and row-major Hessian by central differences with step `h`.
pub fn finite_difference<F: Fn(&[f64]) -> Result<f64>>(f: F, x: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = x.len();
    let at = |shifts: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(i, s) in shifts {
            y[i] += s;
        }
        f(&y)
    };
    let f0 = f(x)?;
    let mut grad = vec![0.0; d];
    let mut hess = vec![0.0; d * d];
    for i in 0..d {
        let (fp, fm) = (at(&[(i, h)])?, at(&[(i, -h)])?);
        grad[i] = (fp - fm) / (2.0 * h);
        hess[i * d + i] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let v = (at(&[(i, h), (j, h)])? - at(&[(i, h), (j, -h)])? - at(&[(i, -h), (j, h)])?
                + at(&[(i, -h), (j, -h)])?)
                / (4.0 * h * h);
            hess[i * d + j] = v;
            hess[j * d + i] = v;
        }
    }
    Ok((grad, hess))
}

/// Outcome of [`barrier_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrierCheck {
    pub min_f: f64,
    pub argmin: Vec<f64>,
    pub samples: usize,
}

/// Minimum of `F(Dψ, D²ψ)` over an `n × n` grid of `[-radius, radius] ×
/// [floor, radius]` kept inside `B_radius` (d = 2).
pub fn barrier_check(n: usize, radius: f64, floor: f64) -> Result<BarrierCheck> {
    if n < 2 || !(radius > floor && floor > 0.0 && radius < 1.0) {
        return Err(Error::OutOfRange("barrier grid needs n ≥ 2 and 0 < floor < radius < 1".into()));
    }
    let mut best = BarrierCheck { min_f: f64::INFINITY, argmin: Vec::new(), samples: 0 };
    for i in 0..n {
        for j in 0..n {
            let x = [
                -radius + 2.0 * radius * i as f64 / (n - 1) as f64,
                floor + (radius - floor) * j as f64 / (n - 1) as f64,
            ];
            if x[0] * x[0] + x[1] * x[1] > radius * radius {
                continue;
            }
            let (g, h) = finite_difference(barrier_psi, &x, FD_STEP)?;
            let f = operator_f(&g, &h)?;
            best.samples += 1;
            if f < best.min_f {
                best.min_f = f;
                best.argmin = x.to_vec();
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(barrier_psi(&[0.3, 0.0]).unwrap(), 0.0);
        assert!((barrier_psi(&[0.0, 0.125]).unwrap() - 0.5).abs() < 1e-15);
        assert!(barrier_psi(&[0.0, -0.1]).is_err());
        assert!(barrier_psi(&[1.0, 0.5]).is_err());
    }

    #[test]
    fn operator_is_at_least_one() {
        let c = barrier_check(12, 0.9, 0.05).unwrap();
        assert!(c.samples > 50);
        assert!(c.min_f >= 1.0 - 1e-3, "{c:?}");
    }
}
