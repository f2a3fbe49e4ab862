//! Simple test functions `ψ = σ ∘ φ ∘ a` with `φ(x) = x_d - |x^d|²/2`
//! and `a` a unimodular affine map.

use super::operator::operator_f;
use crate::error::{Error, Result};
use crate::geometry::{determinant, AffineMap};

/// Whether `σ` bounds from above (`σ'' ≥ 0`) or below (`σ'' ≤ 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Upper,
    Lower,
}

type Scalar1 = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// `σ` with its first two derivatives.
pub struct Sigma {
    pub kind: TestKind,
    value: Scalar1,
    first: Scalar1,
    second: Scalar1,
}

impl Sigma {
    pub fn new(
        kind: TestKind,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        first: impl Fn(f64) -> f64 + Send + Sync + 'static,
        second: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Sigma { kind, value: Box::new(value), first: Box::new(first), second: Box::new(second) }
    }

    /// `σ(s) = k s`.
    pub fn linear(kind: TestKind, k: f64) -> Self {
        Sigma::new(kind, move |s| k * s, move |_| k, |_| 0.0)
    }

    pub fn identity(kind: TestKind) -> Self {
        Sigma::linear(kind, 1.0)
    }
}

/// Value, gradient, row-major Hessian and `F(Dψ, D²ψ)` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TestEval {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<f64>,
    pub operator: f64,
}

pub struct SimpleTestFunction {
    sigma: Sigma,
    frame: AffineMap<f64>,
}

/// `φ(y)`, `Dφ(y)`, and the constant `D²φ = diag(-1, …, -1, 0)`.
pub fn phi(y: &[f64]) -> (f64, Vec<f64>) {
    let d = y.len();
    let horizontal: f64 = y[..d - 1].iter().map(|v| v * v).sum();
    let mut grad: Vec<f64> = y[..d - 1].iter().map(|v| -v).collect();
    grad.push(1.0);
    (y[d - 1] - 0.5 * horizontal, grad)
}

impl SimpleTestFunction {
    /// Fails unless `|det Da| = 1` within `1e-12`.
    pub fn new(sigma: Sigma, frame: AffineMap<f64>) -> Result<Self> {
        let det = determinant(frame.dim(), frame.matrix());
        if (det.abs() - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange(format!("frame must be unimodular, |det| = {}", det.abs())));
        }
        Ok(SimpleTestFunction { sigma, frame })
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok((self.sigma.value)(phi(&self.apply(x)?).0))
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.frame.dim() {
            return Err(Error::DimensionMismatch { expected: self.frame.dim(), got: x.len() });
        }
        Ok(self.frame.apply_point(x))
    }

    /// Chain rule: `Dψ = σ' Mᵀ Dφ`, `D²ψ = σ'' Mᵀ Dφ Dφᵀ M + σ' Mᵀ D²φ M`.
    pub fn eval(&self, x: &[f64]) -> Result<TestEval> {
        let d = x.len();
        let y = self.apply(x)?;
        let (s, g) = phi(&y);
        let (s0, s1, s2) = ((self.sigma.value)(s), (self.sigma.first)(s), (self.sigma.second)(s));
        let ok = s1 >= 0.0
            && match self.sigma.kind {
                TestKind::Upper => s2 >= 0.0,
                TestKind::Lower => s2 <= 0.0,
            };
        if !ok {
            return Err(Error::OutOfRange(format!("sigma violates its sign constraints at s = {s}")));
        }
        let m = self.frame.matrix();
        // Mᵀ Dφ
        let mg: Vec<f64> = (0..d).map(|j| (0..d).map(|i| m[i * d + j] * g[i]).sum()).collect();
        let gradient: Vec<f64> = mg.iter().map(|v| s1 * v).collect();
        let mut hessian = vec![0.0; d * d];
        for a in 0..d {
            for b in 0..d {
                // (Mᵀ D²φ M)_{ab} = -Σ_{i<d} M_{ia} M_{ib}
                let curv: f64 = (0..d - 1).map(|i| m[i * d + a] * m[i * d + b]).sum();
                hessian[a * d + b] = s2 * mg[a] * mg[b] - s1 * curv;
            }
        }
        let operator = operator_f(&gradient, &hessian)?;
        Ok(TestEval { value: s0, gradient, hessian, operator })
    }
}
