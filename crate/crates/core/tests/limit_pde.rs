//! The operator F, closed-form limit solutions and layer laws against
//! oracles written out here: explicit two- and three-dimensional formulas
//! for F, Simpson quadrature for h, and bisection for N(t).

use peelshape::pde::{
    barrier_check, barrier_psi, h_affine, h_radial, n_of_t, operator_f, LimitSolution, RadialDensity, Sigma,
    SimpleTestFunction, TestKind,
};
use peelshape::geometry::AffineMap;
use proptest::prelude::*;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

fn mat_mul(d: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            c[i * d + j] = (0..d).map(|k| a[i * d + k] * b[k * d + j]).sum();
        }
    }
    c
}

fn transpose(d: usize, a: &[f64]) -> Vec<f64> {
    (0..d * d).map(|k| a[(k % d) * d + k / d]).collect()
}

fn det(d: usize, a: &[f64]) -> f64 {
    match d {
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => unreachable!(),
    }
}

fn quad(d: usize, a: &[f64], x: &[f64]) -> f64 {
    (0..d).map(|i| (0..d).map(|j| x[i] * a[i * d + j] * x[j]).sum::<f64>()).sum()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// F in d = 2: with q = p^⊥, admissible iff ⟨q, Aq⟩ ≤ 0, and then
/// ⟨p, cof(-A) p⟩ = -⟨q, Aq⟩.
fn f_oracle_2d(p: &[f64], a: &[f64]) -> f64 {
    let q = [-p[1], p[0]];
    (-quad(2, a, &q)).max(0.0)
}

/// F in d = 3: ⟨p, cof(M) p⟩ = |p|² det(M restricted to p^⊥), and the
/// constraint asks that restriction of -A to be positive semidefinite.
fn f_oracle_3d(p: &[f64], a: &[f64]) -> f64 {
    let n2 = p.iter().map(|x| x * x).sum::<f64>();
    if n2 == 0.0 {
        return 0.0;
    }
    // Orthonormal basis {u, v} of p^⊥ by Gram-Schmidt against the axis least aligned with p.
    let k = (0..3).min_by(|&i, &j| p[i].abs().total_cmp(&p[j].abs())).unwrap();
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let pe = p[k] / n2;
    let mut u: Vec<f64> = (0..3).map(|i| e[i] - pe * p[i]).collect();
    let nu = norm(&u);
    u.iter_mut().for_each(|x| *x /= nu);
    let mut v = vec![p[1] * u[2] - p[2] * u[1], p[2] * u[0] - p[0] * u[2], p[0] * u[1] - p[1] * u[0]];
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let m: Vec<f64> = a.iter().map(|x| -x).collect();
    let uu = quad(3, &m, &u);
    let vv = quad(3, &m, &v);
    let uv: f64 = (0..3).map(|i| (0..3).map(|j| u[i] * m[i * 3 + j] * v[j]).sum::<f64>()).sum();
    let (tr, dt) = (uu + vv, uu * vv - uv * uv);
    let scale = uu.abs() + vv.abs() + uv.abs();
    if tr < -1e-10 * scale || dt < -1e-10 * scale * scale {
        0.0
    } else {
        n2 * dt.max(0.0)
    }
}

fn sym(d: usize, raw: &[f64]) -> Vec<f64> {
    (0..d * d).map(|k| 0.5 * (raw[k] + raw[(k % d) * d + k / d])).collect()
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn f_matches_explicit_formulas(p2 in entries(2), a2 in entries(4), p3 in entries(3), a3 in entries(9)) {
        let (a2, a3) = (sym(2, &a2), sym(3, &a3));
        let f2 = operator_f(&p2, &a2).unwrap();
        let s2 = norm(&p2).powi(2) * max_abs(&a2);
        prop_assert!((f2 - f_oracle_2d(&p2, &a2)).abs() <= 1e-12 * s2.max(1e-300));
        let f3 = operator_f(&p3, &a3).unwrap();
        let s3 = norm(&p3).powi(2) * max_abs(&a3).powi(2);
        prop_assert!((f3 - f_oracle_3d(&p3, &a3)).abs() <= 1e-9 * s3.max(1e-300), "{} vs {}", f3, f_oracle_3d(&p3, &a3));
    }

    #[test]
    fn f_is_affinely_covariant(d in 2usize..=3, p in entries(3), a in entries(9), b in entries(9)) {
        let p = &p[..d];
        let a = sym(d, &a[..d * d]);
        let b = &b[..d * d];
        let db = det(d, b);
        prop_assume!(db.abs() > 0.1);
        // Make A admissible for p by pushing it down to -I - CCᵀ direction.
        let a: Vec<f64> = a.iter().enumerate().map(|(k, v)| if k % (d + 1) == 0 { v - 4.0 } else { *v }).collect();
        let bt = transpose(d, b);
        let btp: Vec<f64> = (0..d).map(|i| (0..d).map(|k| bt[i * d + k] * p[k]).sum()).collect();
        let btab = mat_mul(d, &bt, &mat_mul(d, &a, b));
        let lhs = operator_f(&btp, &btab).unwrap();
        let rhs = db * db * operator_f(p, &a).unwrap();
        let scale = norm(&btp).powi(2) * max_abs(&btab).powi(d as i32 - 1) + db * db * norm(p).powi(2) * max_abs(&a).powi(d as i32 - 1);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * scale.max(1e-300), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn f_is_monotone_decreasing(d in 2usize..=3, p in entries(3), a in entries(9), c in entries(9)) {
        let p = &p[..d];
        let a = sym(d, &a[..d * d]);
        let c = &c[..d * d];
        // B = A + C Cᵀ ≥ A.
        let b: Vec<f64> = a.iter().zip(mat_mul(d, c, &transpose(d, c))).map(|(x, y)| x + y).collect();
        let (fa, fb) = (operator_f(p, &a).unwrap(), operator_f(p, &b).unwrap());
        let scale = norm(p).powi(2) * max_abs(&b).max(max_abs(&a)).powi(d as i32 - 1);
        prop_assert!(fa >= fb - 1e-9 * scale.max(1e-300), "{} < {}", fa, fb);
    }
}

#[test]
fn f_at_identity_matrices() {
    for d in 2..=3 {
        let eye: Vec<f64> = (0..d * d).map(|k| if k % (d + 1) == 0 { 1.0 } else { 0.0 }).collect();
        let neg: Vec<f64> = eye.iter().map(|x| -x).collect();
        let mut e = vec![0.0; d];
        e[d - 1] = 1.0;
        assert_eq!(operator_f(&e, &neg).unwrap(), 1.0);
        assert_eq!(operator_f(&e, &eye).unwrap(), 0.0);
        assert_eq!(operator_f(&vec![0.0; d], &neg).unwrap(), 0.0);
    }
    assert!(operator_f(&[1.0, 0.0], &[0.0, 1.0, 0.0, 0.0]).is_err());
}

/// Composite Simpson rule with an even number of panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for k in 1..panels {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// h for a radial density in d = 2: ∫_r^R ρ^{1/3} f(ρ)^{2/3} dρ, with
/// ρ = s³ to remove the singular derivative at the origin.
fn h_simpson(r: f64, reach: f64, f: impl Fn(f64) -> f64) -> f64 {
    if r >= reach {
        return 0.0;
    }
    simpson(|s| 3.0 * s.powi(3) * f(s.powi(3)).powf(2.0 / 3.0), r.cbrt(), reach.cbrt(), 20_000)
}

fn gauss_f(r: f64) -> f64 {
    (-0.5 * r * r).exp() / (2.0 * PI)
}

#[test]
fn closed_forms_match_simpson() {
    let (ball, gauss) = (RadialDensity::uniform_ball(2), RadialDensity::gaussian(2));
    for k in 0..100 {
        let r = k as f64 / 100.0;
        let want = h_simpson(r, 1.0, |_| 1.0 / PI);
        assert!((h_radial(r, &ball).unwrap() - want).abs() < 1e-12, "ball r = {r}");
        let r = 4.0 * k as f64 / 100.0;
        let want = h_simpson(r, 14.0, gauss_f);
        assert!((h_radial(r, &gauss).unwrap() - want).abs() < 1e-12, "gaussian r = {r}");
    }
}

#[test]
fn peak_heights() {
    let ball = h_radial(0.0, &RadialDensity::uniform_ball(2)).unwrap();
    assert!((ball - 3.0 / (4.0 * PI.powf(2.0 / 3.0))).abs() < 1e-15);
    assert!((ball - 0.349646).abs() < 1e-6);
    assert_eq!(h_radial(1.0, &RadialDensity::uniform_ball(2)).unwrap(), 0.0);
    // Peak of the Gaussian solution: ½ (3/2π)^{2/3} Γ(2/3).
    let gauss = h_radial(0.0, &RadialDensity::gaussian(2)).unwrap();
    assert!((gauss - 0.5 * (3.0 / (2.0 * PI)).powf(2.0 / 3.0) * gamma(2.0 / 3.0)).abs() < 1e-12);
}

#[test]
fn affine_frames() {
    let gauss = RadialDensity::gaussian(2);
    // Covariance diag(4, 1) and mean (1, -1): argument |Σ^{-1/2}(x - μ)|.
    let framed = RadialDensity::gaussian_with(2, &[1.0, -1.0], &[4.0, 0.0, 0.0, 1.0]).unwrap();
    for x in [[0.0f64, 0.0], [1.0, -1.0], [3.0, 0.5], [-2.0, 2.0]] {
        let z = (((x[0] - 1.0) / 2.0).powi(2) + (x[1] + 1.0).powi(2)).sqrt();
        let want = h_simpson(z, 14.0, gauss_f);
        assert!((h_affine(&x, &framed).unwrap() - want).abs() < 1e-11, "{x:?}");
        assert_eq!(h_affine(&x, &gauss).unwrap(), h_radial(x[0].hypot(x[1]), &gauss).unwrap());
    }
}

/// N(t) = (2π/α) f(r)^{1/3} r^{2/3}, r = h^{-1}(t/α), with h inverted by bisection.
fn n_oracle(t: f64, alpha: f64, reach: f64, f: impl Fn(f64) -> f64 + Copy) -> f64 {
    let (mut lo, mut hi) = (0.0, reach);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h_simpson(mid, reach, f) > t / alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    2.0 * PI / alpha * f(r).powf(1.0 / 3.0) * r.powf(2.0 / 3.0)
}

#[test]
fn layer_laws() {
    let alpha = 4.0 / 3.0;
    let ball = RadialDensity::uniform_ball(2);
    assert!((n_of_t(0.0, &ball, alpha).unwrap() - 2.0 * PI.powf(2.0 / 3.0) / alpha).abs() < 1e-12);
    let peak = alpha * h_radial(0.0, &ball).unwrap();
    let near_top = n_of_t(peak * (1.0 - 1e-6), &ball, alpha).unwrap();
    assert!(near_top < 1e-2 && near_top > 0.0);
    assert!(n_of_t(peak * 1.01, &ball, alpha).is_err());

    let gauss = RadialDensity::gaussian(2);
    let gpeak = alpha * h_radial(0.0, &gauss).unwrap();
    for frac in [0.2, 0.5, 0.8] {
        let t = frac * gpeak;
        let want = n_oracle(t, alpha, 14.0, gauss_f);
        let got = n_of_t(t, &gauss, alpha).unwrap();
        assert!((got - want).abs() < 1e-8 * want, "t = {t}: {got} vs {want}");
    }
}

#[test]
fn ball_solution_has_the_predicted_curvature() {
    // h = c (1 - ρ^{4/3}) with 4c/3 = π^{-2/3}, so ⟨Dh, cof(-D²h) Dh⟩ = f² = π^{-2}
    // and equals |Dh|³ κ with κ = 1/ρ.
    let k = PI.powf(-2.0 / 3.0);
    let solution = LimitSolution::new(RadialDensity::uniform_ball(2)).unwrap();
    for x in [[0.3f64, 0.1], [-0.5, 0.5], [0.05, -0.9], [0.7, 0.0]] {
        let rho: f64 = x[0].hypot(x[1]);
        let h = 0.75 * k * (1.0 - rho.powf(4.0 / 3.0));
        assert!((solution.eval(&x).unwrap() - h).abs() < 1e-14);
        let grad = [-k * rho.powf(-2.0 / 3.0) * x[0], -k * rho.powf(-2.0 / 3.0) * x[1]];
        let c = -k * rho.powf(-2.0 / 3.0);
        let e = (2.0 / 3.0) * k * rho.powf(-8.0 / 3.0);
        let hess = [c + e * x[0] * x[0], e * x[0] * x[1], e * x[0] * x[1], c + e * x[1] * x[1]];
        let f = operator_f(&grad, &hess).unwrap();
        assert!((f - PI.powi(-2)).abs() < 1e-8, "{f}");
        assert!((f - norm(&grad).powi(3) / rho).abs() < 1e-8);
    }
}

#[test]
fn barrier() {
    assert_eq!(barrier_psi(&[0.3, 0.0]).unwrap(), 0.0);
    assert!((barrier_psi(&[0.0, 0.125]).unwrap() - 0.5).abs() < 1e-15);
    let check = barrier_check(50, 0.9, 0.05).unwrap();
    assert!(check.samples > 1000);
    assert!(check.min_f >= 1.0 - 1e-3, "{check:?}");
}

#[test]
fn simple_test_functions() {
    let shear = AffineMap::new(2, vec![1.0, 0.7, 0.0, 1.0], vec![0.2, -0.3]).unwrap();
    for x in [[0.1, 0.4], [-1.0, 2.0], [3.0, -1.0]] {
        let plain = SimpleTestFunction::new(Sigma::identity(TestKind::Upper), AffineMap::identity(2)).unwrap();
        assert!((plain.eval(&x).unwrap().operator - 1.0).abs() < 1e-12);
        let doubled = SimpleTestFunction::new(Sigma::linear(TestKind::Upper, 2.0), AffineMap::identity(2)).unwrap();
        assert!((doubled.eval(&x).unwrap().operator - 8.0).abs() < 1e-12);
        let sheared = SimpleTestFunction::new(Sigma::identity(TestKind::Upper), shear.clone()).unwrap();
        assert!((sheared.eval(&x).unwrap().operator - 1.0).abs() < 1e-12);
    }
    let squeeze = AffineMap::new(2, vec![2.0, 0.0, 0.0, 1.0], vec![0.0, 0.0]).unwrap();
    assert!(SimpleTestFunction::new(Sigma::identity(TestKind::Upper), squeeze).is_err());
}
