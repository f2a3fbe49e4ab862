//! Seeded property suites over random instances: the dynamic programming
//! principles, affine invariance, monotonicity, the parabolic-lift
//! correspondence, the operator `F`, the barrier and the closed forms.
//!
//! Case `k` of suite `s` draws from the random stream `(s << 32) | k`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convex::{self, check_affine_invariance, verify_dpp};
use crate::error::{Error, Result};
use crate::geometry::{ratio, AffineMap, PointCloud, Rational};
use crate::pde::{
    barrier_check, h_radial, h_radial_quadrature, n_of_t, n_of_t_generic, operator_f, RadialDensity,
};
use crate::semiconvex::{self, correspondence_check, verify_semidpp};
use crate::trial::trial_rng;
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    Dpp,
    SemiDpp,
    Affine,
    Monotone,
    Correspondence,
    F,
    Barrier,
    ClosedForms,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Dpp,
        Suite::SemiDpp,
        Suite::Affine,
        Suite::Monotone,
        Suite::Correspondence,
        Suite::F,
        Suite::Barrier,
        Suite::ClosedForms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dpp => "dpp",
            Suite::SemiDpp => "semidpp",
            Suite::Affine => "affine",
            Suite::Monotone => "monotone",
            Suite::Correspondence => "correspondence",
            Suite::F => "F",
            Suite::Barrier => "barrier",
            Suite::ClosedForms => "closed-forms",
        }
    }

    fn id(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap_or(0) as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::OutOfRange(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Largest cloud size.
    pub max_n: usize,
    pub cases: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_n: 48, cases: 200, seed: 0 }
    }
}

/// Result of one suite; `failure` describes the first failing case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub cases: usize,
    pub passed: usize,
    pub failure: Option<String>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Relative tolerance of the operator checks.
pub const F_REL_TOL: f64 = 1e-9;
/// Lower bound required of `F(Dψ, D²ψ)` on the barrier grid.
pub const BARRIER_FLOOR: f64 = 1.0 - 1e-3;
/// Points per side of the barrier sample grid.
pub const BARRIER_GRID: usize = 50;
/// Agreement required between closed forms and quadrature.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

type CaseResult = Result<std::result::Result<(), String>>;

fn run_cases(suite: Suite, opts: &SuiteOptions, mut case: impl FnMut(usize, &mut ChaCha8Rng) -> CaseResult) -> Result<SuiteOutcome> {
    let mut passed = 0;
    for k in 0..opts.cases {
        let mut rng = trial_rng(opts.seed, (suite.id() << 32) | k as u64);
        match case(k, &mut rng)? {
            Ok(()) => passed += 1,
            Err(detail) => {
                return Ok(SuiteOutcome { suite, cases: k + 1, passed, failure: Some(format!("case {k}: {detail}")) })
            }
        }
    }
    Ok(SuiteOutcome { suite, cases: opts.cases, passed, failure: None })
}

fn verdict(v: Verdict, cloud: &PointCloud<impl crate::geometry::Scalar>) -> std::result::Result<(), String> {
    match v {
        Verdict::Holds => Ok(()),
        Verdict::Fails(c) => Err(format!(
            "point {} expected {} found {} ({}); cloud {:?}",
            c.point_index,
            c.expected,
            c.found,
            c.note,
            cloud.to_f64().flat()
        )),
    }
}

/// Even cases use a small integer lattice (many collinear and repeated
/// points), odd cases uniform coordinates.
fn planar_cloud(rng: &mut ChaCha8Rng, n: usize, lattice: bool, upper: bool) -> PointCloud {
    let coords: Vec<f64> = (0..n)
        .flat_map(|_| {
            if lattice {
                let x = rng.random_range(-4..=4) as f64;
                let y = rng.random_range(if upper { 1..=8 } else { -4..=4 }) as f64;
                [x, y]
            } else {
                let x = rng.random_range(-1.0..1.0);
                let y = if upper { 1.0 - rng.random::<f64>() } else { rng.random_range(-1.0..1.0) };
                [x, y]
            }
        })
        .collect();
    PointCloud::from_flat(2, coords).expect("finite coordinates")
}

fn size(rng: &mut ChaCha8Rng, max_n: usize) -> usize {
    rng.random_range(1..=max_n.max(1))
}

fn dpp_suite(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    run_cases(Suite::Dpp, opts, |k, rng| {
        let n = size(rng, opts.max_n);
        let cloud = planar_cloud(rng, n, k % 2 == 0, false);
        Ok(verdict(verify_dpp(&cloud, opts.max_n)?, &cloud))
    })
}

/// Distinct abscissas drawn from `-range..=range`.
fn distinct_abscissas(rng: &mut ChaCha8Rng, n: usize, range: i64) -> Vec<i64> {
    let mut pool: Vec<i64> = (-range..=range).collect();
    let n = n.min(pool.len());
    for i in 0..n {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(n);
    pool
}

/// The inf-sup identity needs distinct abscissas, so lattice cases draw
/// distinct integer abscissas (lifted collinearities still occur) and
/// uniform cases are distinct almost surely.
fn semidpp_suite(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    run_cases(Suite::SemiDpp, opts, |k, rng| {
        let n = size(rng, opts.max_n);
        let cloud = if k % 2 == 0 {
            let rows: Vec<Vec<f64>> = distinct_abscissas(rng, n, 30)
                .into_iter()
                .map(|x| vec![x as f64, rng.random_range(1..=8) as f64])
                .collect();
            PointCloud::from_rows(2, rows)?
        } else {
            planar_cloud(rng, n, false, true)
        };
        Ok(verdict(verify_semidpp(&cloud, opts.max_n)?, &cloud))
    })
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.random_range(-5..=5), rng.random_range(1..=4))
}

fn affine_suite(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    run_cases(Suite::Affine, opts, |k, rng| {
        let n = size(rng, opts.max_n);
        let cloud = planar_cloud(rng, n, k % 2 == 0, false).to_rational();
        let map = loop {
            let matrix: Vec<Rational> = (0..4).map(|_| small_rational(rng)).collect();
            let offset: Vec<Rational> = (0..2).map(|_| small_rational(rng)).collect();
            if let Ok(map) = AffineMap::new(2, matrix, offset) {
                break map;
            }
        };
        Ok(verdict(check_affine_invariance(&cloud, &map)?, &cloud))
    })
}

fn monotone_suite(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    run_cases(Suite::Monotone, opts, |k, rng| {
        let n = size(rng, opts.max_n);
        let cloud = planar_cloud(rng, n, k % 2 == 0, true);
        let subset: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        let queries: Vec<[f64; 2]> = (0..16)
            .map(|_| {
                let p = planar_cloud(rng, 1, k % 2 == 0, true);
                [p.point(0)[0] + 0.5 * rng.random::<f64>(), p.point(0)[1]]
            })
            .collect();
        let convex = verdict(convex::check_monotone(&cloud, &subset, &queries)?, &cloud);
        if convex.is_err() {
            return Ok(convex.map_err(|e| format!("convex: {e}")));
        }
        Ok(verdict(semiconvex::check_monotone(&cloud, &subset, &queries)?, &cloud).map_err(|e| format!("semiconvex: {e}")))
    })
}

/// Height of the truncation in the correspondence suite.
const TRUNCATION: i64 = 40;

fn correspondence_suite(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    run_cases(Suite::Correspondence, opts, |_, rng| {
        // Distinct abscissas i/2, heights strictly inside P below the truncation.
        let n = size(rng, opts.max_n);
        let rows: Vec<Vec<Rational>> = distinct_abscissas(rng, n, 12)
            .into_iter()
            .map(|i| {
                let x = ratio(i, 2);
                let y = ratio(i * i, 8) + ratio(rng.random_range(1..=64), 4);
                vec![x, y]
            })
            .collect();
        let cloud = PointCloud::from_rows(2, rows)?;
        Ok(verdict(correspondence_check(&cloud, &ratio(TRUNCATION, 1))?, &cloud))
    })
}

fn random_symmetric(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    if rng.random_bool(0.5) {
        // Mostly admissible: negative semidefinite plus a small perturbation.
        -(&g * g.transpose()) + DMatrix::from_fn(d, d, |_, _| 0.1 * rng.random_range(-1.0..1.0)).symmetric_part()
    } else {
        g.symmetric_part()
    }
}

fn f_of(p: &DVector<f64>, a: &DMatrix<f64>) -> Result<f64> {
    let row_major: Vec<f64> = a.transpose().iter().copied().collect();
    operator_f(p.as_slice(), &row_major)
}

/// `|p|² ‖A‖^{d-1}`, the size of the terms that make up `F(p, A)`.
fn f_scale(p: &DVector<f64>, a: &DMatrix<f64>) -> f64 {
    p.norm_squared() * a.norm().powi(p.len() as i32 - 1)
}

fn f_suite(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    run_cases(Suite::F, opts, |_, rng| {
        let d = rng.random_range(2..=3);
        let p = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
        let a = random_symmetric(rng, d);
        // Monotone: A ≤ A + C Cᵀ implies F(p, A) ≥ F(p, A + C Cᵀ).
        let c = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
        let b = &a + &c * c.transpose();
        let (fa, fb) = (f_of(&p, &a)?, f_of(&p, &b)?);
        let scale = f_scale(&p, &a).max(f_scale(&p, &b));
        if fa < fb - F_REL_TOL * scale {
            return Ok(Err(format!("monotonicity: F(p,A) = {fa} < F(p,B) = {fb}")));
        }
        // Covariance: F(Mᵀp, MᵀAM) = det(M)² F(p, A).
        let m = loop {
            let m = DMatrix::identity(d, d) + DMatrix::from_fn(d, d, |_, _| 0.5 * rng.random_range(-1.0..1.0));
            if f64::abs(m.determinant()) > 0.1 {
                break m;
            }
        };
        let (pm, am) = (m.transpose() * &p, m.transpose() * &a * &m);
        let det2 = m.determinant().powi(2);
        let (lhs, rhs) = (f_of(&pm, &am)?, det2 * fa);
        let scale = f_scale(&pm, &am).max(det2 * f_scale(&p, &a));
        if (lhs - rhs).abs() > F_REL_TOL * scale {
            return Ok(Err(format!("covariance: {lhs} vs {rhs} (scale {scale})")));
        }
        Ok(Ok(()))
    })
}

fn barrier_suite(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let check = barrier_check(BARRIER_GRID, 0.9, 0.05)?;
    let failure = (check.min_f < BARRIER_FLOOR)
        .then(|| format!("min F = {} at {:?} over {} samples", check.min_f, check.argmin, check.samples));
    let _ = opts;
    Ok(SuiteOutcome { suite: Suite::Barrier, cases: check.samples, passed: if failure.is_some() { 0 } else { check.samples }, failure })
}

fn closed_forms_suite(opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let densities = [RadialDensity::uniform_ball(2), RadialDensity::gaussian(2)];
    run_cases(Suite::ClosedForms, opts, |k, rng| {
        let density = &densities[k % 2];
        let r = match density.support_radius() {
            Some(radius) => radius * rng.random::<f64>(),
            None => 5.0 * rng.random::<f64>(),
        };
        let (closed, quad) = (h_radial(r, density)?, h_radial_quadrature(r, density)?);
        if (closed - quad).abs() > CLOSED_FORM_TOL {
            return Ok(Err(format!("{} h({r}): closed {closed} vs quadrature {quad}", density.kind_name())));
        }
        let alpha = 4.0 / 3.0;
        let t = alpha * h_radial(0.0, density)? * rng.random::<f64>();
        let (closed, generic) = (n_of_t(t, density, alpha)?, n_of_t_generic(t, density, alpha)?);
        if (closed - generic).abs() > 1e-8 * closed.abs().max(1.0) {
            return Ok(Err(format!("{} N({t}): closed {closed} vs generic {generic}", density.kind_name())));
        }
        Ok(Ok(()))
    })
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteOutcome> {
    match suite {
        Suite::Dpp => dpp_suite(opts),
        Suite::SemiDpp => semidpp_suite(opts),
        Suite::Affine => affine_suite(opts),
        Suite::Monotone => monotone_suite(opts),
        Suite::Correspondence => correspondence_suite(opts),
        Suite::F => f_suite(opts),
        Suite::Barrier => barrier_suite(opts),
        Suite::ClosedForms => closed_forms_suite(opts),
    }
}
