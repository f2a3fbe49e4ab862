//! Semiconvex peeling of finite sets in the half-space `H = {x_2 > 0}`.
//!
//! Supporting half-spaces are replaced by open downward parabolas
//! `y - P`, `P = {x_2 > x_1²/2}`. Under the lift `x ↦ (x_1, x_2 + x_1²/2)`
//! a parabola with apex `y` becomes the open region below the line of
//! slope `y_1` and intercept `y_2 - y_1²/2`, and the apex lies in `H`
//! exactly when `b + a²/2 > 0`. A line through a lifted point of `H`
//! always passes that test, so the semiconvex body of `X` lifts to the
//! convex hull of the lifted cloud extended by the upward ray `e_2`. Its
//! boundary points are those on the lower chain (including edge-interior
//! points) and those at the smallest or largest abscissa.

mod cell;
mod correspondence;

pub use cell::{
    beta_sensitivity, cell_estimate, cell_run, extrapolate, AlphaEstimate, BetaSensitivity, CellConfig,
    CellRun, CellTrial, Extrapolation, Route,
};
pub use correspondence::{correspondence_check, correspondence_check_with_rows, default_rows};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::hull::{PlanarHull, Remainder};
use crate::geometry::{PointCloud, Scalar, Sign};
use crate::verdict::Verdict;

/// `π^{-1}(x) = (x_1, x_2 + x_1²/2)`, mapping `H` onto `P`.
pub fn lift<T: Scalar>(x: &[T; 2]) -> [T; 2] {
    let a = x[0].clone();
    [a.clone(), x[1].clone() + T::half() * a.clone() * a]
}

/// `π(x) = (x_1, x_2 - x_1²/2)`, mapping `P` onto `H`.
pub fn project<T: Scalar>(x: &[T; 2]) -> [T; 2] {
    let a = x[0].clone();
    [a.clone(), x[1].clone() - T::half() * a.clone() * a]
}

/// Open downward parabola `apex - P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parabola<T = f64> {
    apex: [T; 2],
}

impl<T: Scalar> Parabola<T> {
    pub fn new(apex: [T; 2]) -> Result<Self> {
        if apex[1] <= T::zero() {
            return Err(Error::OutsideHalfSpace(0));
        }
        Ok(Parabola { apex })
    }

    /// Parabola with apex abscissa `a` whose boundary passes through `x`.
    pub fn through(x: &[T; 2], a: T) -> Result<Self> {
        let dx = a.clone() - x[0].clone();
        Self::new([a, x[1].clone() + T::half() * dx.clone() * dx])
    }

    pub fn apex(&self) -> &[T; 2] {
        &self.apex
    }

    pub fn contains(&self, x: &[T; 2]) -> bool {
        let dx = x[0].clone() - self.apex[0].clone();
        x[1] < self.apex[1].clone() - T::half() * dx.clone() * dx
    }
}

/// `Q_r = {|x_1| < r, 0 < x_2 < r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cylinder {
    r: f64,
}

impl Cylinder {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::OutOfRange(format!("cylinder size must be positive, got {r}")));
        }
        Ok(Cylinder { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn contains(&self, x: &[f64; 2]) -> bool {
        x[0].abs() < self.r && x[1] > 0.0 && x[1] < self.r
    }

    /// Whether `x` lies on the top face `∂⁺Q_r`.
    pub fn on_top(&self, x: &[f64; 2]) -> bool {
        x[0].abs() < self.r && x[1] == self.r
    }
}

#[derive(Debug, Clone)]
pub struct SemiconvexLayering<T = f64> {
    points: Vec<[T; 2]>,
    lifted: Vec<[T; 2]>,
    layer_of_point: Vec<usize>,
    layers: Vec<Vec<usize>>,
    hulls: Vec<PlanarHull>,
    complete: bool,
}

fn planar_in_h<T: Scalar>(cloud: &PointCloud<T>) -> Result<Vec<[T; 2]>> {
    let pts = cloud.to_planar()?;
    if let Some(i) = pts.iter().position(|p| p[1] <= T::zero()) {
        return Err(Error::OutsideHalfSpace(i));
    }
    Ok(pts)
}

/// Points of `X` on the boundary of its semiconvex hull.
pub fn semiconvex_first_layer<T: Scalar>(cloud: &PointCloud<T>) -> Result<Vec<usize>> {
    let pts = planar_in_h(cloud)?;
    let lifted: Vec<[T; 2]> = pts.iter().map(lift).collect();
    Ok(Remainder::new(&lifted).peel(true).map(|(_, l)| l).unwrap_or_default())
}

/// Peel `X ⊂ H` to exhaustion: `S_{n+1} = semi(X ∩ int S_n)`.
pub fn semiconvex_peel<T: Scalar>(cloud: &PointCloud<T>) -> Result<SemiconvexLayering<T>> {
    semiconvex_peel_truncated(cloud, usize::MAX)
}

/// Peel at most `max_layers` layers; unreached points keep layer index 0.
pub fn semiconvex_peel_truncated<T: Scalar>(
    cloud: &PointCloud<T>,
    max_layers: usize,
) -> Result<SemiconvexLayering<T>> {
    let points = planar_in_h(cloud)?;
    let lifted: Vec<[T; 2]> = points.iter().map(lift).collect();
    let mut layer_of_point = vec![0; points.len()];
    let mut layers = Vec::new();
    let mut hulls = Vec::new();
    let mut remaining = Remainder::new(&lifted);
    while layers.len() < max_layers {
        let Some((hull, layer)) = remaining.peel(true) else { break };
        for &i in &layer {
            layer_of_point[i] = layers.len() + 1;
        }
        layers.push(layer);
        hulls.push(hull);
    }
    let complete = remaining.is_empty();
    Ok(SemiconvexLayering { points, lifted, layer_of_point, layers, hulls, complete })
}

/// `s_X(q)` without building the full layering: peeling stops as soon as
/// `q` leaves the current body. Returns the height and the number of
/// layers peeled.
pub fn s_height_at<T: Scalar>(cloud: &PointCloud<T>, q: &[T; 2]) -> Result<usize> {
    let pts = planar_in_h(cloud)?;
    let lifted: Vec<[T; 2]> = pts.iter().map(lift).collect();
    let lq = lift(q);
    let mut remaining = Remainder::new(&lifted);
    let mut count = 0;
    while let Some((hull, _)) = remaining.peel(true) {
        if !hull.strictly_above_lower(&lifted, &lq) {
            break;
        }
        count += 1;
    }
    Ok(count)
}

impl<T: Scalar> SemiconvexLayering<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn points(&self) -> &[[T; 2]] {
        &self.points
    }

    pub fn lifted(&self) -> &[[T; 2]] {
        &self.lifted
    }

    pub fn layer_of_point(&self) -> &[usize] {
        &self.layer_of_point
    }

    pub fn layer_of(&self, i: usize) -> usize {
        self.layer_of_point[i]
    }

    pub fn height_of_point(&self, i: usize) -> usize {
        self.layer_of_point[i].saturating_sub(1)
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, n: usize) -> &[usize] {
        &self.layers[n - 1]
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer_counts(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// `s_X(x) = #{n : x ∈ int S_n}`.
    pub fn s_height(&self, x: &[T]) -> Result<usize> {
        let q = match x {
            [a, b] => [a.clone(), b.clone()],
            _ => return Err(Error::DimensionMismatch { expected: 2, got: x.len() }),
        };
        let lq = lift(&q);
        let (mut lo, mut hi) = (0, self.layers.len());
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            if self.hulls[mid - 1].strictly_above_lower(&self.lifted, &lq) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok(lo)
    }
}

/// Free-function form of [`SemiconvexLayering::s_height`].
pub fn s_height<T: Scalar>(layering: &SemiconvexLayering<T>, x: &[T]) -> Result<usize> {
    layering.s_height(x)
}

/// Check `s(x) = inf_{y ∈ x + ∂P} sup_{z ∈ X ∩ (y - P)} (1 + s(z))` at every
/// point of `X`, with the empty supremum read as 0.
///
/// Lifted, the parabolas through `x` are the non-vertical lines through
/// `ℓ(x)` and `y - P` is the open region below the line. The region only
/// changes at lines through a second lifted point, where it is contained
/// in both neighbouring regions, so those lines plus the two steep limits
/// exhaust the infimum.
///
/// The identity needs distinct abscissas: a point straight above another
/// point of `X` has that point inside every parabola through it, while the
/// column they share can still lie on the boundary of a layer. Such clouds
/// are rejected with [`Error::SharedAbscissa`].
pub fn verify_semidpp<T: Scalar>(cloud: &PointCloud<T>, bound: usize) -> Result<Verdict> {
    if cloud.len() > bound {
        return Err(Error::TooLarge { got: cloud.len(), bound });
    }
    let layering = semiconvex_peel(cloud)?;
    let lifted = layering.lifted();
    let mut by_x: Vec<usize> = (0..lifted.len()).collect();
    by_x.sort_by(|&a, &b| lifted[a][0].total_cmp(&lifted[b][0]));
    if let Some(w) = by_x.windows(2).find(|w| lifted[w[0]][0] == lifted[w[1]][0]) {
        return Err(Error::SharedAbscissa(w[0].min(w[1]), w[0].max(w[1])));
    }
    let s: Vec<usize> = (0..lifted.len()).map(|i| layering.height_of_point(i)).collect();
    let value_of = |members: &mut dyn Iterator<Item = usize>| members.map(|k| 1 + s[k]).max().unwrap_or(0);
    for (i, lx) in lifted.iter().enumerate() {
        // Steep limits: slope → +∞ keeps the right side, slope → −∞ the left.
        let mut best = value_of(&mut (0..lifted.len()).filter(|&k| lifted[k][0] > lx[0]));
        best = best.min(value_of(&mut (0..lifted.len()).filter(|&k| lifted[k][0] < lx[0])));
        for lz in lifted.iter().filter(|lz| lz[0] != lx[0]) {
            let (left, right) = if lz[0] < lx[0] { (lz, lx) } else { (lx, lz) };
            let below = (0..lifted.len()).filter(|&k| T::orient2d(left, right, &lifted[k]) == Sign::Negative);
            best = best.min(value_of(&mut below.into_iter()));
        }
        if best != s[i] {
            return Ok(Verdict::fail(i, s[i] as i64, best as i64, "inf-sup over parabolas"));
        }
    }
    Ok(Verdict::Holds)
}

/// `s_X ≤ s_Y` for `X ⊆ Y`, at the points of `Y` and at `queries`.
pub fn check_monotone<T: Scalar>(
    superset: &PointCloud<T>,
    subset: &[usize],
    queries: &[[T; 2]],
) -> Result<Verdict> {
    let big = semiconvex_peel(superset)?;
    let small = semiconvex_peel(&superset.select(subset))?;
    for (k, q) in big.points().iter().chain(queries).enumerate() {
        let (hs, hb) = (small.s_height(q)?, big.s_height(q)?);
        if hs > hb {
            return Ok(Verdict::fail(k, hb as i64, hs as i64, "subset height exceeds superset height"));
        }
    }
    Ok(Verdict::Holds)
}

/// Copies of `X ∩ ((-L/2, L/2) × (0, ∞))` translated by `jL e_1`, `|j| ≤ copies`.
pub fn periodize<T: Scalar>(cloud: &PointCloud<T>, period: T, copies: usize) -> Result<PointCloud<T>> {
    if period <= T::zero() {
        return Err(Error::OutOfRange("period must be positive".into()));
    }
    let pts = planar_in_h(cloud)?;
    let half = T::half() * period.clone();
    let base: Vec<&[T; 2]> = pts.iter().filter(|p| -half.clone() < p[0] && p[0] < half).collect();
    let mut out = PointCloud::empty(2);
    let copies = copies as i64;
    for j in -copies..=copies {
        let shift = period.clone() * T::from_int(j);
        for p in &base {
            out.push(&[p[0].clone() + shift.clone(), p[1].clone()])?;
        }
    }
    Ok(out)
}
