//! Convex layers and the convex height function
//! `h_X = Σ_n 1_{int K_n(X)}`, `K_1 = conv X`, `K_{n+1} = conv(X ∩ int K_n)`.
//!
//! A cloud point on `∂K_n` has layer index `n` and height `n - 1`.
//! Each step removes every point on the hull boundary, including points in
//! the relative interior of an edge. A collinear remainder has empty
//! interior and forms the last layer.

use crate::error::{Error, Result};
use crate::geometry::hull::{strictly_inside, PlanarHull, Remainder};
use crate::geometry::{affine_apply, AffineMap, HullFacet, PointCloud, Scalar, Sign};
use crate::verdict::Verdict;

/// Default size bound for the brute-force DPP check.
pub const DPP_DEFAULT_BOUND: usize = 64;

#[derive(Debug, Clone)]
pub struct ConvexLayering<T = f64> {
    points: Vec<[T; 2]>,
    layer_of_point: Vec<usize>,
    layers: Vec<Vec<usize>>,
    hulls: Vec<PlanarHull>,
    complete: bool,
}

/// Peel a planar cloud to exhaustion.
pub fn peel<T: Scalar>(cloud: &PointCloud<T>) -> Result<ConvexLayering<T>> {
    peel_truncated(cloud, usize::MAX)
}

/// Peel at most `max_layers` layers. Points not reached keep layer index 0.
pub fn peel_truncated<T: Scalar>(cloud: &PointCloud<T>, max_layers: usize) -> Result<ConvexLayering<T>> {
    let points = cloud.to_planar()?;
    let mut layer_of_point = vec![0; points.len()];
    let mut layers = Vec::new();
    let mut hulls = Vec::new();
    let mut remaining = Remainder::new(&points);
    while layers.len() < max_layers {
        let Some((hull, layer)) = remaining.peel(false) else { break };
        for &i in &layer {
            layer_of_point[i] = layers.len() + 1;
        }
        layers.push(layer);
        hulls.push(hull);
    }
    Ok(ConvexLayering { points, layer_of_point, layers, hulls, complete: remaining.is_empty() })
}

impl<T: Scalar> ConvexLayering<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// False when produced by [`peel_truncated`] with points left over.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn points(&self) -> &[[T; 2]] {
        &self.points
    }

    /// Layer index (1-based) of every point.
    pub fn layer_of_point(&self) -> &[usize] {
        &self.layer_of_point
    }

    pub fn layer_of(&self, i: usize) -> usize {
        self.layer_of_point[i]
    }

    /// `h_X` at a cloud point: one less than its layer index.
    pub fn height_of_point(&self, i: usize) -> usize {
        self.layer_of_point[i].saturating_sub(1)
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Point indices of layer `n` (1-based), ascending.
    pub fn layer(&self, n: usize) -> &[usize] {
        &self.layers[n - 1]
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Counterclockwise hull vertices of layer `n`; fewer than three means
    /// the layer has empty interior.
    pub fn hull_vertices(&self, n: usize) -> &[usize] {
        &self.hulls[n - 1].ccw
    }

    pub fn facets(&self, n: usize) -> Vec<HullFacet<T>> {
        self.hulls[n - 1].facets(&self.points)
    }

    /// Largest layer index.
    pub fn max_depth(&self) -> usize {
        self.layers.len()
    }

    /// `max h_X`: the number of layers with nonempty interior.
    pub fn max_height(&self) -> usize {
        self.hulls.iter().take_while(|h| !h.is_degenerate()).count()
    }

    /// `N(i)`: number of points on layer `i`, in order.
    pub fn layer_counts(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    fn inside_layer(&self, n: usize, x: &[T; 2]) -> bool {
        strictly_inside(&self.points, &self.hulls[n - 1].ccw, x)
    }

    /// `h_X(x) = #{n : x ∈ int K_n}`.
    pub fn height(&self, x: &[T]) -> Result<usize> {
        let q = match x {
            [a, b] => [a.clone(), b.clone()],
            _ => return Err(Error::DimensionMismatch { expected: 2, got: x.len() }),
        };
        Ok(self.height_planar(&q))
    }

    pub(crate) fn height_planar(&self, q: &[T; 2]) -> usize {
        // Interiors are nested, so membership is monotone in n.
        let (mut lo, mut hi) = (0, self.layers.len());
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            if self.inside_layer(mid, q) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }
}

/// Free-function form of [`ConvexLayering::height`].
pub fn height<T: Scalar>(layering: &ConvexLayering<T>, x: &[T]) -> Result<usize> {
    layering.height(x)
}

/// Check the dynamic programming principle
/// `h(x) = inf_{p ≠ 0} sup_{y ∈ X, p·(y-x) > 0} (1 + h(y))` at every cloud point.
///
/// The value only changes at directions perpendicular to some `y - x`, and
/// at those directions the open half-space holds a subset of the points of
/// the neighbouring arcs, so the infimum is attained on the perpendiculars.
/// For `p = ±(z - x)^⊥` the sign of `p·(y - x)` is `±orient(x, z, y)`.
pub fn verify_dpp<T: Scalar>(cloud: &PointCloud<T>, bound: usize) -> Result<Verdict> {
    if cloud.len() > bound {
        return Err(Error::TooLarge { got: cloud.len(), bound });
    }
    let layering = peel(cloud)?;
    let pts = layering.points();
    let h: Vec<usize> = (0..pts.len()).map(|i| layering.height_of_point(i)).collect();
    for (i, x) in pts.iter().enumerate() {
        let mut best: Option<usize> = None;
        for z in pts.iter().filter(|z| *z != x) {
            for side in [Sign::Positive, Sign::Negative] {
                let value = pts
                    .iter()
                    .zip(&h)
                    .filter(|(y, _)| T::orient2d(x, z, y) == side)
                    .map(|(_, &hy)| 1 + hy)
                    .max()
                    .unwrap_or(0);
                best = Some(best.map_or(value, |b| b.min(value)));
            }
        }
        let value = best.unwrap_or(0);
        if value != h[i] {
            return Ok(Verdict::fail(i, h[i] as i64, value as i64, "inf-sup over half-spaces"));
        }
    }
    Ok(Verdict::Holds)
}

/// Layer indices of `cloud` and of its image under `map` agree point by point.
pub fn check_affine_invariance<T: Scalar>(cloud: &PointCloud<T>, map: &AffineMap<T>) -> Result<Verdict> {
    let before = peel(cloud)?;
    let after = peel(&affine_apply(map, cloud)?)?;
    for (i, (a, b)) in before.layer_of_point().iter().zip(after.layer_of_point()).enumerate() {
        if a != b {
            return Ok(Verdict::fail(i, *a as i64, *b as i64, "layer index changed under affine map"));
        }
    }
    Ok(Verdict::Holds)
}

/// `h_X ≤ h_Y` for `X ⊆ Y`, checked at the points of `Y` and at `queries`.
/// `subset` lists the indices of `Y` forming `X`.
pub fn check_monotone<T: Scalar>(
    superset: &PointCloud<T>,
    subset: &[usize],
    queries: &[[T; 2]],
) -> Result<Verdict> {
    let big = peel(superset)?;
    let small = peel(&superset.select(subset))?;
    let pts = big.points().to_vec();
    for (k, q) in pts.iter().chain(queries).enumerate() {
        let (hs, hb) = (small.height_planar(q), big.height_planar(q));
        if hs > hb {
            return Ok(Verdict::fail(k, hb as i64, hs as i64, "subset height exceeds superset height"));
        }
    }
    Ok(Verdict::Holds)
}
