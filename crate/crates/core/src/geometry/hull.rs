//! Planar convex hulls by Andrew's monotone chain.
//!
//! Hull chains keep strict turns only, so hull vertices are extreme points.
//! The peeling code also needs points in the relative interior of hull
//! edges; those come from a second chain that keeps collinear points.

use serde::{Deserialize, Serialize};

use super::point::PointCloud;
use super::scalar::{Scalar, Sign};
use crate::error::{Error, Result};

/// One edge of a planar hull with its supporting line `{x : x·ν = c}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullFacet<T = f64> {
    pub vertex_indices: Vec<usize>,
    pub outward_normal: Vec<T>,
    pub offset: T,
}

impl<T: Scalar> HullFacet<T> {
    fn from_edge(pts: &[[T; 2]], a: usize, b: usize) -> Self {
        let (pa, pb) = (&pts[a], &pts[b]);
        let nx = pb[1].clone() - pa[1].clone();
        let ny = pa[0].clone() - pb[0].clone();
        let offset = nx.clone() * pa[0].clone() + ny.clone() * pa[1].clone();
        HullFacet { vertex_indices: vec![a, b], outward_normal: vec![nx, ny], offset }
    }

    /// `x·ν - c`; nonpositive for every point of the hull.
    pub fn slack(&self, x: &[T]) -> T {
        self.outward_normal
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (n, v)| acc + n.clone() * v.clone())
            - self.offset.clone()
    }
}

/// Hull vertices (counterclockwise) and facets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hull<T = f64> {
    pub vertices: Vec<usize>,
    pub facets: Vec<HullFacet<T>>,
}

pub(crate) fn lex_cmp<T: Scalar>(a: &[T; 2], b: &[T; 2]) -> std::cmp::Ordering {
    a[0].total_cmp(&b[0]).then_with(|| a[1].total_cmp(&b[1]))
}

/// Indices `0..n` sorted lexicographically by `(x, y)`.
pub(crate) fn lex_order<T: Scalar>(pts: &[[T; 2]]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| lex_cmp(&pts[i], &pts[j]));
    order
}

fn half_chain<T: Scalar>(pts: &[[T; 2]], order: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut chain: Vec<usize> = Vec::new();
    for i in order {
        while chain.len() >= 2 {
            let a = &pts[chain[chain.len() - 2]];
            let b = &pts[chain[chain.len() - 1]];
            if T::orient2d(a, b, &pts[i]) == Sign::Positive {
                break;
            }
            chain.pop();
        }
        chain.push(i);
    }
    chain
}

/// Runs of equal points in a sorted slice. Chains are built over one
/// representative per run so that repeated points cannot shield each other.
struct Runs {
    starts: Vec<usize>,
}

impl Runs {
    fn new<T: Scalar>(pts: &[[T; 2]]) -> Self {
        let mut starts = Vec::with_capacity(pts.len() + 1);
        starts.push(0);
        for k in 1..pts.len() {
            if pts[k - 1] != pts[k] {
                starts.push(k);
            }
        }
        starts.push(pts.len());
        Runs { starts }
    }

    fn len(&self) -> usize {
        self.starts.len() - 1
    }

    fn rep(&self, k: usize) -> usize {
        self.starts[k]
    }

    fn retained_chain<T: Scalar>(&self, pts: &[[T; 2]], runs: impl Iterator<Item = usize>) -> Vec<usize> {
        let mut chain: Vec<usize> = Vec::new();
        for k in runs {
            let p = &pts[self.rep(k)];
            while chain.len() >= 2 {
                let a = &pts[self.rep(chain[chain.len() - 2])];
                let b = &pts[self.rep(chain[chain.len() - 1])];
                if T::orient2d(a, b, p) != Sign::Negative {
                    break;
                }
                chain.pop();
            }
            chain.push(k);
        }
        chain
    }

    /// All positions covered by the listed runs, ascending.
    fn expand(&self, mut runs: Vec<usize>) -> Vec<usize> {
        runs.sort_unstable();
        runs.dedup();
        runs.iter().flat_map(|&k| self.starts[k]..self.starts[k + 1]).collect()
    }
}

/// Hull of a lexicographically sorted index set, kept in the form the
/// peeling loops need.
#[derive(Debug, Clone)]
pub(crate) struct PlanarHull {
    /// Lower chain, left to right.
    pub lower: Vec<usize>,
    /// Upper chain, left to right.
    pub upper: Vec<usize>,
    /// Counterclockwise vertex cycle.
    pub ccw: Vec<usize>,
    first: usize,
    last: usize,
}

impl PlanarHull {
    /// `order` must be nonempty and sorted by [`lex_cmp`].
    pub fn build<T: Scalar>(pts: &[[T; 2]], order: &[usize]) -> Self {
        debug_assert!(!order.is_empty());
        let lower = half_chain(pts, order.iter().copied());
        let upper = half_chain(pts, order.iter().rev().copied());
        Self::from_chains(lower, upper, order[0], order[order.len() - 1])
    }

    /// Hull of a nonempty slice sorted by [`lex_cmp`], with the positions
    /// of every point on its boundary. Indices refer to the slice.
    pub fn build_with_boundary<T: Scalar>(pts: &[[T; 2]]) -> (Self, Vec<usize>) {
        debug_assert!(!pts.is_empty());
        let runs = Runs::new(pts);
        let lower_all = runs.retained_chain(pts, 0..runs.len());
        let upper_all = runs.retained_chain(pts, (0..runs.len()).rev());
        let lower = half_chain(pts, lower_all.iter().map(|&k| runs.rep(k)));
        let upper = half_chain(pts, upper_all.iter().map(|&k| runs.rep(k)));
        let mut ids = lower_all;
        ids.extend(upper_all);
        (Self::from_chains(lower, upper, 0, pts.len() - 1), runs.expand(ids))
    }

    /// Like [`Self::build_with_boundary`], for the boundary of the hull
    /// extended upward by `e_2`: the lower chain, edge-interior points
    /// included, and every point at the smallest or largest abscissa.
    pub fn build_with_lower_boundary<T: Scalar>(pts: &[[T; 2]]) -> (Self, Vec<usize>) {
        debug_assert!(!pts.is_empty());
        let runs = Runs::new(pts);
        let count = runs.len();
        let lower_all = runs.retained_chain(pts, 0..count);
        let lower = half_chain(pts, lower_all.iter().map(|&k| runs.rep(k)));
        let upper = half_chain(pts, (0..pts.len()).rev());
        let (xmin, xmax) = (&pts[0][0], &pts[pts.len() - 1][0]);
        let mut ids = lower_all;
        ids.extend((0..count).take_while(|&k| &pts[runs.rep(k)][0] == xmin));
        ids.extend((0..count).rev().take_while(|&k| &pts[runs.rep(k)][0] == xmax));
        (Self::from_chains(lower, upper, 0, pts.len() - 1), runs.expand(ids))
    }

    /// Rewrite slice positions as indices through `ids`.
    pub fn remap(mut self, ids: &[usize]) -> Self {
        for v in self.lower.iter_mut().chain(&mut self.upper).chain(&mut self.ccw) {
            *v = ids[*v];
        }
        self.first = ids[self.first];
        self.last = ids[self.last];
        self
    }

    fn from_chains(lower: Vec<usize>, mut upper: Vec<usize>, first: usize, last: usize) -> Self {
        let mut ccw: Vec<usize> = lower[..lower.len() - 1].to_vec();
        ccw.extend_from_slice(&upper[..upper.len() - 1]);
        upper.reverse();
        if ccw.is_empty() {
            ccw.push(first);
        }
        PlanarHull { lower, upper, ccw, first, last }
    }

    /// True when the hull has empty interior (all points collinear).
    pub fn is_degenerate(&self) -> bool {
        self.ccw.len() < 3
    }

    #[cfg(test)]
    fn on_chain<T: Scalar>(pts: &[[T; 2]], chain: &[usize], p: &[T; 2]) -> bool {
        // Caller guarantees xmin < p.x < xmax, so the covering edge exists.
        let j = chain.partition_point(|&v| pts[v][0] <= p[0]);
        if j == 0 || j >= chain.len() {
            return false;
        }
        T::orient2d(&pts[chain[j - 1]], &pts[chain[j]], p) == Sign::Zero
    }

    #[cfg(test)]
    fn on_vertical_side<T: Scalar>(&self, pts: &[[T; 2]], p: &[T; 2]) -> bool {
        p[0] == pts[self.first][0] || p[0] == pts[self.last][0]
    }

    /// Whether a point of the hulled set lies on the hull boundary.
    #[cfg(test)]
    pub fn on_boundary<T: Scalar>(&self, pts: &[[T; 2]], p: &[T; 2]) -> bool {
        self.is_degenerate()
            || self.on_vertical_side(pts, p)
            || Self::on_chain(pts, &self.lower, p)
            || Self::on_chain(pts, &self.upper, p)
    }

    /// Whether a point of the hulled set lies on the boundary of the hull
    /// extended upward by the ray `e_2`: the lower chain or the two
    /// vertical sides.
    #[cfg(test)]
    pub fn on_lower_boundary<T: Scalar>(&self, pts: &[[T; 2]], p: &[T; 2]) -> bool {
        self.on_vertical_side(pts, p) || Self::on_chain(pts, &self.lower, p)
    }

    /// Whether `q` lies strictly inside the hull extended upward by `e_2`:
    /// strictly between the extreme abscissas and strictly above the lower chain.
    pub fn strictly_above_lower<T: Scalar>(&self, pts: &[[T; 2]], q: &[T; 2]) -> bool {
        if !(pts[self.first][0] < q[0] && q[0] < pts[self.last][0]) {
            return false;
        }
        let j = self.lower.partition_point(|&v| pts[v][0] <= q[0]);
        j > 0
            && j < self.lower.len()
            && T::orient2d(&pts[self.lower[j - 1]], &pts[self.lower[j]], q) == Sign::Positive
    }

    pub fn facets<T: Scalar>(&self, pts: &[[T; 2]]) -> Vec<HullFacet<T>> {
        if self.is_degenerate() {
            return Vec::new();
        }
        let n = self.ccw.len();
        (0..n).map(|k| HullFacet::from_edge(pts, self.ccw[k], self.ccw[(k + 1) % n])).collect()
    }

    /// Lower-chain edges that are not vertical.
    pub fn lower_facets<T: Scalar>(&self, pts: &[[T; 2]]) -> Vec<HullFacet<T>> {
        if self.is_degenerate() {
            return Vec::new();
        }
        self.lower
            .windows(2)
            .filter(|w| pts[w[0]][0] < pts[w[1]][0])
            .map(|w| HullFacet::from_edge(pts, w[0], w[1]))
            .collect()
    }

    /// Distinct extreme points (one or two) of a degenerate hull.
    pub fn extreme_points<T: Scalar>(&self, pts: &[[T; 2]]) -> Vec<usize> {
        if pts[self.first] == pts[self.last] {
            vec![self.first]
        } else {
            vec![self.first, self.last]
        }
    }
}

/// The not-yet-peeled points, kept sorted by [`lex_cmp`] in a compact
/// array so each peeling pass reads memory in order.
pub(crate) struct Remainder<T> {
    pts: Vec<[T; 2]>,
    ids: Vec<usize>,
}

impl<T: Scalar> Remainder<T> {
    pub fn new(points: &[[T; 2]]) -> Self {
        let ids = lex_order(points);
        Remainder { pts: ids.iter().map(|&i| points[i].clone()).collect(), ids }
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Remove the boundary of the current hull (of the hull extended by
    /// `e_2` when `upward`). Returns the hull in original indices and the
    /// removed indices, ascending.
    pub fn peel(&mut self, upward: bool) -> Option<(PlanarHull, Vec<usize>)> {
        if self.ids.is_empty() {
            return None;
        }
        let (hull, positions) = if upward {
            PlanarHull::build_with_lower_boundary(&self.pts)
        } else {
            PlanarHull::build_with_boundary(&self.pts)
        };
        let hull = hull.remap(&self.ids);
        let mut layer: Vec<usize> = positions.iter().map(|&k| self.ids[k]).collect();
        layer.sort_unstable();
        let mut next = positions.iter().peekable();
        let mut write = 0;
        for read in 0..self.ids.len() {
            if next.peek() == Some(&&read) {
                next.next();
                continue;
            }
            self.ids.swap(write, read);
            self.pts.swap(write, read);
            write += 1;
        }
        self.ids.truncate(write);
        self.pts.truncate(write);
        Some((hull, layer))
    }
}

/// Strict-interior test for a counterclockwise convex polygon.
pub(crate) fn strictly_inside<T: Scalar>(pts: &[[T; 2]], ccw: &[usize], q: &[T; 2]) -> bool {
    let n = ccw.len();
    n >= 3 && (0..n).all(|k| T::orient2d(&pts[ccw[k]], &pts[ccw[(k + 1) % n]], q) == Sign::Positive)
}

/// Convex hull of a planar cloud.
///
/// Vertices are the extreme points in counterclockwise order. A collinear
/// cloud yields its one or two extreme points and no facets.
pub fn convex_hull<T: Scalar>(cloud: &PointCloud<T>) -> Result<Hull<T>> {
    let pts = cloud.to_planar()?;
    if pts.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let hull = PlanarHull::build(&pts, &lex_order(&pts));
    if hull.is_degenerate() {
        return Ok(Hull { vertices: hull.extreme_points(&pts), facets: Vec::new() });
    }
    Ok(Hull { facets: hull.facets(&pts), vertices: hull.ccw })
}

/// Facets of the convex hull whose outward normal points strictly down,
/// with their incident vertices (left to right).
pub fn lower_hull<T: Scalar>(cloud: &PointCloud<T>) -> Result<Hull<T>> {
    let pts = cloud.to_planar()?;
    if pts.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let hull = PlanarHull::build(&pts, &lex_order(&pts));
    if hull.is_degenerate() {
        let ext = hull.extreme_points(&pts);
        let vertical = ext.len() == 2 && pts[ext[0]][0] == pts[ext[1]][0];
        let vertices = if vertical { vec![ext[0]] } else { ext };
        return Ok(Hull { vertices, facets: Vec::new() });
    }
    let facets = hull.lower_facets(&pts);
    let mut vertices: Vec<usize> = Vec::new();
    for f in &facets {
        for &v in &f.vertex_indices {
            if vertices.last() != Some(&v) {
                vertices.push(v);
            }
        }
    }
    Ok(Hull { vertices, facets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn cloud(pts: &[[f64; 2]]) -> PointCloud {
        PointCloud::from_planar(pts.iter().copied()).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn square_with_center() {
        let c = cloud(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]]);
        let h = convex_hull(&c).unwrap();
        assert_eq!(set(&h.vertices), set(&[0, 1, 2, 3]));
        assert_eq!(h.facets.len(), 4);
        for f in &h.facets {
            for p in c.iter() {
                assert!(f.slack(p) <= 0.0);
            }
        }
    }

    #[test]
    fn collinear_keeps_endpoints() {
        let h = convex_hull(&cloud(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])).unwrap();
        assert_eq!(set(&h.vertices), set(&[0, 2]));
        assert!(h.facets.is_empty());
        let h = convex_hull(&cloud(&[[1.0, 1.0], [1.0, 1.0]])).unwrap();
        assert_eq!(h.vertices.len(), 1);
    }

    #[test]
    fn lower_hull_examples() {
        let h = lower_hull(&cloud(&[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]])).unwrap();
        assert_eq!(h.vertices, vec![0, 2]);
        let h = lower_hull(&cloud(&[[0.0, 0.0], [1.0, -1.0], [2.0, 0.0]])).unwrap();
        assert_eq!(h.vertices, vec![0, 1, 2]);
        for f in &h.facets {
            assert!(f.outward_normal[1] < 0.0);
        }
    }

    #[test]
    fn edge_interior_points_are_boundary() {
        let pts = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        let order = lex_order(&pts);
        let h = PlanarHull::build(&pts, &order);
        let on: Vec<bool> = pts.iter().map(|p| h.on_boundary(&pts, p)).collect();
        assert_eq!(on, vec![true, true, true, true, true, true, false]);
        let low: Vec<bool> = pts.iter().map(|p| h.on_lower_boundary(&pts, p)).collect();
        assert_eq!(low, vec![true, true, true, true, true, true, false]);
        let sorted: Vec<[f64; 2]> = order.iter().map(|&i| pts[i]).collect();
        let back = |v: Vec<usize>| {
            let mut v: Vec<usize> = v.into_iter().map(|k| order[k]).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(back(PlanarHull::build_with_boundary(&sorted).1), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(back(PlanarHull::build_with_lower_boundary(&sorted).1), vec![0, 1, 2, 3, 4, 5]);
    }

    fn lcg(seed: &mut u64) -> u64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *seed >> 33
    }

    #[test]
    fn retained_chains_match_pointwise_classification() {
        let mut seed = 11u64;
        for _ in 0..300 {
            let n = 1 + (lcg(&mut seed) % 25) as usize;
            // Small integer grid forces collinear and repeated points.
            let pts: Vec<[f64; 2]> =
                (0..n).map(|_| [(lcg(&mut seed) % 5) as f64, (lcg(&mut seed) % 5) as f64]).collect();
            let mut pts = pts;
            pts.sort_by(lex_cmp);
            let (h, boundary) = PlanarHull::build_with_boundary(&pts);
            let expected: Vec<usize> = (0..n).filter(|&i| h.on_boundary(&pts, &pts[i])).collect();
            assert_eq!(boundary, expected, "{pts:?}");
            let (h, lower) = PlanarHull::build_with_lower_boundary(&pts);
            let expected: Vec<usize> = (0..n).filter(|&i| h.on_lower_boundary(&pts, &pts[i])).collect();
            assert_eq!(lower, expected, "{pts:?}");
        }
    }

    #[test]
    fn empty_cloud_is_an_error() {
        assert_eq!(convex_hull(&PointCloud::<f64>::empty(2)), Err(Error::EmptyCloud));
    }
}
