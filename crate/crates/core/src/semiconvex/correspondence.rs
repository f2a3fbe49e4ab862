//! Executable check of `π(K_n(X)) = S_n(π(X))` for a finite `X ⊂ P`.
//!
//! The identity needs `X` to reach arbitrarily high in `P`, which makes
//! every convex layer unbounded in the `e_2` direction. A finite stand-in
//! stacks rows of sentinels far above `X`, one sentinel per point of `X`
//! at that point's abscissa. The top remaining row is the upper edge of
//! every layer, the columns at the extreme abscissas are its vertical
//! sides, and the rows sit high enough that the edges joining the lowest
//! row to `X` are steeper than any chord of `X`. Convex layers of the
//! augmented set then meet `X` exactly in the semiconvex layers of `π(X)`
//! as long as a row is left, which the check also confirms.

use num_traits::{One, Signed, Zero};

use super::{project, semiconvex_peel};
use crate::convex;
use crate::error::{Error, Result};
use crate::geometry::{PointCloud, Rational, Scalar};
use crate::verdict::Verdict;

/// Number of sentinel rows used by [`correspondence_check`]: one more
/// than the largest possible number of layers of `n` points with
/// distinct abscissas.
pub fn default_rows(n: usize) -> usize {
    n.div_ceil(2) + 1
}

/// Compare convex layers of `X ∪ sentinels` with semiconvex layers of
/// `π(X)` point by point. `X` must lie in `P ∩ {x_2 < truncation}`.
pub fn correspondence_check<T: Scalar>(cloud: &PointCloud<T>, truncation: &T) -> Result<Verdict> {
    correspondence_check_with_rows(cloud, truncation, default_rows(cloud.len()))
}

pub fn correspondence_check_with_rows<T: Scalar>(
    cloud: &PointCloud<T>,
    truncation: &T,
    rows: usize,
) -> Result<Verdict> {
    let pts: Vec<[Rational; 2]> =
        cloud.to_planar()?.iter().map(|p| [p[0].to_rational(), p[1].to_rational()]).collect();
    let top = truncation.to_rational();
    let half = Rational::half();
    for (i, p) in pts.iter().enumerate() {
        if p[1] <= &half * &p[0] * &p[0] {
            return Err(Error::OutsideParabola(i));
        }
        if p[1] >= top {
            return Err(Error::OutOfRange(format!("point {i} is not below the truncation height")));
        }
    }
    if pts.is_empty() {
        return Ok(Verdict::Holds);
    }
    let mut by_x: Vec<usize> = (0..pts.len()).collect();
    by_x.sort_by(|&a, &b| pts[a][0].cmp(&pts[b][0]));
    let mut gap: Option<Rational> = None;
    for w in by_x.windows(2) {
        let d = &pts[w[1]][0] - &pts[w[0]][0];
        if d.is_zero() {
            return Err(Error::SharedAbscissa(w[0].min(w[1]), w[0].max(w[1])));
        }
        gap = Some(gap.map_or(d.clone(), |g| g.min(d)));
    }
    let gap = gap.unwrap_or_else(Rational::one);
    let width = pts.iter().map(|p| p[0].abs()).max().expect("nonempty") + Rational::one();

    // Row spacing factor 2^M with 2^M ≥ 8W/gap + 8.
    let need = Rational::from_int(8) * &width / &gap + Rational::from_int(8);
    let mut factor = Rational::one();
    while factor < need {
        factor = factor * Rational::from_int(2);
    }

    let n = pts.len();
    let mut augmented = PointCloud::from_planar(pts.iter().cloned())?;
    let mut height = top.clone();
    for _ in 0..rows {
        height = height * &factor;
        for p in &pts {
            augmented.push(&[p[0].clone(), height.clone()])?;
        }
    }

    let convex = convex::peel(&augmented)?;
    let projected = PointCloud::from_planar(pts.iter().map(project))?;
    let semi = semiconvex_peel(&projected)?;

    for i in 0..n {
        let (c, s) = (convex.layer_of(i), semi.layer_of(i));
        if c != s {
            return Ok(Verdict::fail(i, s as i64, c as i64, "convex layer of lifted point differs from semiconvex layer"));
        }
    }
    for (k, layer) in convex.layers().iter().enumerate() {
        let has_cloud = layer.iter().any(|&i| i < n);
        let has_sentinel = layer.iter().any(|&i| i >= n);
        if has_cloud && !has_sentinel {
            let i = *layer.iter().find(|&&i| i < n).expect("cloud point");
            return Ok(Verdict::fail(i, k as i64 + 1, k as i64 + 1, "sentinel rows exhausted before the cloud"));
        }
    }
    Ok(Verdict::Holds)
}
