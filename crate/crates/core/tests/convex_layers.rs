//! Convex peeling against a brute-force oracle on integer clouds, where every
//! predicate is an exact `i64` determinant.

use peelshape::convex::{height, peel, verify_dpp};
use peelshape::geometry::{ratio, AffineMap, PointCloud, Rational};
use peelshape::convex::check_affine_invariance;
use proptest::prelude::*;

type P = [i64; 2];

fn orient(a: P, b: P, c: P) -> i64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// `p` is on the boundary of `conv(set)` iff some line through `p` and
/// another member leaves every member on one closed side (or `p` is alone).
fn on_boundary(set: &[P], p: P) -> bool {
    let others: Vec<P> = set.iter().copied().filter(|&q| q != p).collect();
    if others.is_empty() {
        return true;
    }
    others.iter().any(|&q| {
        let signs: Vec<i64> = set.iter().map(|&r| orient(p, q, r)).collect();
        signs.iter().all(|&s| s >= 0) || signs.iter().all(|&s| s <= 0)
    })
}

/// Layer of every point by repeatedly stripping the hull boundary.
fn oracle_layers(points: &[P]) -> Vec<usize> {
    let mut layer = vec![0; points.len()];
    let mut alive: Vec<usize> = (0..points.len()).collect();
    let mut n = 0;
    while !alive.is_empty() {
        n += 1;
        let set: Vec<P> = alive.iter().map(|&i| points[i]).collect();
        let (outer, inner): (Vec<usize>, Vec<usize>) = alive.iter().partition(|&&i| on_boundary(&set, points[i]));
        for i in outer {
            layer[i] = n;
        }
        alive = inner;
    }
    layer
}

/// `x` lies in the open interior of `conv(set)` iff it is not on the
/// boundary of `conv(set ∪ {x})`.
fn strictly_inside(set: &[P], x: P) -> bool {
    let mut with = set.to_vec();
    with.push(x);
    !on_boundary(&with, x)
}

fn oracle_height(points: &[P], layer: &[usize], x: P) -> usize {
    let top = layer.iter().copied().max().unwrap_or(0);
    (1..=top)
        .filter(|&n| {
            let set: Vec<P> = points.iter().zip(layer).filter(|(_, &l)| l >= n).map(|(p, _)| *p).collect();
            strictly_inside(&set, x)
        })
        .count()
}

fn cloud_of(points: &[P]) -> PointCloud {
    PointCloud::from_planar(points.iter().map(|p| [p[0] as f64, p[1] as f64])).unwrap()
}

fn lattice_cloud(max: usize, span: i64) -> impl Strategy<Value = Vec<P>> {
    prop::collection::vec([-span..=span, -span..=span], 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn layers_match_brute_force(points in lattice_cloud(40, 6)) {
        let layering = peel(&cloud_of(&points)).unwrap();
        prop_assert_eq!(layering.layer_of_point(), &oracle_layers(&points)[..]);
    }

    #[test]
    fn heights_match_brute_force(points in lattice_cloud(30, 5), queries in prop::collection::vec([-6i64..=6, -6i64..=6], 10)) {
        // Doubling the cloud puts the queries at half-integer positions too.
        let doubled: Vec<P> = points.iter().map(|p| [2 * p[0], 2 * p[1]]).collect();
        let layering = peel(&cloud_of(&doubled)).unwrap();
        let layer = oracle_layers(&doubled);
        for q in queries.iter().chain(&doubled) {
            let got = height(&layering, &[q[0] as f64, q[1] as f64]).unwrap();
            prop_assert_eq!(got, oracle_height(&doubled, &layer, *q), "query {:?}", q);
        }
    }

    #[test]
    fn partition_and_depth_bound(points in lattice_cloud(64, 20)) {
        let layering = peel(&cloud_of(&points)).unwrap();
        prop_assert_eq!(layering.layer_counts().iter().sum::<usize>(), points.len());
        prop_assert!(layering.num_layers() <= points.len().div_ceil(3));
        prop_assert!(layering.max_height() <= layering.num_layers());
        for (i, &l) in layering.layer_of_point().iter().enumerate() {
            prop_assert_eq!(layering.height_of_point(i), l - 1);
        }
    }

    #[test]
    fn adding_points_never_lowers_heights(points in lattice_cloud(48, 8), keep in prop::collection::vec(any::<bool>(), 48)) {
        let subset: Vec<P> = points.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| *p).collect();
        prop_assume!(!subset.is_empty());
        let (big, small) = (peel(&cloud_of(&points)).unwrap(), peel(&cloud_of(&subset)).unwrap());
        for x in -8..=8 {
            for y in -8..=8 {
                let q = [x as f64, y as f64];
                prop_assert!(height(&small, &q).unwrap() <= height(&big, &q).unwrap());
            }
        }
    }

    #[test]
    fn dpp_holds(points in lattice_cloud(32, 10)) {
        prop_assert!(verify_dpp(&cloud_of(&points), 64).unwrap().holds());
    }

    #[test]
    fn rational_affine_maps_keep_layer_indices(
        points in lattice_cloud(48, 10),
        m in [-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5],
        den in 1i64..=7,
        shift in [-9i64..=9, -9i64..=9],
    ) {
        prop_assume!(m[0] * m[3] - m[1] * m[2] != 0);
        let cloud: PointCloud<Rational> =
            PointCloud::from_planar(points.iter().map(|p| [ratio(p[0], 1), ratio(p[1], 1)])).unwrap();
        let map = AffineMap::new(
            2,
            m.iter().map(|&v| ratio(v, den)).collect(),
            shift.iter().map(|&v| ratio(v, 3)).collect(),
        )
        .unwrap();
        prop_assert!(check_affine_invariance(&cloud, &map).unwrap().holds());
    }
}

#[test]
fn square_with_center() {
    let pts = [[0, 0], [2, 0], [2, 2], [0, 2], [1, 1]];
    let layering = peel(&cloud_of(&pts)).unwrap();
    assert_eq!(layering.layer_of_point(), &[1, 1, 1, 1, 2]);
    assert_eq!(layering.layer_counts(), vec![4, 1]);
    assert_eq!(height(&layering, &[1.0, 1.0]).unwrap(), 1);
    assert_eq!(height(&layering, &[5.0, 5.0]).unwrap(), 0);
    assert_eq!(height(&layering, &[0.5, 0.5]).unwrap(), 1);
}

#[test]
fn triangle_has_one_layer() {
    let layering = peel(&cloud_of(&[[0, 0], [4, 0], [0, 4]])).unwrap();
    assert_eq!(layering.layer_counts(), vec![3]);
    assert_eq!(layering.max_height(), 1);
    assert_eq!(height(&layering, &[1.0, 1.0]).unwrap(), 1);
    assert_eq!(height(&layering, &[2.0, 0.0]).unwrap(), 0);
}

#[test]
fn rotation_by_a_right_angle() {
    let pts: Vec<P> = (0..30).map(|k| [(k * 7) % 11 - 5, (k * 5) % 13 - 6]).collect();
    let cloud: PointCloud<Rational> =
        PointCloud::from_planar(pts.iter().map(|p| [ratio(p[0], 1), ratio(p[1], 1)])).unwrap();
    let rot = AffineMap::new(2, vec![ratio(0, 1), ratio(-1, 1), ratio(1, 1), ratio(0, 1)], vec![ratio(0, 1); 2]).unwrap();
    assert!(check_affine_invariance(&cloud, &rot).unwrap().holds());
}
