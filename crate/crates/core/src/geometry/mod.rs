//! Points, robust orientation predicates, planar hulls and affine maps.

mod affine;
pub(crate) mod hull;
mod point;
mod predicates;
mod scalar;

pub use affine::{affine_apply, determinant, AffineMap};
pub use hull::{convex_hull, lower_hull, Hull, HullFacet};
pub use point::{Point, PointCloud};
pub use predicates::orientation;
pub use scalar::{ratio, Rational, Scalar, ScalarMode, Sign};
