//! Coordinate types and the orientation predicates that decide every
//! combinatorial question in the crate.
//!
//! Two scalar modes are provided. `f64` uses adaptive-precision predicates,
//! so every sign it returns is the sign of the exact determinant of the
//! (already rounded) input coordinates. `BigRational` evaluates the
//! determinant exactly and is the mode of choice when inputs come from
//! rational affine maps or huge sentinel coordinates.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational coordinate.
pub type Rational = BigRational;

/// Which arithmetic decides predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarMode {
    Floating,
    ExactRational,
}

/// Sign of a determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn reversed(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    fn of_f64(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn of<T: Signed + Zero>(v: &T) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// A coordinate field with exact-sign orientation predicates.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    const MODE: ScalarMode;

    /// Sign of `det[b - a, c - a]`; positive when `a, b, c` turn counterclockwise.
    fn orient2d(a: &[Self; 2], b: &[Self; 2], c: &[Self; 2]) -> Sign;

    /// Sign of `det[b - a, c - a, d - a]`.
    fn orient3d(a: &[Self; 3], b: &[Self; 3], c: &[Self; 3], d: &[Self; 3]) -> Sign;

    fn try_from_f64(v: f64) -> Option<Self>;

    fn as_f64(&self) -> f64;

    fn is_finite_value(&self) -> bool;

    /// The exact rational value of this coordinate.
    fn to_rational(&self) -> Rational;

    /// Total order used for sorting; coordinates are finite so this never
    /// sees NaN.
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn from_int(v: i64) -> Self;
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Floating;

    fn orient2d(a: &[f64; 2], b: &[f64; 2], c: &[f64; 2]) -> Sign {
        let v = robust::orient2d(
            robust::Coord { x: a[0], y: a[1] },
            robust::Coord { x: b[0], y: b[1] },
            robust::Coord { x: c[0], y: c[1] },
        );
        Sign::of_f64(v)
    }

    fn orient3d(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3], d: &[f64; 3]) -> Sign {
        let p = |v: &[f64; 3]| robust::Coord3D { x: v[0], y: v[1], z: v[2] };
        // robust reports positive when d lies below the plane of a, b, c
        // seen counterclockwise from above, i.e. the opposite determinant sign.
        Sign::of_f64(robust::orient3d(p(a), p(b), p(c), p(d))).reversed()
    }

    fn try_from_f64(v: f64) -> Option<f64> {
        v.is_finite().then_some(v)
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_rational(&self) -> Rational {
        <BigRational as FromPrimitive>::from_f64(*self).expect("finite coordinate")
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }

    fn half() -> f64 {
        0.5
    }

    fn from_int(v: i64) -> f64 {
        v as f64
    }
}

impl Scalar for BigRational {
    const MODE: ScalarMode = ScalarMode::ExactRational;

    fn orient2d(a: &[Self; 2], b: &[Self; 2], c: &[Self; 2]) -> Sign {
        let det = (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]);
        Sign::of(&det)
    }

    fn orient3d(a: &[Self; 3], b: &[Self; 3], c: &[Self; 3], d: &[Self; 3]) -> Sign {
        let u: Vec<Self> = (0..3).map(|k| &b[k] - &a[k]).collect();
        let v: Vec<Self> = (0..3).map(|k| &c[k] - &a[k]).collect();
        let w: Vec<Self> = (0..3).map(|k| &d[k] - &a[k]).collect();
        let det = &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
            + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0]);
        Sign::of(&det)
    }

    fn try_from_f64(v: f64) -> Option<Self> {
        <BigRational as FromPrimitive>::from_f64(v)
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Build the rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
