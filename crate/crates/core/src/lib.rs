//! Convex hull peeling, semiconvex (parabolic) peeling, and the continuum
//! limit of the peeling height function.

pub mod convex;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod pde;
pub mod sampling;
pub mod semiconvex;
pub mod stats;
pub mod suites;
pub mod trial;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::{Counterexample, Verdict};
