//! The limit equation: the operator `F`, exact radial solutions, layer
//! count profiles, the barrier and simple test functions.

pub mod barrier;
pub mod density;
pub mod operator;
pub mod quadrature;
pub mod solution;
pub mod test_function;

pub use barrier::{barrier_check, barrier_psi, finite_difference, BarrierCheck};
pub use density::{unit_ball_volume, AffineFrame, RadialDensity, RadialProfile};
pub use operator::{admissible, operator_f};
pub use quadrature::integrate;
pub use solution::{
    h_affine, h_radial, h_radial_quadrature, n_of_t, n_of_t_generic, radius_at_height, shell_mass, LimitSolution,
};
pub use test_function::{phi, Sigma, SimpleTestFunction, TestEval, TestKind};
