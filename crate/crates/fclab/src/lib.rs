//! Numerical laboratory for the holomorphic functional calculus of
//! sectorial operators at finite dimension.
//!
//! The crate evaluates the closed-form bounds for the regularized calculus
//! `f ↦ (f·e_ε)(A)`, realizes Riesz-Dunford contour quadrature for finite
//! operator models, reconstructs weighted trigonometric Schauder-multiplier
//! examples on `L²(−π,π)`, and drives reproducible sweep experiments that
//! overlay certified lower bounds, empirical norms and theoretical upper
//! bounds on ε-grids.

pub mod bounds;
pub mod calculus;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod scalar;
pub mod schauder;
pub mod specfn;

pub use error::{Error, Result};

/// Concrete real scalar used by the operator-level machinery.
pub type Real = f64;
/// Concrete complex scalar used by the operator-level machinery.
pub type Cplx = num_complex::Complex<f64>;
