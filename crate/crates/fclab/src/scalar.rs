//! Scalar abstraction for the closed-form evaluators.
//!
//! The scalar special functions and bound formulas are generic over the
//! floating-point type; the operator machinery is pinned to `f64` (the
//! tolerances it targets are not reachable in single precision).

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait RealScalar:
    Float + FloatConst + FromPrimitive + core::fmt::Debug + core::fmt::Display + Send + Sync + 'static
{
    /// Euler–Mascheroni constant γ.
    #[inline]
    fn euler_gamma() -> Self {
        Self::of(0.577_215_664_901_532_9)
    }

    /// Conversion from an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl RealScalar for f32 {}
impl RealScalar for f64 {}
