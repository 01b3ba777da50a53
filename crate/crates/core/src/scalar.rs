//! Floating-point abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Scalar type for the numerical kernels.
///
/// Bundles the `num_traits` arithmetic surface with `faer`'s real field
/// trait so that the dense eigensolver can be driven for any implementor.
pub trait Real:
    'static
    + Send
    + Sync
    + Copy
    + Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Default
    + Display
    + LowerExp
    + Debug
    + faer::traits::RealField
{
    /// Lossy conversion from `f64`, used for constants and tuning parameters.
    #[inline]
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 representable")
    }

    #[inline]
    fn of_usize(x: usize) -> Self {
        <Self as FromPrimitive>::from_usize(x).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
