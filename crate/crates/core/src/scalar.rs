//! Generic floating-point scalar used by the measure functions, special
//! functions and quadrature kernels.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::Debug;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating-point scalar, implemented for `f32` and `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Lossless shorthand for embedding literal constants.
    fn of(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}
