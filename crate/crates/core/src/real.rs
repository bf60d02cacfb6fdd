//! Scalar abstraction shared by every estimator in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Natural log of the smallest positive normal value.
    #[inline]
    fn ln_min_positive() -> Self {
        Self::min_positive_value().ln()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Planar point.
pub type Point<T> = [T; 2];

#[inline]
pub(crate) fn dist<T: Real>(a: &Point<T>, b: &Point<T>) -> T {
    (a[0] - b[0]).hypot(a[1] - b[1])
}
