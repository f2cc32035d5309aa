//! Scalar abstraction.
//!
//! Everything numeric in this crate is generic over a real floating type `T`
//! and works on `Complex<T>` entries. `f64` is the production type; `f32`
//! is supported with looser default tolerances.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar backing every complex matrix and vector.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + NumAssign
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance used when the caller does not supply one.
    fn default_tol() -> Self;

    /// Converts an `f64` literal. Panics only if the target cannot represent
    /// finite `f64` values, which no supported type does.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-4
    }
}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn i_unit<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::one())
}

#[inline]
pub(crate) fn is_finite_c<T: Real>(z: &C<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
