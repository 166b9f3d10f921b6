//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal or tolerance.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

pub(crate) fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

pub(crate) fn i_unit<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::one())
}

/// `exp(i·angle)` built from the angle so the modulus is one up to rounding.
pub(crate) fn cis<T: Real>(angle: T) -> Cplx<T> {
    Complex::new(angle.cos(), angle.sin())
}

/// Unit-modulus phase of `w`, or `1` when `w` vanishes.
pub(crate) fn phase_or_one<T: Real>(w: Cplx<T>) -> Cplx<T> {
    let m = w.norm();
    if m > T::zero() {
        w / m
    } else {
        Complex::new(T::one(), T::zero())
    }
}
