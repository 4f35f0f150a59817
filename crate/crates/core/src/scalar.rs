//! Scalar abstraction shared by every module.
//!
//! All physics in the crate is written against [`Real`], so the same code
//! runs in `f64` (the default, and the precision the tolerances are pinned
//! for) and in `f32`.

use std::fmt::{Debug, Display};

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Display + Debug + 'static {
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("integer representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).expect("finite scalar")
    }

    /// A tolerance of `target`, floored at a few hundred ulps of this type.
    ///
    /// Requested tolerances are pinned for `f64`; in `f32` they degrade to
    /// what the format can actually resolve.
    #[inline]
    fn tol(target: f64) -> Self {
        let floor = 64.0 * Self::default_epsilon().as_f64();
        Self::lit(target.max(floor))
    }

    #[inline]
    fn is_finite_real(self) -> bool {
        self.as_f64().is_finite()
    }

    /// Smallest positive normal value.
    fn min_positive() -> Self;
}

impl Real for f32 {
    fn min_positive() -> Self {
        f32::MIN_POSITIVE
    }
}

impl Real for f64 {
    fn min_positive() -> Self {
        f64::MIN_POSITIVE
    }
}

/// Complex amplitude over a real scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}
