//! Scalar abstraction for the linear-algebra layers.

use nalgebra as na;
use num_traits as nt;

/// Real floating-point type usable by the Fock-space and two-level code.
///
/// Implemented for `f32` and `f64`. The physics experiments run in `f64`;
/// the stated tolerances assume double precision.
pub trait Real: Copy + nt::FloatConst + nt::FromPrimitive + na::RealField {
    /// Entrywise tolerance used for Hermiticity checks.
    const HERMITIAN_TOL: Self;
}

impl Real for f32 {
    const HERMITIAN_TOL: Self = 1e-5;
}

impl Real for f64 {
    const HERMITIAN_TOL: Self = 1e-12;
}

/// Converts an `f64` literal into `R`.
#[inline]
pub fn real<R: Real>(x: f64) -> R {
    na::convert(x)
}

/// Complex number with `R` components.
pub type Cplx<R> = na::Complex<R>;

#[inline]
pub fn cplx<R: Real>(re: f64, im: f64) -> Cplx<R> {
    na::Complex::new(real(re), real(im))
}
