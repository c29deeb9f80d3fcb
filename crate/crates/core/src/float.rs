//! Thin wrappers over `libm` so the same code paths build with and without `std`.

use num_complex::Complex64;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn norm(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// `exp(-i * phase)`.
#[inline]
pub(crate) fn phase_factor(phase: f64) -> Complex64 {
    Complex64::new(cos(phase), -sin(phase))
}

/// Argument of `z` on the branch `(-pi, pi]`.
#[inline]
pub(crate) fn principal_arg(z: Complex64) -> f64 {
    let arg = libm::atan2(z.im, z.re);
    if arg <= -core::f64::consts::PI {
        core::f64::consts::PI
    } else {
        arg
    }
}
