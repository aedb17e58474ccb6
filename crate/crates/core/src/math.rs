//! Thin wrappers over `libm` so results do not depend on the platform's
//! math library.

use core::f64::consts::PI;
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
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// Fractional part in `[0, 1)`.
#[inline]
pub(crate) fn frac(x: f64) -> f64 {
    let r = x - floor(x);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
#[inline]
pub(crate) fn dist_to_int(x: f64) -> f64 {
    abs(x - round(x))
}

/// `exp(-2iπx)`, with `x` reduced modulo 1 before the trigonometric call.
#[inline]
pub(crate) fn cis_turns(x: f64) -> Complex64 {
    let r = x - round(x);
    let (s, c) = libm::sincos(2.0 * PI * r);
    Complex64::new(c, -s)
}

/// `exp(-2iπ k/n)` for integers, reduced exactly before evaluation.
#[inline]
pub(crate) fn cis_ratio(k: i128, n: i128) -> Complex64 {
    let r = k.rem_euclid(n);
    cis_turns(r as f64 / n as f64)
}
