//! Scalar abstraction for the decomposition weights.
//!
//! The closed-form weight formulas only add, subtract and rotate by powers
//! of `i`, so they are exact over any signed ring. Integer and rational
//! inputs therefore get exact zero pruning; floating inputs use a relative
//! threshold.

use std::fmt::Debug;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Real scalar type that matrix entries and weights are built from.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + ToPrimitive + Send + Sync + 'static
{
    /// Magnitude at or below which a weight counts as zero, given the
    /// largest entry magnitude `scale` of the source matrix.
    fn zero_threshold(_scale: &Self) -> Self {
        Self::zero()
    }

    /// Lossy conversion used by the dense simulator.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn zero_threshold(scale: &Self) -> Self {
        1e-14 * scale.abs()
    }
}

impl Scalar for f32 {
    // 1e-14 is below f32 resolution; use a few ulps instead.
    fn zero_threshold(scale: &Self) -> Self {
        8.0 * f32::EPSILON * scale.abs()
    }
}

impl Scalar for i64 {}
impl Scalar for i128 {}
impl Scalar for Ratio<i64> {}
impl Scalar for Ratio<i128> {}

/// Multiplies `c` by `i^k`.
pub fn mul_i_pow<T: Scalar>(c: Complex<T>, k: u32) -> Complex<T> {
    match k % 4 {
        0 => c,
        1 => Complex::new(-c.im, c.re),
        2 => Complex::new(-c.re, -c.im),
        _ => Complex::new(c.im, -c.re),
    }
}

/// `max(|re|, |im|)` of a complex value.
pub fn max_part<T: Scalar>(c: &Complex<T>) -> T {
    let (re, im) = (c.re.abs(), c.im.abs());
    if re >= im {
        re
    } else {
        im
    }
}

pub(crate) fn is_negligible<T: Scalar>(c: &Complex<T>, threshold: &T) -> bool {
    if threshold.is_zero() {
        c.is_zero()
    } else {
        max_part(c) <= *threshold
    }
}

pub(crate) fn to_c64<T: Scalar>(c: &Complex<T>) -> Complex<f64> {
    Complex::new(c.re.to_f64_lossy(), c.im.to_f64_lossy())
}
