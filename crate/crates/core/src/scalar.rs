use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal.
    fn lit(v: f64) -> Self;

    fn from_usize_lossy(v: usize) -> Self;

    fn to_f64_lossy(self) -> f64;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

macro_rules! impl_scalar {
    ($($t:ty),+) => {
        $(
            impl Scalar for $t {
                #[inline]
                fn lit(v: f64) -> Self {
                    v as $t
                }

                #[inline]
                fn from_usize_lossy(v: usize) -> Self {
                    v as $t
                }

                #[inline]
                fn to_f64_lossy(self) -> f64 {
                    self as f64
                }

                #[inline]
                fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                    <StandardNormal as Distribution<$t>>::sample(&StandardNormal, rng)
                }
            }
        )+
    };
}

impl_scalar!(f32, f64);

/// Neumaier-compensated sum; the result is insensitive to summation order up
/// to the last bit in all but pathological inputs.
pub(crate) fn compensated_sum<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}
