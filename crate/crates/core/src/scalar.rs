//! Scalar abstractions shared by the analytic modules.
//!
//! Everything that only needs field arithmetic plus the usual elementary
//! functions is written against [`Real`], so the closed forms run in `f32`
//! or `f64`. The parametric Nikiforov–Uvarov constants only need field
//! operations and square roots, which is captured by [`NuScalar`]; that trait
//! is also implemented for exact rationals so the parametric tables can be
//! checked without rounding.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Signed, Zero};

/// Floating-point scalar used throughout the crate: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every `Real` can represent (a rounding of) any `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_u32_lossless(n: u32) -> Self {
        Self::from_u32(n).expect("u32 representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Field with a partial square root.
///
/// `try_sqrt` returns `None` for negative inputs, and for exact types also
/// when the square root is irrational.
pub trait NuScalar: Clone + Debug + PartialOrd {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn try_sqrt(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;

    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }

    fn half(&self) -> Self {
        self.div(&Self::from_i64(2))
    }
}

macro_rules! impl_nu_float {
    ($t:ty) => {
        impl NuScalar for $t {
            fn zero() -> Self {
                0.0
            }
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn add(&self, rhs: &Self) -> Self {
                self + rhs
            }
            fn sub(&self, rhs: &Self) -> Self {
                self - rhs
            }
            fn mul(&self, rhs: &Self) -> Self {
                self * rhs
            }
            fn div(&self, rhs: &Self) -> Self {
                self / rhs
            }
            fn try_sqrt(&self) -> Option<Self> {
                if *self < 0.0 || self.is_nan() {
                    None
                } else {
                    Some(self.sqrt())
                }
            }
            fn is_zero(&self) -> bool {
                *self == 0.0
            }
            fn is_negative(&self) -> bool {
                *self < 0.0
            }
        }
    };
}

impl_nu_float!(f32);
impl_nu_float!(f64);

impl NuScalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn try_sqrt(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let numer = exact_isqrt(self.numer())?;
        let denom = exact_isqrt(self.denom())?;
        Some(BigRational::new(numer, denom))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

fn exact_isqrt(v: &BigInt) -> Option<BigInt> {
    let root = v.sqrt();
    if &(&root * &root) == v {
        Some(root)
    } else {
        None
    }
}
