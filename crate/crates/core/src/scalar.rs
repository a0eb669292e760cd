//! Floating-point abstraction shared by every module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar the algebra and its operators are generic over.
///
/// Implemented for `f32` and `f64`. The associated constants are the
/// numerical thresholds used throughout the crate, scaled to the precision
/// of the type.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Absolute tolerance on the row-sum constraint.
    const CONSTRAINT_TOL: Self;
    /// Negative entries above `-SIGN_NOISE` still count as non-negative.
    const SIGN_NOISE: Self;
    /// Defect norm above which an identity counts as violated.
    const DEFECT_TOL: Self;
    /// Tolerance for exact-looking equalities on parameters (case trees).
    const EQ_TOL: Self;
    /// Below this L1 norm a state counts as numerically extinct.
    const EXTINCT_NORM: Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }
}

impl Scalar for f64 {
    const CONSTRAINT_TOL: Self = 1e-12;
    const SIGN_NOISE: Self = 1e-15;
    const DEFECT_TOL: Self = 1e-8;
    const EQ_TOL: Self = 1e-12;
    const EXTINCT_NORM: Self = 1e-300;
}

impl Scalar for f32 {
    const CONSTRAINT_TOL: Self = 1e-5;
    const SIGN_NOISE: Self = 1e-7;
    const DEFECT_TOL: Self = 1e-3;
    const EQ_TOL: Self = 1e-6;
    const EXTINCT_NORM: Self = 1e-37;
}

/// Sum of absolute values.
pub fn l1<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|a| a.abs()).sum()
}

/// L1 distance between two equally long slices.
pub fn l1_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(p, q)| (*p - *q).abs()).sum()
}

/// True when `|a - b| <= tol`.
#[inline]
pub fn near<T: Scalar>(a: T, b: T, tol: T) -> bool {
    (a - b).abs() <= tol
}
