//! Scalar abstraction shared by the level-mean and prediction routines.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num};

/// Numeric type the main-effects analysis can run over.
///
/// Level means, deltas, ranks and additive predictions only need field
/// arithmetic and ordering, so they work for `f32`, `f64` and exact
/// rationals such as [`crate::Rational`]. Signal-to-noise ratios take a
/// logarithm and additionally require [`num_traits::Float`].
pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + Debug + Display + Send + Sync {}

impl<T> Scalar for T where T: Num + Copy + PartialOrd + FromPrimitive + Debug + Display + Send + Sync
{}

pub(crate) fn from_count<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("run counts are representable in every scalar type")
}

/// Arithmetic mean; `None` for an empty slice.
pub fn mean<T: Scalar>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let sum = values.iter().fold(T::zero(), |acc, &v| acc + v);
    Some(sum / from_count(values.len()))
}

pub(crate) fn abs<T: Scalar>(x: T) -> T {
    if x < T::zero() {
        T::zero() - x
    } else {
        x
    }
}
