//! Scalar coefficient requirements.
//!
//! Every algebraic structure in the crate is generic over a [`Scalar`]. The
//! algorithms compare results with exact equality, so the intended
//! instantiations are exact fields: [`crate::Rat`] (arbitrary precision) for
//! real work and `num_rational::Rational64` for small experiments. Floating
//! point types satisfy the bounds but exact identities will not hold for them.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, Signed};

/// Coefficient field.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + FromStr + Send + Sync + 'static
{
    /// `n` as a scalar.
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every integer embeds in the coefficient field")
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + PartialEq
        + PartialOrd
        + Num
        + Signed
        + FromPrimitive
        + FromStr
        + Send
        + Sync
        + 'static
{
}
