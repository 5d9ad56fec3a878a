//! Integer types usable for exact counts.

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, One, ToPrimitive, Zero};

/// An exact non-negative counter. Arithmetic goes through the checked
/// operations so fixed-width types report overflow instead of wrapping.
pub trait Count:
    Clone + Debug + Display + Ord + Zero + One + CheckedAdd + CheckedMul + FromPrimitive + ToPrimitive
{
}

impl<T> Count for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Zero
        + One
        + CheckedAdd
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
{
}

/// Unbounded counts.
pub type ExactCount = BigUint;
