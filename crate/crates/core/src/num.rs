//! Scalar abstraction for the numeric parts of the toolkit.
//!
//! Everything that computes on probabilities, correlations, scores, or
//! metrics is generic over [`Real`], so the same code runs in `f32` or
//! `f64`. The crate root exposes `f64`-defaulted aliases for the common
//! case.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable throughout the numeric modules.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal or intermediate.
    fn from_f64_lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 conversion")
    }

    /// Conversion from a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("usize conversion")
    }

    /// Back to `f64` for reporting and serialization boundaries.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("f64 conversion")
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean<F: Real>(xs: &[F]) -> F {
        xs.iter().copied().sum::<F>() / F::from_count(xs.len())
    }

    #[test]
    fn generic_mean_works_for_both_widths() {
        assert_eq!(mean(&[1.0f64, 2.0, 3.0]), 2.0);
        assert_eq!(mean(&[1.0f32, 2.0, 3.0]), 2.0);
    }
}
