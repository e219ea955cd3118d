use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the numeric code is generic over (`f32` or `f64`).
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant into `Self`, rounding if needed.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Numerically stable `ln(sum(exp(x)))`. Returns `-inf` for an empty input.
pub fn log_sum_exp<F: Real>(values: impl IntoIterator<Item = F> + Clone) -> F {
    let max = values
        .clone()
        .into_iter()
        .fold(F::neg_infinity(), |m, x| m.max(x));
    if max == F::neg_infinity() {
        return max;
    }
    let sum: F = values.into_iter().map(|x| (x - max).exp()).sum();
    max + sum.ln()
}
