//! Scalar traits for the exact arithmetic used by rank computations and
//! Hilbert series coefficients.
//!
//! Every routine that accumulates numbers is generic over one of these
//! traits, so callers can trade `u64`/`i64` speed for `BigUint`/`BigInt`
//! headroom. Fixed-width instantiations report [`Error::Overflow`] instead of
//! wrapping.
//!
//! [`Error::Overflow`]: crate::Error::Overflow

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, Unsigned};
use std::fmt::{Debug, Display};

/// Signed exact ring elements (fraction-free elimination).
pub trait ExactInt:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + CheckedMul + CheckedSub
{
}

impl<T> ExactInt for T where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + CheckedMul + CheckedSub
{
}

/// Non-negative counters.
pub trait Count:
    Unsigned + Integer + Clone + Debug + Display + FromPrimitive + CheckedAdd + CheckedMul + Send + Sync
{
    fn from_usize_exact(n: usize) -> Option<Self> {
        <Self as FromPrimitive>::from_usize(n)
    }
}

impl<T> Count for T where
    T: Unsigned
        + Integer
        + Clone
        + Debug
        + Display
        + FromPrimitive
        + CheckedAdd
        + CheckedMul
        + Send
        + Sync
{
}

pub(crate) fn add<C: Count>(a: &C, b: &C, what: &'static str) -> crate::Result<C> {
    a.checked_add(b).ok_or(crate::Error::Overflow(what))
}

pub(crate) fn mul<C: Count>(a: &C, b: &C, what: &'static str) -> crate::Result<C> {
    a.checked_mul(b).ok_or(crate::Error::Overflow(what))
}

/// Binomial coefficient `n choose k` computed multiplicatively.
pub fn binomial<C: Count>(n: usize, k: usize) -> crate::Result<C> {
    if k > n {
        return Ok(C::zero());
    }
    let k = k.min(n - k);
    let mut acc = C::one();
    for i in 0..k {
        let num = C::from_usize_exact(n - i).ok_or(crate::Error::Overflow("binomial"))?;
        let den = C::from_usize_exact(i + 1).ok_or(crate::Error::Overflow("binomial"))?;
        // acc * (n-i) is divisible by (i+1) after the multiplication.
        acc = mul(&acc, &num, "binomial")? / den;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial::<u64>(6, 4).unwrap(), 15);
        assert_eq!(binomial::<u64>(5, 0).unwrap(), 1);
        assert_eq!(binomial::<u64>(3, 5).unwrap(), 0);
        assert_eq!(binomial::<BigUint>(60, 30).unwrap().to_string(), "118264581564861424");
    }

    #[test]
    fn fixed_width_overflow_is_reported() {
        assert!(matches!(binomial::<u8>(20, 10), Err(crate::Error::Overflow(_))));
    }
}
