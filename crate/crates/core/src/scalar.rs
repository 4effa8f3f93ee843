use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer coefficient ring used by every polynomial and group element.
///
/// Fixed-width integers are fast but overflow silently in release builds;
/// [`BigInt`] is exact and is what the crate-root aliases use.
pub trait Coeff:
    Clone
    + Debug
    + Display
    + Ord
    + Hash
    + Send
    + Sync
    + 'static
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + FromStr
{
    fn to_bigint(&self) -> BigInt;

    /// `None` when the value does not fit.
    fn from_bigint(v: &BigInt) -> Option<Self>;

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("every coefficient type holds an i64")
    }
}

macro_rules! impl_coeff_prim {
    ($t:ty, $to:ident) => {
        impl Coeff for $t {
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }

            fn from_bigint(v: &BigInt) -> Option<Self> {
                v.$to()
            }
        }
    };
}

impl_coeff_prim!(i64, to_i64);
impl_coeff_prim!(i128, to_i128);

impl Coeff for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigint_conversions() {
        let big = BigInt::from(i64::MAX) * 4;
        assert_eq!(i64::from_bigint(&big), None);
        assert_eq!(i128::from_bigint(&big), Some(i64::MAX as i128 * 4));
        assert_eq!(BigInt::from_bigint(&big), Some(big.clone()));
        assert_eq!((-7i64).to_bigint(), BigInt::from(-7));
    }
}
