//! Exact integer scalars.
//!
//! Every algorithm in this crate is generic over [`ExactInt`]. Two
//! implementations are provided: `i64`, whose arithmetic is checked and
//! reports [`Overflow`] instead of wrapping, and `BigInt`, which never
//! overflows. The top-level entry points run on `i64` first and fall back to
//! `BigInt` when an intermediate value leaves the machine range, so results
//! are always exact.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{
    CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive,
};

/// An intermediate value did not fit the scalar type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub trait ExactInt:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + CheckedDiv
    + FromPrimitive
    + ToPrimitive
    + 'static
{
    /// Whether arithmetic on this type can fail with [`Overflow`].
    const BOUNDED: bool;

    fn to_big(&self) -> BigInt;
    fn from_big(value: &BigInt) -> Option<Self>;

    fn add_c(&self, rhs: &Self) -> Result<Self, Overflow> {
        self.checked_add(rhs).ok_or(Overflow)
    }
    fn sub_c(&self, rhs: &Self) -> Result<Self, Overflow> {
        self.checked_sub(rhs).ok_or(Overflow)
    }
    fn mul_c(&self, rhs: &Self) -> Result<Self, Overflow> {
        self.checked_mul(rhs).ok_or(Overflow)
    }
    fn neg_c(&self) -> Result<Self, Overflow> {
        Self::zero().checked_sub(self).ok_or(Overflow)
    }
    fn abs_c(&self) -> Result<Self, Overflow> {
        if self.is_negative() {
            self.neg_c()
        } else {
            Ok(self.clone())
        }
    }
    fn from_i64_exact(value: i64) -> Self {
        Self::from_i64(value).expect("every ExactInt holds an i64")
    }
}

impl ExactInt for i64 {
    const BOUNDED: bool = true;

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(value: &BigInt) -> Option<Self> {
        value.to_i64()
    }
}

impl ExactInt for BigInt {
    const BOUNDED: bool = false;

    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_big(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
}

/// Checked rational arithmetic over an [`ExactInt`].
pub(crate) mod ratio {
    use super::*;

    pub fn add<T: ExactInt>(a: &Ratio<T>, b: &Ratio<T>) -> Result<Ratio<T>, Overflow> {
        a.checked_add(b).ok_or(Overflow)
    }
    pub fn sub<T: ExactInt>(a: &Ratio<T>, b: &Ratio<T>) -> Result<Ratio<T>, Overflow> {
        a.checked_sub(b).ok_or(Overflow)
    }
    pub fn mul<T: ExactInt>(a: &Ratio<T>, b: &Ratio<T>) -> Result<Ratio<T>, Overflow> {
        a.checked_mul(b).ok_or(Overflow)
    }
    pub fn div<T: ExactInt>(a: &Ratio<T>, b: &Ratio<T>) -> Result<Ratio<T>, Overflow> {
        a.checked_div(b).ok_or(Overflow)
    }
    pub fn to_big<T: ExactInt>(a: &Ratio<T>) -> Ratio<BigInt> {
        Ratio::new_raw(a.numer().to_big(), a.denom().to_big())
    }
    pub fn from_big<T: ExactInt>(a: &Ratio<BigInt>) -> Option<Ratio<T>> {
        Some(Ratio::new_raw(
            T::from_big(a.numer())?,
            T::from_big(a.denom())?,
        ))
    }
}

/// Runs `small` on machine integers and reruns `big` on arbitrary precision
/// if the fast path overflowed. Any other outcome of the fast path is final.
pub fn with_fallback<R, E>(
    small: impl FnOnce() -> Result<R, E>,
    big: impl FnOnce() -> Result<R, E>,
) -> Result<R, E>
where
    E: IsOverflow,
{
    match small() {
        Err(e) if e.is_overflow() => big(),
        other => other,
    }
}

pub trait IsOverflow {
    fn is_overflow(&self) -> bool;
}

impl IsOverflow for Overflow {
    fn is_overflow(&self) -> bool {
        true
    }
}
