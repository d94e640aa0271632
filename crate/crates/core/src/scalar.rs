//! Coefficient fields for the non-Archimedean kernel.
//!
//! Everything above this layer needs exact division and a decidable total
//! order, so the bound is an ordered field of fractions over a signed
//! integer type. Floating point types are not admitted: polynomial gcd over
//! `f64` is not well defined.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact ordered field usable as coefficient type.
///
/// Implemented for every `num_rational::Ratio<T>` with a signed integer `T`,
/// in particular [`crate::Rational`] (arbitrary precision) and
/// `Ratio<i64>` (fixed precision, overflows on large inputs).
pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + FromStr + Num + Signed + FromPrimitive + Send + Sync
{
    /// The ring of integers the field is built over.
    type Int: Clone + Integer + Signed + Debug + FromPrimitive + ToPrimitive;

    /// Converts a machine integer into the field.
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every exact field contains the integers")
    }

    /// Reduced numerator.
    fn numer_int(&self) -> Self::Int;

    /// Reduced, positive denominator.
    fn denom_int(&self) -> Self::Int;

    fn from_ints(numer: Self::Int, denom: Self::Int) -> Self;
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Integer + Signed + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync,
    Ratio<T>: Ord + FromStr + Num + Signed + FromPrimitive + Display,
{
    type Int = T;

    fn numer_int(&self) -> T {
        self.numer().clone()
    }

    fn denom_int(&self) -> T {
        self.denom().clone()
    }

    fn from_ints(numer: T, denom: T) -> Self {
        Ratio::new(numer, denom)
    }
}
