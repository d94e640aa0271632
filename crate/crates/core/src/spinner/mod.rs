//! The equally spaced hyperfinite spinner.
//!
//! The sample space is `{k/N : 0 <= k < N}` with `N = m!` for an unlimited
//! `m`. Every rational has a denominator dividing `N`, so every rational
//! endpoint lies on the grid and the number of grid points in an interval
//! set is an exact affine form `a*N + b`. The probability `count / N` is
//! then `a + b*eps` with `eps = 1/N`. The grid itself is never built.

mod stabilizer;
mod suite;

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::intervals::IntervalSet;
use crate::nonarch::{Generator, NonArchError};
use crate::{NonArchValue, Rational};

pub use stabilizer::{finite_grid_stabilizer, FiniteGrid, OffGridWitness, Stabilizer};
pub use suite::{
    check_co, check_count_additivity, check_reg, check_sy_q, check_tot, check_un_b, check_un_h, property_checks,
    run_property_suite,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinnerError {
    #[error("cannot condition on the empty set")]
    EmptyCondition,
    #[error("a finite grid needs at least one point")]
    EmptyGrid,
    #[error(transparent)]
    NonArch(#[from] NonArchError),
}

/// Number of grid points in a set, as `linear * N + constant`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CountForm {
    pub linear: Rational,
    pub constant: i64,
}

impl CountForm {
    pub fn zero() -> Self {
        CountForm { linear: Rational::zero(), constant: 0 }
    }

    /// Value at a concrete grid size.
    pub fn at(&self, n: &BigInt) -> Rational {
        &self.linear * Rational::from_integer(n.clone()) + Rational::from_integer(self.constant.into())
    }
}

impl Add for &CountForm {
    type Output = CountForm;

    fn add(self, rhs: &CountForm) -> CountForm {
        CountForm { linear: &self.linear + &rhs.linear, constant: self.constant + rhs.constant }
    }
}

impl Sub for &CountForm {
    type Output = CountForm;

    fn sub(self, rhs: &CountForm) -> CountForm {
        CountForm { linear: &self.linear - &rhs.linear, constant: self.constant - rhs.constant }
    }
}

impl fmt::Display for CountForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constant < 0 {
            write!(f, "{}*N - {}", self.linear, -self.constant)
        } else {
            write!(f, "{}*N + {}", self.linear, self.constant)
        }
    }
}

impl Serialize for CountForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Symbolic hyperfinite spinner with `N = m!`, `m` unlimited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridModel {
    generator: Generator,
}

impl Default for GridModel {
    fn default() -> Self {
        Self::new()
    }
}

impl GridModel {
    /// Uses `eps` for `1/N`.
    pub fn new() -> Self {
        GridModel { generator: Generator::new("eps") }
    }

    pub fn with_generator(generator: Generator) -> Self {
        GridModel { generator }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// `eps = 1/N`, the mass of each grid point.
    pub fn point_mass(&self) -> NonArchValue {
        NonArchValue::infinitesimal(self.generator.clone())
    }

    /// `|*A ∩ Ω|`. Each `[a,b)` or `(a,b]` holds exactly `(b-a)N` grid
    /// points; a closed end adds one, an open end at the other side removes
    /// one, and a point counts once.
    pub fn grid_count(&self, a: &IntervalSet) -> CountForm {
        a.components().iter().fold(CountForm::zero(), |acc, c| {
            let constant = if c.is_point() {
                1
            } else {
                match (c.left_closed, c.right_closed) {
                    (true, false) | (false, true) => 0,
                    (true, true) => 1,
                    (false, false) => -1,
                }
            };
            &acc + &CountForm { linear: c.length(), constant }
        })
    }

    /// `P(A) = |*A ∩ Ω| / N = linear + constant * eps`.
    pub fn grid_probability(&self, a: &IntervalSet) -> NonArchValue {
        let count = self.grid_count(a);
        let lin = NonArchValue::constant(self.generator.clone(), count.linear);
        let c = NonArchValue::monomial(self.generator.clone(), Rational::from_integer(count.constant.into()), 1);
        lin.try_add(&c).expect("same generator")
    }

    /// `P(A | B) = P(A ∩ B) / P(B)`, defined even when `P(B)` is
    /// infinitesimal.
    pub fn conditional_probability(&self, a: &IntervalSet, b: &IntervalSet) -> Result<NonArchValue, SpinnerError> {
        if b.is_empty() {
            return Err(SpinnerError::EmptyCondition);
        }
        let joint = self.grid_probability(&a.intersect(b));
        Ok(joint.try_div(&self.grid_probability(b))?)
    }
}

impl CountForm {
    /// Positive for every sufficiently large `N`.
    pub fn eventually_positive(&self) -> bool {
        self.linear.is_positive() || (self.linear.is_zero() && self.constant > 0)
    }
}
