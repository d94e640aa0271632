//! Rational interval sets in `[0,1)` and the minimal Archimedean model.
//!
//! An [`IntervalSet`] is a finite union of intervals with exact rational
//! endpoints and explicit inclusion flags, so closed intervals and isolated
//! points are first-class members of the algebra. The measure is the
//! restriction of Lebesgue measure: the sum of component lengths.

mod sigma;
mod text;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rational;

pub use sigma::sigma_additivity_probe;
pub use text::ParseSetError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("endpoint {0} lies outside [0,1]")]
    EndpointOutOfRange(Rational),
    #[error("left endpoint exceeds right endpoint in {0}")]
    Reversed(Box<Interval>),
    #[error("family members {first} and {second} overlap at {witness}")]
    Overlap { first: usize, second: usize, witness: String },
    #[error("measure value {0} lies outside [0,1]")]
    MeasureOutOfRange(Rational),
    #[error(transparent)]
    Parse(#[from] ParseSetError),
}

/// One interval with per-endpoint inclusion flags.
///
/// As raw input any `left <= right` is accepted; in a normalized set each
/// component is nonempty.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interval {
    pub left: Rational,
    pub left_closed: bool,
    pub right: Rational,
    pub right_closed: bool,
}

impl Interval {
    pub fn new(left: Rational, left_closed: bool, right: Rational, right_closed: bool) -> Self {
        Interval { left, left_closed, right, right_closed }
    }

    /// `[a,b)`
    pub fn closed_open(a: Rational, b: Rational) -> Self {
        Self::new(a, true, b, false)
    }

    /// `[a,b]`
    pub fn closed(a: Rational, b: Rational) -> Self {
        Self::new(a, true, b, true)
    }

    /// `(a,b)`
    pub fn open(a: Rational, b: Rational) -> Self {
        Self::new(a, false, b, false)
    }

    /// `(a,b]`
    pub fn open_closed(a: Rational, b: Rational) -> Self {
        Self::new(a, false, b, true)
    }

    /// `{p}`
    pub fn point(p: Rational) -> Self {
        Self::new(p.clone(), true, p, true)
    }

    pub fn is_point(&self) -> bool {
        self.left == self.right
    }

    pub fn is_empty(&self) -> bool {
        self.left > self.right || (self.left == self.right && !(self.left_closed && self.right_closed))
    }

    /// Pointwise membership, ignoring the `[0,1)` restriction.
    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.left_closed { *x >= self.left } else { *x > self.left };
        let below = if self.right_closed { *x <= self.right } else { *x < self.right };
        above && below
    }

    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    /// Left-closed, right-open with positive length.
    pub fn is_half_open(&self) -> bool {
        self.left_closed && !self.right_closed && self.left < self.right
    }
}

/// Normalized finite union of intervals in `[0,1)`.
///
/// Components are sorted, pairwise disjoint and separated (no two of them
/// could be merged). The point `1` is never a member.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntervalSet {
    components: Vec<Interval>,
}

/// An exact value of the minimal Archimedean measure, in `[0,1]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MeasureValue(Rational);

impl MeasureValue {
    pub fn new(v: Rational) -> Result<Self, IntervalError> {
        if v.is_negative() || v > Rational::one() {
            return Err(IntervalError::MeasureOutOfRange(v));
        }
        Ok(MeasureValue(v))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `x mod 1` in `[0,1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { components: Vec::new() }
    }

    /// The whole sample space `[0,1)`.
    pub fn full() -> Self {
        IntervalSet { components: vec![Interval::closed_open(Rational::zero(), Rational::one())] }
    }

    /// Canonical form of a raw union.
    ///
    /// Endpoints must lie in `[0,1]`. A raw component that contains the point
    /// `1` contributes the point `0` instead, since `1` and `0` coincide on
    /// the circle.
    pub fn normalize(raw: &[Interval]) -> Result<Self, IntervalError> {
        for iv in raw {
            for e in [&iv.left, &iv.right] {
                if e.is_negative() || *e > Rational::one() {
                    return Err(IntervalError::EndpointOutOfRange(e.clone()));
                }
            }
            if iv.left > iv.right {
                return Err(IntervalError::Reversed(Box::new(iv.clone())));
            }
        }
        let one = Rational::one();
        let wraps = raw.iter().any(|iv| iv.contains(&one));
        let cuts = raw.iter().flat_map(|iv| [iv.left.clone(), iv.right.clone()]).collect();
        Ok(Self::from_predicate(cuts, |x| raw.iter().any(|iv| iv.contains(x)) || (wraps && x.is_zero())))
    }

    pub fn single(iv: Interval) -> Result<Self, IntervalError> {
        Self::normalize(&[iv])
    }

    pub fn point(p: Rational) -> Result<Self, IntervalError> {
        Self::normalize(&[Interval::point(p)])
    }

    /// Builds the set `{x in [0,1) : member(x)}` for a predicate that is
    /// constant on every open gap between consecutive `cuts`.
    fn from_predicate(mut cuts: Vec<Rational>, member: impl Fn(&Rational) -> bool) -> Self {
        let one = Rational::one();
        cuts.retain(|c| !c.is_negative() && *c <= one);
        cuts.push(Rational::zero());
        cuts.push(one.clone());
        cuts.sort();
        cuts.dedup();

        let two = Rational::from_integer(BigInt::from(2));
        let mut components = Vec::new();
        let mut open: Option<(Rational, bool)> = None;
        for (i, p) in cuts.iter().enumerate() {
            let at_point = *p < one && member(p);
            match (&open, at_point) {
                (None, true) => open = Some((p.clone(), true)),
                (Some(_), false) => {
                    let (left, left_closed) = open.take().expect("checked");
                    components.push(Interval::new(left, left_closed, p.clone(), false));
                }
                _ => {}
            }
            let Some(next) = cuts.get(i + 1) else { break };
            let in_gap = member(&((p + next) / &two));
            match (&open, in_gap) {
                (None, true) => open = Some((p.clone(), false)),
                (Some(_), false) => {
                    let (left, left_closed) = open.take().expect("checked");
                    components.push(Interval::new(left, left_closed, p.clone(), true));
                }
                _ => {}
            }
        }
        debug_assert!(open.is_none(), "the point 1 is never a member");
        IntervalSet { components }
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let idx = self.components.partition_point(|c| c.left <= *x);
        idx > 0 && self.components[idx - 1].contains(x)
    }

    fn cuts(&self) -> impl Iterator<Item = Rational> + '_ {
        self.components.iter().flat_map(|c| [c.left.clone(), c.right.clone()])
    }

    pub fn union(&self, other: &Self) -> Self {
        let cuts = self.cuts().chain(other.cuts()).collect();
        Self::from_predicate(cuts, |x| self.contains(x) || other.contains(x))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let cuts = self.cuts().chain(other.cuts()).collect();
        Self::from_predicate(cuts, |x| self.contains(x) && other.contains(x))
    }

    /// Complement relative to `[0,1)`.
    pub fn complement(&self) -> Self {
        Self::from_predicate(self.cuts().collect(), |x| !self.contains(x))
    }

    pub fn difference(&self, other: &Self) -> Self {
        let cuts = self.cuts().chain(other.cuts()).collect();
        Self::from_predicate(cuts, |x| self.contains(x) && !other.contains(x))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }

    /// Rotation of the circle: `x` is in the result iff `x - t mod 1` is in
    /// `self`.
    pub fn translate_mod1(&self, t: &Rational) -> Self {
        let t = frac(t);
        if t.is_zero() {
            return self.clone();
        }
        let cuts = self.cuts().map(|c| frac(&(c + &t))).chain(std::iter::once(t.clone())).collect();
        Self::from_predicate(cuts, |x| self.contains(&frac(&(x - &t))))
    }

    /// Lebesgue measure: the sum of component lengths.
    pub fn lebesgue_length(&self) -> MeasureValue {
        let total = self.components.iter().fold(Rational::zero(), |acc, c| acc + c.length());
        MeasureValue::new(total).expect("components are disjoint within [0,1)")
    }

    /// True when every component is of the form `[a,b)` with `a < b`.
    pub fn is_half_open(&self) -> bool {
        self.components.iter().all(Interval::is_half_open)
    }

    /// Least common multiple of the endpoint denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.cuts().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}
