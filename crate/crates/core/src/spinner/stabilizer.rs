//! Rotations preserving a finite subset of the circle `R/Z`.
//!
//! A finite set is preserved by a finite group of rotations, and every finite
//! subgroup of `R/Z` is cyclic. Since the group cannot contain every
//! rotation, there is always a rotation that moves some point off the set:
//! a finite (or hyperfinite) sample space cannot be invariant under all
//! rotations.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::SpinnerError;
use crate::intervals::frac;
use crate::Rational;

/// Distinct points of `[0,1)`, read modulo 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGrid {
    points: BTreeSet<Rational>,
}

impl FiniteGrid {
    /// `{k/n : 0 <= k < n}`.
    pub fn uniform(n: u64) -> Result<Self, SpinnerError> {
        if n == 0 {
            return Err(SpinnerError::EmptyGrid);
        }
        let n = BigInt::from(n);
        let points = num_iter_range(&n).map(|k| Rational::new(k, n.clone())).collect();
        Ok(FiniteGrid { points })
    }

    /// Points are reduced modulo 1; duplicates collapse.
    pub fn from_points(points: impl IntoIterator<Item = Rational>) -> Result<Self, SpinnerError> {
        let points: BTreeSet<Rational> = points.into_iter().map(|p| frac(&p)).collect();
        if points.is_empty() {
            return Err(SpinnerError::EmptyGrid);
        }
        Ok(FiniteGrid { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &Rational> {
        self.points.iter()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.points.contains(&frac(x))
    }

    fn preserved_by(&self, t: &Rational) -> bool {
        self.points.iter().all(|p| self.contains(&(p + t)))
    }
}

fn num_iter_range(n: &BigInt) -> impl Iterator<Item = BigInt> {
    let n = n.to_u64().expect("grid sizes fit in u64");
    (0..n).map(BigInt::from)
}

/// A rotation `r` and a point `x` of the grid with `x + r` off the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OffGridWitness {
    #[serde(serialize_with = "ser_rational")]
    pub rotation: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub point: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub image: Rational,
}

/// The rotation group preserving a finite grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilizer {
    pub order: usize,
    /// Smallest positive generating rotation; `0` for the trivial group.
    #[serde(serialize_with = "ser_rational")]
    pub generator_rotation: Rational,
    #[serde(serialize_with = "ser_rationals")]
    pub elements: Vec<Rational>,
    pub cyclic: bool,
    pub witness: OffGridWitness,
}

impl Stabilizer {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain fields serialize")
    }
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_rationals<S: serde::Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(|r| r.to_string()))
}

/// Brute-forces the stabilizer of `grid`.
///
/// Any preserving rotation maps the least point onto some grid point, so the
/// candidates are the differences `p - p0`. The group is certified cyclic by
/// checking that the multiples of one element exhaust it.
pub fn finite_grid_stabilizer(grid: &FiniteGrid) -> Result<Stabilizer, SpinnerError> {
    let p0 = grid.points.iter().next().ok_or(SpinnerError::EmptyGrid)?.clone();
    let candidates: Vec<Rational> = grid.points.iter().map(|p| frac(&(p - &p0))).collect();
    let mut elements: Vec<Rational> = candidates.iter().filter(|t| grid.preserved_by(t)).cloned().collect();
    elements.sort();
    let order = elements.len();

    // In R/Z the order of p/q (reduced) is q; a generator has order |G|.
    let generator_rotation = elements
        .iter()
        .find(|t| t.denom().to_usize() == Some(order))
        .cloned()
        .unwrap_or_else(Rational::zero);
    let cyclic = {
        let multiples: BTreeSet<Rational> =
            (0..order).map(|k| frac(&(&generator_rotation * Rational::from_integer(BigInt::from(k))))).collect();
        multiples.len() == order && multiples.iter().eq(elements.iter())
    };

    let rotation = candidates
        .iter()
        .find(|t| !elements.contains(t))
        .cloned()
        // Every difference stabilizes, so the grid is a coset of (1/n)Z and
        // 1/(n+1) is not a multiple of 1/n.
        .unwrap_or_else(|| Rational::new(BigInt::one(), BigInt::from(grid.len() + 1)));
    let witness = grid
        .points
        .iter()
        .map(|x| (x, frac(&(x + &rotation))))
        .find(|(_, image)| !grid.contains(image))
        .map(|(x, image)| OffGridWitness { rotation: rotation.clone(), point: x.clone(), image })
        .expect("a non-stabilizing rotation moves some point off the grid");

    Ok(Stabilizer { order, generator_rotation, elements, cyclic, witness })
}
