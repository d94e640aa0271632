//! Hyperfinite counting on the middle-thirds Cantor set.
//!
//! Cylinders are named by ternary addresses over `{0,2}`. At the Cantor
//! dimension `t = log 2 / log 3`, normalized so the whole set has measure
//! one, a depth-`n` cylinder has Hausdorff measure `2^-n`. The hyperfinite
//! model takes the `2^m` depth-`m` cylinders for an unlimited `m` as sample
//! points; with `c = 2^-m`, a depth-`n` cylinder holds `2^-n / c` of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::nonarch::{Generator, NonArchError};
use crate::report::PropertyReport;
use crate::{NonArchValue, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CantorError {
    #[error("invalid cylinder address `{0}`: digits must be 0 or 2")]
    BadAddress(String),
    #[error("cantor event syntax error: {0}")]
    Syntax(String),
    #[error("cannot condition on the empty event")]
    EmptyCondition,
    #[error(transparent)]
    NonArch(#[from] NonArchError),
}

/// Ternary prefix over `{0,2}`; the empty address is the whole Cantor set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Address(String);

impl Address {
    pub fn new(digits: &str) -> Result<Self, CantorError> {
        if digits.bytes().all(|b| b == b'0' || b == b'2') {
            Ok(Address(digits.to_string()))
        } else {
            Err(CantorError::BadAddress(digits.to_string()))
        }
    }

    pub fn root() -> Self {
        Address(String::new())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    fn child(&self, digit: char) -> Address {
        let mut s = self.0.clone();
        s.push(digit);
        Address(s)
    }

    /// Address of the sibling cylinder and of the parent, if any.
    fn sibling_and_parent(&self) -> Option<(Address, Address)> {
        let last = self.0.chars().last()?;
        let parent = Address(self.0[..self.0.len() - 1].to_string());
        let sib = parent.child(if last == '0' { '2' } else { '0' });
        Some((sib, parent))
    }

    /// Every address of exactly this depth.
    pub fn all_of_depth(depth: usize) -> Vec<Address> {
        (0..1u64 << depth)
            .map(|bits| Address((0..depth).map(|i| if bits >> (depth - 1 - i) & 1 == 1 { '2' } else { '0' }).collect()))
            .collect()
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("*")
        } else {
            f.write_str(&self.0)
        }
    }
}

/// Finite union of cylinders, kept prefix-free with sibling pairs merged.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CantorEvent {
    cylinders: BTreeSet<Address>,
}

impl CantorEvent {
    pub fn empty() -> Self {
        CantorEvent::default()
    }

    pub fn full() -> Self {
        CantorEvent { cylinders: [Address::root()].into() }
    }

    pub fn normalize(addresses: impl IntoIterator<Item = Address>) -> Self {
        let raw: BTreeSet<Address> = addresses.into_iter().collect();
        let mut set: BTreeSet<Address> =
            raw.iter().filter(|a| !raw.iter().any(|b| b != *a && b.is_prefix_of(a))).cloned().collect();
        loop {
            let merge = set.iter().find_map(|a| {
                let (sib, parent) = a.sibling_and_parent()?;
                set.contains(&sib).then_some((a.clone(), sib, parent))
            });
            let Some((a, sib, parent)) = merge else { break };
            set.remove(&a);
            set.remove(&sib);
            set.insert(parent);
        }
        CantorEvent { cylinders: set }
    }

    pub fn cylinder(digits: &str) -> Result<Self, CantorError> {
        Ok(Self::normalize([Address::new(digits)?]))
    }

    pub fn from_addresses<'a>(digits: impl IntoIterator<Item = &'a str>) -> Result<Self, CantorError> {
        let addrs = digits.into_iter().map(Address::new).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::normalize(addrs))
    }

    pub fn cylinders(&self) -> impl Iterator<Item = &Address> {
        self.cylinders.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.cylinders.iter().map(Address::depth).max().unwrap_or(0)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::normalize(self.cylinders.iter().chain(&other.cylinders).cloned())
    }

    /// Two cylinders meet iff one address prefixes the other; the
    /// intersection is then the longer one.
    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.cylinders {
            for b in &other.cylinders {
                if a.is_prefix_of(b) {
                    out.push(b.clone());
                } else if b.is_prefix_of(a) {
                    out.push(a.clone());
                }
            }
        }
        Self::normalize(out)
    }

    pub fn complement(&self) -> Self {
        fn walk(at: Address, set: &BTreeSet<Address>, out: &mut Vec<Address>) {
            if set.contains(&at) {
                return;
            }
            if !set.iter().any(|a| at.is_prefix_of(a)) {
                out.push(at);
                return;
            }
            walk(at.child('0'), set, out);
            walk(at.child('2'), set, out);
        }
        let mut out = Vec::new();
        walk(Address::root(), &self.cylinders, &mut out);
        Self::normalize(out)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }
}

impl fmt::Display for CantorEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.cylinders.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            a.fmt(f)?;
        }
        f.write_str("}")
    }
}

/// `{0,02,22}`; `*` names the empty address, `{}` the empty event.
impl FromStr for CantorEvent {
    type Err = CantorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| CantorError::Syntax(format!("expected a braced list, got `{s}`")))?;
        if inner.trim().is_empty() {
            return Ok(Self::empty());
        }
        let addrs = inner
            .split(',')
            .map(|a| match a.trim() {
                "*" => Ok(Address::root()),
                "" => Err(CantorError::Syntax("empty list entry".into())),
                d => Address::new(d),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::normalize(addrs))
    }
}

fn pow2_inv(n: usize) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(1) << n)
}

/// Hausdorff measure at the Cantor dimension, normalized to one on the
/// whole set: the sum of `2^-depth` over cylinders.
pub fn hausdorff_measure(e: &CantorEvent) -> Rational {
    e.cylinders.iter().fold(Rational::zero(), |acc, a| acc + pow2_inv(a.depth()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorModel {
    generator: Generator,
}

impl Default for CantorModel {
    fn default() -> Self {
        Self::new()
    }
}

impl CantorModel {
    /// Uses `c` for `2^-m`.
    pub fn new() -> Self {
        CantorModel { generator: Generator::new("c") }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// `|Ω| = 2^m = 1/c`.
    pub fn sample_size(&self) -> NonArchValue {
        NonArchValue::monomial(self.generator.clone(), Rational::from_integer(1.into()), -1)
    }

    /// Number of depth-`m` points in the event: `sum 2^-n / c`.
    pub fn count(&self, e: &CantorEvent) -> NonArchValue {
        e.cylinders.iter().fold(NonArchValue::zero(self.generator.clone()), |acc, a| {
            let points = NonArchValue::monomial(self.generator.clone(), pow2_inv(a.depth()), -1);
            acc.try_add(&points).expect("same generator")
        })
    }

    /// `P(A) = |A| / |Ω|`.
    pub fn cantor_probability(&self, e: &CantorEvent) -> NonArchValue {
        self.count(e).try_div(&self.sample_size()).expect("sample size is nonzero")
    }

    /// Mass of a single depth-`m` point: the positive infinitesimal `c`.
    pub fn point_probability(&self) -> NonArchValue {
        NonArchValue::infinitesimal(self.generator.clone())
    }

    pub fn conditional_probability(&self, a: &CantorEvent, b: &CantorEvent) -> Result<NonArchValue, CantorError> {
        if b.is_empty() {
            return Err(CantorError::EmptyCondition);
        }
        Ok(self.cantor_probability(&a.intersect(b)).try_div(&self.cantor_probability(b))?)
    }

    /// Checks `H(A ∩ B) / H(B) = st P(A | B)` exactly, and that the
    /// conditional carries no infinitesimal part.
    pub fn coherence_check(&self, a: &CantorEvent, b: &CantorEvent) -> Result<PropertyReport, CantorError> {
        let cond = self.conditional_probability(a, b)?;
        let hausdorff = hausdorff_measure(&a.intersect(b)) / hausdorff_measure(b);
        let st = cond.standard_part()?;
        let mut r = PropertyReport::new("Co_H");
        r.check(st == hausdorff && cond.is_constant(), || {
            format!("A = {a}, B = {b}: H ratio {hausdorff}, P(A|B) = {cond}")
        });
        r.witness(format!("A = {a}, B = {b}: H ratio {hausdorff} = P(A|B) {st}"));
        Ok(r)
    }
}
