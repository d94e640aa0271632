//! Coin flips, fair lotteries, and the Archimedean impossibility witnesses.
//!
//! A hyperfinite run of `K` fair tosses gives the all-heads event the
//! probability `h = 2^-K`; dropping the first `j` tosses from the
//! constraint multiplies it by `2^j`. A lottery over a hyperfinite ticket set
//! `F` gives each ticket `delta = 1/|F|`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::intervals::frac;
use crate::nonarch::Generator;
use crate::report::PropertyReport;
use crate::{NonArchValue, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LotteryError {
    #[error("a proper part must drop more tosses than the whole ({part} <= {whole})")]
    NotProperPart { whole: u64, part: u64 },
    #[error("a ticket block needs at least one ticket")]
    EmptyBlock,
    #[error("claimed point mass must be positive, got {0}")]
    NonPositiveMass(Rational),
    #[error("orbit rotation {rotation} has order {order}, need more than {n} distinct points")]
    ShortOrbit { rotation: Rational, order: String, n: String },
    #[error("toss positions start at 1")]
    ZeroPosition,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Toss {
    Heads,
    Tails,
}

impl fmt::Display for Toss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Toss::Heads => "H",
            Toss::Tails => "T",
        })
    }
}

/// An event about a hyperfinite toss sequence: finitely many pinned
/// positions, plus optionally "every toss after the first `drop` is heads".
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CoinEvent {
    pub all_heads: bool,
    pub dropped_prefix: u64,
    pub pinned: BTreeMap<u64, Toss>,
}

impl CoinEvent {
    pub fn all_heads_after(j: u64) -> Self {
        CoinEvent { all_heads: true, dropped_prefix: j, pinned: BTreeMap::new() }
    }

    pub fn pinned(pins: impl IntoIterator<Item = (u64, Toss)>) -> Result<Self, LotteryError> {
        let pinned: BTreeMap<u64, Toss> = pins.into_iter().collect();
        if pinned.contains_key(&0) {
            return Err(LotteryError::ZeroPosition);
        }
        Ok(CoinEvent { all_heads: false, dropped_prefix: 0, pinned })
    }

    /// Conjunction of two events. Conflicting pins keep the first and are
    /// reported through [`CoinEvent::intersect`] returning `None`.
    pub fn intersect(&self, other: &CoinEvent) -> Option<CoinEvent> {
        let mut pinned = self.pinned.clone();
        for (&k, &t) in &other.pinned {
            if pinned.insert(k, t).is_some_and(|old| old != t) {
                return None;
            }
        }
        let (all_heads, dropped_prefix) = match (self.all_heads, other.all_heads) {
            (true, true) => (true, self.dropped_prefix.min(other.dropped_prefix)),
            (true, false) => (true, self.dropped_prefix),
            (false, true) => (true, other.dropped_prefix),
            (false, false) => (false, 0),
        };
        Some(CoinEvent { all_heads, dropped_prefix, pinned })
    }
}

impl fmt::Display for CoinEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.all_heads {
            parts.push(if self.dropped_prefix == 0 { "allheads".to_string() } else { format!("allheads>{}", self.dropped_prefix) });
        }
        if !self.pinned.is_empty() {
            let pins: Vec<String> = self.pinned.iter().map(|(k, t)| format!("{k}:{t}")).collect();
            parts.push(format!("pin({})", pins.join(",")));
        }
        if parts.is_empty() {
            parts.push("pin()".to_string());
        }
        f.write_str(&parts.join(" n "))
    }
}

/// Probability of a coin event, with a flag for contradictory constraints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoinProbability {
    pub value: NonArchValue,
    pub consistent: bool,
}

pub fn coin_generator() -> Generator {
    Generator::new("h")
}

fn pow2(e: i64) -> Rational {
    let p = Rational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// Under all-heads with `j` dropped: `2^(j - c) * h`, where `c` counts pins
/// among the dropped tosses. Without all-heads: `2^-(pins)`.
pub fn coinflip_probability(e: &CoinEvent) -> CoinProbability {
    let g = coin_generator();
    if !e.all_heads {
        return CoinProbability { value: NonArchValue::constant(g, pow2(-(e.pinned.len() as i64))), consistent: true };
    }
    let j = e.dropped_prefix;
    if e.pinned.iter().any(|(&k, &t)| k > j && t == Toss::Tails) {
        return CoinProbability { value: NonArchValue::zero(g), consistent: false };
    }
    let pinned_dropped = e.pinned.keys().filter(|&&k| k <= j).count() as i64;
    let value = NonArchValue::monomial(g, pow2(j as i64 - pinned_dropped), 1);
    CoinProbability { value, consistent: true }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShiftComparison {
    pub ordering: Ordering,
    pub ratio: NonArchValue,
    pub difference: NonArchValue,
}

/// Compares all-heads after `j1` dropped tosses against after `j2`.
pub fn shift_compare(j1: u64, j2: u64) -> ShiftComparison {
    let a = coinflip_probability(&CoinEvent::all_heads_after(j1)).value;
    let b = coinflip_probability(&CoinEvent::all_heads_after(j2)).value;
    ShiftComparison {
        ordering: a.try_cmp(&b).expect("same generator"),
        ratio: a.try_div(&b).expect("all-heads has positive probability"),
        difference: a.try_sub(&b).expect("same generator"),
    }
}

/// Internal size `K - j` of the index set after dropping `j` tosses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IndexSize {
    pub unlimited_coeff: i64,
    pub constant: i64,
}

impl IndexSize {
    pub fn after_drop(j: u64) -> Self {
        IndexSize { unlimited_coeff: 1, constant: -(j as i64) }
    }

    /// Order of affine forms in an unlimited `K`: leading coefficient first.
    pub fn cmp_form(&self, other: &IndexSize) -> Ordering {
        self.unlimited_coeff.cmp(&other.unlimited_coeff).then(self.constant.cmp(&other.constant))
    }
}

impl fmt::Display for IndexSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.unlimited_coeff {
            1 => "K".to_string(),
            c => format!("{c}K"),
        };
        match self.constant.cmp(&0) {
            Ordering::Less => write!(f, "{k}-{}", -self.constant),
            Ordering::Equal => f.write_str(&k),
            Ordering::Greater => write!(f, "{k}+{}", self.constant),
        }
    }
}

/// Certifies that dropping more tosses leaves a proper internal part of
/// strictly smaller size.
pub fn part_whole_check(whole_drop: u64, part_drop: u64) -> Result<PropertyReport, LotteryError> {
    if part_drop <= whole_drop {
        return Err(LotteryError::NotProperPart { whole: whole_drop, part: part_drop });
    }
    let whole = IndexSize::after_drop(whole_drop);
    let part = IndexSize::after_drop(part_drop);
    let mut r = PropertyReport::new("part-whole");
    r.check(
        part.unlimited_coeff == whole.unlimited_coeff && part.constant < whole.constant && part.cmp_form(&whole) == Ordering::Less,
        || format!("{part} is not below {whole}"),
    );
    r.witness(format!("part size {part} < whole size {whole}"));
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LotteryModel {
    generator: Generator,
}

impl Default for LotteryModel {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TicketBlock {
    Single,
    Count(u64),
}

impl LotteryModel {
    /// Uses `delta` for `1/|F|`.
    pub fn new() -> Self {
        LotteryModel { generator: Generator::new("delta") }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// `n * delta` for a block of `n` standard tickets.
    pub fn lottery_ticket_probability(&self, block: TicketBlock) -> Result<NonArchValue, LotteryError> {
        let n = match block {
            TicketBlock::Single => 1,
            TicketBlock::Count(0) => return Err(LotteryError::EmptyBlock),
            TicketBlock::Count(n) => n,
        };
        Ok(NonArchValue::monomial(self.generator.clone(), Rational::from_integer(n.into()), 1))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessMode {
    UniformPoints,
    RationalOrbit,
}

/// The orbit `{start + k*rotation mod 1 : 0 <= k < count}`, kept implicit so
/// large witnesses stay cheap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orbit {
    pub start: Rational,
    pub rotation: Rational,
    pub count: u64,
}

impl Orbit {
    pub fn points(&self) -> impl Iterator<Item = Rational> + '_ {
        (0..self.count).map(move |k| frac(&(&self.start + &self.rotation * Rational::from_integer(k.into()))))
    }

    /// Decides pairwise distinctness by sorting the residues `k*p mod q`,
    /// where `rotation = p/q`.
    pub fn pairwise_distinct(&self) -> bool {
        let (p, q) = (self.rotation.numer().mod_floor(self.rotation.denom()), self.rotation.denom().clone());
        let mut residues: Vec<BigInt> = (0..self.count).map(|k| (&p * BigInt::from(k)).mod_floor(&q)).collect();
        residues.sort();
        residues.windows(2).all(|w| w[0] != w[1])
    }
}

/// A certificate that a regular, uniform Archimedean point mass overruns
/// total probability one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegularityWitness {
    pub n: BigInt,
    pub eps: Rational,
    /// `n * eps`, strictly greater than one.
    pub product: Rational,
    pub orbit: Option<Orbit>,
}

/// Prop-style witness: `n = floor(1/eps) + 1` points of common mass `eps`
/// already weigh more than one. In orbit mode the points are a rational
/// rotation orbit of `start`, so translation invariance forces the common
/// mass; the rotation defaults to `1/(n+1)`.
pub fn archimedean_regularity_witness(
    eps: &Rational,
    mode: WitnessMode,
    rotation: Option<&Rational>,
) -> Result<RegularityWitness, LotteryError> {
    if !eps.is_positive() {
        return Err(LotteryError::NonPositiveMass(eps.clone()));
    }
    let n = eps.recip().floor().to_integer() + BigInt::one();
    let product = eps * Rational::from_integer(n.clone());
    let orbit = match mode {
        WitnessMode::UniformPoints => None,
        WitnessMode::RationalOrbit => {
            let rotation = rotation.map(frac).unwrap_or_else(|| Rational::new(BigInt::one(), &n + BigInt::one()));
            if rotation.is_zero() || *rotation.denom() <= n {
                return Err(LotteryError::ShortOrbit {
                    rotation: rotation.clone(),
                    order: rotation.denom().to_string(),
                    n: n.to_string(),
                });
            }
            let count = n.to_u64().expect("orbit sizes fit in u64");
            Some(Orbit { start: Rational::zero(), rotation, count })
        }
    };
    Ok(RegularityWitness { n, eps: eps.clone(), product, orbit })
}

#[derive(Serialize)]
struct WitnessJson {
    n: String,
    eps: String,
    product: String,
    exceeds_one: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    rotation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distinct: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<String>>,
}

/// Orbits longer than this are summarized rather than listed.
pub const MAX_LISTED_POINTS: u64 = 64;

impl RegularityWitness {
    pub fn is_valid(&self) -> bool {
        let one = Rational::one();
        let below = &self.eps * Rational::from_integer(&self.n - BigInt::one());
        self.product > one && below <= one && self.orbit.as_ref().is_none_or(Orbit::pairwise_distinct)
    }

    /// `{n, product, points?}` plus the rotation and distinctness flag in
    /// orbit mode.
    pub fn to_json(&self) -> String {
        let (rotation, distinct, points) = match &self.orbit {
            None => (None, None, None),
            Some(o) => (
                Some(o.rotation.to_string()),
                Some(o.pairwise_distinct()),
                (o.count <= MAX_LISTED_POINTS).then(|| o.points().map(|p| p.to_string()).collect()),
            ),
        };
        let j = WitnessJson {
            n: self.n.to_string(),
            eps: self.eps.to_string(),
            product: self.product.to_string(),
            exceeds_one: self.product > Rational::one(),
            rotation,
            distinct,
            points,
        };
        serde_json::to_string(&j).expect("plain strings serialize")
    }
}
