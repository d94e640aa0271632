//! Seeded generators for randomized property checks.
//!
//! All randomness flows through one ChaCha stream per check, so identical
//! seeds reproduce identical case lists on every platform.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::intervals::{Interval, IntervalSet};
use crate::nonarch::{Generator, Poly};
use crate::{NonArchValue, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_denominator: u64,
    pub max_components: usize,
    pub corrupt_oracle: bool,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { seed: 0, cases: 200, max_denominator: 50, max_components: 5, corrupt_oracle: false }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    max_den: u64,
}

impl Sampler {
    /// `stream` separates independent checks that share a seed.
    pub fn new(seed: u64, stream: u64, max_denominator: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng, max_den: max_denominator.max(1) }
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n.max(1))
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    fn ratio(n: i64, d: u64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// `k/d` with `1 <= d <= max_den` and `0 <= k < d`.
    pub fn unit(&mut self) -> Rational {
        let d = self.rng.gen_range(1..=self.max_den);
        Self::ratio(self.rng.gen_range(0..d) as i64, d)
    }

    /// `k/d` with `0 <= k <= d`, so `1` is reachable.
    pub fn closed_unit(&mut self) -> Rational {
        let d = self.rng.gen_range(1..=self.max_den);
        Self::ratio(self.rng.gen_range(0..=d) as i64, d)
    }

    /// A rotation amount, deliberately allowed outside `[0,1)`.
    pub fn rotation(&mut self) -> Rational {
        let d = self.rng.gen_range(1..=self.max_den);
        let d_i = d as i64;
        Self::ratio(self.rng.gen_range(-d_i..2 * d_i), d)
    }

    /// Up to `max_components` possibly overlapping pieces with random flags,
    /// including isolated points and pieces reaching `1`.
    pub fn raw_intervals(&mut self, max_components: usize) -> Vec<Interval> {
        let k = self.rng.gen_range(0..=max_components);
        (0..k)
            .map(|_| {
                if self.rng.gen_ratio(1, 5) {
                    return Interval::point(self.unit());
                }
                let (a, b) = (self.closed_unit(), self.closed_unit());
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                Interval::new(a, self.coin(), b, self.coin())
            })
            .collect()
    }

    /// Normalized union of [`Sampler::raw_intervals`].
    pub fn interval_set(&mut self, max_components: usize) -> IntervalSet {
        let raw = self.raw_intervals(max_components);
        IntervalSet::normalize(&raw).expect("sampled endpoints lie in [0,1]")
    }

    /// Union of `[a,b)` pieces only.
    pub fn half_open_set(&mut self, max_components: usize) -> IntervalSet {
        let k = self.rng.gen_range(1..=max_components.max(1));
        let raw: Vec<Interval> = (0..k)
            .filter_map(|_| {
                let (a, b) = (self.closed_unit(), self.closed_unit());
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                (a < b).then(|| Interval::closed_open(a, b))
            })
            .collect();
        IntervalSet::normalize(&raw).expect("sampled endpoints lie in [0,1]")
    }

    /// A half-open set of exactly `length` (in `(0,1)`) with a freshly
    /// sampled component structure: random piece lengths summing to
    /// `length`, random gaps filling the rest, then a random rotation.
    pub fn half_open_with_length(&mut self, length: &Rational, max_components: usize) -> IntervalSet {
        let k = self.rng.gen_range(1..=max_components.max(1));
        let weights = |s: &mut Self| -> Vec<Rational> {
            (0..k).map(|_| Self::ratio(s.rng.gen_range(1..=s.max_den as i64), 1)).collect()
        };
        let pieces = weights(self);
        let gaps = weights(self);
        let total_p: Rational = pieces.iter().cloned().fold(Rational::zero(), |a, b| a + b);
        let total_g: Rational = gaps.iter().cloned().fold(Rational::zero(), |a, b| a + b);
        let rest = Rational::one() - length;
        let mut at = Rational::zero();
        let mut raw = Vec::with_capacity(k);
        for (p, g) in pieces.iter().zip(&gaps) {
            let len = p * length / &total_p;
            raw.push(Interval::closed_open(at.clone(), &at + &len));
            at = &at + &len + g * &rest / &total_g;
        }
        let set = IntervalSet::normalize(&raw).expect("pieces lie in [0,1]");
        let t = self.unit();
        set.translate_mod1(&t)
    }

    fn coefficient(&mut self) -> Rational {
        let d = self.rng.gen_range(1..=100u64);
        Self::ratio(self.rng.gen_range(-100..=100), d)
    }

    fn poly(&mut self, max_degree: usize) -> Poly<Rational> {
        let deg = self.rng.gen_range(0..=max_degree);
        // Sparse coefficients keep low orders varied, including zero ones.
        Poly::from_coeffs((0..=deg).map(|_| if self.rng.gen_ratio(1, 4) { Rational::zero() } else { self.coefficient() }).collect())
    }

    /// Random element of `Q(g)` with numerator and denominator degrees at
    /// most `max_degree` and coefficient denominators at most 100.
    pub fn nonarch_value(&mut self, generator: &Generator, max_degree: usize) -> NonArchValue {
        let num = self.poly(max_degree);
        let mut den = self.poly(max_degree);
        while den.is_zero() {
            den = self.poly(max_degree);
        }
        NonArchValue::from_polys(generator.clone(), num, den).expect("denominator is nonzero")
    }

    /// Random limited element: orders chosen so the valuation is nonnegative.
    pub fn limited_value(&mut self, generator: &Generator, max_degree: usize) -> NonArchValue {
        let v = self.nonarch_value(generator, max_degree);
        if v.is_limited() {
            return v;
        }
        let shift = -v.valuation().expect("unlimited values are nonzero");
        let g = NonArchValue::infinitesimal(generator.clone()).pow(shift as i32).expect("nonzero");
        v.try_mul(&g).expect("same generator")
    }
}
