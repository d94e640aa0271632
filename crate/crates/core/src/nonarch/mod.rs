//! The ordered field of rational functions in one formal positive
//! infinitesimal.
//!
//! A [`RationalFunction`] is a quotient of polynomials in a named
//! [`Generator`] `g`. The order is the sign of the leading behaviour as
//! `g -> 0+`, which makes `g` smaller than every positive rational and `1/g`
//! larger than every rational. Values are kept in a canonical reduced form so
//! that equality and hashing are structural.

mod parse;
mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::ParseValueError;
pub use poly::Poly;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NonArchError {
    #[error("generator mismatch: cannot combine values in `{left}` and `{right}`")]
    GeneratorMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("no standard part: value is unlimited")]
    Unlimited,
    #[error(transparent)]
    Parse(#[from] ParseValueError),
}

/// A named positive infinitesimal, e.g. `eps` for `1/N` or `h` for `(1/2)^K`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Generator(Arc<str>);

impl Generator {
    pub fn new(name: &str) -> Self {
        Generator(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Magnitude {
    Infinitesimal,
    LimitedNoninfinitesimal,
    Unlimited,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub magnitude: Magnitude,
    pub sign: Sign,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.magnitude {
            Magnitude::Infinitesimal => "infinitesimal",
            Magnitude::LimitedNoninfinitesimal => "limited",
            Magnitude::Unlimited => "unlimited",
        };
        let s = match self.sign {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        };
        write!(f, "{m}-{s}")
    }
}

/// Element of `C(g)`, the field of rational functions in the generator `g`.
///
/// Canonical form: numerator and denominator are coprime, and the
/// denominator's lowest-order nonzero coefficient is exactly one (so in
/// particular positive). Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction<C> {
    generator: Generator,
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Scalar> RationalFunction<C> {
    /// Builds `num / den` and reduces it to canonical form.
    pub fn from_polys(generator: Generator, num: Poly<C>, den: Poly<C>) -> Result<Self, NonArchError> {
        if den.is_zero() {
            return Err(NonArchError::DivisionByZero);
        }
        Ok(Self::canonical(generator, num, den))
    }

    fn canonical(generator: Generator, num: Poly<C>, den: Poly<C>) -> Self {
        if num.is_zero() {
            return Self::zero(generator);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        Self::normalized(generator, num, den)
    }

    /// Scales an already coprime pair so the denominator's lowest
    /// coefficient is one.
    fn normalized(generator: Generator, num: Poly<C>, den: Poly<C>) -> Self {
        if num.is_zero() {
            return Self::zero(generator);
        }
        let low = den.lowest_coeff().expect("denominator is nonzero").clone();
        let (num, den) = if low.is_one() {
            (num, den)
        } else {
            let inv = C::one() / low;
            (num.scale(&inv), den.scale(&inv))
        };
        RationalFunction { generator, num, den }
    }

    pub fn zero(generator: Generator) -> Self {
        RationalFunction { generator, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one(generator: Generator) -> Self {
        Self::constant(generator, C::one())
    }

    /// A generator-free value.
    pub fn constant(generator: Generator, c: C) -> Self {
        RationalFunction { generator, num: Poly::constant(c), den: Poly::one() }
    }

    /// The generator itself, a positive infinitesimal.
    pub fn infinitesimal(generator: Generator) -> Self {
        Self::monomial(generator, C::one(), 1)
    }

    /// `c * g^k` for any integer `k`; negative `k` gives unlimited values.
    pub fn monomial(generator: Generator, c: C, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero(generator);
        }
        let e = k.unsigned_abs() as usize;
        if k >= 0 {
            RationalFunction { generator, num: Poly::monomial(c, e), den: Poly::one() }
        } else {
            RationalFunction { generator, num: Poly::constant(c), den: Poly::monomial(C::one(), e) }
        }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn numerator(&self) -> &Poly<C> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the value does not depend on the generator.
    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.is_one()
    }

    /// The rational value of a generator-free element.
    pub fn as_constant(&self) -> Option<C> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    fn same_generator(&self, other: &Self) -> Result<(), NonArchError> {
        if self.generator == other.generator {
            Ok(())
        } else {
            Err(NonArchError::GeneratorMismatch {
                left: self.generator.name().to_string(),
                right: other.generator.name().to_string(),
            })
        }
    }

    /// Henrici's addition: with `g = gcd(b, d)`, the sum `a/b + c/d` has
    /// numerator `a*(d/g) + c*(b/g)`, and only a factor of `g` can cancel.
    pub fn try_add(&self, other: &Self) -> Result<Self, NonArchError> {
        self.same_generator(other)?;
        let generator = self.generator.clone();
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            return Ok(Self::normalized(generator, num, &self.den * &other.den));
        }
        let (b, d) = (self.den.div_exact(&g), other.den.div_exact(&g));
        let num = &(&self.num * &d) + &(&other.num * &b);
        let h = num.gcd(&g);
        let (num, g) = if h.is_one() { (num, g) } else { (num.div_exact(&h), g.div_exact(&h)) };
        Ok(Self::normalized(generator, num, &(&b * &d) * &g))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NonArchError> {
        self.try_add(&other.neg())
    }

    /// Cross-cancels `(a/b) * (c/d)` through `gcd(a, d)` and `gcd(c, b)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, NonArchError> {
        self.same_generator(other)?;
        Ok(Self::product(self.generator.clone(), (&self.num, &self.den), (&other.num, &other.den)))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, NonArchError> {
        self.same_generator(other)?;
        if other.is_zero() {
            return Err(NonArchError::DivisionByZero);
        }
        Ok(Self::product(self.generator.clone(), (&self.num, &self.den), (&other.den, &other.num)))
    }

    fn product(generator: Generator, (a, b): (&Poly<C>, &Poly<C>), (c, d): (&Poly<C>, &Poly<C>)) -> Self {
        if a.is_zero() || c.is_zero() {
            return Self::zero(generator);
        }
        let cancel = |x: &Poly<C>, y: &Poly<C>| {
            let g = x.gcd(y);
            if g.is_one() {
                (x.clone(), y.clone())
            } else {
                (x.div_exact(&g), y.div_exact(&g))
            }
        };
        let (a, d) = cancel(a, d);
        let (c, b) = cancel(c, b);
        Self::normalized(generator, &a * &c, &b * &d)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { generator: self.generator.clone(), num: -&self.num, den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self, NonArchError> {
        Self::one(self.generator.clone()).try_div(self)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::canonical(self.generator.clone(), self.num.scale(c), self.den.clone())
    }

    /// Integer powers, including negative ones for nonzero values.
    pub fn pow(&self, e: i32) -> Result<Self, NonArchError> {
        let pos = Self::canonical(self.generator.clone(), self.num.pow(e.unsigned_abs()), self.den.pow(e.unsigned_abs()));
        if e >= 0 {
            Ok(pos)
        } else {
            pos.recip()
        }
    }

    /// `ord(num) - ord(den)`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        let n = self.num.order()? as i64;
        let d = self.den.order().expect("denominator is nonzero") as i64;
        Some(n - d)
    }

    pub fn sign(&self) -> Sign {
        // The denominator's lowest coefficient is one, so the numerator's decides.
        match self.num.lowest_coeff() {
            None => Sign::Zero,
            Some(c) if c.is_positive() => Sign::Positive,
            Some(_) => Sign::Negative,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Sign::Negative {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Total order: `a < b` iff `b - a` is positive. Both denominators have
    /// positive lowest coefficient, so the sign of `a - b` is that of the
    /// lowest coefficient of the cross-multiplied numerator difference.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, NonArchError> {
        self.same_generator(other)?;
        let diff = &(&self.num * &other.den) - &(&other.num * &self.den);
        Ok(match diff.lowest_coeff() {
            None => Ordering::Equal,
            Some(c) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        })
    }

    pub fn classify(&self) -> Classification {
        let magnitude = match self.valuation() {
            None => Magnitude::Infinitesimal,
            Some(v) if v >= 1 => Magnitude::Infinitesimal,
            Some(0) => Magnitude::LimitedNoninfinitesimal,
            Some(_) => Magnitude::Unlimited,
        };
        Classification { magnitude, sign: self.sign() }
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.classify().magnitude == Magnitude::Infinitesimal
    }

    pub fn is_limited(&self) -> bool {
        self.classify().magnitude != Magnitude::Unlimited
    }

    /// The unique rational infinitely close to a limited value.
    pub fn standard_part(&self) -> Result<C, NonArchError> {
        match self.valuation() {
            None => Ok(C::zero()),
            Some(v) if v > 0 => Ok(C::zero()),
            Some(0) => {
                // Coprime with equal order forces both orders to be zero.
                Ok(self.num.coeff(0) / self.den.coeff(0))
            }
            Some(_) => Err(NonArchError::Unlimited),
        }
    }

    /// Canonical text: `(numerator) / (denominator)` with ascending terms.
    pub fn canonical_text(&self) -> String {
        let g = self.generator.name();
        format!("({}) / ({})", self.num.render(g), self.den.render(g))
    }

    /// Parses either the canonical text or the compact [`Display`] form.
    /// The generator must be supplied because constants do not name it.
    ///
    /// [`Display`]: fmt::Display
    pub fn parse(text: &str, generator: &Generator) -> Result<Self, NonArchError> {
        parse::parse_value(text, generator)
    }
}

/// Compact rendering: the numerator alone when the denominator is one,
/// otherwise `num/(den)` with multi-term parts parenthesized.
impl<C: Scalar> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.generator.name();
        let num = self.num.render(g);
        if self.den.is_one() {
            return f.write_str(&num);
        }
        let wrap = |p: &Poly<C>, s: String| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 || s.starts_with('-') {
                format!("({s})")
            } else {
                s
            }
        };
        let n = wrap(&self.num, num);
        let d = wrap(&self.den, self.den.render(g));
        write!(f, "{n}/{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Ratio};

    type V = RationalFunction<BigRational>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn eps() -> Generator {
        Generator::new("eps")
    }

    fn v(text: &str) -> V {
        V::parse(text, &eps()).unwrap()
    }

    #[test]
    fn additive_inverse() {
        let e = V::infinitesimal(eps());
        assert!(e.try_add(&e.neg()).unwrap().is_zero());
    }

    #[test]
    fn add_examples() {
        assert_eq!(v("1/2 + 3*eps").try_add(&v("1/2 - eps")).unwrap(), v("1 + 2*eps"));
        let lhs = v("1/(1 - eps)").try_add(&v("-1")).unwrap();
        assert_eq!(lhs, v("eps/(1 - eps)"));
        assert_eq!(lhs.canonical_text(), "(eps) / (1 - eps)");
    }

    #[test]
    fn mul_examples() {
        let e = V::infinitesimal(eps());
        assert_eq!(e.try_mul(&e.recip().unwrap()).unwrap(), V::one(eps()));
        assert_eq!(v("1 + eps").try_mul(&v("1 - eps")).unwrap(), v("1 - eps^2"));
        let h = Generator::new("h");
        let half_h = V::monomial(h.clone(), q(1, 2), 1);
        assert_eq!(V::constant(h.clone(), q(2, 1)).try_mul(&half_h).unwrap(), V::infinitesimal(h));
    }

    #[test]
    fn div_examples() {
        let h = Generator::new("h");
        let one_h = V::infinitesimal(h.clone());
        let two_h = V::monomial(h.clone(), q(2, 1), 1);
        assert_eq!(one_h.try_div(&two_h).unwrap(), V::constant(h, q(1, 2)));
        assert_eq!(v("1 - eps^2").try_div(&v("1 - eps")).unwrap(), v("1 + eps"));
        assert!(v("0").try_div(&v("3 + eps")).unwrap().is_zero());
        assert_eq!(v("1").try_div(&v("0")), Err(NonArchError::DivisionByZero));
    }

    #[test]
    fn generator_mismatch_is_an_error() {
        let a = V::infinitesimal(eps());
        let b = V::infinitesimal(Generator::new("h"));
        assert!(matches!(a.try_add(&b), Err(NonArchError::GeneratorMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(NonArchError::GeneratorMismatch { .. })));
        assert!(matches!(a.try_div(&b), Err(NonArchError::GeneratorMismatch { .. })));
        assert!(matches!(a.try_cmp(&b), Err(NonArchError::GeneratorMismatch { .. })));
    }

    #[test]
    fn compare_examples() {
        let e = V::infinitesimal(eps());
        assert_eq!(e.try_cmp(&V::constant(eps(), q(1, 1_000_000))).unwrap(), Ordering::Less);
        let h = Generator::new("h");
        let (one_h, two_h) = (V::infinitesimal(h.clone()), V::monomial(h, q(2, 1), 1));
        assert_eq!(one_h.try_cmp(&two_h).unwrap(), Ordering::Less);
        let lhs = v("(1 + eps)/(1 - eps)");
        let rhs = v("1 + 2*eps");
        assert_eq!(lhs.try_cmp(&rhs).unwrap(), Ordering::Greater);
        assert_eq!(lhs.try_sub(&rhs).unwrap(), v("2*eps^2/(1 - eps)"));
    }

    #[test]
    fn standard_part_examples() {
        assert_eq!(v("3/4 + 5*eps").standard_part().unwrap(), q(3, 4));
        assert_eq!(v("7").standard_part().unwrap(), q(7, 1));
        assert_eq!(v("eps/(1 - eps)").standard_part().unwrap(), q(0, 1));
        assert_eq!(v("(2 + eps)/(3 - eps^2)").standard_part().unwrap(), q(2, 3));
        assert_eq!(v("1/eps").standard_part(), Err(NonArchError::Unlimited));
    }

    #[test]
    fn classify_examples() {
        let c = v("eps^2/(1 + eps)").classify();
        assert_eq!(c, Classification { magnitude: Magnitude::Infinitesimal, sign: Sign::Positive });
        assert_eq!(v("eps^2/(1 + eps)").valuation(), Some(2));
        let c = v("1/eps").classify();
        assert_eq!(c, Classification { magnitude: Magnitude::Unlimited, sign: Sign::Positive });
        let c = v("0").classify();
        assert_eq!(c, Classification { magnitude: Magnitude::Infinitesimal, sign: Sign::Zero });
        let c = v("-3 + eps").classify();
        assert_eq!(c, Classification { magnitude: Magnitude::LimitedNoninfinitesimal, sign: Sign::Negative });
    }

    #[test]
    fn canonical_denominator_is_normalized() {
        let a = V::from_polys(eps(), Poly::from_coeffs(vec![q(2, 1)]), Poly::from_coeffs(vec![q(0, 1), q(-4, 1)])).unwrap();
        // 2 / (-4 eps) = -1/2 / eps
        assert_eq!(a.denominator().coeffs(), &[q(0, 1), q(1, 1)]);
        assert_eq!(a.numerator().coeffs(), &[q(-1, 2)]);
        assert_eq!(V::from_polys(eps(), Poly::one(), Poly::zero()), Err(NonArchError::DivisionByZero));
    }

    #[test]
    fn canonical_text_round_trip() {
        let a = v("3/4 + 5*eps");
        assert_eq!(a.canonical_text(), "(3/4 + 5*eps) / (1)");
        assert_eq!(v(&a.canonical_text()), a);
        let b = v("(-1 + eps^3)/(2 - eps)");
        assert_eq!(v(&b.canonical_text()), b);
        assert_eq!(v(&b.to_string()), b);
    }

    #[test]
    fn fixed_precision_coefficients() {
        type Small = RationalFunction<Ratio<i64>>;
        let g = Generator::new("eps");
        let e = Small::infinitesimal(g.clone());
        let one = Small::one(g.clone());
        let a = one.try_add(&e).unwrap().try_mul(&one.try_sub(&e).unwrap()).unwrap();
        assert_eq!(a, Small::parse("1 - eps^2", &g).unwrap());
        assert_eq!(a.standard_part().unwrap(), Ratio::from_integer(1));
    }
}
