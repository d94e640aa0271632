//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;

/// Polynomial with coefficients stored in ascending order of exponent.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient vector and structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Scalar> Poly<C> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.push(c);
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Least exponent with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn lowest_coeff(&self) -> Option<&C> {
        self.order().map(|k| &self.coeffs[k])
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Euclidean division: returns `(q, r)` with `self = q * divisor + r` and
    /// `deg r < deg divisor`.
    ///
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if sd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![C::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let c = rem[i + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * d.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Exact quotient; the caller guarantees `divisor | self`.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(l) if !l.is_one() => self.scale(&(C::one() / l.clone())),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    ///
    /// Runs a primitive pseudo-remainder sequence on integer multiples of the
    /// inputs, which keeps coefficient growth far below that of Euclid's
    /// algorithm over the fractions.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() { other.monic() } else { self.monic() };
        }
        if self.coeffs.len() == 1 || other.coeffs.len() == 1 {
            return Self::one();
        }
        let (mut a, mut b) = (self.primitive_ints(), other.primitive_ints());
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        if coprime_mod_p(&a, &b) {
            return Self::one();
        }
        while !b.is_empty() {
            let r = primitive(pseudo_rem(&a, &b));
            a = b;
            b = r;
        }
        Poly::from_coeffs(a.into_iter().map(|c| C::from_ints(c, C::Int::one())).collect()).monic()
    }

    /// Integer coefficients `n_k` and a common denominator `l` with
    /// `self = sum n_k x^k / l`.
    fn integer_parts(&self) -> (Vec<C::Int>, C::Int) {
        let l = self.coeffs.iter().fold(C::Int::one(), |acc, c| acc.lcm(&c.denom_int()));
        let ints = self.coeffs.iter().map(|c| c.numer_int() * (l.clone() / c.denom_int())).collect();
        (ints, l)
    }

    /// Primitive integer polynomial proportional to `self` (nonzero).
    fn primitive_ints(&self) -> Vec<C::Int> {
        primitive(self.integer_parts().0)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Renders the terms in ascending exponent order using `var` as the
    /// indeterminate, e.g. `3/4 + 5*eps - eps^2`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = c.abs();
            match k {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&mag.to_string());
                        out.push('*');
                    }
                    out.push_str(var);
                    if k > 1 {
                        out.push('^');
                        out.push_str(&k.to_string());
                    }
                }
            }
        }
        out
    }
}

const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, P - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

/// Sufficient test for `gcd(a, b) = 1` over the rationals: when reduction
/// modulo the prime `P` keeps both degrees, a constant gcd modulo `P` forces
/// a constant gcd over the integers.
fn coprime_mod_p<I: Clone + Integer + Signed + FromPrimitive + ToPrimitive>(a: &[I], b: &[I]) -> bool {
    let p = I::from_u64(P);
    let reduce = |v: &[I]| -> Option<Vec<u64>> {
        let p = p.clone()?;
        v.iter().map(|c| c.mod_floor(&p).to_u64()).collect()
    };
    let (Some(mut x), Some(mut y)) = (reduce(a), reduce(b)) else {
        return false;
    };
    if x.last() == Some(&0) || y.last() == Some(&0) {
        return false;
    }
    while !y.is_empty() {
        let inv = inv_mod(*y.last().expect("nonempty"));
        let dy = y.len() - 1;
        while x.len() > dy {
            let k = x.len() - 1 - dy;
            let f = mul_mod(*x.last().expect("nonempty"), inv);
            for (j, yj) in y.iter().enumerate() {
                x[k + j] = (x[k + j] + P - mul_mod(f, *yj)) % P;
            }
            while x.last() == Some(&0) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() == 1
}

fn primitive<I: Clone + Integer + Signed>(v: Vec<I>) -> Vec<I> {
    let g = v.iter().fold(I::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|c| c / g.clone()).collect()
    }
}

/// A nonzero multiple of the remainder of `a` by `b`, `deg a >= deg b`.
fn pseudo_rem<I: Clone + Integer + Signed>(a: &[I], b: &[I]) -> Vec<I> {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r = a.to_vec();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let top = r[r.len() - 1].clone();
        for x in r.iter_mut() {
            *x = x.clone() * lead.clone();
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = r[k + j].clone() - top.clone() * bj.clone();
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

impl<C: Scalar> Add for &Poly<C> {
    type Output = Poly<C>;

    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<C: Scalar> Sub for &Poly<C> {
    type Output = Poly<C>;

    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<C: Scalar> Mul for &Poly<C> {
    type Output = Poly<C>;

    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        // Convolve integer numerators over a common denominator so each
        // output coefficient is reduced once.
        let (a, da) = self.integer_parts();
        let (b, db) = rhs.integer_parts();
        let mut out = vec![C::Int::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        let d = da * db;
        Poly::from_coeffs(out.into_iter().map(|c| C::from_ints(c, d.clone())).collect())
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;

    fn neg(self) -> Poly<C> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}
