use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;

use spinnerlab::nonarch::{Poly, RationalFunction};
use spinnerlab::{Generator, Magnitude, NonArchValue, Polynomial, Rational, Sign};

fn coeff() -> impl Strategy<Value = Rational> {
    prop_oneof![
        1 => Just(Rational::zero()),
        3 => (-100i64..=100, 1i64..=100).prop_map(|(n, d)| Rational::new(n.into(), d.into())),
    ]
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(coeff(), 0..=5).prop_map(Poly::from_coeffs)
}

fn value() -> impl Strategy<Value = NonArchValue> {
    (poly(), poly())
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| NonArchValue::from_polys(Generator::new("eps"), n, d).unwrap())
}

fn eval_poly(p: &Polynomial, x: &Rational) -> Rational {
    p.coeffs().iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn at(v: &NonArchValue, x: &Rational) -> Rational {
    eval_poly(v.numerator(), x) / eval_poly(v.denominator(), x)
}

fn tiny() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10).pow(80u32))
}

proptest! {
    #[test]
    fn order_matches_evaluation_near_zero(a in value(), b in value()) {
        let t = tiny();
        prop_assert_eq!(a.try_cmp(&b).unwrap(), at(&a, &t).cmp(&at(&b, &t)));
    }

    #[test]
    fn field_axioms(a in value(), b in value(), c in value()) {
        let add = |x: &NonArchValue, y: &NonArchValue| x.try_add(y).unwrap();
        let mul = |x: &NonArchValue, y: &NonArchValue| x.try_mul(y).unwrap();
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        if !b.is_zero() {
            prop_assert_eq!(mul(&a.try_div(&b).unwrap(), &b), a.clone());
        }
    }

    #[test]
    fn order_is_compatible(a in value(), b in value(), c in value()) {
        if a.try_cmp(&b).unwrap() == Ordering::Less {
            prop_assert_eq!(a.try_add(&c).unwrap().try_cmp(&b.try_add(&c).unwrap()).unwrap(), Ordering::Less);
            if c.is_positive() {
                prop_assert_eq!(a.try_mul(&c).unwrap().try_cmp(&b.try_mul(&c).unwrap()).unwrap(), Ordering::Less);
            }
        }
    }

    #[test]
    fn valuation_rules(a in value(), b in value()) {
        if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
            prop_assert_eq!(a.try_mul(&b).unwrap().valuation(), Some(va + vb));
            let s = a.try_add(&b).unwrap();
            prop_assert!(s.valuation().is_none_or(|v| v >= va.min(vb)));
        }
    }

    #[test]
    fn classification_follows_valuation(a in value()) {
        let c = a.classify();
        match a.valuation() {
            None => prop_assert_eq!(c.sign, Sign::Zero),
            Some(v) if v > 0 => prop_assert_eq!(c.magnitude, Magnitude::Infinitesimal),
            Some(0) => prop_assert_eq!(c.magnitude, Magnitude::LimitedNoninfinitesimal),
            Some(_) => prop_assert_eq!(c.magnitude, Magnitude::Unlimited),
        }
    }

    #[test]
    fn standard_part_is_a_homomorphism(a in value(), b in value()) {
        if a.is_limited() && b.is_limited() {
            let st = |v: &NonArchValue| v.standard_part().unwrap();
            prop_assert_eq!(st(&a), at(&a, &Rational::zero()));
            prop_assert_eq!(st(&a.try_add(&b).unwrap()), st(&a) + st(&b));
            prop_assert_eq!(st(&a.try_mul(&b).unwrap()), st(&a) * st(&b));
            if a.try_cmp(&b).unwrap() != Ordering::Greater {
                prop_assert!(st(&a) <= st(&b));
            }
        } else {
            prop_assert!(a.standard_part().is_err() || a.is_limited());
        }
    }

    #[test]
    fn canonical_form_is_idempotent(a in value()) {
        let again = NonArchValue::from_polys(a.generator().clone(), a.numerator().clone(), a.denominator().clone()).unwrap();
        prop_assert_eq!(&again, &a);
        prop_assert_eq!(NonArchValue::parse(&a.canonical_text(), a.generator()).unwrap(), a.clone());
        if let Some(low) = a.denominator().lowest_coeff() {
            prop_assert!(low.is_one());
        }
    }

    #[test]
    fn scaling_both_polynomials_changes_nothing(n in poly(), d in poly(), k in 1i64..50) {
        prop_assume!(!d.is_zero());
        let g = Generator::new("eps");
        let k = Rational::from_integer(k.into());
        let x = NonArchValue::from_polys(g.clone(), n.clone(), d.clone()).unwrap();
        let y = NonArchValue::from_polys(g, n.scale(&k), d.scale(&k)).unwrap();
        prop_assert_eq!(x, y);
    }
}

#[test]
fn eps_is_below_every_positive_rational() {
    let g = Generator::new("eps");
    let eps = NonArchValue::infinitesimal(g.clone());
    for d in [1i64, 7, 1000, 1_000_000_007] {
        let r = NonArchValue::constant(g.clone(), Rational::new(1.into(), d.into()));
        assert_eq!(eps.try_cmp(&r).unwrap(), Ordering::Less);
    }
}

#[test]
fn generators_do_not_mix() {
    let a = NonArchValue::infinitesimal(Generator::new("eps"));
    let b = NonArchValue::infinitesimal(Generator::new("h"));
    assert!(a.try_add(&b).is_err() && a.try_cmp(&b).is_err());
}

#[test]
fn fixed_precision_coefficients() {
    type Small = RationalFunction<Ratio<i64>>;
    let g = Generator::new("eps");
    let x = Small::from_polys(g.clone(), Poly::from_coeffs(vec![Ratio::new(1, 2), Ratio::one()]), Poly::one()).unwrap();
    let y = x.try_mul(&x).unwrap().try_div(&x).unwrap();
    assert_eq!(x, y);
    assert_eq!(x.standard_part().unwrap(), Ratio::new(1, 2));
    assert_eq!(Small::infinitesimal(g).try_cmp(&x).unwrap(), Ordering::Less);
}
