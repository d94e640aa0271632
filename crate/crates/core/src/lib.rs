//! Exact models of a fair spinner.
//!
//! Two rival families of models live side by side:
//!
//! * the minimal Archimedean model, Lebesgue measure on the algebra of
//!   rational-endpoint interval sets of `[0,1)` ([`intervals`]);
//! * hyperfinite counting models whose values live in a non-Archimedean
//!   field of rational functions in a formal infinitesimal ([`nonarch`],
//!   [`spinner`], [`cantor`], [`lottery`]).
//!
//! [`query`] is a small event language over all models and [`suites`]
//! bundles the property checks that the command-line tool runs.
//!
//! The field is generic over its coefficient type ([`Scalar`]); the aliases
//! below fix it to arbitrary-precision rationals, which is what every model
//! uses.

pub mod cantor;
pub mod config;
pub mod intervals;
pub mod lottery;
pub mod nonarch;
pub mod query;
pub mod report;
pub mod sample;
mod scalar;
pub mod spinner;
pub mod suites;

pub use scalar::Scalar;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

/// Polynomial with rational coefficients.
pub type Polynomial = nonarch::Poly<Rational>;

/// Element of `Q(g)` for a named infinitesimal generator `g`.
pub type NonArchValue = nonarch::RationalFunction<Rational>;

pub use intervals::{Interval, IntervalSet, MeasureValue};
pub use nonarch::{Classification, Generator, Magnitude, NonArchError, Sign};
pub use report::{PropertyReport, Verdict};

/// `n / d` as a [`Rational`].
pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
