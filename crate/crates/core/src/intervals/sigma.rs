use num_traits::{Signed, Zero};

use super::{IntervalError, IntervalSet};
use crate::report::PropertyReport;
use crate::Rational;

/// Exact record of a finite-depth countable-additivity probe.
#[derive(Clone, Debug)]
pub struct SigmaProbe {
    pub report: PropertyReport,
    /// `sum_{n <= k} L(A_n)` for `k = 0..=depth`.
    pub partial_sums: Vec<Rational>,
    /// `L(claimed) - partial_sums[k]`.
    pub residuals: Vec<Rational>,
}

impl SigmaProbe {
    pub fn final_residual(&self) -> &Rational {
        self.residuals.last().expect("depth >= 0 yields one entry")
    }
}

/// Checks every prefix `A_0, ..., A_k` (`k <= depth`) of a pairwise disjoint
/// family: the measure of the prefix union equals the sum of the measures,
/// the union stays inside `claimed_union`, and the residual
/// `L(claimed_union) - sum` is nonnegative and nonincreasing.
pub fn sigma_additivity_probe(
    family: impl Fn(usize) -> IntervalSet,
    depth: usize,
    claimed_union: &IntervalSet,
) -> Result<SigmaProbe, IntervalError> {
    let members: Vec<IntervalSet> = (0..=depth).map(family).collect();
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate().skip(i + 1) {
            let common = a.intersect(b);
            if !common.is_empty() {
                return Err(IntervalError::Overlap { first: i, second: j, witness: common.to_string() });
            }
        }
    }

    let target = claimed_union.lebesgue_length().into_inner();
    let mut report = PropertyReport::new("sigma-additivity");
    let mut union = IntervalSet::empty();
    let mut sum = Rational::zero();
    let mut partial_sums = Vec::with_capacity(depth + 1);
    let mut residuals: Vec<Rational> = Vec::with_capacity(depth + 1);
    for (k, a) in members.iter().enumerate() {
        union = union.union(a);
        sum += a.lebesgue_length().into_inner();
        let measured = union.lebesgue_length().into_inner();
        report.check(measured == sum, || format!("k = {k}: L(union) = {measured} but sum = {sum}"));
        report.check(union.is_subset_of(claimed_union), || format!("k = {k}: partial union {union} escapes {claimed_union}"));
        let residual = &target - &sum;
        let monotone = residuals.last().is_none_or(|prev| residual <= *prev);
        report.check(!residual.is_negative() && monotone, || format!("k = {k}: residual {residual} not a decreasing tail"));
        partial_sums.push(sum.clone());
        residuals.push(residual);
    }
    let last = residuals.last().expect("nonempty");
    report.witness(format!("consistent-with-sigma-additivity at depth {depth}; residual {last}"));
    Ok(SigmaProbe { report, partial_sums, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::Interval;
    use crate::rational as q;
    use num_bigint::BigInt;

    fn dyadic(n: usize) -> IntervalSet {
        let two = Rational::from_integer(BigInt::from(2));
        let one = Rational::from_integer(BigInt::from(1));
        let lo = &one - two.pow(-(n as i32));
        let hi = &one - two.pow(-(n as i32) - 1);
        IntervalSet::single(Interval::closed_open(lo, hi)).unwrap()
    }

    #[test]
    fn dyadic_family_geometric_tail() {
        let probe = sigma_additivity_probe(dyadic, 20, &IntervalSet::full()).unwrap();
        assert!(probe.report.passed());
        for (k, s) in probe.partial_sums.iter().enumerate() {
            let expected = q(1, 1) - Rational::new(1.into(), BigInt::from(2).pow(k as u32 + 1));
            assert_eq!(*s, expected);
        }
        assert_eq!(*probe.final_residual(), Rational::new(1.into(), BigInt::from(1u64 << 21)));
    }

    #[test]
    fn single_member_family() {
        let family = |n: usize| if n == 0 { IntervalSet::full() } else { IntervalSet::empty() };
        let probe = sigma_additivity_probe(family, 1, &IntervalSet::full()).unwrap();
        assert!(probe.report.passed());
        assert_eq!(*probe.final_residual(), q(0, 1));
    }

    #[test]
    fn null_points_contribute_nothing() {
        let family = |n: usize| IntervalSet::point(q(1, n as i64 + 1)).unwrap().intersect(&IntervalSet::full());
        let claimed: IntervalSet = "[0,1)".parse().unwrap();
        let probe = sigma_additivity_probe(family, 10, &claimed).unwrap();
        // 1/1 wraps to 0, so every member is a distinct point of [0,1).
        assert!(probe.report.passed());
        assert!(probe.partial_sums.iter().all(|s| *s == q(0, 1)));
        assert_eq!(*probe.final_residual(), q(1, 1));
    }

    #[test]
    fn overlap_is_reported_with_pair() {
        let family = |n: usize| IntervalSet::single(Interval::closed_open(q(0, 1), q(1, n as i64 + 2))).unwrap();
        match sigma_additivity_probe(family, 3, &IntervalSet::full()) {
            Err(IntervalError::Overlap { first, second, .. }) => assert_eq!((first, second), (0, 1)),
            other => panic!("expected overlap, got {other:?}"),
        }
    }
}
