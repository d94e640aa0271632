//! Randomized, exactly decided checks of the hyperfinite spinner's
//! properties. Every check draws from its own sampler stream.

use num_traits::Zero;

use super::GridModel;
use crate::nonarch::{Magnitude, Sign};
use crate::report::PropertyReport;
use crate::sample::{Sampler, SamplingConfig};
use crate::{NonArchValue, Rational};

fn sampler(cfg: &SamplingConfig, stream: u64) -> Sampler {
    Sampler::new(cfg.seed, stream, cfg.max_denominator)
}

/// Reg: every sampled point has probability exactly `eps`, a positive
/// infinitesimal, while the minimal Archimedean model gives it length 0.
pub fn check_reg(model: &GridModel, cfg: &SamplingConfig) -> PropertyReport {
    let mut s = sampler(cfg, 1);
    let mut r = PropertyReport::new("Reg");
    let eps = model.point_mass();
    for _ in 0..cfg.cases {
        let x = s.unit();
        let point = crate::IntervalSet::point(x.clone()).expect("x in [0,1)");
        let p = model.grid_probability(&point);
        let c = p.classify();
        r.check(p == eps && c.magnitude == Magnitude::Infinitesimal && c.sign == Sign::Positive, || {
            format!("P({{{x}}}) = {p} ({c})")
        });
        let l = point.lebesgue_length();
        r.check(l.value().is_zero(), || format!("minimal model: L({{{x}}}) = {l}, expected 0"));
    }
    r.witness(format!("P({{x}}) = {eps} > 0 for every sampled point; minimal model gives L({{x}}) = 0"));
    r
}

/// Tot: every sampled interval set receives a value in `[0,1]`.
pub fn check_tot(model: &GridModel, cfg: &SamplingConfig) -> PropertyReport {
    let mut s = sampler(cfg, 2);
    let mut r = PropertyReport::new("Tot");
    let zero = NonArchValue::zero(model.generator().clone());
    let one = NonArchValue::one(model.generator().clone());
    for _ in 0..cfg.cases {
        let a = s.interval_set(cfg.max_components);
        let p = model.grid_probability(&a);
        let in_range = p.try_cmp(&zero).expect("same generator").is_ge() && p.try_cmp(&one).expect("same generator").is_le();
        r.check(in_range, || format!("P({a}) = {p} outside [0,1]"));
    }
    r
}

/// Co: `st(P(A)) = L(A)`.
pub fn check_co(model: &GridModel, cfg: &SamplingConfig) -> PropertyReport {
    let mut s = sampler(cfg, 3);
    let mut r = PropertyReport::new("Co");
    for _ in 0..cfg.cases {
        let a = s.interval_set(cfg.max_components);
        let p = model.grid_probability(&a);
        let mut oracle = a.lebesgue_length().into_inner();
        if cfg.corrupt_oracle && !a.is_empty() {
            oracle += Rational::new(1.into(), 1000.into());
        }
        match p.standard_part() {
            Ok(st) => r.check(st == oracle, || format!("A = {a}: st(P(A)) = {st}, L(A) = {oracle}")),
            Err(e) => r.check(false, || format!("A = {a}: P(A) = {p}: {e}")),
        }
    }
    r
}

/// Un_h: sets with equally many grid points get equal probabilities.
/// Half of the pairs are rotations of each other so equal counts occur.
pub fn check_un_h(model: &GridModel, cfg: &SamplingConfig) -> PropertyReport {
    let mut s = sampler(cfg, 4);
    let mut r = PropertyReport::new("Un_h");
    let mut equal_counts = 0u64;
    for _ in 0..cfg.cases {
        let a = s.interval_set(cfg.max_components);
        let b = if s.coin() {
            let t = s.rotation();
            a.translate_mod1(&t)
        } else {
            s.interval_set(cfg.max_components)
        };
        let (ca, cb) = (model.grid_count(&a), model.grid_count(&b));
        let (pa, pb) = (model.grid_probability(&a), model.grid_probability(&b));
        if ca == cb {
            equal_counts += 1;
            r.check(pa == pb, || format!("|A| = |B| = {ca} but P(A) = {pa}, P(B) = {pb} (A = {a}, B = {b})"));
        } else {
            r.check(pa != pb, || format!("|A| = {ca} != |B| = {cb} yet P(A) = P(B) = {pa}"));
        }
    }
    r.witness(format!("{equal_counts} pairs with equal counts"));
    r
}

/// Sy_Q: rotation by any rational is a bijection of the grid, so
/// `P(A + q) = P(A)` exactly. This subsumes invariance under grid rotations
/// `k/N`, since every rational is such a rotation when `N = m!`.
pub fn check_sy_q(model: &GridModel, cfg: &SamplingConfig) -> PropertyReport {
    let mut s = sampler(cfg, 5);
    let mut r = PropertyReport::new("Sy_Q");
    for _ in 0..cfg.cases {
        let a = s.interval_set(cfg.max_components);
        let t = s.rotation();
        let moved = a.translate_mod1(&t);
        let (p, pm) = (model.grid_probability(&a), model.grid_probability(&moved));
        r.check(p == pm, || format!("A = {a}, q = {t}: P(A) = {p} but P(A + q) = {pm}"));
    }
    r
}

/// Un_B on the half-open algebra: `P(A) = L(A)` with no infinitesimal part,
/// so equal lengths give identical probabilities. Pairs mix rotations and
/// independently structured sets of the same length.
pub fn check_un_b(model: &GridModel, cfg: &SamplingConfig) -> PropertyReport {
    let mut s = sampler(cfg, 6);
    let mut r = PropertyReport::new("Un_B");
    let mut skipped = 0u64;
    for i in 0..cfg.cases {
        // Every fourth draw is a general set, exercising the half-open filter.
        let a = if i % 4 == 3 { s.interval_set(cfg.max_components) } else { s.half_open_set(cfg.max_components) };
        if a.is_empty() || !a.is_half_open() {
            skipped += 1;
            continue;
        }
        let len = a.lebesgue_length().into_inner();
        let b = if s.coin() || len == Rational::from_integer(1.into()) {
            let t = s.rotation();
            a.translate_mod1(&t)
        } else {
            s.half_open_with_length(&len, cfg.max_components)
        };
        let (pa, pb) = (model.grid_probability(&a), model.grid_probability(&b));
        r.check(
            b.is_half_open() && pa == pb && pa.as_constant().as_ref() == Some(&len),
            || format!("A = {a}, B = {b}, L = {len}: P(A) = {pa}, P(B) = {pb}"),
        );
    }
    r.witness(format!("{skipped} draws outside the half-open algebra skipped"));
    r
}

/// `|A ∪ B| + |A ∩ B| = |A| + |B|` as count forms.
pub fn check_count_additivity(model: &GridModel, cfg: &SamplingConfig) -> PropertyReport {
    let mut s = sampler(cfg, 7);
    let mut r = PropertyReport::new("count-additivity");
    for _ in 0..cfg.cases {
        let a = s.interval_set(cfg.max_components);
        let b = s.interval_set(cfg.max_components);
        let lhs = &model.grid_count(&a.union(&b)) + &model.grid_count(&a.intersect(&b));
        let rhs = &model.grid_count(&a) + &model.grid_count(&b);
        r.check(lhs == rhs, || format!("A = {a}, B = {b}: {lhs} != {rhs}"));
    }
    r
}

/// Reg, Tot, Co, Un_h, Sy_Q and Un_B, in that order.
pub fn property_checks(model: &GridModel, cfg: &SamplingConfig) -> Vec<PropertyReport> {
    vec![
        check_reg(model, cfg),
        check_tot(model, cfg),
        check_co(model, cfg),
        check_un_h(model, cfg),
        check_sy_q(model, cfg),
        check_un_b(model, cfg),
    ]
}

/// All six checks folded into one report.
pub fn run_property_suite(model: &GridModel, cfg: &SamplingConfig) -> PropertyReport {
    let mut out = PropertyReport::new("spinner-hyperfinite");
    for check in property_checks(model, cfg) {
        let summary = format!("{} {} cases", check.verdict, check.cases);
        let name = check.property.clone();
        out.absorb(check);
        out.witness(format!("{name}: {summary}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntervalSet;

    #[test]
    fn default_suite_passes() {
        let model = GridModel::new();
        let report = run_property_suite(&model, &SamplingConfig::default());
        assert!(report.passed(), "{:?}", report.counterexamples);
        assert!(report.counterexamples.is_empty());
        assert!(report.cases > 0);
    }

    #[test]
    fn corrupted_oracle_fails_co() {
        let cfg = SamplingConfig { corrupt_oracle: true, cases: 20, ..Default::default() };
        let r = check_co(&GridModel::new(), &cfg);
        assert!(!r.passed());
        assert!(!r.counterexamples.is_empty());
    }

    #[test]
    fn adversarial_equal_length_different_flags() {
        let model = GridModel::new();
        let a: IntervalSet = "[0,1/2]".parse().unwrap();
        let b: IntervalSet = "[1/2,1)".parse().unwrap();
        assert_eq!(a.lebesgue_length(), b.lebesgue_length());
        let (ca, cb) = (model.grid_count(&a), model.grid_count(&b));
        assert_eq!(ca.to_string(), "1/2*N + 1");
        assert_eq!(cb.to_string(), "1/2*N + 0");
        assert_ne!(ca, cb);
        assert!(!a.is_half_open());
        assert_ne!(model.grid_probability(&a), model.grid_probability(&b));
    }

    #[test]
    fn count_additivity_holds() {
        assert!(check_count_additivity(&GridModel::new(), &SamplingConfig::default()).passed());
    }
}
