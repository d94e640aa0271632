//! The registered property suites run by `spinnerlab suite`.
//!
//! Suites run in parallel; results are always reported in registration
//! order, so the JSON-lines stream is reproducible for a fixed config.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cantor::{Address, CantorEvent, CantorModel};
use crate::config::SuiteConfig;
use crate::intervals::{frac, sigma_additivity_probe, Interval, IntervalError};
use crate::lottery::{
    archimedean_regularity_witness, coin_generator, coinflip_probability, part_whole_check, shift_compare, CoinEvent,
    LotteryError, LotteryModel, TicketBlock, WitnessMode,
};
use crate::nonarch::{Generator, Magnitude, Sign};
use crate::report::{PropertyReport, Verdict};
use crate::sample::Sampler;
use crate::spinner::{check_count_additivity, run_property_suite};
use crate::spinner::{finite_grid_stabilizer, FiniteGrid, GridModel};
use crate::{IntervalSet, NonArchValue, Rational};

pub type SuiteFn = fn(&SuiteConfig) -> PropertyReport;

/// Registration order is report order.
pub const SUITES: [(&str, SuiteFn); 10] = [
    ("ordered_field", ordered_field),
    ("minimal_model", minimal_model),
    ("sigma_additivity", sigma_additivity),
    ("spinner_hyperfinite", spinner_hyperfinite),
    ("count_additivity", count_additivity),
    ("stabilizer", stabilizer),
    ("cantor_coherence", cantor_coherence),
    ("archimedean_witness", archimedean_witness),
    ("coinflip_shift", coinflip_shift),
    ("lottery_regularity", lottery_regularity),
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub verdict: Verdict,
    pub cases: u64,
    pub counterexamples: Vec<String>,
    pub witnesses: Vec<String>,
    pub duration_ms: u64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain fields serialize")
    }
}

/// Runs every registered suite, one thread each. With `timing` off every
/// `duration_ms` is `0`, which makes the output byte-for-byte reproducible.
pub fn run_all(cfg: &SuiteConfig, timing: bool) -> Vec<SuiteOutcome> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = SUITES
            .iter()
            .map(|&(name, run)| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let report = run(cfg);
                    let duration_ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
                    SuiteOutcome {
                        suite: name,
                        verdict: report.verdict,
                        cases: report.cases,
                        counterexamples: report.counterexamples,
                        witnesses: report.witnesses,
                        duration_ms,
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

fn sampler(cfg: &SuiteConfig, stream: u64) -> Sampler {
    Sampler::new(cfg.seed, stream, cfg.max_denominator)
}

/// Field axioms, order compatibility, the standard part as an
/// order-preserving ring homomorphism, valuation rules, canonical forms and
/// the failure of the Archimedean property, over `cases` random triples.
pub fn ordered_field(cfg: &SuiteConfig) -> PropertyReport {
    let g = Generator::new("eps");
    let mut s = sampler(cfg, 11);
    let mut r = PropertyReport::new("ordered_field");
    let zero = NonArchValue::zero(g.clone());
    let one = NonArchValue::one(g.clone());
    let eps = NonArchValue::infinitesimal(g.clone());
    let add = |x: &NonArchValue, y: &NonArchValue| x.try_add(y).expect("one generator");
    let mul = |x: &NonArchValue, y: &NonArchValue| x.try_mul(y).expect("one generator");
    let cmp = |x: &NonArchValue, y: &NonArchValue| x.try_cmp(y).expect("one generator");
    for _ in 0..cfg.cases {
        let (a, b, c) = (s.nonarch_value(&g, 4), s.nonarch_value(&g, 4), s.nonarch_value(&g, 4));
        let show = || format!("a = {a}, b = {b}, c = {c}");
        r.check(add(&add(&a, &b), &c) == add(&a, &add(&b, &c)), || format!("+ not associative: {}", show()));
        r.check(mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c)), || format!("* not associative: {}", show()));
        r.check(add(&a, &b) == add(&b, &a) && mul(&a, &b) == mul(&b, &a), || format!("not commutative: {}", show()));
        r.check(mul(&a, &add(&b, &c)) == add(&mul(&a, &b), &mul(&a, &c)), || format!("not distributive: {}", show()));
        r.check(add(&a, &zero) == a && mul(&a, &one) == a && add(&a, &a.neg()) == zero, || {
            format!("identity or negation fails: {}", show())
        });
        if !a.is_zero() {
            let inv = a.recip().expect("nonzero");
            r.check(mul(&a, &inv) == one, || format!("a * a^-1 != 1 for a = {a}"));
        }

        let ab = cmp(&a, &b);
        let diff_sign = a.try_sub(&b).expect("one generator").sign();
        let expected_sign = match ab {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        };
        r.check(cmp(&b, &a) == ab.reverse() && (ab == Ordering::Equal) == (a == b) && diff_sign == expected_sign, || {
            format!("trichotomy fails: {}", show())
        });
        if ab == Ordering::Less {
            r.check(cmp(&add(&a, &c), &add(&b, &c)) == Ordering::Less, || format!("a < b but a + c >= b + c: {}", show()));
            if c.is_positive() {
                r.check(cmp(&mul(&a, &c), &mul(&b, &c)) == Ordering::Less, || format!("a < b, c > 0 but ac >= bc: {}", show()));
            }
        }

        if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
            r.check(mul(&a, &b).valuation() == Some(va + vb), || format!("v(ab) != v(a) + v(b): {}", show()));
            let sum = add(&a, &b);
            r.check(sum.valuation().is_none_or(|v| v >= va.min(vb)), || format!("v(a + b) < min: {}", show()));
        }
        let rebuilt = NonArchValue::from_polys(g.clone(), a.numerator().clone(), a.denominator().clone());
        let reparsed = NonArchValue::parse(&a.canonical_text(), &g);
        r.check(rebuilt.as_ref() == Ok(&a) && reparsed.as_ref() == Ok(&a), || format!("canonical form unstable for {a}"));

        let (la, lb) = (s.limited_value(&g, 4), s.limited_value(&g, 4));
        let st = |x: &NonArchValue| x.standard_part().expect("limited");
        r.check(st(&add(&la, &lb)) == st(&la) + st(&lb) && st(&mul(&la, &lb)) == st(&la) * st(&lb), || {
            format!("st not a homomorphism on a = {la}, b = {lb}")
        });
        if cmp(&la, &lb) != Ordering::Greater {
            r.check(st(&la) <= st(&lb), || format!("a <= b but st(a) > st(b): a = {la}, b = {lb}"));
        }

        let positive = s.unit() + Rational::new(BigInt::one(), BigInt::from(1_000_000));
        let n = Rational::from_integer(BigInt::from(s.below(u64::MAX)));
        r.check(
            cmp(&eps, &NonArchValue::constant(g.clone(), positive.clone())) == Ordering::Less && cmp(&eps.scale(&n), &one) == Ordering::Less,
            || format!("Archimedean behaviour at r = {positive}, n = {n}"),
        );
    }
    r.witness("eps < r and n*eps < 1 for every sampled rational r > 0 and integer n");
    r
}

/// Lebesgue measure on the rational interval algebra: modularity,
/// translation invariance, Un_a, monotonicity, membership equivalence of
/// raw and normalized forms, and the failure of Reg.
pub fn minimal_model(cfg: &SuiteConfig) -> PropertyReport {
    let mut s = sampler(cfg, 12);
    let mut r = PropertyReport::new("minimal_model");
    let len = |a: &IntervalSet| a.lebesgue_length().into_inner();
    for _ in 0..cfg.cases {
        let (a, b) = (s.interval_set(cfg.max_components), s.interval_set(cfg.max_components));
        let (u, i) = (a.union(&b), a.intersect(&b));
        r.check(len(&u) + len(&i) == len(&a) + len(&b), || format!("modularity fails for A = {a}, B = {b}"));
        r.check(i.is_subset_of(&a) && a.is_subset_of(&u) && len(&i) <= len(&a) && len(&a) <= len(&u), || {
            format!("monotonicity fails for A = {a}, B = {b}")
        });
        let t = s.rotation();
        r.check(len(&a.translate_mod1(&t)) == len(&a), || format!("L(A + {t}) != L(A) for A = {a}"));

        let x = s.unit();
        let point = IntervalSet::point(x.clone()).expect("x in [0,1)");
        r.check(!point.is_empty() && len(&point).is_zero(), || format!("L({{{x}}}) = {}", len(&point)));

        let l = s.unit();
        let starts = (s.unit() * (Rational::one() - &l), s.unit() * (Rational::one() - &l));
        let i1 = Interval::new(starts.0.clone(), s.coin(), &starts.0 + &l, s.coin());
        let i2 = Interval::new(starts.1.clone(), s.coin(), &starts.1 + &l, s.coin());
        let (m1, m2) = (IntervalSet::single(i1).expect("in range"), IntervalSet::single(i2).expect("in range"));
        r.check(len(&m1) == l && len(&m2) == l, || format!("intervals of length {l} measured {} and {}", len(&m1), len(&m2)));

        let raw = s.raw_intervals(cfg.max_components);
        let normalized = IntervalSet::normalize(&raw).expect("sampled endpoints lie in [0,1]");
        let one = Rational::one();
        let raw_contains = |y: &Rational| raw.iter().any(|iv| iv.contains(y) || (y.is_zero() && iv.contains(&one)));
        let dmax = cfg.max_denominator.min(12) as i64;
        let agree = (1..=dmax).all(|d| (0..d).all(|k| {
            let y = Rational::new(k.into(), d.into());
            raw_contains(&y) == normalized.contains(&y)
        }));
        r.check(agree, || format!("membership differs between raw {raw:?} and normalized {normalized}"));
    }
    r.witness("Po holds but Reg fails: every sampled point is a nonempty event of length 0");
    r
}

fn pow2_inv(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// The dyadic family `[1 - 2^-n, 1 - 2^-(n+1))` to depth 20, plus a
/// single-member family, a family of null points and an overlapping family.
pub fn sigma_additivity(_cfg: &SuiteConfig) -> PropertyReport {
    let mut r = PropertyReport::new("sigma_additivity");
    let one = Rational::one();
    let dyadic = |n: usize| {
        IntervalSet::single(Interval::closed_open(&one - pow2_inv(n), &one - pow2_inv(n + 1))).expect("in range")
    };
    match sigma_additivity_probe(dyadic, 20, &IntervalSet::full()) {
        Ok(probe) => {
            let expected = pow2_inv(21);
            let sums_ok = probe.partial_sums.iter().enumerate().all(|(k, s)| *s == &one - pow2_inv(k + 1));
            r.check(sums_ok && *probe.final_residual() == expected, || {
                format!("dyadic depth 20: residual {} (expected {expected})", probe.final_residual())
            });
            r.witness(format!("dyadic depth 20: residual {}", probe.final_residual()));
            r.absorb(probe.report);
        }
        Err(e) => r.check(false, || format!("dyadic family rejected: {e}")),
    }

    let single = |n: usize| if n == 0 { IntervalSet::full() } else { IntervalSet::empty() };
    match sigma_additivity_probe(single, 1, &IntervalSet::full()) {
        Ok(p) => r.check(p.final_residual().is_zero() && p.report.passed(), || format!("single member: residual {}", p.final_residual())),
        Err(e) => r.check(false, || format!("single member rejected: {e}")),
    }

    let points = |n: usize| IntervalSet::point(Rational::new(BigInt::one(), BigInt::from(n + 2))).expect("in range");
    let claimed: IntervalSet = "[0,1/2]".parse().expect("valid literal");
    match sigma_additivity_probe(points, 10, &claimed) {
        Ok(p) => r.check(
            p.partial_sums.iter().all(Zero::is_zero) && *p.final_residual() == Rational::new(1.into(), 2.into()),
            || format!("null points: residual {}", p.final_residual()),
        ),
        Err(e) => r.check(false, || format!("null points rejected: {e}")),
    }

    let overlapping = |n: usize| IntervalSet::single(Interval::closed_open(Rational::zero(), pow2_inv(n))).expect("in range");
    let rejected = matches!(sigma_additivity_probe(overlapping, 3, &IntervalSet::full()), Err(IntervalError::Overlap { .. }));
    r.check(rejected, || "overlapping family accepted".to_string());
    r
}

pub fn spinner_hyperfinite(cfg: &SuiteConfig) -> PropertyReport {
    let mut r = run_property_suite(&GridModel::new(), &cfg.sampling());
    r.property = "spinner_hyperfinite".into();
    r
}

pub fn count_additivity(cfg: &SuiteConfig) -> PropertyReport {
    let mut r = check_count_additivity(&GridModel::new(), &cfg.sampling());
    r.property = "count_additivity".into();
    r
}

/// Random non-uniform grids use denominators up to this bound.
pub const GRID_MAX_DENOMINATOR: u64 = 40;

/// Uniform grids `1..=2*max_grid` and `cases/4` random grids of at most
/// `max_grid` points: the stabilizer is cyclic of order at most the grid
/// size (exactly `n` for uniform grids) and the off-grid witness is valid.
pub fn stabilizer(cfg: &SuiteConfig) -> PropertyReport {
    let mut s = Sampler::new(cfg.seed, 13, GRID_MAX_DENOMINATOR);
    let mut r = PropertyReport::new("stabilizer");
    let mut grids: Vec<(FiniteGrid, Option<usize>)> = (1..=2 * cfg.max_grid.max(1))
        .map(|n| (FiniteGrid::uniform(n as u64).expect("n >= 1"), Some(n)))
        .collect();
    for _ in 0..(cfg.cases / 4).max(1) {
        let size = 1 + s.below(cfg.max_grid.max(1) as u64);
        grids.push((FiniteGrid::from_points((0..size).map(|_| s.unit())).expect("at least one point"), None));
    }
    for (grid, uniform) in &grids {
        let pts: Vec<String> = grid.points().map(|p| p.to_string()).collect();
        let st = match finite_grid_stabilizer(grid) {
            Ok(st) => st,
            Err(e) => {
                r.check(false, || format!("{{{}}}: {e}", pts.join(",")));
                continue;
            }
        };
        let w = &st.witness;
        let witness_ok = !st.elements.contains(&frac(&w.rotation))
            && grid.contains(&w.point)
            && w.image == frac(&(&w.point + &w.rotation))
            && !grid.contains(&w.image);
        r.check(
            st.cyclic && st.order <= grid.len() && uniform.is_none_or(|n| st.order == n) && witness_ok,
            || format!("grid {{{}}}: order {}, cyclic {}, witness {} -> {}", pts.join(","), st.order, st.cyclic, w.point, w.image),
        );
    }
    r.witness(format!("{} grids, every stabilizer cyclic with an off-grid rotation", grids.len()));
    r
}

fn random_cantor_event(s: &mut Sampler, max_depth: usize) -> CantorEvent {
    let k = 1 + s.below(3);
    let addrs: Vec<Address> = (0..k)
        .map(|_| {
            let depth = s.below(max_depth as u64 + 1) as usize;
            let digits: String = (0..depth).map(|_| if s.coin() { '2' } else { '0' }).collect();
            Address::new(&digits).expect("digits are 0 or 2")
        })
        .collect();
    CantorEvent::normalize(addrs)
}

/// Every pair of cylinders of depth at most 5, then `10 * cases` random
/// unions of cylinders of depth at most 8.
pub fn cantor_coherence(cfg: &SuiteConfig) -> PropertyReport {
    let model = CantorModel::new();
    let mut s = sampler(cfg, 14);
    let mut r = PropertyReport::new("cantor_coherence");
    let cylinders: Vec<CantorEvent> =
        (0..=5).flat_map(Address::all_of_depth).map(|a| CantorEvent::normalize([a])).collect();
    let mut pairs: Vec<(CantorEvent, CantorEvent)> =
        cylinders.iter().flat_map(|a| cylinders.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let exhaustive = pairs.len();
    for _ in 0..10 * cfg.cases {
        let a = random_cantor_event(&mut s, 8);
        let b = random_cantor_event(&mut s, 8);
        pairs.push((a, b));
    }
    for (a, b) in &pairs {
        match model.coherence_check(a, b) {
            Ok(sub) => {
                r.cases += sub.cases;
                r.counterexamples.extend(sub.counterexamples);
                if !r.counterexamples.is_empty() {
                    r.verdict = Verdict::Fail;
                }
            }
            Err(e) => r.check(false, || format!("A = {a}, B = {b}: {e}")),
        }
    }
    r.witness(format!("{exhaustive} cylinder pairs of depth <= 5 and {} random pairs", pairs.len() - exhaustive));
    r
}

/// `n = floor(1/eps) + 1` regular points of mass `eps` exceed one, in both
/// the plain and the rotation-orbit form.
pub fn archimedean_witness(cfg: &SuiteConfig) -> PropertyReport {
    let mut s = sampler(cfg, 15);
    let mut r = PropertyReport::new("archimedean_witness");
    let mut eps_list: Vec<Rational> = [10u64, 1000, 1_000_000].iter().map(|&d| Rational::new(1.into(), d.into())).collect();
    for _ in 0..cfg.cases {
        let e = s.unit();
        if e.is_positive() {
            eps_list.push(e);
        }
    }
    for eps in &eps_list {
        for mode in [WitnessMode::UniformPoints, WitnessMode::RationalOrbit] {
            match archimedean_regularity_witness(eps, mode, None) {
                Ok(w) => {
                    let n = Rational::from_integer(w.n.clone());
                    let bound_ok = &n * eps > Rational::one() && (&n - Rational::one()) * eps <= Rational::one();
                    r.check(bound_ok && w.is_valid(), || format!("eps = {eps}: {}", w.to_json()));
                }
                Err(e) => r.check(false, || format!("eps = {eps}: {e}")),
            }
        }
    }
    let zero_rejected = matches!(
        archimedean_regularity_witness(&Rational::zero(), WitnessMode::UniformPoints, None),
        Err(LotteryError::NonPositiveMass(_))
    );
    r.check(zero_rejected, || "eps = 0 accepted".to_string());
    if let Ok(w) = archimedean_regularity_witness(&Rational::new(1.into(), 1000.into()), WitnessMode::UniformPoints, None) {
        r.witness(w.to_json());
    }
    r
}

/// `P(all heads after j) = 2^j h`, strictly increasing in `j` with ratio
/// exactly `1/2`, and dropping tosses yields a proper part.
pub fn coinflip_shift(_cfg: &SuiteConfig) -> PropertyReport {
    let mut r = PropertyReport::new("coinflip_shift");
    let h = NonArchValue::infinitesimal(coin_generator());
    let half = NonArchValue::constant(coin_generator(), Rational::new(1.into(), 2.into()));
    let base = shift_compare(0, 1);
    r.check(base.ordering == Ordering::Less && base.ratio == half && base.difference == h.neg(), || {
        format!("compare(h, 2h): {:?}, ratio {}, difference {}", base.ordering, base.ratio, base.difference)
    });
    for j in 0..=20u64 {
        let c = shift_compare(j, j + 1);
        r.check(c.ordering == Ordering::Less && c.ratio == half, || format!("j = {j}: {:?}, ratio {}", c.ordering, c.ratio));
        let p = coinflip_probability(&CoinEvent::all_heads_after(j)).value;
        let class = p.classify();
        r.check(class.magnitude == Magnitude::Infinitesimal && class.sign == Sign::Positive, || format!("P(allheads>{j}) = {p} ({class})"));
        match part_whole_check(j, j + 1) {
            Ok(pw) => r.absorb(pw),
            Err(e) => r.check(false, || e.to_string()),
        }
        r.check(matches!(part_whole_check(j + 1, j), Err(LotteryError::NotProperPart { .. })), || {
            format!("dropping {j} tosses accepted as a proper part of dropping {}", j + 1)
        });
    }
    r.witness(format!("P(allheads) = {h} < P(allheads>1) = 2*h, ratio 1/2, difference -h"));
    r
}

/// Each ticket has the positive infinitesimal mass `delta`, below every
/// positive rational, and blocks of `n` tickets get `n * delta`.
pub fn lottery_regularity(cfg: &SuiteConfig) -> PropertyReport {
    let model = LotteryModel::new();
    let mut s = sampler(cfg, 16);
    let mut r = PropertyReport::new("lottery_regularity");
    let delta = match model.lottery_ticket_probability(TicketBlock::Single) {
        Ok(d) => d,
        Err(e) => {
            r.check(false, || e.to_string());
            return r;
        }
    };
    let class = delta.classify();
    r.check(class.magnitude == Magnitude::Infinitesimal && class.sign == Sign::Positive, || format!("P(ticket) = {delta} ({class})"));
    for _ in 0..cfg.cases {
        let q = s.unit() + Rational::new(BigInt::one(), BigInt::from(cfg.max_denominator.max(1) + 1));
        let below = delta.try_cmp(&NonArchValue::constant(model.generator().clone(), q.clone())) == Ok(Ordering::Less);
        r.check(below, || format!("delta not below {q}"));
        let n = 1 + s.below(1000);
        match model.lottery_ticket_probability(TicketBlock::Count(n)) {
            Ok(p) => r.check(p == delta.scale(&Rational::from_integer(n.into())) && p.standard_part() == Ok(Rational::zero()), || {
                format!("P(tickets({n})) = {p}")
            }),
            Err(e) => r.check(false, || e.to_string()),
        }
    }
    r.check(model.lottery_ticket_probability(TicketBlock::Count(0)) == Err(LotteryError::EmptyBlock), || {
        "an empty block was accepted".to_string()
    });
    r.witness(format!("P(ticket) = {delta} > 0 with st 0: regular although every ticket is standard-null"));
    r
}
