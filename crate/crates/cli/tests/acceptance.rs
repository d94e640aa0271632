//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line straight to stderr, so the lines show up even when
//! the harness captures output.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive, Zero};

use spinnerlab::cantor::{Address, CantorEvent, CantorModel};
use spinnerlab::intervals::{frac, sigma_additivity_probe, Interval};
use spinnerlab::lottery::{
    archimedean_regularity_witness, coin_generator, coinflip_probability, shift_compare, CoinEvent, WitnessMode,
};
use spinnerlab::nonarch::Generator;
use spinnerlab::sample::Sampler;
use spinnerlab::spinner::{finite_grid_stabilizer, FiniteGrid, GridModel};
use spinnerlab::{rational, IntervalSet, Magnitude, NonArchValue, Polynomial, Rational, Sign};

const SEED: u64 = 20_261_014;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    start: Instant,
    cases: u64,
    failures: Vec<String>,
}

impl Criterion {
    fn start(id: u32, name: &'static str, limit_ms: u64) -> Self {
        Criterion { id, name, limit: Duration::from_millis(limit_ms), start: Instant::now(), cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(msg());
        }
    }

    fn finish(self) {
        let elapsed = self.start.elapsed();
        let in_time = elapsed <= self.limit;
        let ok = self.failures.is_empty() && in_time;
        let line = format!(
            "acceptance {:>2} {:<28} {} ({} checks, {} ms, limit {} ms)\n",
            self.id,
            self.name,
            if ok { "PASS" } else { "FAIL" },
            self.cases,
            elapsed.as_millis(),
            self.limit.as_millis()
        );
        let _ = std::io::stderr().write_all(line.as_bytes());
        assert!(self.failures.is_empty(), "criterion {} failed: {:#?}", self.id, self.failures);
        assert!(in_time, "criterion {} took {elapsed:?}, limit {:?}", self.id, self.limit);
    }
}

/// Lebesgue length of a union of raw pieces by sweeping the sorted
/// endpoints: a gap between consecutive endpoints counts when its midpoint
/// is covered.
fn sweep_length(pieces: &[Interval]) -> Rational {
    let cuts: BTreeSet<Rational> = pieces.iter().flat_map(|p| [p.left.clone(), p.right.clone()]).collect();
    let cuts: Vec<Rational> = cuts.into_iter().collect();
    cuts.windows(2)
        .filter(|w| {
            let mid = (&w[0] + &w[1]) / rational(2, 1);
            pieces.iter().any(|p| p.contains(&mid))
        })
        .map(|w| &w[1] - &w[0])
        .fold(Rational::zero(), |a, b| a + b)
}

fn eval_poly(p: &Polynomial, x: &Rational) -> Rational {
    p.coeffs().iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Value of a field element at a concrete positive rational.
fn at(v: &NonArchValue, x: &Rational) -> Rational {
    eval_poly(v.numerator(), x) / eval_poly(v.denominator(), x)
}

#[test]
fn c01_ordered_field() {
    let mut c = Criterion::start(1, "ordered field", 5_000);
    let g = Generator::new("eps");
    let mut s = Sampler::new(SEED, 1, 100);
    // Far below every nonzero root of the differences that occur, so the
    // sign at this point is the sign in the field.
    let tiny = Rational::new(BigInt::one(), BigInt::from(10).pow(80u32));
    let probe = rational(3, 7);
    for _ in 0..1000 {
        let (a, b, d) = (s.nonarch_value(&g, 4), s.nonarch_value(&g, 4), s.nonarch_value(&g, 4));
        let sum = a.try_add(&b).unwrap();
        let prod = a.try_mul(&b).unwrap();
        c.check(sum.try_add(&d).unwrap() == a.try_add(&b.try_add(&d).unwrap()).unwrap(), || format!("assoc + {a}, {b}, {d}"));
        c.check(prod.try_mul(&d).unwrap() == a.try_mul(&b.try_mul(&d).unwrap()).unwrap(), || format!("assoc * {a}, {b}, {d}"));
        c.check(sum == b.try_add(&a).unwrap() && prod == b.try_mul(&a).unwrap(), || format!("commutativity {a}, {b}"));
        let left = a.try_mul(&b.try_add(&d).unwrap()).unwrap();
        c.check(left == prod.try_add(&a.try_mul(&d).unwrap()).unwrap(), || format!("distributivity {a}, {b}, {d}"));
        c.check(a.try_sub(&a).unwrap().is_zero(), || format!("a - a for {a}"));
        if !a.is_zero() {
            c.check(a.try_mul(&a.recip().unwrap()).unwrap() == NonArchValue::one(g.clone()), || format!("inverse of {a}"));
        }

        // Evaluation at a generic point is a ring homomorphism.
        let ok_at = |v: &NonArchValue| !eval_poly(v.denominator(), &probe).is_zero();
        if ok_at(&a) && ok_at(&b) && ok_at(&sum) && ok_at(&prod) {
            c.check(at(&sum, &probe) == at(&a, &probe) + at(&b, &probe), || format!("sum value at 3/7: {a}, {b}"));
            c.check(at(&prod, &probe) == at(&a, &probe) * at(&b, &probe), || format!("product value at 3/7: {a}, {b}"));
        }

        let ord = a.try_cmp(&b).unwrap();
        c.check(ord == at(&a, &tiny).cmp(&at(&b, &tiny)), || format!("order of {a} vs {b}"));
        c.check(b.try_cmp(&a).unwrap() == ord.reverse(), || format!("antisymmetry {a}, {b}"));
        if ord == Ordering::Less {
            c.check(a.try_add(&d).unwrap().try_cmp(&b.try_add(&d).unwrap()).unwrap() == Ordering::Less, || {
                format!("a < b but a + c >= b + c: {a}, {b}, {d}")
            });
            if d.is_positive() {
                c.check(a.try_mul(&d).unwrap().try_cmp(&b.try_mul(&d).unwrap()).unwrap() == Ordering::Less, || {
                    format!("a < b, c > 0 but ac >= bc: {a}, {b}, {d}")
                });
            }
        }

        let (la, lb) = (s.limited_value(&g, 4), s.limited_value(&g, 4));
        let st = |v: &NonArchValue| v.standard_part().unwrap();
        let zero = Rational::zero();
        c.check(st(&la) == at(&la, &zero), || format!("st({la}) is not its value at 0"));
        c.check(st(&la.try_add(&lb).unwrap()) == st(&la) + st(&lb), || format!("st additive: {la}, {lb}"));
        c.check(st(&la.try_mul(&lb).unwrap()) == st(&la) * st(&lb), || format!("st multiplicative: {la}, {lb}"));
    }
    c.finish();
}

#[test]
fn c02_spinner_co() {
    let mut c = Criterion::start(2, "spinner Co", 5_000);
    let model = GridModel::new();
    let mut s = Sampler::new(SEED, 2, 50);
    for _ in 0..500 {
        let raw = s.raw_intervals(5);
        let a = IntervalSet::normalize(&raw).unwrap();
        let expected = sweep_length(&raw);
        let st = model.grid_probability(&a).standard_part();
        c.check(st.as_ref() == Ok(&expected), || format!("A = {a}: st(P(A)) = {st:?}, L(A) = {expected}"));
    }
    c.finish();
}

#[test]
fn c03_regularity() {
    let mut c = Criterion::start(3, "Reg", 1_000);
    let model = GridModel::new();
    let eps = NonArchValue::parse("eps", model.generator()).unwrap();
    let mut s = Sampler::new(SEED, 3, 50);
    for _ in 0..200 {
        let x = s.unit();
        let point = IntervalSet::point(x.clone()).unwrap();
        let p = model.grid_probability(&point);
        let class = p.classify();
        c.check(p == eps && class.magnitude == Magnitude::Infinitesimal && class.sign == Sign::Positive, || {
            format!("P({{{x}}}) = {p} ({class})")
        });
        c.check(point.lebesgue_length().value().is_zero(), || format!("L({{{x}}}) != 0"));
    }
    c.finish();
}

#[test]
fn c04_rational_rotations() {
    let mut c = Criterion::start(4, "Sy_Q", 5_000);
    let model = GridModel::new();
    let mut s = Sampler::new(SEED, 4, 50);
    let probes: Vec<Rational> = (0..60).map(|k| rational(k, 60)).chain((0..7).map(|k| rational(k, 7))).collect();
    for _ in 0..500 {
        let a = s.interval_set(5);
        let q = s.rotation();
        let moved = a.translate_mod1(&q);
        let (pa, pm) = (model.grid_probability(&a), model.grid_probability(&moved));
        c.check(pa == pm, || format!("A = {a}, q = {q}: {pa} vs {pm}"));
        let membership = probes.iter().all(|x| a.contains(x) == moved.contains(&frac(&(x + &q))));
        c.check(membership, || format!("A + {q} = {moved} is not the rotated set of {a}"));
    }
    c.finish();
}

#[test]
fn c05_half_open_uniformity() {
    let mut c = Criterion::start(5, "Un_B", 5_000);
    let model = GridModel::new();
    let mut s = Sampler::new(SEED, 5, 50);
    let mut pairs = 0;
    while pairs < 300 {
        let a = s.half_open_set(5);
        let len = sweep_length(a.components());
        if len.is_zero() {
            continue;
        }
        let b = if len.is_one() || s.coin() {
            let t = s.rotation();
            a.translate_mod1(&t)
        } else {
            s.half_open_with_length(&len, 5)
        };
        pairs += 1;
        c.check(a.is_half_open() && b.is_half_open() && sweep_length(b.components()) == len, || {
            format!("bad pair A = {a}, B = {b}")
        });
        let (pa, pb) = (model.grid_probability(&a), model.grid_probability(&b));
        c.check(pa == pb && pa.as_constant() == Some(len.clone()), || format!("A = {a}, B = {b}: {pa} vs {pb}, L = {len}"));
    }
    c.finish();
}

/// Rotations `t` in `[0,1)` with `grid + t = grid`, by direct search.
fn oracle_stabilizer(points: &BTreeSet<Rational>) -> BTreeSet<Rational> {
    let p0 = points.iter().next().unwrap();
    points
        .iter()
        .map(|p| frac(&(p - p0)))
        .filter(|t| points.iter().map(|p| frac(&(p + t))).collect::<BTreeSet<_>>() == *points)
        .collect()
}

#[test]
fn c06_finite_grid_stabilizer() {
    let mut c = Criterion::start(6, "stabilizer", 10_000);
    let mut s = Sampler::new(SEED, 6, 40);
    let mut grids: Vec<(BTreeSet<Rational>, Option<usize>)> =
        (1..=24i64).map(|n| ((0..n).map(|k| rational(k, n)).collect(), Some(n as usize))).collect();
    while grids.len() < 24 + 50 {
        let size = 1 + s.below(12);
        let pts: BTreeSet<Rational> = (0..size).map(|_| s.unit()).collect();
        let uniform = (0..pts.len() as i64).map(|k| rational(k, pts.len() as i64)).collect::<BTreeSet<_>>() == pts;
        if !uniform {
            grids.push((pts, None));
        }
    }
    for (pts, uniform) in &grids {
        let grid = FiniteGrid::from_points(pts.iter().cloned()).unwrap();
        let st = finite_grid_stabilizer(&grid).unwrap();
        let expected = oracle_stabilizer(pts);
        let group: BTreeSet<Rational> = st.elements.iter().cloned().collect();
        c.check(group == expected && st.order == expected.len(), || format!("{pts:?}: {:?} vs {expected:?}", st.elements));
        // A finite subgroup of the circle is generated by its element with
        // the largest denominator.
        let cyclic = expected.iter().any(|g| {
            (0..expected.len()).map(|k| frac(&(g * rational(k as i64, 1)))).collect::<BTreeSet<_>>() == expected
        });
        c.check(st.cyclic && cyclic, || format!("{pts:?}: not cyclic"));
        if let Some(n) = uniform {
            c.check(st.order == *n, || format!("uniform grid {n}: order {}", st.order));
        }
        let w = &st.witness;
        c.check(
            pts.contains(&w.point) && w.image == frac(&(&w.point + &w.rotation)) && !pts.contains(&w.image),
            || format!("{pts:?}: witness {} + {} = {}", w.point, w.rotation, w.image),
        );
    }
    c.finish();
}

#[test]
fn c07_archimedean_witnesses() {
    let mut c = Criterion::start(7, "regularity witnesses", 1_000);
    let one = Rational::one();
    for d in [10i64, 1000, 1_000_000] {
        let eps = rational(1, d);
        for mode in [WitnessMode::UniformPoints, WitnessMode::RationalOrbit] {
            let w = archimedean_regularity_witness(&eps, mode, None).unwrap();
            let n = Rational::from_integer(w.n.clone());
            c.check(w.n == BigInt::from(d + 1), || format!("eps = {eps}: n = {}", w.n));
            c.check(&n * &eps > one && (&n - &one) * &eps <= one && w.product == &n * &eps, || format!("eps = {eps}: bound"));
            if let Some(orbit) = &w.orbit {
                let q = orbit.rotation.denom().to_u64().unwrap();
                let p = orbit.rotation.numer().to_u64().unwrap();
                let residues: HashSet<u64> = (0..orbit.count).map(|k| ((k as u128 * p as u128) % q as u128) as u64).collect();
                c.check(orbit.count == (d + 1) as u64 && residues.len() == orbit.count as usize, || {
                    format!("eps = {eps}: orbit of {} under {} repeats", orbit.count, orbit.rotation)
                });
                if orbit.count <= 1001 {
                    let points: HashSet<Rational> = orbit.points().collect();
                    c.check(points.len() == orbit.count as usize, || format!("eps = {eps}: listed points repeat"));
                }
            }
        }
    }
    let w = archimedean_regularity_witness(&rational(1, 10), WitnessMode::RationalOrbit, Some(&rational(1, 13))).unwrap();
    let points: HashSet<Rational> = w.orbit.as_ref().unwrap().points().collect();
    c.check(points.len() == 11 && w.product == rational(11, 10), || "eps = 1/10, q = 1/13".to_string());
    c.finish();
}

#[test]
fn c08_coin_flip_shift() {
    let mut c = Criterion::start(8, "coin-flip comparison", 1_000);
    let g = coin_generator();
    let h = NonArchValue::infinitesimal(g.clone());
    let base = shift_compare(0, 1);
    c.check(base.ordering == Ordering::Less, || format!("compare(h, 2h) = {:?}", base.ordering));
    c.check(base.ratio == NonArchValue::constant(g.clone(), rational(1, 2)), || format!("ratio {}", base.ratio));
    c.check(base.difference == h.neg(), || format!("difference {}", base.difference));
    let mut prev: Option<NonArchValue> = None;
    for j in 0..=20u64 {
        let p = coinflip_probability(&CoinEvent::all_heads_after(j)).value;
        let expected = h.scale(&Rational::from_integer(BigInt::one() << j));
        c.check(p == expected, || format!("P(allheads>{j}) = {p}"));
        if let Some(q) = &prev {
            c.check(q.try_cmp(&p).unwrap() == Ordering::Less, || format!("not increasing at j = {j}"));
            c.check(p.try_div(q).unwrap().as_constant() == Some(rational(2, 1)), || format!("ratio at j = {j}"));
        }
        prev = Some(p);
    }
    c.finish();
}

fn strings_of_depth(depth: usize) -> Vec<String> {
    (0..1u32 << depth)
        .map(|bits| (0..depth).map(|i| if bits >> (depth - 1 - i) & 1 == 1 { '2' } else { '0' }).collect())
        .collect()
}

/// Hausdorff measure by counting depth-8 cylinders below some address.
fn covered(e: &CantorEvent, fine: &[String]) -> Vec<bool> {
    fine.iter().map(|s| e.cylinders().any(|a| s.starts_with(a.as_str()))).collect()
}

fn random_event(s: &mut Sampler) -> CantorEvent {
    let k = 1 + s.below(4);
    CantorEvent::normalize((0..k).map(|_| {
        let depth = s.below(9) as usize;
        let digits: String = (0..depth).map(|_| if s.coin() { '2' } else { '0' }).collect();
        Address::new(&digits).unwrap()
    }))
}

#[test]
fn c09_cantor_coherence() {
    let mut c = Criterion::start(9, "Cantor coherence", 30_000);
    let model = CantorModel::new();
    let fine = strings_of_depth(8);
    let ratio = |a: &CantorEvent, b: &CantorEvent| {
        let (ca, cb) = (covered(a, &fine), covered(b, &fine));
        let both = ca.iter().zip(&cb).filter(|(x, y)| **x && **y).count();
        rational(both as i64, cb.iter().filter(|y| **y).count() as i64)
    };
    let cylinders: Vec<CantorEvent> = (0..=5).flat_map(Address::all_of_depth).map(|a| CantorEvent::normalize([a])).collect();
    let mut pairs: Vec<(CantorEvent, CantorEvent)> =
        cylinders.iter().flat_map(|a| cylinders.iter().map(move |b| (a.clone(), b.clone()))).collect();
    c.check(pairs.len() == 63 * 63, || format!("{} exhaustive pairs", pairs.len()));
    let mut s = Sampler::new(SEED, 9, 1);
    pairs.extend((0..2000).map(|_| (random_event(&mut s), random_event(&mut s))));
    for (a, b) in &pairs {
        let p = model.conditional_probability(a, b).unwrap();
        let expected = ratio(a, b);
        c.check(p.as_constant() == Some(expected.clone()), || format!("P({a} | {b}) = {p}, H ratio {expected}"));
    }
    c.finish();
}

#[test]
fn c10_sigma_additivity_probe() {
    let mut c = Criterion::start(10, "sigma-additivity probe", 1_000);
    let one = Rational::one();
    let pow = |k: usize| Rational::new(BigInt::one(), BigInt::one() << k);
    let piece = |n: usize| Interval::closed_open(&one - pow(n), &one - pow(n + 1));
    let probe = sigma_additivity_probe(|n| IntervalSet::single(piece(n)).unwrap(), 20, &IntervalSet::full()).unwrap();
    c.check(probe.report.passed(), || format!("{:?}", probe.report.counterexamples));
    for k in 0..=20 {
        let pieces: Vec<Interval> = (0..=k).map(piece).collect();
        c.check(probe.partial_sums[k] == sweep_length(&pieces), || format!("partial sum {k}: {}", probe.partial_sums[k]));
    }
    c.check(*probe.final_residual() == pow(21), || format!("residual {}", probe.final_residual()));
    c.finish();
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinnerlab"))
}

fn golden_transcript(seed: &str) -> String {
    let queries = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/queries.txt")).unwrap();
    let mut out = String::new();
    for q in queries.lines() {
        let o = bin().args(["eval", q]).env("SPINNERLAB_SEED", seed).output().unwrap();
        out.push_str(&format!("$ {q}\n"));
        out.push_str(&String::from_utf8_lossy(&o.stdout));
        out.push_str(&String::from_utf8_lossy(&o.stderr));
        out.push_str(&format!("[exit {}]\n", o.status.code().unwrap_or(-1)));
    }
    out
}

#[test]
fn c11_cli_determinism() {
    let mut c = Criterion::start(11, "CLI determinism and golden", 10_000);
    let expected = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/expected.txt")).unwrap();
    let (first, second) = (golden_transcript("7"), golden_transcript("7"));
    c.check(first == second, || "two seeded runs differ".to_string());
    c.check(first == expected, || format!("golden mismatch:\n{first}"));
    c.check(expected.matches("$ ").count() == 25, || "golden file does not hold 25 queries".to_string());
    for model in ["minimal:", "grid:", "cantor:", "coinflip:", "lottery:"] {
        c.check(expected.contains(&format!("$ {model}")), || format!("no golden query for {model}"));
    }
    for kind in ["syntax error", "type error", "unknown model", "evaluation error"] {
        c.check(expected.contains(kind), || format!("no golden query for {kind}"));
    }

    let suite = |args: &[&str]| bin().arg("suite").args(args).env("SPINNERLAB_SEED", "7").output().unwrap();
    let healthy = suite(&["--json", "--no-timing"]);
    let again = suite(&["--json", "--no-timing"]);
    c.check(healthy.status.code() == Some(0), || format!("healthy suite exited {:?}", healthy.status.code()));
    c.check(healthy.stdout == again.stdout && healthy.stdout.split(|b| *b == b'\n').filter(|l| !l.is_empty()).count() == 10, || {
        "suite output not reproducible".to_string()
    });

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("corrupt.toml");
    std::fs::write(&cfg, "corrupt_oracle = true\n").unwrap();
    let corrupt = suite(&["--config", cfg.to_str().unwrap(), "--no-timing"]);
    c.check(corrupt.status.code() == Some(1), || format!("corrupted suite exited {:?}", corrupt.status.code()));
    let missing = suite(&["--config", dir.path().join("absent.toml").to_str().unwrap()]);
    c.check(missing.status.code() == Some(2), || format!("missing config exited {:?}", missing.status.code()));
    c.finish();
}
