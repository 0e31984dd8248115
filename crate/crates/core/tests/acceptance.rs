//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its running time; the binary exits non-zero if any criterion fails.

mod common;

use std::cell::Cell;
use std::time::{Duration, Instant};

use metricomp::catalog::sample_points;
use metricomp::cauchy::{hocolim_model, is_cauchy, small_object_sequence, MapWitness, ObjectSequence};
use metricomp::chain::{ChainSchedule, ChainTail, TailKind};
use metricomp::classify::{classify, compact_support_index, Case, CategoryDescriptor, CompletionReport, Probe};
use metricomp::derived::{cone_of_module_map, is_unit_after_inverting, ModuleMap, SplitObject};
use metricomp::field::FieldDescriptor;
use metricomp::indec::{Indecomposable, RingDescriptor};
use metricomp::labels::{LabelSet, ProjPoint, Universe};
use metricomp::metric::{Growth, MetricNF, Side};
use metricomp::oracle::{check_cone, selftest, OracleConfig, SuiteResult};
use metricomp::thick::{dynkin_thick_subcategories, ThickDescriptor};
use num_bigint::BigInt;
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestRng, TestRunner};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T>(r: metricomp::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Line {
    id: u32,
    name: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: u32, name: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> Line {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (mut ok, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(b) = budget {
        if elapsed > b {
            ok = false;
            detail = format!("{detail}; exceeded the {b:?} budget");
        }
    }
    Line {
        id,
        name,
        ok,
        detail,
        elapsed,
    }
}

fn z() -> RingDescriptor {
    RingDescriptor::IntegerRing
}

fn z_free() -> SplitObject {
    SplitObject::module(z(), Indecomposable::ZFree).unwrap()
}

fn doubling_example() -> Outcome {
    let two = LabelSet::primes([2]);
    let c = ThickDescriptor::torsion(two.clone());
    let m = lib(MetricNF::constant(z(), c.clone()))?;
    let rep = lib(classify(&z(), &m))?;
    ensure!(rep.case == Case::I, "case {}", rep.case);
    ensure!(rep.category == CategoryDescriptor::DerivedOfLocalizedZ(two.clone()), "category {}", rep.category);
    ensure!(rep.category.to_string() == "D^b(mod Z[1/2])", "category prints as {}", rep.category);

    let steps = 10;
    let seq = lib(small_object_sequence(&z(), &c, &z_free(), steps))?;
    ensure!(
        seq.maps().iter().all(|w| *w == MapWitness::Multiplication(2)),
        "not the doubling chain: {seq}"
    );
    let z2 = SplitObject::module(z(), Indecomposable::torsion(2, 1)).unwrap();
    for (n, cone) in lib(seq.cones())?.iter().enumerate() {
        ensure!(*cone == z2, "cone {} is {cone}", n + 1);
    }
    ensure!(lib(is_cauchy(&seq, &m, steps))?.is_ok(), "not Cauchy");
    let limit = lib(hocolim_model(&seq))?;
    ensure!(limit == Probe::LocalizedFree(two.clone()), "colimit {limit}");
    ensure!(rep.category.is_member(&limit), "{limit} is not in the completion");
    ensure!(
        seq.maps().iter().all(|_| is_unit_after_inverting(&BigInt::from(2), &two)),
        "a map stays non-invertible"
    );
    ensure!(!is_unit_after_inverting(&BigInt::from(2), &LabelSet::primes([3])), "2 inverted by Z[1/3]");
    Ok(format!("{steps} maps *2, cones Z/2, colimit {limit}"))
}

fn tail_example() -> Outcome {
    let tail = lib(ChainSchedule::tail_chain(TailKind::Primes, 1, 0))?;
    let m = lib(MetricNF::pure_chain(z(), tail))?;
    let rep = lib(classify(&z(), &m))?;
    ensure!(rep.case == Case::II, "tail metric gave case {}", rep.case);
    ensure!(
        rep.category == CategoryDescriptor::ThickInsideS(ThickDescriptor::all_torsion()),
        "tail metric gave {}",
        rep.category
    );
    let c = lib(MetricNF::constant(z(), ThickDescriptor::all_torsion()))?;
    let rep2 = lib(classify(&z(), &c))?;
    ensure!(rep2.case == Case::I, "constant torsion gave case {}", rep2.case);
    ensure!(
        rep2.category == CategoryDescriptor::DerivedOfLocalizedZ(LabelSet::all(Universe::Primes)),
        "constant torsion gave {}",
        rep2.category
    );
    ensure!(rep2.category.to_string() == "D^b(mod Q)", "prints as {}", rep2.category);
    Ok(format!("tail: {} / constant: {}", rep.category, rep2.category))
}

fn kronecker_example() -> Outcome {
    let q = FieldDescriptor::Rational;
    let ring = RingDescriptor::Kronecker(q.clone());
    let mut checked = 0;
    for lambda in sample_points(&q) {
        let d = LabelSet::points(q.clone(), [lambda.clone()]);
        let m = lib(MetricNF::constant(ring.clone(), ThickDescriptor::regular(d.clone())))?;
        let rep = lib(classify(&ring, &m))?;
        ensure!(rep.case == Case::I, "{lambda}: case {}", rep.case);
        let expected = SplitObject::module(ring.clone(), Indecomposable::regular(lambda.clone(), 1)).unwrap();
        for n in 1..=5 {
            let f = lib(ModuleMap::canonical_preprojective(q.clone(), n, &lambda))?;
            let cone = lib(cone_of_module_map(&f))?;
            ensure!(cone == expected, "P{} -> P{n} at {lambda}: cone {cone}", n - 1);
            ensure!(lib(check_cone(&f))?, "oracle disagrees on P{} -> P{n} at {lambda}", n - 1);
            checked += 1;
        }
        let seq = lib(ObjectSequence::preprojective_chain(q.clone(), 0, &vec![lambda.clone(); 5]))?;
        ensure!(lib(is_cauchy(&seq, &m, 5))?.is_ok(), "{lambda}: chain is not Cauchy");
        let limit = lib(hocolim_model(&seq))?;
        ensure!(limit == Probe::KroneckerColimit(d), "{lambda}: colimit {limit}");
        ensure!(rep.category.is_member(&limit), "{lambda}: {limit} not in {}", rep.category);
    }
    Ok(format!("{checked} canonical maps with quasi-simple cones"))
}

fn suites(results: &[SuiteResult], names: &[&str]) -> Outcome {
    let mut out = Vec::new();
    for name in names {
        let s = results
            .iter()
            .find(|s| s.name == *name)
            .ok_or_else(|| format!("missing suite {name}"))?;
        ensure!(s.checked > 0, "{name}: nothing checked");
        ensure!(s.failures.is_empty(), "{name}: {} failures, first {}", s.failures.len(), s.failures[0]);
        out.push(format!("{name}: {} checked", s.checked));
    }
    Ok(out.join("; "))
}

fn lattice_laws_per_ring() -> Outcome {
    let mut out = Vec::new();
    for ring in common::rings() {
        let config = Config {
            cases: 256,
            failure_persistence: None,
            ..Config::default()
        };
        let mut runner = TestRunner::new_with_rng(config.clone(), TestRng::deterministic_rng(config.rng_algorithm));
        let count = Cell::new(0usize);
        let strategy = (common::metric(&ring), common::metric(&ring), common::metric(&ring));
        runner
            .run(&strategy, |(a, b, c)| {
                count.set(count.get() + 1);
                common::lattice_laws(&a, &b, &c)
            })
            .map_err(|e| format!("{ring}: {e}"))?;
        ensure!(count.get() >= 200, "{ring}: only {} pairs", count.get());
        out.push(format!("{ring}: {}", count.get()));
    }
    Ok(out.join(", "))
}

/// Window sides, middle chains with at most one prefix step before a
/// constant tail, and outer chains equal to the middle one or to `All`.
fn dynkin_family(n: u32) -> Result<Vec<MetricNF>, String> {
    let ring = RingDescriptor::DynkinAn(n);
    let thick = dynkin_thick_subcategories(n);
    let mut mids = Vec::new();
    for c in &thick {
        mids.push(ChainSchedule::constant(c.clone()));
        for d in &thick {
            if d != c && lib(c.leq(d))? {
                mids.push(lib(ChainSchedule::new(vec![d.clone()], ChainTail::Constant(c.clone())))?);
            }
        }
    }
    let sides = [Side::Infinite, Side::Finite(Growth::linear())];
    let all = ChainSchedule::constant(ThickDescriptor::All);
    let mut out = Vec::new();
    for mid in &mids {
        for low in &sides {
            for high in &sides {
                for below in [mid, &all] {
                    for above in [mid, &all] {
                        if (!low.is_finite() && below != mid) || (!high.is_finite() && above != mid) {
                            continue;
                        }
                        let m = MetricNF::new(
                            ring.clone(),
                            low.clone(),
                            high.clone(),
                            below.clone(),
                            mid.clone(),
                            above.clone(),
                        );
                        out.push(lib(m)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn dynkin_decomposition() -> Outcome {
    let mut out = Vec::new();
    for n in [2, 3] {
        let ring = RingDescriptor::DynkinAn(n);
        let ind = common::small_catalog(&ring);
        let family = dynkin_family(n)?;
        for m in &family {
            let mut acc: Option<MetricNF> = None;
            for x in &ind {
                let gen = lib(ThickDescriptor::generated(&ring, std::slice::from_ref(x)))?;
                let piece = lib(m.meet(&lib(MetricNF::constant(ring.clone(), gen))?))?;
                acc = Some(match acc {
                    None => piece,
                    Some(a) => lib(a.join(&piece))?,
                });
            }
            let joined = acc.expect("A_n has indecomposables");
            ensure!(lib(m.equivalent(&joined))?, "A{n}: {m} decomposes to {joined}");
        }
        out.push(format!("A{n}: {} metrics", family.len()));
    }
    Ok(out.join(", "))
}

fn uncountable_branch() -> Outcome {
    let f = FieldDescriptor::SymbolicUncountable;
    let ring = RingDescriptor::Kronecker(f.clone());
    let all = lib(MetricNF::constant(ring.clone(), ThickDescriptor::all_regular(f.clone())))?;
    let rep = lib(classify(&ring, &all))?;
    ensure!(rep.case == Case::II, "Regular(all) gave case {}", rep.case);
    ensure!(rep.category == CategoryDescriptor::ZeroCategory, "Regular(all) gave {}", rep.category);

    let pts: Vec<ProjPoint> = sample_points(&f).into_iter().take(2).collect();
    let cof = LabelSet::cofinite(Universe::Points(f.clone()), pts.iter().cloned().map(metricomp::labels::Label::Point));
    let m = lib(MetricNF::constant(ring.clone(), ThickDescriptor::regular(cof)))?;
    let rep2 = lib(classify(&ring, &m))?;
    let finite = ThickDescriptor::regular(LabelSet::points(f, pts));
    ensure!(rep2.case == Case::II, "cofinite gave case {}", rep2.case);
    ensure!(rep2.category == CategoryDescriptor::ThickInsideS(finite), "cofinite gave {}", rep2.category);
    Ok(format!("{} / {}", rep.category, rep2.category))
}

fn named_metrics(ring: &RingDescriptor) -> Vec<MetricNF> {
    let mut out = vec![
        MetricNF::aisle(ring.clone()).unwrap(),
        MetricNF::coaisle(ring.clone()).unwrap(),
        MetricNF::t_structure(ring.clone()).unwrap(),
    ];
    let kind = match ring {
        RingDescriptor::IntegerRing => TailKind::Primes,
        RingDescriptor::Kronecker(f) => TailKind::Points(f.clone()),
        _ => unreachable!(),
    };
    out.push(MetricNF::pure_chain(ring.clone(), ChainSchedule::tail_chain(kind, 1, 0).unwrap()).unwrap());
    out
}

fn sample_pool(ring: &RingDescriptor) -> Vec<SplitObject> {
    let mods = common::small_catalog(ring);
    let mut pool = vec![SplitObject::zero(ring.clone())];
    for (i, m) in mods.iter().enumerate() {
        for d in -2..=2 {
            pool.push(SplitObject::new(ring.clone(), [(d, m.clone())]).unwrap());
            let n = &mods[(i * 5 + 1) % mods.len()];
            pool.push(SplitObject::new(ring.clone(), [(d, m.clone()), (d - 1, n.clone())]).unwrap());
        }
    }
    pool
}

fn compact_support(rep: &CompletionReport, m: &MetricNF, pool: &[SplitObject]) -> Result<(usize, usize), String> {
    let members: Vec<&SplitObject> = pool.iter().filter(|x| rep.category.is_member(&Probe::Object((*x).clone()))).take(50).collect();
    ensure!(!members.is_empty(), "{} has no sampled members", rep.category);
    for x in &members {
        let s = lib(compact_support_index(&Probe::Object((*x).clone()), m))?;
        ensure!(s.index.is_some(), "member {x} of {} is not compactly supported for {m}", rep.category);
    }
    let mut rejected = 0;
    if let CategoryDescriptor::ThickInsideS(c) = &rep.category {
        let outside: Vec<Indecomposable> = common::small_catalog(m.ring()).into_iter().filter(|x| !c.contains_module(x)).collect();
        for (i, bad) in outside.iter().cycle().take(if outside.is_empty() { 0 } else { 50 }).enumerate() {
            let base = members[i % members.len()];
            let d = (i % 3) as i64 - 1;
            let extra = SplitObject::new(m.ring().clone(), [(d, bad.clone())]).unwrap();
            let x = lib(base.direct_sum(&extra))?;
            ensure!(!rep.category.is_member(&Probe::Object(x.clone())), "{x} accepted by {}", rep.category);
            rejected += 1;
        }
    }
    Ok((members.len(), rejected))
}

fn compact_support_soundness() -> Outcome {
    let rings = [
        RingDescriptor::IntegerRing,
        RingDescriptor::Kronecker(FieldDescriptor::Rational),
        RingDescriptor::Kronecker(FieldDescriptor::FiniteField(3)),
        RingDescriptor::Kronecker(FieldDescriptor::SymbolicUncountable),
    ];
    let (mut outputs, mut members, mut rejected) = (0, 0, 0);
    for ring in rings {
        let pool = sample_pool(&ring);
        let mut metrics = named_metrics(&ring);
        let config = Config::default();
        let mut runner = TestRunner::new_with_rng(config.clone(), TestRng::deterministic_rng(config.rng_algorithm));
        let strategy = common::metric(&ring);
        for _ in 0..40 {
            metrics.push(strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current());
        }
        for m in &metrics {
            let rep = lib(classify(&ring, m))?;
            let (a, b) = compact_support(&rep, m, &pool)?;
            outputs += 1;
            members += a;
            rejected += b;
        }
    }
    Ok(format!("{outputs} outputs, {members} members supported, {rejected} non-members rejected"))
}

fn main() {
    let second = Duration::from_secs(1);
    let mut lines = vec![
        run(1, "doubling chain over Z", Some(second), doubling_example),
        run(2, "tail metric over Z", Some(second), tail_example),
        run(3, "Kronecker constant tube metric", Some(second), kronecker_example),
    ];
    let start = Instant::now();
    let results = selftest(&OracleConfig::default());
    let oracle_time = start.elapsed();
    let mut hom = run(4, "hom/ext against independent oracles", None, || {
        suites(&results, &["Z hom/ext vs Smith normal form", "quiver hom/ext vs intertwiners"])
    });
    hom.elapsed = oracle_time;
    if oracle_time > Duration::from_secs(60) {
        hom.ok = false;
        hom.detail += "; exceeded the 60s budget";
    }
    lines.push(hom);
    lines.push(run(5, "Euler form and Serre duality", None, || {
        suites(&results, &["Euler form and Serre duality"])
    }));
    lines.push(run(6, "metric lattice laws", None, lattice_laws_per_ring));
    lines.push(run(7, "Dynkin decomposition", Some(Duration::from_secs(30)), dynkin_decomposition));
    lines.push(run(8, "uncountable field branch", None, uncountable_branch));
    lines.push(run(9, "compact-support soundness", None, compact_support_soundness));

    for l in &lines {
        println!(
            "criterion {}: {} {} ({:.2?}) {}",
            l.id,
            if l.ok { "PASS" } else { "FAIL" },
            l.name,
            l.elapsed,
            l.detail
        );
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.ok).map(|l| l.id).collect();
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", lines.len());
}
