//! Proptest strategies shared by the property suites.
#![allow(dead_code)]

use metricomp::catalog::{catalog, sample_points, CatalogBounds};
use metricomp::chain::{ChainSchedule, ChainTail, TailKind};
use metricomp::derived::SplitObject;
use metricomp::field::FieldDescriptor;
use metricomp::indec::{Indecomposable, RingDescriptor};
use metricomp::labels::{Label, LabelSet, Universe};
use metricomp::metric::{Growth, MetricNF, Side};
use metricomp::thick::{dynkin_thick_subcategories, ThickDescriptor};
use metricomp::Error;
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

pub const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub fn rings() -> Vec<RingDescriptor> {
    vec![
        RingDescriptor::IntegerRing,
        RingDescriptor::Kronecker(FieldDescriptor::Rational),
        RingDescriptor::Kronecker(FieldDescriptor::FiniteField(3)),
        RingDescriptor::DynkinAn(3),
    ]
}

fn universe_labels(u: &Universe) -> Vec<Label> {
    match u {
        Universe::Primes => SMALL_PRIMES.iter().map(|p| Label::Prime(*p)).collect(),
        Universe::Points(f) => sample_points(f).into_iter().map(Label::Point).collect(),
    }
}

/// Finite, cofinite, tail and finite-plus-tail label sets.
pub fn label_set(u: Universe) -> BoxedStrategy<LabelSet> {
    let labels = universe_labels(&u);
    let n = labels.len();
    (0u8..5, subsequence(labels, 0..=n), 0u64..12)
        .prop_map(move |(shape, picked, t)| match shape {
            0 => LabelSet::finite(u.clone(), picked),
            1 => LabelSet::cofinite(u.clone(), picked),
            2 => LabelSet::tail(u.clone(), t),
            3 => LabelSet::new(u.clone(), false, picked, Some(t)),
            _ => LabelSet::all(u.clone()),
        })
        .boxed()
}

/// Thick subcategories expressible over `ring`.
pub fn thick(ring: &RingDescriptor) -> BoxedStrategy<ThickDescriptor> {
    match ring {
        RingDescriptor::IntegerRing => prop_oneof![
            1 => Just(ThickDescriptor::Zero),
            1 => Just(ThickDescriptor::All),
            6 => label_set(Universe::Primes).prop_map(ThickDescriptor::torsion),
        ]
        .boxed(),
        RingDescriptor::Kronecker(f) => {
            let ring = ring.clone();
            let exceptional = (0u32..4, any::<bool>()).prop_map(move |(n, pre)| {
                let m = if pre { Indecomposable::Preprojective(n) } else { Indecomposable::Preinjective(n) };
                ThickDescriptor::exceptional(&ring, &[m]).expect("preprojectives are exceptional")
            });
            prop_oneof![
                1 => Just(ThickDescriptor::Zero),
                1 => Just(ThickDescriptor::All),
                2 => exceptional,
                6 => label_set(Universe::Points(f.clone())).prop_map(ThickDescriptor::regular),
            ]
            .boxed()
        }
        RingDescriptor::DynkinAn(n) => select(dynkin_thick_subcategories(*n)).boxed(),
        RingDescriptor::LocalizedIntegerRing(_) => unreachable!("not a base ring"),
    }
}

fn tail_kind(ring: &RingDescriptor) -> Option<TailKind> {
    match ring {
        RingDescriptor::IntegerRing => Some(TailKind::Primes),
        RingDescriptor::Kronecker(f) => Some(TailKind::Points(f.clone())),
        _ => None,
    }
}

/// Descending chains: a constant or shrinking tail, below a prefix of joins.
pub fn chain(ring: &RingDescriptor) -> BoxedStrategy<ChainSchedule> {
    let kind = tail_kind(ring);
    let tail = {
        let constant = thick(ring).prop_map(ChainTail::Constant);
        match kind {
            Some(kind) => {
                let fixed = match &kind {
                    TailKind::Primes => label_set(Universe::Primes).prop_map(ThickDescriptor::torsion).boxed(),
                    TailKind::Points(f) => label_set(Universe::Points(f.clone())).prop_map(ThickDescriptor::regular).boxed(),
                };
                let fixed = prop_oneof![1 => Just(ThickDescriptor::Zero), 3 => fixed];
                let shrinking = (fixed, 1u64..4, -2i64..4).prop_map(move |(fixed, scale, shift)| ChainTail::Shrinking {
                    fixed,
                    kind: kind.clone(),
                    scale,
                    shift,
                });
                prop_oneof![constant, shrinking].boxed()
            }
            None => constant.boxed(),
        }
    };
    (tail, prop::collection::vec(thick(ring), 0..3))
        .prop_filter_map("prefix must be representable", |(tail, extra)| {
            let base = ChainSchedule::new(Vec::new(), tail.clone()).ok()?;
            let mut prefix: Vec<ThickDescriptor> = Vec::new();
            let mut below = base.level(1);
            for d in extra.iter().rev() {
                below = below.join(d).ok()?;
                prefix.push(below.clone());
            }
            prefix.reverse();
            ChainSchedule::new(prefix, tail).ok()
        })
        .boxed()
}

pub fn side() -> BoxedStrategy<Side> {
    prop_oneof![
        2 => Just(Side::Infinite),
        1 => Just(Side::Finite(Growth::linear())),
        2 => (prop::collection::vec(0u64..3, 0..3), 0u64..3, 1u64..3)
            .prop_filter_map("growth", |(prefix, start, step)| Growth::new(prefix, start, step).ok().map(Side::Finite)),
    ]
    .boxed()
}

/// Metrics in normal form: the outer chains are joins of the middle chain
/// with arbitrary chains, which keeps the shift-stability constraint.
pub fn metric(ring: &RingDescriptor) -> BoxedStrategy<MetricNF> {
    let r = ring.clone();
    (side(), side(), chain(ring), chain(ring), chain(ring))
        .prop_filter_map("outer chains must be representable", move |(low, high, mid, b, a)| {
            let below = mid.join(&b).ok()?;
            let above = mid.join(&a).ok()?;
            MetricNF::new(r.clone(), low, high, below, mid, above).ok()
        })
        .boxed()
}

pub fn small_catalog(ring: &RingDescriptor) -> Vec<Indecomposable> {
    catalog(
        ring,
        &CatalogBounds {
            max_prime_power: 16,
            max_index: 3,
            max_length: 2,
        },
    )
}

pub fn module(ring: &RingDescriptor) -> BoxedStrategy<Indecomposable> {
    select(small_catalog(ring)).boxed()
}

/// Objects with up to four summands in degrees `-3..=3`.
pub fn object(ring: &RingDescriptor) -> BoxedStrategy<SplitObject> {
    let r = ring.clone();
    prop::collection::vec((-3i64..=3, module(ring)), 0..5)
        .prop_map(move |parts| SplitObject::new(r.clone(), parts).expect("catalog modules fit the ring"))
        .boxed()
}

pub fn ring_and_metric() -> BoxedStrategy<(RingDescriptor, MetricNF)> {
    select(rings()).prop_flat_map(|r| metric(&r).prop_map(move |m| (r.clone(), m))).boxed()
}

pub fn eqv(a: &MetricNF, b: &MetricNF) -> bool {
    a.equivalent(b).expect("same ring")
}

pub fn leq(a: &MetricNF, b: &MetricNF) -> bool {
    a.finer_leq(b).expect("same ring")
}

/// Meets and joins either exist for both argument orders or fail for both
/// with `NotRepresentable`.
fn symmetric(
    op: fn(&MetricNF, &MetricNF) -> metricomp::Result<MetricNF>,
    a: &MetricNF,
    b: &MetricNF,
) -> Result<Option<MetricNF>, TestCaseError> {
    match (op(a, b), op(b, a)) {
        (Ok(x), Ok(y)) => {
            prop_assert!(eqv(&x, &y), "not commutative: {x} vs {y}");
            Ok(Some(x))
        }
        (Err(Error::NotRepresentable(_)), Err(Error::NotRepresentable(_))) => Ok(None),
        (x, y) => Err(TestCaseError::fail(format!("asymmetric results: {x:?} / {y:?}"))),
    }
}

pub fn lattice_laws(a: &MetricNF, b: &MetricNF, c: &MetricNF) -> Result<(), TestCaseError> {
    // Idempotence and reflexivity.
    prop_assert!(eqv(&a.meet(a)?, a));
    prop_assert!(eqv(&a.join(a)?, a));
    prop_assert!(leq(a, a));
    prop_assert!(a.equivalent(a)?);

    let meet = symmetric(MetricNF::meet, a, b)?;
    let join = symmetric(MetricNF::join, a, b)?;
    if let Some(m) = &meet {
        prop_assert!(leq(m, a) && leq(m, b), "meet is not a lower bound");
        if leq(c, a) && leq(c, b) {
            prop_assert!(leq(c, m), "meet is not the greatest lower bound");
        }
        if let Ok(x) = a.join(m) {
            prop_assert!(eqv(&x, a), "absorption a v (a ^ b) failed");
        }
    }
    if let Some(j) = &join {
        prop_assert!(leq(a, j) && leq(b, j), "join is not an upper bound");
        if leq(a, c) && leq(b, c) {
            prop_assert!(leq(j, c), "join is not the least upper bound");
        }
        if let Ok(x) = a.meet(j) {
            prop_assert!(eqv(&x, a), "absorption a ^ (a v b) failed");
        }
    }
    // Associativity where every intermediate exists.
    if let (Some(ab), Ok(bc)) = (&meet, b.meet(c)) {
        if let (Ok(l), Ok(r)) = (ab.meet(c), a.meet(&bc)) {
            prop_assert!(eqv(&l, &r), "meet is not associative");
        }
    }
    if let (Some(ab), Ok(bc)) = (&join, b.join(c)) {
        if let (Ok(l), Ok(r)) = (ab.join(c), a.join(&bc)) {
            prop_assert!(eqv(&l, &r), "join is not associative");
        }
    }
    // Preorder and its equivalence.
    if leq(a, b) && leq(b, c) {
        prop_assert!(leq(a, c), "finer_leq is not transitive");
    }
    prop_assert_eq!(a.equivalent(b)?, leq(a, b) && leq(b, a));
    if a.equivalent(b)? {
        prop_assert_eq!(a.kernel_b(), b.kernel_b());
    }
    Ok(())
}
