mod common;

use metricomp::cauchy::{
    hocolim_model, inverted_primes, is_cauchy, small_object_sequence, trivialize, MapWitness, ObjectSequence,
};
use metricomp::catalog::sample_points;
use metricomp::classify::{compact_support_index, Probe};
use metricomp::derived::SplitObject;
use metricomp::field::FieldDescriptor;
use metricomp::indec::{Indecomposable, RingDescriptor};
use metricomp::labels::{LabelSet, Universe};
use metricomp::metric::MetricNF;
use metricomp::oracle::{selftest, OracleConfig};
use metricomp::thick::ThickDescriptor;
use proptest::prelude::*;
use proptest::sample::select;

fn z() -> RingDescriptor {
    RingDescriptor::IntegerRing
}

/// `X -> X -> ...` over `Z` with the given multipliers.
fn z_sequence() -> impl Strategy<Value = ObjectSequence> {
    (
        common::object(&z()),
        prop::collection::vec(select(vec![-3i64, -1, 1, 2, 3, 4, 5, 6, 7, 10, 12]), 1..6),
    )
        .prop_map(|(x, fs)| {
            let maps = fs.iter().map(|&m| MapWitness::Multiplication(m)).collect();
            ObjectSequence::new(z(), vec![x; fs.len() + 1], maps).unwrap()
        })
}

/// Fields with element arithmetic, where canonical maps can be written down.
fn kronecker_fields() -> Vec<FieldDescriptor> {
    vec![FieldDescriptor::Rational, FieldDescriptor::FiniteField(3), FieldDescriptor::FiniteField(5)]
}

/// Countably generated regular subcategories with a preprojective start.
fn kronecker_target() -> impl Strategy<Value = (RingDescriptor, ThickDescriptor, u32)> {
    select(kronecker_fields()).prop_flat_map(|f| {
        let r = RingDescriptor::Kronecker(f.clone());
        (
            Just(r),
            common::label_set(Universe::Points(f))
                .prop_map(ThickDescriptor::regular)
                .prop_filter("countably generated", |c| c.is_countably_generated()),
            0u32..3,
        )
    })
}

fn certificate_shape(seq: &ObjectSequence, m: &MetricNF) -> Result<Option<Vec<(u64, usize)>>, TestCaseError> {
    Ok(is_cauchy(seq, m, seq.steps())?.ok().map(|c| c.stabilization))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trivialising_is_idempotent(seq in z_sequence(), b in common::thick(&z())) {
        let once = trivialize(&seq, &b)?;
        prop_assert_eq!(trivialize(&once, &b)?, once.clone());
        for e in once.entries() {
            prop_assert!(e.summands().all(|(_, m)| !b.contains_module(m)));
        }
    }

    #[test]
    fn trivialising_the_kernel_keeps_certificates(seq in z_sequence(), m in common::metric(&z())) {
        let t = trivialize(&seq, &m.kernel_b())?;
        prop_assert_eq!(certificate_shape(&seq, &m)?, certificate_shape(&t, &m)?);
    }

    #[test]
    fn integer_small_objects_are_cauchy(s in common::label_set(Universe::Primes), steps in 1usize..12) {
        let c = ThickDescriptor::torsion(s.clone());
        let m = MetricNF::constant(z(), c.clone())?;
        let start = SplitObject::module(z(), Indecomposable::ZFree)?;
        let seq = small_object_sequence(&z(), &c, &start, steps)?;
        for h in 1..=steps {
            prop_assert!(is_cauchy(&seq, &m, h)?.is_ok(), "horizon {}", h);
        }
        for cone in seq.cones()? {
            prop_assert!(c.contains(&cone)?);
        }
    }

    #[test]
    fn kronecker_small_objects_are_cauchy((r, c, n) in kronecker_target(), steps in 1usize..8) {
        let m = MetricNF::constant(r.clone(), c.clone())?;
        let start = SplitObject::module(r.clone(), Indecomposable::Preprojective(n))?;
        let seq = small_object_sequence(&r, &c, &start, steps)?;
        for h in 1..=steps {
            prop_assert!(is_cauchy(&seq, &m, h)?.is_ok(), "horizon {}", h);
        }
        match (hocolim_model(&seq)?, &c) {
            (Probe::KroneckerColimit(d), ThickDescriptor::Regular(all)) => prop_assert!(d.is_subset(all)),
            (Probe::Object(_), ThickDescriptor::Zero) => {}
            (p, _) => prop_assert!(false, "unexpected colimit {}", p),
        }
    }

    #[test]
    fn colimits_invert_the_used_primes(s in common::label_set(Universe::Primes), steps in 1usize..12) {
        let c = ThickDescriptor::torsion(s.clone());
        let start = SplitObject::module(z(), Indecomposable::ZFree)?;
        let mut previous = LabelSet::empty(Universe::Primes);
        for k in 1..=steps {
            let seq = small_object_sequence(&z(), &c, &start, k)?;
            let inverted = inverted_primes(&seq)?;
            prop_assert!(inverted.is_subset(&s));
            prop_assert!(previous.is_subset(&inverted));
            let expected = if inverted.is_empty() {
                Probe::Object(start.clone())
            } else {
                Probe::LocalizedFree(inverted.clone())
            };
            prop_assert_eq!(hocolim_model(&seq)?, expected);
            previous = inverted;
        }
        if let Some(f) = s.as_finite() {
            if steps >= f.len() {
                prop_assert_eq!(previous, s);
            }
        }
    }
}

#[test]
fn doubling_chain_colimit_is_compactly_supported() {
    let two = LabelSet::primes([2]);
    let c = ThickDescriptor::torsion(two.clone());
    let m = MetricNF::constant(z(), c.clone()).unwrap();
    let seq = small_object_sequence(&z(), &c, &SplitObject::module(z(), Indecomposable::ZFree).unwrap(), 6).unwrap();
    let limit = hocolim_model(&seq).unwrap();
    assert_eq!(limit, Probe::LocalizedFree(two));
    assert!(compact_support_index(&limit, &m).unwrap().index.is_some());
}

#[test]
fn symbolic_chains_need_element_arithmetic() {
    let r = RingDescriptor::Kronecker(FieldDescriptor::SymbolicUncountable);
    let pt = sample_points(&FieldDescriptor::SymbolicUncountable)[0].clone();
    let c = ThickDescriptor::regular(LabelSet::points(FieldDescriptor::SymbolicUncountable, [pt]));
    let start = SplitObject::module(r.clone(), Indecomposable::Preprojective(0)).unwrap();
    assert!(matches!(
        small_object_sequence(&r, &c, &start, 1),
        Err(metricomp::Error::UnsupportedField(_))
    ));
}

#[test]
fn selftest_is_deterministic() {
    let config = OracleConfig {
        max_total_dimension: 4,
        max_generators_z: 2,
        ..OracleConfig::default()
    };
    let first = selftest(&config);
    assert!(first.iter().all(|s| s.failures.is_empty()), "{first:?}");
    assert_eq!(first, selftest(&config));
}
