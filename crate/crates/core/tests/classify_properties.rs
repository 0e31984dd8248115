mod common;

use metricomp::classify::{classify, compact_support_index, Case, CategoryDescriptor, Probe};
use metricomp::derived::SplitObject;
use metricomp::field::FieldDescriptor;
use metricomp::indec::RingDescriptor;
use metricomp::metric::MetricNF;
use metricomp::thick::{LocalisationModel, ThickDescriptor};
use proptest::prelude::*;
use proptest::sample::select;

fn classifiable() -> Vec<RingDescriptor> {
    vec![
        RingDescriptor::IntegerRing,
        RingDescriptor::Kronecker(FieldDescriptor::Rational),
        RingDescriptor::Kronecker(FieldDescriptor::FiniteField(3)),
        RingDescriptor::Kronecker(FieldDescriptor::SymbolicUncountable),
    ]
}

fn ring_metric() -> impl Strategy<Value = (RingDescriptor, MetricNF)> {
    select(classifiable()).prop_flat_map(|r| common::metric(&r).prop_map(move |m| (r.clone(), m)))
}

fn ring_thick() -> impl Strategy<Value = (RingDescriptor, ThickDescriptor)> {
    select(classifiable()).prop_flat_map(|r| common::thick(&r).prop_map(move |c| (r.clone(), c)))
}

/// Objects from catalog modules in degrees `-2..=2`, one or two summands.
fn samples(r: &RingDescriptor) -> Vec<SplitObject> {
    let mods = common::small_catalog(r);
    let mut out = Vec::new();
    for (i, m) in mods.iter().enumerate() {
        for d in -2..=2 {
            out.push(SplitObject::new(r.clone(), [(d, m.clone())]).unwrap());
            if let Some(n) = mods.get((i * 7 + 3) % mods.len()) {
                out.push(SplitObject::new(r.clone(), [(d, m.clone()), (d + 1, n.clone())]).unwrap());
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constant_metrics_localise((r, c) in ring_thick()) {
        let m = MetricNF::constant(r.clone(), c.clone())?;
        let rep = classify(&r, &m)?;
        if !c.is_countably_generated() {
            prop_assert_eq!(rep.case, Case::II);
            return Ok(());
        }
        prop_assert_eq!(rep.case, Case::I);
        let ok = match (c.localisation_model(&r)?, &rep.category) {
            (LocalisationModel::Base(RingDescriptor::IntegerRing), CategoryDescriptor::DerivedOfLocalizedZ(s)) => s.is_empty(),
            (LocalisationModel::Base(_), CategoryDescriptor::ThickInsideS(d)) => d.is_all(),
            (LocalisationModel::LocalizedZ(s), CategoryDescriptor::DerivedOfLocalizedZ(t)) => s == *t,
            (LocalisationModel::ZeroRing, CategoryDescriptor::ZeroCategory) => true,
            (LocalisationModel::KroneckerTubes { inverted, generators }, CategoryDescriptor::KroneckerLocalisation { points, generators: g }) => {
                inverted == *points && generators == *g
            }
            (LocalisationModel::Perpendicular(seq), CategoryDescriptor::PerpOfExceptional { sequence, .. }) => seq == *sequence,
            _ => false,
        };
        prop_assert!(ok, "{} gave {}", c, rep.category);
    }

    #[test]
    fn members_are_compactly_supported((r, m) in ring_metric()) {
        let rep = classify(&r, &m)?;
        for x in samples(&r) {
            let p = Probe::Object(x.clone());
            if rep.category.is_member(&p) {
                let s = compact_support_index(&p, &m)?;
                prop_assert!(s.index.is_some(), "{} in {} has no compact support for {}", x, rep.category, m);
            }
        }
    }

    #[test]
    fn case_two_lies_in_the_perpendicular((r, m) in ring_metric()) {
        let rep = classify(&r, &m)?;
        if rep.case == Case::II {
            let perp = rep.kernel.right_perp(&r)?;
            for x in samples(&r) {
                if rep.category.is_member(&Probe::Object(x.clone())) {
                    prop_assert!(perp.contains(&x)?, "{} is a member but not in {}", x, perp);
                }
            }
        }
    }

    #[test]
    fn summands_of_members_are_members((r, m) in ring_metric()) {
        let rep = classify(&r, &m)?;
        let xs = samples(&r);
        for x in xs.iter().step_by(3) {
            for y in xs.iter().step_by(5) {
                let s = x.direct_sum(y)?;
                if rep.category.is_member(&Probe::Object(s)) {
                    prop_assert!(rep.category.is_member(&Probe::Object(x.clone())));
                    prop_assert!(rep.category.is_member(&Probe::Object(y.clone())));
                }
            }
        }
    }

    #[test]
    fn integer_kernels_are_countable(m in common::metric(&RingDescriptor::IntegerRing)) {
        let rep = classify(&RingDescriptor::IntegerRing, &m)?;
        prop_assert!(rep.countably_generated);
        if rep.case == Case::II {
            prop_assert!(!rep.converges_uniformly);
        }
    }
}
