mod common;

use common::{eqv, lattice_laws, leq};
use metricomp::field::FieldDescriptor;
use metricomp::indec::RingDescriptor;
use metricomp::metric::{BallMembership, Growth, MetricNF, Side};
use proptest::prelude::*;

/// The same metric with a different window growth.
fn regrow(m: &MetricNF, g: &Growth) -> MetricNF {
    let side = |s: &Side| match s {
        Side::Infinite => Side::Infinite,
        Side::Finite(_) => Side::Finite(g.clone()),
    };
    MetricNF::new(
        m.ring().clone(),
        side(m.low()),
        side(m.high()),
        m.below().clone(),
        m.mid().clone(),
        m.above().clone(),
    )
    .expect("chains unchanged")
}

fn kernel_invariance(m: &MetricNF, g: &Growth) -> Result<(), TestCaseError> {
    let n = regrow(m, g);
    prop_assert!(eqv(m, &n), "window growth changed the equivalence class");
    prop_assert_eq!(m.kernel_b(), n.kernel_b());
    let t = m.t_submetric()?;
    prop_assert!(leq(&t, m));
    Ok(())
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(256)
}

macro_rules! lattice_suite {
    ($name:ident, $ring:expr) => {
        mod $name {
            use super::*;

            proptest! {
                #![proptest_config(config())]

                #[test]
                fn laws(
                    (a, b, c) in {
                        let r: RingDescriptor = $ring;
                        (common::metric(&r), common::metric(&r), common::metric(&r))
                    }
                ) {
                    lattice_laws(&a, &b, &c)?;
                }

                #[test]
                fn kernel_is_an_invariant(
                    m in common::metric(&$ring),
                    g in (0u64..4, 1u64..4).prop_map(|(s, t)| Growth::new(vec![], s, t).unwrap()),
                ) {
                    kernel_invariance(&m, &g)?;
                }
            }
        }
    };
}

lattice_suite!(integers, RingDescriptor::IntegerRing);
lattice_suite!(kronecker_rational, RingDescriptor::Kronecker(FieldDescriptor::Rational));
lattice_suite!(kronecker_f3, RingDescriptor::Kronecker(FieldDescriptor::FiniteField(3)));
lattice_suite!(dynkin_a3, RingDescriptor::DynkinAn(3));

proptest! {
    #![proptest_config(config())]

    #[test]
    fn integer_balls_are_decided(
        m in common::metric(&RingDescriptor::IntegerRing),
        x in common::object(&RingDescriptor::IntegerRing),
        n in 1u64..8,
    ) {
        prop_assert_ne!(m.ball_contains(n, &x)?, BallMembership::BoundaryUnknown);
    }

    #[test]
    fn balls_are_shift_stable_and_descend(
        (r, m) in common::ring_and_metric(),
        n in 1u64..6,
    ) {
        let x = common::small_catalog(&r);
        for mo in x.iter().take(12) {
            for d in -2i64..=2 {
                let obj = metricomp::derived::SplitObject::new(r.clone(), [(d, mo.clone())])?;
                // B_{n+1} is contained in B_n.
                if m.ball_contains(n + 1, &obj)? == BallMembership::In {
                    prop_assert_ne!(m.ball_contains(n, &obj)?, BallMembership::Out, "{} at {}", obj, n);
                }
            }
        }
    }
}
