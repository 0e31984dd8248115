//! Completions of the bounded derived category with respect to a metric in
//! normal form, with membership and compact-support tests.
//!
//! With `B` the kernel of the metric: when the metric converges uniformly
//! and `B` is countably generated, the completion is the bounded derived
//! category of the universal localisation killing `B` (case I); otherwise it
//! is `B^⊥` inside the torsion objects over `Z`, or inside the regular
//! objects over the Kronecker quiver (case II).

use std::fmt;

use crate::derived::SplitObject;
use crate::error::{Error, Result};
use crate::indec::{hom_invariants, localized_name, Indecomposable, RingDescriptor};
use crate::labels::{Label, LabelSet, PointSet, PrimeSet, Universe};
use crate::metric::MetricNF;
use crate::thick::{kronecker_generators, LocalisationModel, ThickDescriptor};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryDescriptor {
    /// `D^b(mod Z[S^-1])`.
    DerivedOfLocalizedZ(PrimeSet),
    /// The Kronecker algebra localised at the tubes in `points`, generated by
    /// the colimit object `E` and the remaining tubes.
    KroneckerLocalisation { points: PointSet, generators: Vec<String> },
    /// A thick subcategory of the bounded derived category itself.
    ThickInsideS(ThickDescriptor),
    /// `⊥`-complement of an exceptional sequence: objects `X` with
    /// `Hom(Σ^j E, X) = 0` for every `E` and `j`.
    PerpOfExceptional { sequence: Vec<Indecomposable>, perp: ThickDescriptor },
    ZeroCategory,
}

/// Something whose membership in a completion can be queried: an object of
/// the bounded derived category, or one of the colimit objects produced by
/// Cauchy sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Probe {
    Object(SplitObject),
    /// The free module `Z[S^-1]`, colimit of multiplication by primes in `S`.
    LocalizedFree(PrimeSet),
    /// The colimit `E` of the preprojective chain whose cones lie in the
    /// tubes at the given points.
    KroneckerColimit(PointSet),
}

impl From<SplitObject> for Probe {
    fn from(x: SplitObject) -> Self {
        Probe::Object(x)
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probe::Object(x) => write!(f, "{x}"),
            Probe::LocalizedFree(s) => write!(f, "{}", localized_name(s)),
            Probe::KroneckerColimit(d) => write!(f, "E[{d}]"),
        }
    }
}

impl CategoryDescriptor {
    pub fn is_member(&self, probe: &Probe) -> bool {
        match (self, probe) {
            (CategoryDescriptor::ZeroCategory, Probe::Object(x)) => x.is_zero(),
            (CategoryDescriptor::ZeroCategory, _) => false,
            (CategoryDescriptor::DerivedOfLocalizedZ(s), Probe::Object(x)) => {
                let local_ring = *x.ring() == RingDescriptor::LocalizedIntegerRing(s.clone());
                (local_ring || *x.ring() == RingDescriptor::IntegerRing)
                    && x.summands().all(|(_, m)| match m {
                        Indecomposable::ZTorsion { p, .. } => !s.contains(&Label::Prime(*p)),
                        // Z itself is a Z[S^-1]-module only when nothing is inverted.
                        Indecomposable::ZFree => local_ring || s.is_empty(),
                        _ => false,
                    })
            }
            (CategoryDescriptor::DerivedOfLocalizedZ(s), Probe::LocalizedFree(t)) => s == t,
            (CategoryDescriptor::ThickInsideS(c), Probe::Object(x)) => c.contains(x).unwrap_or(false),
            (CategoryDescriptor::PerpOfExceptional { perp, .. }, Probe::Object(x)) => {
                perp.contains(x).unwrap_or(false)
            }
            (CategoryDescriptor::KroneckerLocalisation { points, .. }, Probe::Object(x)) => {
                matches!(x.ring(), RingDescriptor::Kronecker(_))
                    && x.summands().all(|(_, m)| match m {
                        Indecomposable::Regular { point, .. } => !points.contains(&Label::Point(point.clone())),
                        _ => false,
                    })
            }
            (CategoryDescriptor::KroneckerLocalisation { points, .. }, Probe::KroneckerColimit(d)) => points == d,
            _ => false,
        }
    }
}

impl fmt::Display for CategoryDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryDescriptor::DerivedOfLocalizedZ(s) => write!(f, "D^b(mod {})", localized_name(s)),
            CategoryDescriptor::KroneckerLocalisation { generators, .. } => {
                write!(f, "KroneckerLocalisation<{}>", generators.join(", "))
            }
            CategoryDescriptor::ThickInsideS(c) => write!(f, "ThickInsideS({c})"),
            CategoryDescriptor::PerpOfExceptional { sequence, .. } => {
                let s: Vec<String> = sequence.iter().map(|x| x.to_string()).collect();
                write!(f, "PerpOfExceptional({})", s.join(", "))
            }
            CategoryDescriptor::ZeroCategory => write!(f, "0"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    I,
    II,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::I => write!(f, "I"),
            Case::II => write!(f, "II"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionReport {
    pub case: Case,
    pub kernel: ThickDescriptor,
    pub countably_generated: bool,
    pub converges_uniformly: bool,
    pub category: CategoryDescriptor,
    pub evidence: Vec<String>,
}

pub fn classify(ring: &RingDescriptor, m: &MetricNF) -> Result<CompletionReport> {
    if !matches!(ring, RingDescriptor::IntegerRing | RingDescriptor::Kronecker(_)) {
        return Err(Error::UnsupportedRing(ring.to_string()));
    }
    if m.ring() != ring {
        return Err(Error::MixedRings(format!("{ring} and a metric over {}", m.ring())));
    }
    let kernel = m.kernel_b();
    let countable = kernel.is_countably_generated();
    let uniform = m.converges_uniformly();
    let mut evidence = vec![
        format!("metric: {m}"),
        format!("[kernel] B = intersection of all balls = {kernel}"),
        format!(
            "[countability] B is {}countably generated",
            if countable { "" } else { "not " }
        ),
        if uniform {
            "[uniform convergence] the middle chain stabilises at B, so M ~ M_inf v B".to_string()
        } else {
            "[uniform convergence] the middle chain never stabilises, so M is not equivalent to M_inf v B"
                .to_string()
        },
    ];
    let (case, category) = if uniform && countable {
        evidence.push("[case I] the completion is the bounded derived category of the universal localisation killing B".into());
        let category = match kernel.localisation_model(ring)? {
            LocalisationModel::Base(_) => match ring {
                RingDescriptor::IntegerRing => {
                    CategoryDescriptor::DerivedOfLocalizedZ(LabelSet::empty(Universe::Primes))
                }
                _ => CategoryDescriptor::ThickInsideS(ThickDescriptor::All),
            },
            LocalisationModel::LocalizedZ(s) => {
                evidence.push(format!("[localisation] Z -> {} inverts the primes of B", localized_name(&s)));
                CategoryDescriptor::DerivedOfLocalizedZ(s)
            }
            LocalisationModel::ZeroRing => CategoryDescriptor::ZeroCategory,
            LocalisationModel::KroneckerTubes { inverted, generators } => {
                evidence.push(format!(
                    "[localisation] the tubes {inverted} become zero; generated by {}",
                    generators.join(", ")
                ));
                CategoryDescriptor::KroneckerLocalisation { points: inverted, generators }
            }
            LocalisationModel::Perpendicular(sequence) => {
                let perp = kernel.right_perp(ring)?;
                evidence.push(format!(
                    "[exceptional] B is generated by an exceptional sequence; the completion is B^perp = {perp}"
                ));
                CategoryDescriptor::PerpOfExceptional { sequence, perp }
            }
        };
        (Case::I, category)
    } else {
        let (ambient, name) = match ring {
            RingDescriptor::Kronecker(f) => (ThickDescriptor::all_regular(f.clone()), "the regular objects"),
            _ => (ThickDescriptor::all_torsion(), "the torsion objects"),
        };
        let perp = kernel.right_perp(ring)?;
        let inside = perp.meet(&ambient)?;
        evidence.push(format!("[case II] the completion is B^perp inside {name}: {perp} meet {ambient} = {inside}"));
        let category = if inside.is_zero() {
            CategoryDescriptor::ZeroCategory
        } else {
            CategoryDescriptor::ThickInsideS(inside)
        };
        (Case::II, category)
    };
    Ok(CompletionReport {
        case,
        kernel,
        countably_generated: countable,
        converges_uniformly: uniform,
        category,
        evidence,
    })
}

/// Which functor must vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Functor {
    Hom,
    Ext,
}

/// Some member of a label set, if it has one.
fn some_member(s: &LabelSet) -> Option<Label> {
    s.members_in(0, 2 * s.max_mentioned_key() + 64).into_iter().next()
}

/// Whether `F(G, N) = 0` for every module `G` in the wide part of `d`.
fn kills(ring: &RingDescriptor, d: &ThickDescriptor, n: &Indecomposable, which: Functor) -> Result<bool> {
    let test = |g: &Indecomposable| -> Result<bool> {
        let rec = hom_invariants(ring, g, n)?;
        Ok(match which {
            Functor::Hom => rec.hom.is_zero(),
            Functor::Ext => rec.ext.is_zero(),
        })
    };
    match d {
        ThickDescriptor::Zero => return Ok(true),
        ThickDescriptor::Exceptional(e) => return test(e),
        ThickDescriptor::Intervals { members, .. } => {
            for &(i, j) in members {
                if !test(&Indecomposable::interval(i, j))? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        _ => {}
    }
    // Over Z and for tube sets, a finite set of witnesses decides.
    let witnesses: Vec<Indecomposable> = match (ring, n) {
        (RingDescriptor::IntegerRing, Indecomposable::ZFree) => {
            let mut w = vec![Indecomposable::ZFree];
            let torsion = match d {
                ThickDescriptor::Torsion(s) => some_member(s).map(|l| l.key()),
                _ => Some(2),
            };
            w.extend(torsion.map(|p| Indecomposable::torsion(p, 1)));
            w
        }
        (RingDescriptor::IntegerRing, Indecomposable::ZTorsion { p, .. }) => {
            vec![Indecomposable::ZFree, Indecomposable::torsion(*p, 1)]
        }
        (RingDescriptor::Kronecker(field), _) => {
            let some_point = match d {
                ThickDescriptor::Regular(s) => some_member(s),
                _ => crate::catalog::sample_points(field).into_iter().next().map(Label::Point),
            };
            let mut w = Vec::new();
            if let Some(Label::Point(pt)) = some_point {
                w.push(Indecomposable::regular(pt, 1));
            }
            if let Some(pt) = n.tube() {
                w.push(Indecomposable::regular(pt.clone(), 1));
            }
            if d.is_all() {
                // Hom into N is nonzero from N itself; Ext into N is nonzero
                // from some indecomposable unless N is injective.
                w.push(n.clone());
                w.extend(crate::catalog::catalog(ring, &Default::default()));
                if let Indecomposable::Preprojective(m) | Indecomposable::Preinjective(m) = n {
                    w.push(Indecomposable::Preprojective(m + 2));
                    w.push(Indecomposable::Preinjective(m.saturating_sub(2)));
                }
            }
            w
        }
        _ => {
            return Err(Error::UnsupportedRing(format!("compact support over {ring}")));
        }
    };
    for g in witnesses.iter().filter(|g| d.contains_module(g)) {
        if !test(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `F(G, P) = 0` for every `G` in the wide part of `d`, for the
/// colimit objects.
fn kills_colimit(d: &ThickDescriptor, probe: &Probe, which: Functor) -> bool {
    match probe {
        // Hom(G, Z[S^-1]) = 0 for torsion G; Ext(Z/p, Z[S^-1]) = Z[S^-1]/p
        // vanishes exactly when p is inverted.
        Probe::LocalizedFree(s) => match which {
            Functor::Hom => !d.is_all(),
            Functor::Ext => match d {
                ThickDescriptor::Zero => true,
                ThickDescriptor::Torsion(t) => t.is_subset(s),
                _ => s.is_all(),
            },
        },
        // E is local with respect to exactly the tubes it inverts.
        Probe::KroneckerColimit(points) => match d {
            ThickDescriptor::Zero => true,
            ThickDescriptor::Regular(t) => t.is_subset(points),
            _ => false,
        },
        Probe::Object(_) => unreachable!(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompactSupport {
    /// Smallest `n` with `Hom(B_n, X) = 0`, if one was found.
    pub index: Option<u64>,
    /// Largest level searched.
    pub horizon: u64,
}

fn probe_key(probe: &Probe) -> u64 {
    match probe {
        Probe::Object(x) => x
            .summands()
            .map(|(_, m)| match m {
                Indecomposable::ZTorsion { p, .. } => *p,
                Indecomposable::Regular { point, .. } => point.key(),
                _ => 0,
            })
            .max()
            .unwrap_or(0),
        Probe::LocalizedFree(s) => s.max_mentioned_key(),
        Probe::KroneckerColimit(d) => d.max_mentioned_key(),
    }
}

fn chain_offset(m: &MetricNF) -> u64 {
    [m.below(), m.mid(), m.above()]
        .iter()
        .map(|c| {
            let keys = c
                .descriptors()
                .into_iter()
                .map(|d| match d {
                    ThickDescriptor::Torsion(s) | ThickDescriptor::Regular(s) => s.max_mentioned_key(),
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
            let shift = match c.tail() {
                crate::chain::ChainTail::Shrinking { shift, .. } => shift.unsigned_abs(),
                _ => 0,
            };
            c.prefix().len() as u64 + keys + shift
        })
        .max()
        .unwrap_or(0)
}

/// Smallest level from which every degree in `[lo, hi]` is in the middle zone.
fn window_offset(m: &MetricNF, lo: i64, hi: i64) -> u64 {
    let reach = lo.unsigned_abs().max(hi.unsigned_abs()) + 2;
    (1..=reach + 1)
        .find(|&n| (lo..=hi).all(|d| m.zone(n, d) == crate::metric::Zone::Mid))
        .unwrap_or(reach + 1)
}

/// The smallest `n` such that every object of `B_n` has no maps to `X`,
/// searched up to a horizon of twice the cohomological width of `X` plus the
/// level at which `X`'s degrees lie inside the window plus the level at
/// which the chains have passed every label they or `X` mention.
pub fn compact_support_index(probe: &Probe, m: &MetricNF) -> Result<CompactSupport> {
    let (lo, hi, width) = match probe {
        Probe::Object(x) => {
            if x.ring() != m.ring() {
                return Err(Error::MixedRings(format!("{} and {}", x.ring(), m.ring())));
            }
            match x.degree_range() {
                None => return Ok(CompactSupport { index: Some(1), horizon: 1 }),
                Some((lo, hi)) => (lo, hi, x.width()),
            }
        }
        _ => (0, 0, 1),
    };
    let horizon = 2 * width + window_offset(m, lo, hi + 1) + chain_offset(m) + probe_key(probe) + 1;
    for n in 1..=horizon {
        let ok = match probe {
            Probe::Object(x) => {
                let mut ok = true;
                for (k, module) in x.summands() {
                    if !kills(m.ring(), &m.zone_level(n, k), module, Functor::Hom)?
                        || !kills(m.ring(), &m.zone_level(n, k + 1), module, Functor::Ext)?
                    {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            _ => {
                kills_colimit(&m.zone_level(n, 0), probe, Functor::Hom)
                    && kills_colimit(&m.zone_level(n, 1), probe, Functor::Ext)
            }
        };
        if ok {
            return Ok(CompactSupport { index: Some(n), horizon });
        }
    }
    Ok(CompactSupport { index: None, horizon })
}

/// Generator names for a Kronecker localisation at a tube set.
pub fn localisation_generators(points: &PointSet) -> Vec<String> {
    kronecker_generators(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainSchedule, TailKind};
    use crate::field::FieldDescriptor;
    use crate::labels::ProjPoint;

    fn z() -> RingDescriptor {
        RingDescriptor::IntegerRing
    }

    #[test]
    fn integer_examples() {
        let m = MetricNF::constant(z(), ThickDescriptor::torsion(LabelSet::primes([2]))).unwrap();
        let r = classify(&z(), &m).unwrap();
        assert_eq!(r.case, Case::I);
        assert_eq!(r.category.to_string(), "D^b(mod Z[1/2])");
        let tail = MetricNF::pure_chain(z(), ChainSchedule::tail_chain(TailKind::Primes, 1, 0).unwrap()).unwrap();
        let r = classify(&z(), &tail).unwrap();
        assert_eq!(r.case, Case::II);
        assert_eq!(r.category.to_string(), "ThickInsideS(Torsion(all))");
        let t = MetricNF::constant(z(), ThickDescriptor::all_torsion()).unwrap();
        assert_eq!(classify(&z(), &t).unwrap().category.to_string(), "D^b(mod Q)");
    }

    #[test]
    fn kronecker_examples() {
        let f = FieldDescriptor::Rational;
        let k = RingDescriptor::Kronecker(f.clone());
        let d = LabelSet::points(f, [ProjPoint::rational(0, 1)]);
        let m = MetricNF::constant(k.clone(), ThickDescriptor::regular(d)).unwrap();
        let r = classify(&k, &m).unwrap();
        assert_eq!(r.case, Case::I);
        match r.category {
            CategoryDescriptor::KroneckerLocalisation { generators, .. } => {
                assert_eq!(generators, vec!["E".to_string(), "tubes != (1:0)".to_string()])
            }
            c => panic!("unexpected {c}"),
        }
        let u = FieldDescriptor::SymbolicUncountable;
        let ku = RingDescriptor::Kronecker(u.clone());
        let m = MetricNF::constant(ku.clone(), ThickDescriptor::all_regular(u.clone())).unwrap();
        let r = classify(&ku, &m).unwrap();
        assert_eq!((r.case, r.countably_generated), (Case::II, false));
        assert_eq!(r.category, CategoryDescriptor::ZeroCategory);
        let cof = LabelSet::cofinite(Universe::Points(u.clone()), [Label::Point(ProjPoint::Formal(1))]);
        let m = MetricNF::constant(ku.clone(), ThickDescriptor::regular(cof)).unwrap();
        let r = classify(&ku, &m).unwrap();
        assert_eq!(
            r.category,
            CategoryDescriptor::ThickInsideS(ThickDescriptor::regular(LabelSet::points(u, [ProjPoint::Formal(1)])))
        );
    }

    #[test]
    fn membership() {
        let s = LabelSet::primes([2]);
        let c = CategoryDescriptor::DerivedOfLocalizedZ(s.clone());
        let x3 = SplitObject::module(z(), Indecomposable::torsion(3, 1)).unwrap();
        let x2 = SplitObject::module(z(), Indecomposable::torsion(2, 1)).unwrap();
        assert!(c.is_member(&x3.clone().into()));
        assert!(!c.is_member(&x2.clone().into()));
        assert!(c.is_member(&Probe::LocalizedFree(s)));
        let t = CategoryDescriptor::ThickInsideS(ThickDescriptor::all_torsion());
        assert!(!t.is_member(&SplitObject::module(z(), Indecomposable::ZFree).unwrap().into()));
    }

    #[test]
    fn compact_support() {
        let m = MetricNF::constant(z(), ThickDescriptor::torsion(LabelSet::primes([2]))).unwrap();
        let x3 = SplitObject::module(z(), Indecomposable::torsion(3, 1)).unwrap();
        let x2 = SplitObject::module(z(), Indecomposable::torsion(2, 1)).unwrap();
        assert_eq!(compact_support_index(&x3.into(), &m).unwrap().index, Some(1));
        assert_eq!(compact_support_index(&SplitObject::zero(z()).into(), &m).unwrap().index, Some(1));
        let r = compact_support_index(&x2.into(), &m).unwrap();
        assert_eq!(r.index, None);
        assert!(r.horizon >= 1);
        assert!(compact_support_index(&Probe::LocalizedFree(LabelSet::primes([2])), &m).unwrap().index.is_some());
        let tail = MetricNF::pure_chain(z(), ChainSchedule::tail_chain(TailKind::Primes, 1, 0).unwrap()).unwrap();
        let x7 = SplitObject::new(z(), [(3, Indecomposable::torsion(7, 2))]).unwrap();
        assert_eq!(compact_support_index(&x7.into(), &tail).unwrap().index, Some(8));
    }
}
