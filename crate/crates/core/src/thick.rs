//! Thick subcategories of the bounded derived category, presented by their
//! classifying data: prime sets over `Z`, tube sets or an exceptional object
//! over the Kronecker quiver, and explicit interval sets over `A_n`.

use std::collections::BTreeSet;
use std::fmt;

use crate::derived::SplitObject;
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::indec::{hom_invariants, is_exceptional, localized_name, Indecomposable, RingDescriptor};
use crate::labels::{Label, LabelSet, PointSet, PrimeSet, Universe};

/// A thick subcategory in normal form. `Zero` and `All` are shared by every
/// ring; the other variants are canonical (never empty, never everything).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ThickDescriptor {
    Zero,
    /// Torsion objects supported at the given primes.
    Torsion(PrimeSet),
    /// Regular objects in the tubes at the given points.
    Regular(PointSet),
    /// The thick closure of one exceptional Kronecker module (a complete
    /// exceptional sequence generates everything).
    Exceptional(Indecomposable),
    /// Over `A_n`: the indecomposables `M[i, j]` of a wide subcategory.
    Intervals { n: u32, members: BTreeSet<(u32, u32)> },
    All,
}

use ThickDescriptor::*;

impl ThickDescriptor {
    pub fn torsion(s: PrimeSet) -> Self {
        if s.is_empty() {
            Zero
        } else {
            Torsion(s)
        }
    }

    pub fn regular(d: PointSet) -> Self {
        if d.is_empty() {
            Zero
        } else {
            Regular(d)
        }
    }

    /// All torsion objects over `Z`.
    pub fn all_torsion() -> Self {
        Torsion(LabelSet::all(Universe::Primes))
    }

    /// All regular objects over the Kronecker quiver.
    pub fn all_regular(field: FieldDescriptor) -> Self {
        Regular(LabelSet::all(Universe::Points(field)))
    }

    /// The thick subcategory generated by an exceptional sequence.
    pub fn exceptional(ring: &RingDescriptor, seq: &[Indecomposable]) -> Result<Self> {
        if !matches!(ring, RingDescriptor::Kronecker(_)) {
            return Err(Error::WrongRing {
                op: "exceptional descriptor",
                ring: ring.to_string(),
            });
        }
        if seq.len() > 2 || !crate::indec::is_exceptional_sequence(ring, seq)? {
            return Err(Error::InvalidArgument(format!(
                "not an exceptional sequence: {}",
                seq.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
        ThickDescriptor::generated(ring, seq)
    }

    fn intervals(n: u32, members: BTreeSet<(u32, u32)>) -> Self {
        if members.is_empty() {
            Zero
        } else if members.len() as u32 == n * (n + 1) / 2 {
            All
        } else {
            Intervals { n, members }
        }
    }

    /// The thick subcategory generated by a list of indecomposables.
    pub fn generated(ring: &RingDescriptor, gens: &[Indecomposable]) -> Result<Self> {
        for g in gens {
            ring.check(g)?;
        }
        Ok(match ring {
            RingDescriptor::IntegerRing | RingDescriptor::LocalizedIntegerRing(_) => {
                let mut primes = Vec::new();
                for g in gens {
                    match g {
                        Indecomposable::ZTorsion { p, .. } => primes.push(*p),
                        _ => return Ok(All),
                    }
                }
                ThickDescriptor::torsion(LabelSet::primes(primes))
            }
            RingDescriptor::Kronecker(field) => {
                let (reg, exc): (Vec<_>, Vec<_>) = gens.iter().partition(|g| g.is_regular());
                let mut exc: Vec<&Indecomposable> = exc;
                exc.sort();
                exc.dedup();
                match (reg.is_empty(), exc.len()) {
                    (true, 0) => Zero,
                    (true, 1) => Exceptional(exc[0].clone()),
                    (false, 0) => ThickDescriptor::regular(LabelSet::points(
                        field.clone(),
                        reg.iter().filter_map(|g| g.tube().cloned()),
                    )),
                    // Two independent classes in K_0 that are not both
                    // regular: the generated wide subcategory has rank 2.
                    _ => All,
                }
            }
            RingDescriptor::DynkinAn(n) => {
                let members: BTreeSet<(u32, u32)> = gens
                    .iter()
                    .map(|g| match g {
                        Indecomposable::Interval { i, j } => (*i, *j),
                        _ => unreachable!(),
                    })
                    .collect();
                dynkin_closure(*n, &members)
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Zero)
    }

    pub fn is_all(&self) -> bool {
        matches!(self, All)
    }

    /// Whether the descriptor can live over `ring`.
    pub fn fits(&self, ring: &RingDescriptor) -> bool {
        match (self, ring) {
            (Zero | All, _) => true,
            (Torsion(s), RingDescriptor::IntegerRing | RingDescriptor::LocalizedIntegerRing(_)) => {
                *s.universe() == Universe::Primes
            }
            (Regular(d), RingDescriptor::Kronecker(f)) => *d.universe() == Universe::Points(f.clone()),
            (Exceptional(e), RingDescriptor::Kronecker(_)) => ring.admits(e),
            (Intervals { n, .. }, RingDescriptor::DynkinAn(m)) => n == m,
            _ => false,
        }
    }

    fn family(&self) -> Option<u32> {
        match self {
            Zero | All => None,
            Torsion(_) => Some(0),
            Regular(_) | Exceptional(_) => Some(1),
            Intervals { n, .. } => Some(2 + n),
        }
    }

    fn check_family(&self, other: &ThickDescriptor) -> Result<()> {
        let mixed = match (self, other) {
            (Regular(a), Regular(b)) => a.universe() != b.universe(),
            _ => matches!((self.family(), other.family()), (Some(a), Some(b)) if a != b),
        };
        if mixed {
            Err(Error::MixedRings(format!("{self} and {other}")))
        } else {
            Ok(())
        }
    }

    /// Whether a single indecomposable module lies in the wide part.
    pub fn contains_module(&self, m: &Indecomposable) -> bool {
        match (self, m) {
            (Zero, _) => false,
            (All, _) => true,
            (Torsion(s), Indecomposable::ZTorsion { p, .. }) => s.contains(&Label::Prime(*p)),
            (Regular(d), Indecomposable::Regular { point, .. }) => d.contains(&Label::Point(point.clone())),
            (Exceptional(e), m) => e == m,
            (Intervals { members, .. }, Indecomposable::Interval { i, j }) => members.contains(&(*i, *j)),
            _ => false,
        }
    }

    pub fn contains(&self, x: &SplitObject) -> Result<bool> {
        if !self.fits(x.ring()) {
            return Err(Error::MixedRings(format!("{self} over {}", x.ring())));
        }
        Ok(x.summands().all(|(_, m)| self.contains_module(m)))
    }

    pub fn leq(&self, other: &ThickDescriptor) -> Result<bool> {
        self.check_family(other)?;
        Ok(match (self, other) {
            (Zero, _) | (_, All) => true,
            (_, Zero) | (All, _) => false,
            (Torsion(a), Torsion(b)) | (Regular(a), Regular(b)) => a.is_subset(b),
            (Exceptional(a), Exceptional(b)) => a == b,
            (Intervals { members: a, .. }, Intervals { members: b, .. }) => a.is_subset(b),
            _ => false,
        })
    }

    pub fn join(&self, other: &ThickDescriptor) -> Result<ThickDescriptor> {
        self.check_family(other)?;
        Ok(match (self, other) {
            (Zero, x) | (x, Zero) => x.clone(),
            (All, _) | (_, All) => All,
            (Torsion(a), Torsion(b)) => Torsion(a.union(b)),
            (Regular(a), Regular(b)) => Regular(a.union(b)),
            (Exceptional(a), Exceptional(b)) if a == b => self.clone(),
            // Distinct exceptionals, or an exceptional with a nonzero regular
            // part, span K_0 outside the regular part: everything.
            (Exceptional(_), _) | (_, Exceptional(_)) => All,
            (Intervals { n, members: a }, Intervals { members: b, .. }) => {
                dynkin_closure(*n, &a.union(b).copied().collect())
            }
            _ => unreachable!(),
        })
    }

    pub fn meet(&self, other: &ThickDescriptor) -> Result<ThickDescriptor> {
        self.check_family(other)?;
        Ok(match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (All, x) | (x, All) => x.clone(),
            (Torsion(a), Torsion(b)) => ThickDescriptor::torsion(a.intersection(b)),
            (Regular(a), Regular(b)) => ThickDescriptor::regular(a.intersection(b)),
            (Exceptional(a), Exceptional(b)) if a == b => self.clone(),
            (Exceptional(_), _) | (_, Exceptional(_)) => Zero,
            (Intervals { n, members: a }, Intervals { members: b, .. }) => {
                ThickDescriptor::intervals(*n, a.intersection(b).copied().collect())
            }
            _ => unreachable!(),
        })
    }

    /// `C^⊥ = {X : Hom(Σ^j C, X) = 0 for all j}`.
    pub fn right_perp(&self, ring: &RingDescriptor) -> Result<ThickDescriptor> {
        if !self.fits(ring) {
            return Err(Error::MixedRings(format!("{self} over {ring}")));
        }
        Ok(match (self, ring) {
            (Zero, _) => All,
            (All, _) => Zero,
            (Torsion(s), _) => ThickDescriptor::torsion(s.complement()),
            (Regular(d), _) => ThickDescriptor::regular(d.complement()),
            (Exceptional(Indecomposable::Preprojective(0)), _) => Exceptional(Indecomposable::Preinjective(0)),
            (Exceptional(Indecomposable::Preprojective(n)), _) => Exceptional(Indecomposable::Preprojective(n - 1)),
            (Exceptional(Indecomposable::Preinjective(n)), _) => Exceptional(Indecomposable::Preinjective(n + 1)),
            (Intervals { n, members }, _) => {
                ThickDescriptor::intervals(*n, dynkin_perp(*n, members, Side::Right))
            }
            _ => unreachable!(),
        })
    }

    /// `⊥C = {X : Hom(X, Σ^j C) = 0 for all j}`.
    pub fn left_perp(&self, ring: &RingDescriptor) -> Result<ThickDescriptor> {
        if !self.fits(ring) {
            return Err(Error::MixedRings(format!("{self} over {ring}")));
        }
        Ok(match (self, ring) {
            (Zero, _) => All,
            (All, _) => Zero,
            (Torsion(s), _) => ThickDescriptor::torsion(s.complement()),
            (Regular(d), _) => ThickDescriptor::regular(d.complement()),
            (Exceptional(Indecomposable::Preinjective(0)), _) => Exceptional(Indecomposable::Preprojective(0)),
            (Exceptional(Indecomposable::Preprojective(n)), _) => Exceptional(Indecomposable::Preprojective(n + 1)),
            (Exceptional(Indecomposable::Preinjective(n)), _) => Exceptional(Indecomposable::Preinjective(n - 1)),
            (Intervals { n, members }, _) => {
                ThickDescriptor::intervals(*n, dynkin_perp(*n, members, Side::Left))
            }
            _ => unreachable!(),
        })
    }

    /// Whether some countable set of objects generates the subcategory.
    pub fn is_countably_generated(&self) -> bool {
        match self {
            Regular(d) => d.is_countable(),
            _ => true,
        }
    }

    /// The indecomposables of a finite catalog lying in the wide part.
    pub fn members_of<'a>(&self, catalog: &'a [Indecomposable]) -> Vec<&'a Indecomposable> {
        catalog.iter().filter(|m| self.contains_module(m)).collect()
    }

    /// The universal localisation killing this subcategory.
    pub fn localisation_model(&self, ring: &RingDescriptor) -> Result<LocalisationModel> {
        if !self.is_countably_generated() {
            return Err(Error::NotCountablyGenerated(self.to_string()));
        }
        if !self.fits(ring) {
            return Err(Error::MixedRings(format!("{self} over {ring}")));
        }
        Ok(match (self, ring) {
            (Zero, _) => LocalisationModel::Base(ring.clone()),
            (All, _) => LocalisationModel::ZeroRing,
            (Torsion(s), RingDescriptor::IntegerRing) => LocalisationModel::LocalizedZ(s.clone()),
            (Regular(d), RingDescriptor::Kronecker(_)) => LocalisationModel::KroneckerTubes {
                inverted: d.clone(),
                generators: kronecker_generators(d),
            },
            (Exceptional(e), _) => LocalisationModel::Perpendicular(vec![e.clone()]),
            _ => {
                return Err(Error::UnsupportedRing(format!(
                    "no localisation model for {self} over {ring}"
                )))
            }
        })
    }
}

/// Names of the generators of the Kronecker localisation at a tube set: the
/// colimit `E` of the preprojective chain together with the remaining tubes.
pub fn kronecker_generators(d: &PointSet) -> Vec<String> {
    let rest = match d.as_finite() {
        Some(v) if v.len() == 1 => format!("tubes != {}", v[0]),
        _ => format!("tubes not in {d}"),
    };
    if d.is_all() {
        vec!["E".to_string()]
    } else {
        vec!["E".to_string(), rest]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalisationModel {
    /// Localisation at nothing.
    Base(RingDescriptor),
    /// `Z[S^-1]`, whose indecomposables are the free module and the torsion
    /// at primes outside `S`.
    LocalizedZ(PrimeSet),
    ZeroRing,
    /// The Kronecker algebra with the tubes in `inverted` localised away,
    /// presented by generators.
    KroneckerTubes { inverted: PointSet, generators: Vec<String> },
    /// Exceptional kernels: the completion is the perpendicular category.
    Perpendicular(Vec<Indecomposable>),
}

impl LocalisationModel {
    pub fn ring(&self) -> Option<RingDescriptor> {
        match self {
            LocalisationModel::Base(r) => Some(r.clone()),
            LocalisationModel::LocalizedZ(s) => Some(RingDescriptor::LocalizedIntegerRing(s.clone())),
            _ => None,
        }
    }
}

impl fmt::Display for LocalisationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalisationModel::Base(r) => write!(f, "{r}"),
            LocalisationModel::LocalizedZ(s) => write!(f, "{}", localized_name(s)),
            LocalisationModel::ZeroRing => write!(f, "0"),
            LocalisationModel::KroneckerTubes { generators, .. } => {
                write!(f, "<{}>", generators.join(", "))
            }
            LocalisationModel::Perpendicular(seq) => {
                let s: Vec<String> = seq.iter().map(|x| x.to_string()).collect();
                write!(f, "perp({})", s.join(", "))
            }
        }
    }
}

impl fmt::Display for ThickDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Zero => write!(f, "0"),
            All => write!(f, "all"),
            Torsion(s) => write!(f, "Torsion({s})"),
            Regular(d) => write!(f, "Regular({d})"),
            Exceptional(e) => write!(f, "Exceptional({e})"),
            Intervals { members, .. } => {
                let s: Vec<String> = members.iter().map(|(i, j)| format!("M[{i},{j}]")).collect();
                write!(f, "Thick({})", s.join(", "))
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn dynkin_perp(n: u32, members: &BTreeSet<(u32, u32)>, side: Side) -> BTreeSet<(u32, u32)> {
    let ring = RingDescriptor::DynkinAn(n);
    let all: Vec<(u32, u32)> = (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
    all.into_iter()
        .filter(|&(i, j)| {
            let x = Indecomposable::interval(i, j);
            members.iter().all(|&(a, b)| {
                let c = Indecomposable::interval(a, b);
                let rec = match side {
                    Side::Right => hom_invariants(&ring, &c, &x),
                    Side::Left => hom_invariants(&ring, &x, &c),
                };
                rec.expect("interval catalog").vanishes()
            })
        })
        .collect()
}

/// Thick closure over `A_n`: every thick subcategory of a representation
/// finite hereditary algebra is the left perpendicular of its right
/// perpendicular.
fn dynkin_closure(n: u32, members: &BTreeSet<(u32, u32)>) -> ThickDescriptor {
    let right = dynkin_perp(n, members, Side::Right);
    ThickDescriptor::intervals(n, dynkin_perp(n, &right, Side::Left))
}

/// Every thick subcategory over `A_n`.
pub fn dynkin_thick_subcategories(n: u32) -> Vec<ThickDescriptor> {
    let all: Vec<(u32, u32)> = (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
    let mut out: BTreeSet<ThickDescriptor> = BTreeSet::new();
    // Every wide subcategory is generated by an exceptional sequence, so by
    // at most n indecomposables.
    fn rec(
        n: u32,
        all: &[(u32, u32)],
        start: usize,
        chosen: &mut BTreeSet<(u32, u32)>,
        out: &mut BTreeSet<ThickDescriptor>,
    ) {
        out.insert(dynkin_closure(n, chosen));
        if chosen.len() as u32 == n {
            return;
        }
        for k in start..all.len() {
            chosen.insert(all[k]);
            rec(n, all, k + 1, chosen, out);
            chosen.remove(&all[k]);
        }
    }
    rec(n, &all, 0, &mut BTreeSet::new(), &mut out);
    out.into_iter().collect()
}

/// Whether an exceptional Kronecker module really is exceptional; used by
/// descriptor parsers.
pub fn check_exceptional(ring: &RingDescriptor, e: &Indecomposable) -> Result<()> {
    if is_exceptional(ring, e)? {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{e} is not exceptional")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, CatalogBounds};
    use crate::labels::ProjPoint;

    fn kq() -> RingDescriptor {
        RingDescriptor::Kronecker(FieldDescriptor::Rational)
    }

    #[test]
    fn integer_lattice() {
        let a = ThickDescriptor::torsion(LabelSet::primes([2, 3, 5]));
        let b = ThickDescriptor::torsion(LabelSet::primes([3, 5, 7]));
        assert_eq!(a.meet(&b).unwrap(), ThickDescriptor::torsion(LabelSet::primes([3, 5])));
        assert!(Zero.leq(&a).unwrap());
        let z = SplitObject::new(RingDescriptor::IntegerRing, [(5, Indecomposable::torsion(2, 3))]).unwrap();
        let t2 = ThickDescriptor::torsion(LabelSet::primes([2]));
        assert!(t2.contains(&z).unwrap());
        assert!(!t2.contains(&SplitObject::module(RingDescriptor::IntegerRing, Indecomposable::ZFree).unwrap()).unwrap());
    }

    #[test]
    fn regular_lattice() {
        let f = FieldDescriptor::Rational;
        let l = ThickDescriptor::regular(LabelSet::points(f.clone(), [ProjPoint::rational(0, 1)]));
        let m = ThickDescriptor::regular(LabelSet::points(f.clone(), [ProjPoint::Infinity]));
        assert_eq!(
            l.join(&m).unwrap(),
            ThickDescriptor::regular(LabelSet::points(f, [ProjPoint::rational(0, 1), ProjPoint::Infinity]))
        );
        let x = SplitObject::module(kq(), Indecomposable::regular(ProjPoint::Infinity, 1)).unwrap();
        assert!(!l.contains(&x).unwrap());
        let e = Exceptional(Indecomposable::Preprojective(1));
        assert_eq!(e.join(&l).unwrap(), All);
        assert_eq!(e.meet(&l).unwrap(), Zero);
    }

    /// The closed-form perpendiculars agree with catalog vanishing tests.
    #[test]
    fn perps_match_catalog() {
        let bounds = CatalogBounds { max_index: 6, ..CatalogBounds::default() };
        let rings = [
            RingDescriptor::IntegerRing,
            kq(),
            RingDescriptor::Kronecker(FieldDescriptor::FiniteField(3)),
        ];
        for ring in rings {
            let cat = catalog(&ring, &bounds);
            let mut descs = vec![Zero, All];
            for m in &cat {
                descs.push(ThickDescriptor::generated(&ring, std::slice::from_ref(m)).unwrap());
            }
            for c in descs {
                let perp = c.right_perp(&ring).unwrap();
                let lperp = c.left_perp(&ring).unwrap();
                let gens = c.members_of(&cat);
                for x in &cat {
                    // Preprojectives beyond the catalog edge have perps
                    // outside it; skip those generators.
                    if matches!(c, Exceptional(Indecomposable::Preinjective(n)) if n >= 6) {
                        continue;
                    }
                    let right = gens.iter().all(|g| hom_invariants(&ring, g, x).unwrap().vanishes());
                    let left = gens.iter().all(|g| hom_invariants(&ring, x, g).unwrap().vanishes());
                    assert_eq!(perp.contains_module(x), right, "{c} perp at {x}");
                    assert_eq!(lperp.contains_module(x), left, "perp {c} at {x}");
                }
            }
        }
    }

    #[test]
    fn dynkin_counts() {
        assert_eq!(dynkin_thick_subcategories(2).len(), 5);
        assert_eq!(dynkin_thick_subcategories(3).len(), 14);
        assert_eq!(dynkin_thick_subcategories(4).len(), 42);
    }

    #[test]
    fn countability_and_models() {
        let u = FieldDescriptor::SymbolicUncountable;
        assert!(!ThickDescriptor::all_regular(u.clone()).is_countably_generated());
        assert!(ThickDescriptor::all_torsion().is_countably_generated());
        let m = ThickDescriptor::torsion(LabelSet::primes([2]))
            .localisation_model(&RingDescriptor::IntegerRing)
            .unwrap();
        assert_eq!(m.to_string(), "Z[1/2]");
        let m = ThickDescriptor::all_torsion().localisation_model(&RingDescriptor::IntegerRing).unwrap();
        assert_eq!(m.to_string(), "Q");
        assert_eq!(
            Zero.localisation_model(&RingDescriptor::IntegerRing).unwrap(),
            LocalisationModel::Base(RingDescriptor::IntegerRing)
        );
        let d = LabelSet::points(FieldDescriptor::Rational, [ProjPoint::rational(0, 1)]);
        assert_eq!(kronecker_generators(&d), vec!["E".to_string(), "tubes != (1:0)".to_string()]);
    }
}
