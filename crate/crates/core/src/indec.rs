//! The catalog of indecomposable modules for each supported ring, with closed
//! forms for Hom and Ext, dimension vectors, the Euler form, the
//! Auslander–Reiten translate and the defect.
//!
//! Kronecker conventions: two arrows `2 -> 1`; a representation is
//! `V2 --A,B--> V1`. Dimension vectors list vertex 2 first. `P(n)` has
//! dimension vector `(n, n+1)`, `I(n)` has `(n+1, n)` and the regular module
//! `R(λ, k)` has `(k, k)`. For the linear quiver `A_n` the arrows are
//! `i+1 -> i` and `M[i,j]` is the interval module supported on `i..=j`.

use std::fmt;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::labels::{Label, PrimeSet, ProjPoint};
use crate::zgroup::AbelianGroup;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RingDescriptor {
    IntegerRing,
    /// `Z[S^-1]`; only produced as a completion model.
    LocalizedIntegerRing(PrimeSet),
    Kronecker(FieldDescriptor),
    /// Path algebra of the linearly oriented `A_n`, `n <= 8`.
    DynkinAn(u32),
}

impl RingDescriptor {
    pub fn dynkin(n: u32) -> Result<Self> {
        if (1..=8).contains(&n) {
            Ok(RingDescriptor::DynkinAn(n))
        } else {
            Err(Error::InvalidArgument(format!("A_{n} is outside 1..=8")))
        }
    }

    pub fn is_integral(&self) -> bool {
        matches!(
            self,
            RingDescriptor::IntegerRing | RingDescriptor::LocalizedIntegerRing(_)
        )
    }

    pub fn is_field_algebra(&self) -> bool {
        matches!(self, RingDescriptor::Kronecker(_) | RingDescriptor::DynkinAn(_))
    }

    pub fn field(&self) -> Option<&FieldDescriptor> {
        match self {
            RingDescriptor::Kronecker(f) => Some(f),
            _ => None,
        }
    }

    /// Whether `x` is an indecomposable module over this ring.
    pub fn admits(&self, x: &Indecomposable) -> bool {
        use Indecomposable::*;
        match (self, x) {
            (RingDescriptor::IntegerRing, ZFree) => true,
            (RingDescriptor::IntegerRing, ZTorsion { p, k }) => arith::is_prime(*p) && *k >= 1,
            (RingDescriptor::LocalizedIntegerRing(_), ZFree) => true,
            (RingDescriptor::LocalizedIntegerRing(s), ZTorsion { p, k }) => {
                arith::is_prime(*p) && *k >= 1 && !s.contains(&Label::Prime(*p))
            }
            (RingDescriptor::Kronecker(_), Preprojective(_) | Preinjective(_)) => true,
            (RingDescriptor::Kronecker(f), Regular { point, length }) => {
                *length >= 1 && point.belongs_to(f)
            }
            (RingDescriptor::DynkinAn(n), Interval { i, j }) => 1 <= *i && i <= j && j <= n,
            _ => false,
        }
    }

    pub fn check(&self, x: &Indecomposable) -> Result<()> {
        if self.admits(x) {
            Ok(())
        } else {
            Err(Error::MixedRings(format!("{x} is not a module over {self}")))
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::IntegerRing => write!(f, "Z"),
            RingDescriptor::LocalizedIntegerRing(s) => write!(f, "{}", localized_name(s)),
            RingDescriptor::Kronecker(k) => write!(f, "Kronecker({k})"),
            RingDescriptor::DynkinAn(n) => write!(f, "A{n}"),
        }
    }
}

/// `Z[1/2, 1/3]`, `Q`, or `Z[S^-1]` for infinite proper `S`.
pub fn localized_name(s: &PrimeSet) -> String {
    if s.is_all() {
        return "Q".to_string();
    }
    if s.is_empty() {
        return "Z".to_string();
    }
    match s.as_finite() {
        Some(ps) => {
            let inv: Vec<String> = ps.iter().map(|p| format!("1/{p}")).collect();
            format!("Z[{}]", inv.join(","))
        }
        None => format!("Z[S^-1], S = {s}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Indecomposable {
    ZFree,
    ZTorsion { p: u64, k: u32 },
    Preprojective(u32),
    Preinjective(u32),
    Regular { point: ProjPoint, length: u32 },
    Interval { i: u32, j: u32 },
}

impl Indecomposable {
    pub fn torsion(p: u64, k: u32) -> Self {
        Indecomposable::ZTorsion { p, k }
    }

    pub fn regular(point: ProjPoint, length: u32) -> Self {
        Indecomposable::Regular { point, length }
    }

    pub fn interval(i: u32, j: u32) -> Self {
        Indecomposable::Interval { i, j }
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, Indecomposable::Regular { .. })
    }

    pub fn tube(&self) -> Option<&ProjPoint> {
        match self {
            Indecomposable::Regular { point, .. } => Some(point),
            _ => None,
        }
    }
}

impl fmt::Display for Indecomposable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indecomposable::ZFree => write!(f, "Z"),
            Indecomposable::ZTorsion { p, k } => write!(f, "Z/{}", p.pow(*k)),
            Indecomposable::Preprojective(n) => write!(f, "P{n}"),
            Indecomposable::Preinjective(n) => write!(f, "I{n}"),
            Indecomposable::Regular { point, length } => write!(f, "R[{point},{length}]"),
            Indecomposable::Interval { i, j } => write!(f, "M[{i},{j}]"),
        }
    }
}

/// One Hom or Ext invariant: a group over `Z` (or its localisations), a
/// dimension over a field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Invariant {
    Group(AbelianGroup),
    Dim(u64),
}

impl Invariant {
    pub fn is_zero(&self) -> bool {
        match self {
            Invariant::Group(g) => g.is_zero(),
            Invariant::Dim(d) => *d == 0,
        }
    }

    pub fn zero_like(&self) -> Invariant {
        match self {
            Invariant::Group(_) => Invariant::Group(AbelianGroup::zero()),
            Invariant::Dim(_) => Invariant::Dim(0),
        }
    }

    pub fn dim(&self) -> Option<u64> {
        match self {
            Invariant::Dim(d) => Some(*d),
            Invariant::Group(_) => None,
        }
    }

    pub fn direct_sum(&self, other: &Invariant) -> Invariant {
        match (self, other) {
            (Invariant::Group(a), Invariant::Group(b)) => Invariant::Group(a.direct_sum(b)),
            (Invariant::Dim(a), Invariant::Dim(b)) => Invariant::Dim(a + b),
            _ => panic!("mixing group and dimension invariants"),
        }
    }

    pub fn repeat(&self, times: u32) -> Invariant {
        (0..times).fold(self.zero_like(), |acc, _| acc.direct_sum(self))
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::Group(g) => write!(f, "{g}"),
            Invariant::Dim(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomExtRecord {
    pub hom: Invariant,
    pub ext: Invariant,
}

impl HomExtRecord {
    fn dims(hom: u64, ext: u64) -> Self {
        HomExtRecord {
            hom: Invariant::Dim(hom),
            ext: Invariant::Dim(ext),
        }
    }

    fn groups(hom: AbelianGroup, ext: AbelianGroup) -> Self {
        HomExtRecord {
            hom: Invariant::Group(hom),
            ext: Invariant::Group(ext),
        }
    }

    pub fn vanishes(&self) -> bool {
        self.hom.is_zero() && self.ext.is_zero()
    }
}

/// `Hom(X, Y)` and `Ext^1(X, Y)`; the ring is hereditary, so nothing higher.
pub fn hom_invariants(
    ring: &RingDescriptor,
    x: &Indecomposable,
    y: &Indecomposable,
) -> Result<HomExtRecord> {
    ring.check(x)?;
    ring.check(y)?;
    use Indecomposable::*;
    let rec = match (x, y) {
        (ZFree, ZFree) => HomExtRecord::groups(AbelianGroup::free(1), AbelianGroup::zero()),
        (ZFree, ZTorsion { p, k }) => {
            HomExtRecord::groups(AbelianGroup::cyclic(*p, *k), AbelianGroup::zero())
        }
        (ZTorsion { p, k }, ZFree) => {
            HomExtRecord::groups(AbelianGroup::zero(), AbelianGroup::cyclic(*p, *k))
        }
        (ZTorsion { p, k }, ZTorsion { p: q, k: l }) => {
            if p == q {
                let g = AbelianGroup::cyclic(*p, (*k).min(*l));
                HomExtRecord::groups(g.clone(), g)
            } else {
                HomExtRecord::groups(AbelianGroup::zero(), AbelianGroup::zero())
            }
        }
        (Preprojective(m), Preprojective(n)) => {
            let (m, n) = (*m as u64, *n as u64);
            if n >= m {
                HomExtRecord::dims(n - m + 1, 0)
            } else {
                HomExtRecord::dims(0, m - n - 1)
            }
        }
        (Preprojective(_), Regular { length, .. }) => HomExtRecord::dims(*length as u64, 0),
        (Preprojective(m), Preinjective(n)) => HomExtRecord::dims((m + n) as u64, 0),
        (Regular { length, .. }, Preprojective(_)) => HomExtRecord::dims(0, *length as u64),
        (
            Regular { point: a, length: k },
            Regular { point: b, length: l },
        ) => {
            if a == b {
                let d = (*k).min(*l) as u64;
                HomExtRecord::dims(d, d)
            } else {
                HomExtRecord::dims(0, 0)
            }
        }
        (Regular { length, .. }, Preinjective(_)) => HomExtRecord::dims(*length as u64, 0),
        (Preinjective(m), Preprojective(n)) => HomExtRecord::dims(0, (m + n + 2) as u64),
        (Preinjective(_), Regular { length, .. }) => HomExtRecord::dims(0, *length as u64),
        (Preinjective(m), Preinjective(n)) => {
            let (m, n) = (*m as u64, *n as u64);
            if m >= n {
                HomExtRecord::dims(m - n + 1, 0)
            } else {
                HomExtRecord::dims(0, n - m - 1)
            }
        }
        (Interval { i: a, j: b }, Interval { i: c, j: d }) => {
            let hom: i64 = if a <= c && c <= b && b <= d { 1 } else { 0 };
            let euler = euler_form(ring, &dim_vector(ring, x)?, &dim_vector(ring, y)?)?;
            HomExtRecord::dims(hom as u64, (hom - euler) as u64)
        }
        _ => return Err(Error::MixedRings(format!("{x} and {y}"))),
    };
    Ok(rec)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimVector(pub Vec<u64>);

impl DimVector {
    pub fn zero(len: usize) -> Self {
        DimVector(vec![0; len])
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        assert_eq!(self.0.len(), other.0.len());
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn dim_vector(ring: &RingDescriptor, x: &Indecomposable) -> Result<DimVector> {
    ring.check(x)?;
    match (ring, x) {
        (RingDescriptor::Kronecker(_), Indecomposable::Preprojective(n)) => {
            Ok(DimVector(vec![*n as u64, *n as u64 + 1]))
        }
        (RingDescriptor::Kronecker(_), Indecomposable::Preinjective(n)) => {
            Ok(DimVector(vec![*n as u64 + 1, *n as u64]))
        }
        (RingDescriptor::Kronecker(_), Indecomposable::Regular { length, .. }) => {
            Ok(DimVector(vec![*length as u64, *length as u64]))
        }
        (RingDescriptor::DynkinAn(n), Indecomposable::Interval { i, j }) => Ok(DimVector(
            (1..=*n).map(|v| u64::from(*i <= v && v <= *j)).collect(),
        )),
        _ => Err(Error::WrongRing {
            op: "dim_vector",
            ring: ring.to_string(),
        }),
    }
}

/// The Euler form `<d, e> = dim Hom - dim Ext` of the quiver.
pub fn euler_form(ring: &RingDescriptor, d: &DimVector, e: &DimVector) -> Result<i64> {
    let (d, e): (Vec<i64>, Vec<i64>) = (
        d.0.iter().map(|&x| x as i64).collect(),
        e.0.iter().map(|&x| x as i64).collect(),
    );
    match ring {
        RingDescriptor::Kronecker(_) => {
            check_len(&d, &e, 2)?;
            // Vertex 2 first; two arrows 2 -> 1.
            Ok(d[0] * e[0] + d[1] * e[1] - 2 * d[0] * e[1])
        }
        RingDescriptor::DynkinAn(n) => {
            check_len(&d, &e, *n as usize)?;
            let diag: i64 = d.iter().zip(&e).map(|(a, b)| a * b).sum();
            // Arrows i+1 -> i (0-based: vertex v+1 maps to v).
            let arrows: i64 = (0..d.len().saturating_sub(1)).map(|v| d[v + 1] * e[v]).sum();
            Ok(diag - arrows)
        }
        _ => Err(Error::WrongRing {
            op: "euler_form",
            ring: ring.to_string(),
        }),
    }
}

fn check_len(d: &[i64], e: &[i64], n: usize) -> Result<()> {
    if d.len() == n && e.len() == n {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "dimension vectors must have {n} entries"
        )))
    }
}

/// `dim V_2 - dim V_1`: negative on preprojectives, zero on regulars and
/// positive on preinjectives.
pub fn defect(d: &DimVector) -> i64 {
    d.0[0] as i64 - d.0[1] as i64
}

fn require_kronecker(ring: &RingDescriptor, op: &'static str) -> Result<()> {
    match ring {
        RingDescriptor::Kronecker(_) => Ok(()),
        _ => Err(Error::WrongRing {
            op,
            ring: ring.to_string(),
        }),
    }
}

/// The Auslander–Reiten translate: `τ P(n) = P(n-2)`, `τ I(n) = I(n+2)`, and
/// every homogeneous tube is fixed.
pub fn tau(ring: &RingDescriptor, x: &Indecomposable) -> Result<Indecomposable> {
    require_kronecker(ring, "tau")?;
    ring.check(x)?;
    match x {
        Indecomposable::Preprojective(n) if *n >= 2 => Ok(Indecomposable::Preprojective(n - 2)),
        Indecomposable::Preprojective(_) => Err(Error::ProjectiveArgument(x.to_string())),
        Indecomposable::Preinjective(n) => Ok(Indecomposable::Preinjective(n + 2)),
        Indecomposable::Regular { .. } => Ok(x.clone()),
        _ => unreachable!(),
    }
}

pub fn tau_inverse(ring: &RingDescriptor, x: &Indecomposable) -> Result<Indecomposable> {
    require_kronecker(ring, "tau_inverse")?;
    ring.check(x)?;
    match x {
        Indecomposable::Preinjective(n) if *n >= 2 => Ok(Indecomposable::Preinjective(n - 2)),
        Indecomposable::Preinjective(_) => Err(Error::InjectiveArgument(x.to_string())),
        Indecomposable::Preprojective(n) => Ok(Indecomposable::Preprojective(n + 2)),
        Indecomposable::Regular { .. } => Ok(x.clone()),
        _ => unreachable!(),
    }
}

/// `End(X) = K` and `Ext^1(X, X) = 0`.
pub fn is_exceptional(ring: &RingDescriptor, x: &Indecomposable) -> Result<bool> {
    if !ring.is_field_algebra() {
        return Err(Error::WrongRing {
            op: "is_exceptional",
            ring: ring.to_string(),
        });
    }
    let r = hom_invariants(ring, x, x)?;
    Ok(r.hom == Invariant::Dim(1) && r.ext.is_zero())
}

pub fn is_exceptional_sequence(ring: &RingDescriptor, xs: &[Indecomposable]) -> Result<bool> {
    for x in xs {
        if !is_exceptional(ring, x)? {
            return Ok(false);
        }
    }
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if !hom_invariants(ring, &xs[j], &xs[i])?.vanishes() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Indecomposable::*;

    fn kq() -> RingDescriptor {
        RingDescriptor::Kronecker(FieldDescriptor::Rational)
    }

    #[test]
    fn integer_records() {
        let z = RingDescriptor::IntegerRing;
        let r = hom_invariants(&z, &Indecomposable::torsion(2, 2), &Indecomposable::torsion(3, 1)).unwrap();
        assert!(r.vanishes());
        let r = hom_invariants(&z, &ZFree, &ZFree).unwrap();
        assert_eq!(r.hom, Invariant::Group(AbelianGroup::free(1)));
        assert!(r.ext.is_zero());
    }

    #[test]
    fn kronecker_records() {
        let r = hom_invariants(&kq(), &Preprojective(0), &Preprojective(1)).unwrap();
        assert_eq!(r, HomExtRecord::dims(2, 0));
        let a = Indecomposable::regular(ProjPoint::rational(0, 1), 1);
        let b = Indecomposable::regular(ProjPoint::Infinity, 1);
        assert!(hom_invariants(&kq(), &a, &b).unwrap().vanishes());
    }

    #[test]
    fn euler_examples() {
        let k = kq();
        assert_eq!(euler_form(&k, &DimVector(vec![0, 1]), &DimVector(vec![1, 2])).unwrap(), 2);
        assert_eq!(euler_form(&k, &DimVector(vec![1, 1]), &DimVector(vec![1, 1])).unwrap(), 0);
        assert_eq!(euler_form(&k, &DimVector(vec![0, 0]), &DimVector(vec![3, 5])).unwrap(), 0);
        assert!(euler_form(&RingDescriptor::IntegerRing, &DimVector(vec![]), &DimVector(vec![])).is_err());
    }

    #[test]
    fn translate() {
        let k = kq();
        let r = Indecomposable::regular(ProjPoint::rational(1, 1), 3);
        assert_eq!(tau(&k, &r).unwrap(), r);
        assert_eq!(tau(&k, &Preprojective(0)), Err(Error::ProjectiveArgument("P0".into())));
        assert_eq!(tau(&k, &Preprojective(2)).unwrap(), Preprojective(0));
        assert_eq!(tau_inverse(&k, &Preinjective(1)), Err(Error::InjectiveArgument("I1".into())));
        assert_eq!(tau_inverse(&k, &tau(&k, &Preinjective(4)).unwrap()).unwrap(), Preinjective(4));
    }

    #[test]
    fn defect_signs() {
        let k = kq();
        for n in 0..=20 {
            assert_eq!(defect(&dim_vector(&k, &Preprojective(n)).unwrap()), -1);
            assert_eq!(defect(&dim_vector(&k, &Preinjective(n)).unwrap()), 1);
        }
        assert_eq!(defect(&DimVector(vec![4, 4])), 0);
    }

    #[test]
    fn exceptional_objects() {
        let k = kq();
        assert!(is_exceptional(&k, &Preprojective(0)).unwrap());
        assert!(!is_exceptional(&k, &Indecomposable::regular(ProjPoint::rational(0, 1), 1)).unwrap());
        assert!(is_exceptional_sequence(&k, &[Preprojective(0), Preprojective(1)]).unwrap());
        assert!(!is_exceptional_sequence(&k, &[Preprojective(1), Preprojective(0)]).unwrap());
        assert!(is_exceptional(&RingDescriptor::IntegerRing, &ZFree).is_err());
    }

    #[test]
    fn mixed_rings_rejected() {
        assert!(matches!(
            hom_invariants(&kq(), &ZFree, &Preprojective(0)),
            Err(Error::MixedRings(_))
        ));
    }
}
