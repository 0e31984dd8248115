//! Points of `Spec Z` and of the projective line, and decidable sets of them.
//!
//! Every label carries a numeric key; a *tail* `T_N` is the set of all labels
//! with key `>= N`. Keys are the prime itself for primes, the height
//! `max(|num|, den)` for rational points (with `(0:1)` at key 0), `index + 1`
//! for finite-field points (again `(0:1)` at key 0) and the tag for formal
//! points of an uncountable field.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith;
use crate::field::{FieldDescriptor, Scalar};

/// A point of the projective line. `Affine(t)` is `(1:t)`, `Infinity` is `(0:1)`.
///
/// For the Kronecker quiver, the point `(a:b)` indexes the tube whose
/// quasi-simple module is `K --a,b--> K`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    Infinity,
    Affine(Scalar),
    Formal(u64),
}

impl ProjPoint {
    pub fn rational(num: i64, den: i64) -> Self {
        ProjPoint::Affine(Scalar::ratio(num, den))
    }

    /// The point `(a:b)` with rational homogeneous coordinates.
    pub fn from_homogeneous(a: i64, b: i64) -> Option<Self> {
        match (a, b) {
            (0, 0) => None,
            (0, _) => Some(ProjPoint::Infinity),
            _ => Some(ProjPoint::rational(b, a)),
        }
    }

    pub fn key(&self) -> u64 {
        match self {
            ProjPoint::Infinity => 0,
            ProjPoint::Affine(s) => s.height(),
            ProjPoint::Formal(i) => *i,
        }
    }

    pub fn belongs_to(&self, field: &FieldDescriptor) -> bool {
        match (self, field) {
            (ProjPoint::Infinity, FieldDescriptor::SymbolicUncountable) => false,
            (ProjPoint::Infinity, _) => true,
            (ProjPoint::Affine(Scalar::Q(_)), FieldDescriptor::Rational) => true,
            (ProjPoint::Affine(Scalar::F(i)), FieldDescriptor::FiniteField(q)) => i < q,
            (ProjPoint::Formal(_), FieldDescriptor::SymbolicUncountable) => true,
            _ => false,
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Infinity => write!(f, "(0:1)"),
            ProjPoint::Affine(s) => write!(f, "(1:{s})"),
            ProjPoint::Formal(i) => write!(f, "f{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Prime(u64),
    Point(ProjPoint),
}

impl Label {
    pub fn key(&self) -> u64 {
        match self {
            Label::Prime(p) => *p,
            Label::Point(pt) => pt.key(),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Prime(p) => write!(f, "{p}"),
            Label::Point(pt) => write!(f, "{pt}"),
        }
    }
}

/// The ambient set a [`LabelSet`] lives in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Universe {
    Primes,
    Points(FieldDescriptor),
}

impl Universe {
    pub fn contains(&self, label: &Label) -> bool {
        match (self, label) {
            (Universe::Primes, Label::Prime(p)) => arith::is_prime(*p),
            (Universe::Points(field), Label::Point(pt)) => pt.belongs_to(field),
            _ => false,
        }
    }

    /// Largest key carrying labels, for finite universes.
    pub fn max_key(&self) -> Option<u64> {
        match self {
            Universe::Points(FieldDescriptor::FiniteField(q)) => Some(*q as u64),
            _ => None,
        }
    }

    pub fn is_uncountable(&self) -> bool {
        matches!(self, Universe::Points(FieldDescriptor::SymbolicUncountable))
    }

    /// All labels with the given key, in increasing order.
    pub fn labels_at_key(&self, key: u64) -> Vec<Label> {
        match self {
            Universe::Primes => {
                if arith::is_prime(key) {
                    vec![Label::Prime(key)]
                } else {
                    Vec::new()
                }
            }
            Universe::Points(FieldDescriptor::Rational) => rational_points_of_height(key)
                .into_iter()
                .map(Label::Point)
                .collect(),
            Universe::Points(FieldDescriptor::FiniteField(q)) => match key {
                0 => vec![Label::Point(ProjPoint::Infinity)],
                k if k <= *q as u64 => {
                    vec![Label::Point(ProjPoint::Affine(Scalar::F((k - 1) as u32)))]
                }
                _ => Vec::new(),
            },
            Universe::Points(FieldDescriptor::SymbolicUncountable) => {
                vec![Label::Point(ProjPoint::Formal(key))]
            }
        }
    }

    /// All labels with key in `[lo, hi)`.
    pub fn labels_in(&self, lo: u64, hi: u64) -> Vec<Label> {
        (lo..hi).flat_map(|k| self.labels_at_key(k)).collect()
    }
}

fn rational_points_of_height(h: u64) -> Vec<ProjPoint> {
    // Canonicalising label sets asks for the same heights over and over.
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<ProjPoint>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&h) {
        return v.clone();
    }
    let v = enumerate_height(h);
    cache.lock().expect("cache lock").insert(h, v.clone());
    v
}

/// Points `(1:num/den)` in lowest terms with `max(|num|, den) = h`, plus
/// `(0:1)` at height 0.
fn enumerate_height(h: u64) -> Vec<ProjPoint> {
    if h == 0 {
        return vec![ProjPoint::Infinity];
    }
    if h == 1 {
        return [-1i64, 0, 1].into_iter().map(|n| ProjPoint::rational(n, 1)).collect();
    }
    let hi = h as i64;
    let point = |num: i64, den: i64| ProjPoint::Affine(Scalar::Q(BigRational::new(BigInt::from(num), BigInt::from(den))));
    let mut out = Vec::new();
    // |num| = h with den < h, and den = h with |num| < h (never both).
    for den in 1..hi {
        if arith::gcd(h, den as u64) == 1 {
            out.push(point(hi, den));
            out.push(point(-hi, den));
        }
    }
    for num in -hi + 1..hi {
        if arith::gcd(num.unsigned_abs(), h) == 1 {
            out.push(point(num, hi));
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cardinality {
    Finite,
    Countable,
    Uncountable,
}

/// A decidable subset of a [`Universe`]: `finite ∪ T_tail`, complemented when
/// `negated`. Values are kept canonical, so structural equality is set
/// equality. Negation survives canonicalisation only in the uncountable
/// universe, where the positive part ranges over formal points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSet {
    universe: Universe,
    negated: bool,
    finite: BTreeSet<Label>,
    tail: Option<u64>,
}

pub type PrimeSet = LabelSet;
pub type PointSet = LabelSet;

impl LabelSet {
    pub fn new(
        universe: Universe,
        negated: bool,
        finite: impl IntoIterator<Item = Label>,
        tail: Option<u64>,
    ) -> Self {
        let finite: BTreeSet<Label> = finite.into_iter().collect();
        for l in &finite {
            assert!(universe.contains(l), "label {l} is not in {universe:?}");
        }
        let pos = canonical(&universe, finite, tail);
        if negated && !universe.is_uncountable() {
            let (finite, tail) = complement_pos(&universe, &pos.0, pos.1);
            return LabelSet {
                universe,
                negated: false,
                finite,
                tail,
            };
        }
        LabelSet {
            universe,
            negated,
            finite: pos.0,
            tail: pos.1,
        }
    }

    pub fn empty(universe: Universe) -> Self {
        LabelSet::new(universe, false, [], None)
    }

    pub fn all(universe: Universe) -> Self {
        LabelSet::new(universe, true, [], None)
    }

    pub fn finite(universe: Universe, labels: impl IntoIterator<Item = Label>) -> Self {
        LabelSet::new(universe, false, labels, None)
    }

    pub fn cofinite(universe: Universe, labels: impl IntoIterator<Item = Label>) -> Self {
        LabelSet::new(universe, true, labels, None)
    }

    /// `T_n`: every label with key `>= n`.
    pub fn tail(universe: Universe, n: u64) -> Self {
        LabelSet::new(universe, false, [], Some(n))
    }

    pub fn primes(ps: impl IntoIterator<Item = u64>) -> Self {
        LabelSet::finite(Universe::Primes, ps.into_iter().map(Label::Prime))
    }

    pub fn points(field: FieldDescriptor, pts: impl IntoIterator<Item = ProjPoint>) -> Self {
        LabelSet::finite(Universe::Points(field), pts.into_iter().map(Label::Point))
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn finite_part(&self) -> &BTreeSet<Label> {
        &self.finite
    }

    pub fn tail_from(&self) -> Option<u64> {
        self.tail
    }

    pub fn contains(&self, label: &Label) -> bool {
        if !self.universe.contains(label) {
            return false;
        }
        let inside = self.finite.contains(label) || self.tail.is_some_and(|n| label.key() >= n);
        inside != self.negated
    }

    pub fn is_empty(&self) -> bool {
        !self.negated && self.finite.is_empty() && self.tail.is_none()
    }

    pub fn is_all(&self) -> bool {
        if self.negated {
            return self.finite.is_empty() && self.tail.is_none();
        }
        if self.universe.max_key().is_none() {
            // Canonical tails sit as low as the explicit members allow.
            return self.tail.is_some_and(|n| self.finite.is_empty() && self.universe.labels_in(0, n).is_empty());
        }
        let (f, t) = complement_pos(&self.universe, &self.finite, self.tail);
        f.is_empty() && t.is_none()
    }

    pub fn cardinality(&self) -> Cardinality {
        if self.negated {
            Cardinality::Uncountable
        } else if self.tail.is_some() {
            Cardinality::Countable
        } else {
            Cardinality::Finite
        }
    }

    pub fn is_countable(&self) -> bool {
        self.cardinality() != Cardinality::Uncountable
    }

    fn check(&self, other: &LabelSet) {
        assert_eq!(
            self.universe, other.universe,
            "label sets over different universes"
        );
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        self.check(other);
        let u = &self.universe;
        match (self.negated, other.negated) {
            (false, false) => {
                let (f, t) = union_pos(&self.finite, self.tail, &other.finite, other.tail);
                LabelSet::new(u.clone(), false, f, t)
            }
            (true, true) => {
                let (f, t) = inter_pos(&self.finite, self.tail, &other.finite, other.tail);
                LabelSet::new(u.clone(), true, f, t)
            }
            (true, false) => self.negated_minus(other),
            (false, true) => other.negated_minus(self),
        }
    }

    /// For `self = ¬A` and positive `b`: `¬A ∪ b = ¬(A ∖ b)`.
    fn negated_minus(&self, b: &LabelSet) -> LabelSet {
        let (cf, ct) = complement_pos(&self.universe, &b.finite, b.tail);
        let (f, t) = inter_pos(&self.finite, self.tail, &cf, ct);
        LabelSet::new(self.universe.clone(), true, f, t)
    }

    pub fn intersection(&self, other: &LabelSet) -> LabelSet {
        self.check(other);
        if !self.negated && !other.negated {
            let (f, t) = inter_pos(&self.finite, self.tail, &other.finite, other.tail);
            return LabelSet::new(self.universe.clone(), false, f, t);
        }
        self.complement().union(&other.complement()).complement()
    }

    pub fn complement(&self) -> LabelSet {
        if self.universe.is_uncountable() {
            return LabelSet {
                universe: self.universe.clone(),
                negated: !self.negated,
                finite: self.finite.clone(),
                tail: self.tail,
            };
        }
        let (f, t) = complement_pos(&self.universe, &self.finite, self.tail);
        LabelSet::new(self.universe.clone(), false, f, t)
    }

    pub fn difference(&self, other: &LabelSet) -> LabelSet {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.check(other);
        if self.negated || other.negated {
            return self.difference(other).is_empty();
        }
        // Positive sets: explicit members must be covered, and a tail `T_a`
        // needs a tail `T_b` of `other` plus every label with key in [a, b).
        self.finite.iter().all(|l| other.contains(l))
            && match (self.tail, other.tail) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => {
                    b <= a || self.universe.labels_in(a, b).iter().all(|l| other.finite.contains(l))
                }
            }
    }

    /// Some `N` with `T_N ⊆ self`, if one exists.
    pub fn contained_tail(&self) -> Option<u64> {
        if let Some(max) = self.universe.max_key() {
            // Finite universe: T_{max+1} is empty; walk down as far as possible.
            let mut n = max + 1;
            while n > 0
                && self
                    .universe
                    .labels_at_key(n - 1)
                    .iter()
                    .all(|l| self.contains(l))
            {
                n -= 1;
            }
            return Some(n);
        }
        if self.negated {
            if self.tail.is_some() {
                None
            } else {
                Some(self.finite.iter().map(|l| l.key() + 1).max().unwrap_or(0))
            }
        } else {
            self.tail
        }
    }

    pub fn contains_some_tail(&self) -> bool {
        self.contained_tail().is_some()
    }

    /// Largest key explicitly mentioned by the presentation (finite labels and
    /// the tail bound). Beyond this key the set behaves uniformly.
    pub fn max_mentioned_key(&self) -> u64 {
        let f = self.finite.iter().map(Label::key).max().unwrap_or(0);
        f.max(self.tail.unwrap_or(0))
    }

    /// Members with key in `[lo, hi)`, in increasing key order.
    pub fn members_in(&self, lo: u64, hi: u64) -> Vec<Label> {
        self.universe
            .labels_in(lo, hi)
            .into_iter()
            .filter(|l| self.contains(l))
            .collect()
    }

    /// The explicit members, when the set is finite.
    pub fn as_finite(&self) -> Option<Vec<Label>> {
        if self.negated {
            return None;
        }
        if self.tail.is_some() {
            return None;
        }
        let mut v: Vec<Label> = self.finite.iter().cloned().collect();
        v.sort_by_key(|l| (l.key(), l.clone()));
        Some(v)
    }
}

fn sorted_labels(s: &BTreeSet<Label>) -> Vec<&Label> {
    let mut v: Vec<&Label> = s.iter().collect();
    v.sort_by_key(|l| (l.key(), (*l).clone()));
    v
}

fn fmt_pos(f: &mut fmt::Formatter<'_>, finite: &BTreeSet<Label>, tail: Option<u64>) -> fmt::Result {
    let names: Vec<String> = sorted_labels(finite).iter().map(|l| l.to_string()).collect();
    match (names.is_empty(), tail) {
        (true, None) => write!(f, "{{}}"),
        (true, Some(n)) => write!(f, "tail {n}"),
        (false, None) => write!(f, "{{{}}}", names.join(", ")),
        (false, Some(n)) => write!(f, "{{{}}} + tail {n}", names.join(", ")),
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_all() {
            return write!(f, "all");
        }
        if self.negated {
            write!(f, "cofinite ")?;
            if self.tail.is_some() {
                write!(f, "(")?;
                fmt_pos(f, &self.finite, self.tail)?;
                return write!(f, ")");
            }
        }
        fmt_pos(f, &self.finite, self.tail)
    }
}

fn canonical(universe: &Universe, mut finite: BTreeSet<Label>, tail: Option<u64>) -> (BTreeSet<Label>, Option<u64>) {
    let Some(mut n) = tail else {
        return (finite, None);
    };
    finite.retain(|l| l.key() < n);
    if let Some(max) = universe.max_key() {
        for k in n..=max {
            finite.extend(universe.labels_at_key(k));
        }
        return (finite, None);
    }
    while n > 0 && universe.labels_at_key(n - 1).iter().all(|l| finite.contains(l)) {
        for l in universe.labels_at_key(n - 1) {
            finite.remove(&l);
        }
        n -= 1;
    }
    while universe.labels_at_key(n).is_empty() {
        n += 1;
    }
    (finite, Some(n))
}

/// Complement of `finite ∪ T_tail` inside the countable part of the universe.
fn complement_pos(universe: &Universe, finite: &BTreeSet<Label>, tail: Option<u64>) -> (BTreeSet<Label>, Option<u64>) {
    if let Some(max) = universe.max_key() {
        let all = universe.labels_in(0, max + 1);
        let f = all
            .into_iter()
            .filter(|l| !finite.contains(l) && tail.is_none_or(|n| l.key() < n))
            .collect();
        return (f, None);
    }
    match tail {
        Some(n) => {
            let f = universe
                .labels_in(0, n)
                .into_iter()
                .filter(|l| !finite.contains(l))
                .collect();
            (f, None)
        }
        None => {
            let m = finite.iter().map(|l| l.key() + 1).max().unwrap_or(0);
            let f = universe
                .labels_in(0, m)
                .into_iter()
                .filter(|l| !finite.contains(l))
                .collect();
            canonical(universe, f, Some(m))
        }
    }
}

fn union_pos(
    f1: &BTreeSet<Label>,
    t1: Option<u64>,
    f2: &BTreeSet<Label>,
    t2: Option<u64>,
) -> (BTreeSet<Label>, Option<u64>) {
    let f = f1.union(f2).cloned().collect();
    let t = match (t1, t2) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    (f, t)
}

fn inter_pos(
    f1: &BTreeSet<Label>,
    t1: Option<u64>,
    f2: &BTreeSet<Label>,
    t2: Option<u64>,
) -> (BTreeSet<Label>, Option<u64>) {
    let in_pos = |l: &Label, f: &BTreeSet<Label>, t: Option<u64>| f.contains(l) || t.is_some_and(|n| l.key() >= n);
    let mut f: BTreeSet<Label> = f1.iter().filter(|l| in_pos(l, f2, t2)).cloned().collect();
    f.extend(f2.iter().filter(|l| in_pos(l, f1, t1)).cloned());
    let t = match (t1, t2) {
        (Some(a), Some(b)) => Some(a.max(b)),
        _ => None,
    };
    (f, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn primes(v: &[u64]) -> LabelSet {
        LabelSet::primes(v.iter().copied())
    }

    #[test]
    fn prime_set_algebra() {
        let a = primes(&[2, 3, 5]);
        let b = primes(&[3, 5, 7]);
        assert_eq!(a.intersection(&b), primes(&[3, 5]));
        assert_eq!(a.union(&b), primes(&[2, 3, 5, 7]));
        let co = a.complement();
        assert_eq!(co, LabelSet::tail(Universe::Primes, 7));
        assert!(co.contains(&Label::Prime(11)));
        assert!(!co.contains(&Label::Prime(3)));
        assert_eq!(co.complement(), a);
        assert!(LabelSet::all(Universe::Primes).is_all());
        assert_eq!(LabelSet::tail(Universe::Primes, 0), LabelSet::all(Universe::Primes));
        assert_eq!(LabelSet::tail(Universe::Primes, 4), LabelSet::tail(Universe::Primes, 5));
    }

    #[test]
    fn tails_absorb_explicit_members() {
        let s = LabelSet::new(Universe::Primes, false, [Label::Prime(5), Label::Prime(13)], Some(7));
        assert_eq!(s, LabelSet::new(Universe::Primes, false, [Label::Prime(13)], Some(5)));
        assert_eq!(s.cardinality(), Cardinality::Countable);
        assert_eq!(s.to_string(), "tail 5");
    }

    #[test]
    fn rational_heights() {
        let u = Universe::Points(FieldDescriptor::Rational);
        assert_eq!(u.labels_at_key(0).len(), 1);
        assert_eq!(u.labels_at_key(1).len(), 3);
        // Height 2: ±2, ±1/2.
        assert_eq!(u.labels_at_key(2).len(), 4);
        let pt = ProjPoint::rational(3, 2);
        assert_eq!(pt.key(), 3);
    }

    #[test]
    fn finite_field_sets_are_explicit() {
        let u = Universe::Points(FieldDescriptor::FiniteField(5));
        let t = LabelSet::tail(u.clone(), 3);
        assert_eq!(t.cardinality(), Cardinality::Finite);
        assert_eq!(t.members_in(0, 10).len(), 3);
        assert!(LabelSet::empty(u.clone()).contains_some_tail());
        assert_eq!(LabelSet::empty(u).complement().cardinality(), Cardinality::Finite);
    }

    #[test]
    fn uncountable_sets() {
        let u = Universe::Points(FieldDescriptor::SymbolicUncountable);
        let f0 = Label::Point(ProjPoint::Formal(0));
        let f3 = Label::Point(ProjPoint::Formal(3));
        let co = LabelSet::cofinite(u.clone(), [f0.clone()]);
        assert_eq!(co.cardinality(), Cardinality::Uncountable);
        assert!(!co.contains(&f0));
        assert!(co.contains(&f3));
        let fin = LabelSet::finite(u.clone(), [f0.clone(), f3.clone()]);
        assert_eq!(co.intersection(&fin), LabelSet::finite(u.clone(), [f3.clone()]));
        assert!(co.union(&fin).is_all());
        assert_eq!(co.complement(), LabelSet::finite(u.clone(), [f0]));
        assert!(co.contains_some_tail());
        assert!(!LabelSet::tail(u.clone(), 2).complement().contains_some_tail());
        assert_eq!(LabelSet::all(u).to_string(), "all");
    }
}
