//! Additive good metrics on the bounded derived category in normal form.
//!
//! A metric is given by two window edges and three descending chains. At
//! level `n`, a summand in degree `i` is measured against
//!
//! * `below(n)` when `i <= low(n)`,
//! * `above(n)` when `i > high(n)`,
//! * `mid(n)` otherwise,
//!
//! and the ball `B_n` is the additive closure of everything that passes.
//! An infinite edge has no outer zone; its chain is then stored equal to
//! `mid`, so the chain governing degrees near `±∞` is always `below` or
//! `above`. The standard t-structure metric has finite edges
//! `low(n) = -n`, `high(n) = n`, outer chains `all` and middle chain `0`.

use std::fmt;

use crate::chain::ChainSchedule;
use crate::derived::SplitObject;
use crate::error::{Error, Result};
use crate::indec::RingDescriptor;
use crate::thick::ThickDescriptor;

/// A strictly increasing sequence `g(1) < g(2) < …` of non-negative integers:
/// an explicit prefix followed by an arithmetic progression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Growth {
    prefix: Vec<u64>,
    start: u64,
    step: u64,
}

impl Growth {
    /// `g(n) = prefix[n-1]` for `n <= prefix.len()`, then `start`,
    /// `start + step`, ….
    pub fn new(prefix: Vec<u64>, start: u64, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidSchedule(
                "window edges must move by at least one degree per level".into(),
            ));
        }
        let g = Growth { prefix, start, step };
        let l = g.prefix.len() as u64;
        for n in 1..=l {
            if g.at(n + 1) <= g.at(n) {
                return Err(Error::InvalidSchedule(format!(
                    "window edges must move by at least one degree per level (levels {n} and {})",
                    n + 1
                )));
            }
        }
        Ok(g.canonical())
    }

    /// `g(n) = n`.
    pub fn linear() -> Self {
        Growth {
            prefix: Vec::new(),
            start: 1,
            step: 1,
        }
    }

    pub fn at(&self, n: u64) -> u64 {
        let n = n.max(1);
        let l = self.prefix.len() as u64;
        if n <= l {
            self.prefix[n as usize - 1]
        } else {
            self.start + self.step * (n - 1 - l)
        }
    }

    fn canonical(mut self) -> Self {
        while let Some(&last) = self.prefix.last() {
            if self.start >= self.step && last == self.start - self.step {
                self.prefix.pop();
                self.start = last;
            } else {
                break;
            }
        }
        self
    }

    /// `c` with `g(n) = step·n + c` on the progression.
    fn offset(&self) -> i64 {
        self.start as i64 - self.step as i64 * (self.prefix.len() as i64 + 1)
    }

    fn combine(&self, other: &Growth, pick_max: bool) -> Growth {
        let pick = |a: u64, b: u64| if pick_max { a.max(b) } else { a.min(b) };
        // Beyond this level the progressions no longer cross.
        let thr = self.prefix.len().max(other.prefix.len()) as u64
            + self.offset().abs_diff(other.offset())
            + 2;
        let prefix: Vec<u64> = (1..thr).map(|n| pick(self.at(n), other.at(n))).collect();
        let (a, b) = (self.at(thr), other.at(thr));
        let step = match (self.step.cmp(&other.step), pick_max) {
            (std::cmp::Ordering::Equal, _) => self.step,
            (_, true) => self.step.max(other.step),
            (_, false) => self.step.min(other.step),
        };
        Growth {
            prefix,
            start: pick(a, b),
            step,
        }
        .canonical()
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lin = match (self.step, self.offset()) {
            (1, 0) => "n".to_string(),
            (1, c) => format!("n{c:+}"),
            (s, 0) => format!("{s}n"),
            (s, c) => format!("{s}n{c:+}"),
        };
        if self.prefix.is_empty() {
            write!(f, "{lin}")
        } else {
            let p: Vec<String> = self.prefix.iter().map(u64::to_string).collect();
            write!(f, "[{}] then {lin}", p.join(", "))
        }
    }
}

/// One edge of the window: `Infinite` means the middle zone extends to
/// `±∞` on that side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Infinite,
    Finite(Growth),
}

impl Side {
    pub fn is_finite(&self) -> bool {
        matches!(self, Side::Finite(_))
    }

    fn growth(&self) -> Option<&Growth> {
        match self {
            Side::Finite(g) => Some(g),
            Side::Infinite => None,
        }
    }

    fn combine(&self, other: &Side, pick_max: bool) -> Side {
        match (self, other) {
            (Side::Infinite, Side::Infinite) => Side::Infinite,
            (Side::Finite(g), Side::Infinite) | (Side::Infinite, Side::Finite(g)) => Side::Finite(g.clone()),
            (Side::Finite(a), Side::Finite(b)) => Side::Finite(a.combine(b, pick_max)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BallMembership {
    In,
    Out,
    /// A violation sits next to a finite window edge, where the closure
    /// under extensions is not decided.
    BoundaryUnknown,
}

impl fmt::Display for BallMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BallMembership::In => "in",
            BallMembership::Out => "out",
            BallMembership::BoundaryUnknown => "boundary-unknown",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    Below,
    Mid,
    Above,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MetricNF {
    ring: RingDescriptor,
    low: Side,
    high: Side,
    below: ChainSchedule,
    mid: ChainSchedule,
    above: ChainSchedule,
}

impl MetricNF {
    pub fn new(
        ring: RingDescriptor,
        low: Side,
        high: Side,
        below: ChainSchedule,
        mid: ChainSchedule,
        above: ChainSchedule,
    ) -> Result<Self> {
        for c in [&below, &mid, &above] {
            for d in c.descriptors() {
                if !d.fits(&ring) {
                    return Err(Error::MixedRings(format!("{d} in a metric over {ring}")));
                }
            }
        }
        let below = if low.is_finite() { below } else { mid.clone() };
        let above = if high.is_finite() { above } else { mid.clone() };
        if !mid.pointwise_leq(&below)? || !mid.pointwise_leq(&above)? {
            return Err(Error::InvalidSchedule(
                "balls must be stable under shifts: the middle chain has to lie below both outer chains".into(),
            ));
        }
        Ok(MetricNF {
            ring,
            low,
            high,
            below,
            mid,
            above,
        })
    }

    /// Every ball equal to `C`.
    pub fn constant(ring: RingDescriptor, c: ThickDescriptor) -> Result<Self> {
        MetricNF::pure_chain(ring, ChainSchedule::constant(c))
    }

    /// Balls `C_n` with no window.
    pub fn pure_chain(ring: RingDescriptor, chain: ChainSchedule) -> Result<Self> {
        MetricNF::new(ring, Side::Infinite, Side::Infinite, chain.clone(), chain.clone(), chain)
    }

    fn window(ring: RingDescriptor, low: Side, high: Side) -> Result<Self> {
        let all = ChainSchedule::constant(ThickDescriptor::All);
        let zero = ChainSchedule::constant(ThickDescriptor::Zero);
        MetricNF::new(ring, low, high, all.clone(), zero, all)
    }

    /// Balls `S^{<= -n}`.
    pub fn aisle(ring: RingDescriptor) -> Result<Self> {
        MetricNF::window(ring, Side::Finite(Growth::linear()), Side::Infinite)
    }

    /// Balls `S^{> n}`.
    pub fn coaisle(ring: RingDescriptor) -> Result<Self> {
        MetricNF::window(ring, Side::Infinite, Side::Finite(Growth::linear()))
    }

    /// Balls `S^{<= -n} ∪ S^{> n}`.
    pub fn t_structure(ring: RingDescriptor) -> Result<Self> {
        MetricNF::window(ring, Side::Finite(Growth::linear()), Side::Finite(Growth::linear()))
    }

    /// Balls generated by `S^{<= low(n)} ∪ S^{> high(n)} ∪ C_n`.
    pub fn with_window(ring: RingDescriptor, low: Side, high: Side, chain: ChainSchedule) -> Result<Self> {
        let all = ChainSchedule::constant(ThickDescriptor::All);
        MetricNF::new(ring, low, high, all.clone(), chain, all)
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn low(&self) -> &Side {
        &self.low
    }

    pub fn high(&self) -> &Side {
        &self.high
    }

    pub fn below(&self) -> &ChainSchedule {
        &self.below
    }

    pub fn mid(&self) -> &ChainSchedule {
        &self.mid
    }

    pub fn above(&self) -> &ChainSchedule {
        &self.above
    }

    /// `low(n)`, or `None` for `-∞`.
    pub fn low_edge(&self, n: u64) -> Option<i64> {
        self.low.growth().map(|g| -(g.at(n) as i64))
    }

    /// `high(n)`, or `None` for `+∞`.
    pub fn high_edge(&self, n: u64) -> Option<i64> {
        self.high.growth().map(|g| g.at(n) as i64)
    }

    pub fn zone(&self, n: u64, degree: i64) -> Zone {
        if self.low_edge(n).is_some_and(|l| degree <= l) {
            Zone::Below
        } else if self.high_edge(n).is_some_and(|h| degree > h) {
            Zone::Above
        } else {
            Zone::Mid
        }
    }

    /// The thick subcategory summands in `degree` must lie in at level `n`.
    pub fn zone_level(&self, n: u64, degree: i64) -> ThickDescriptor {
        match self.zone(n, degree) {
            Zone::Below => self.below.level(n),
            Zone::Mid => self.mid.level(n),
            Zone::Above => self.above.level(n),
        }
    }

    fn check_ring(&self, other: &MetricNF) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedRings(format!("{} and {}", self.ring, other.ring)))
        }
    }

    /// Whether a degree sits next to a finite window edge.
    fn near_edge(&self, n: u64, degree: i64) -> bool {
        [self.low_edge(n), self.high_edge(n)]
            .into_iter()
            .flatten()
            .any(|e| degree == e || degree == e + 1)
    }

    pub fn ball_contains(&self, n: u64, x: &SplitObject) -> Result<BallMembership> {
        if *x.ring() != self.ring {
            return Err(Error::MixedRings(format!("{} and {}", self.ring, x.ring())));
        }
        let mut boundary = false;
        for (d, m) in x.summands() {
            if self.zone_level(n, d).contains_module(m) {
                continue;
            }
            // Wide parts over Z are Serre, so the degreewise test is exact.
            if self.ring.is_integral() || !self.near_edge(n, d) {
                return Ok(BallMembership::Out);
            }
            boundary = true;
        }
        Ok(if boundary {
            BallMembership::BoundaryUnknown
        } else {
            BallMembership::In
        })
    }

    /// Every ball of `self` eventually lies in every ball of `other`.
    pub fn finer_leq(&self, other: &MetricNF) -> Result<bool> {
        self.check_ring(other)?;
        Ok(self.below.cofinal_leq(&other.below)?
            && self.mid.cofinal_leq(&other.mid)?
            && self.above.cofinal_leq(&other.above)?)
    }

    pub fn equivalent(&self, other: &MetricNF) -> Result<bool> {
        Ok(self.finer_leq(other)? && other.finer_leq(self)?)
    }

    pub fn meet(&self, other: &MetricNF) -> Result<MetricNF> {
        self.check_ring(other)?;
        MetricNF::new(
            self.ring.clone(),
            self.low.combine(&other.low, true),
            self.high.combine(&other.high, true),
            self.below.meet(&other.below)?,
            self.mid.meet(&other.mid)?,
            self.above.meet(&other.above)?,
        )
    }

    pub fn join(&self, other: &MetricNF) -> Result<MetricNF> {
        self.check_ring(other)?;
        MetricNF::new(
            self.ring.clone(),
            self.low.combine(&other.low, false),
            self.high.combine(&other.high, false),
            self.below.join(&other.below)?,
            self.mid.join(&other.mid)?,
            self.above.join(&other.above)?,
        )
    }

    /// `M ∧ S∞`.
    pub fn t_submetric(&self) -> Result<MetricNF> {
        self.meet(&MetricNF::t_structure(self.ring.clone())?)
    }

    /// `B = ∩ B_n`: window zones recede to `±∞`, so only the middle chain
    /// survives.
    pub fn kernel_b(&self) -> ThickDescriptor {
        self.mid.limit()
    }

    /// Whether `M ~ M∞ ∨ B`. In normal form `M >= M∞ ∨ B` always holds, and
    /// the converse forces the middle chain to reach its limit after
    /// finitely many steps.
    pub fn converges_uniformly(&self) -> bool {
        self.mid.is_eventually_constant()
    }

    /// Whether every ball is the same.
    pub fn is_constant(&self) -> bool {
        !self.low.is_finite()
            && !self.high.is_finite()
            && self.mid.prefix().is_empty()
            && self.mid.is_eventually_constant()
    }
}

impl fmt::Display for MetricNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let low = match &self.low {
            Side::Infinite => "-inf".to_string(),
            Side::Finite(g) => format!("-({g})"),
        };
        let high = match &self.high {
            Side::Infinite => "+inf".to_string(),
            Side::Finite(g) => format!("{g}"),
        };
        write!(f, "window ({low}, {high}]; ")?;
        if self.low.is_finite() {
            write!(f, "below {}; ", self.below)?;
        }
        write!(f, "mid {}", self.mid)?;
        if self.high.is_finite() {
            write!(f, "; above {}", self.above)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::TailKind;
    use crate::indec::Indecomposable;
    use crate::labels::LabelSet;

    fn z() -> RingDescriptor {
        RingDescriptor::IntegerRing
    }

    fn t(ps: &[u64]) -> ThickDescriptor {
        ThickDescriptor::torsion(LabelSet::primes(ps.iter().copied()))
    }

    fn tail_metric() -> MetricNF {
        MetricNF::pure_chain(z(), ChainSchedule::tail_chain(TailKind::Primes, 1, 0).unwrap()).unwrap()
    }

    #[test]
    fn aisle_join_coaisle() {
        let j = MetricNF::aisle(z()).unwrap().join(&MetricNF::coaisle(z()).unwrap()).unwrap();
        assert_eq!(j, MetricNF::t_structure(z()).unwrap());
        let t = MetricNF::t_structure(z()).unwrap();
        assert_eq!(t.t_submetric().unwrap(), t);
    }

    #[test]
    fn constants() {
        let a = MetricNF::constant(z(), t(&[2, 3])).unwrap();
        let b = MetricNF::constant(z(), t(&[3, 5])).unwrap();
        assert_eq!(a.meet(&b).unwrap(), MetricNF::constant(z(), t(&[3])).unwrap());
        let zero = MetricNF::constant(z(), ThickDescriptor::Zero).unwrap();
        assert_eq!(a.join(&zero).unwrap(), a);
        assert!(zero.finer_leq(&tail_metric()).unwrap());
        let tt = MetricNF::constant(z(), ThickDescriptor::all_torsion()).unwrap();
        assert!(!tt.finer_leq(&MetricNF::constant(z(), t(&[2])).unwrap()).unwrap());
        assert_eq!(a.kernel_b(), t(&[2, 3]));
        assert!(a.converges_uniformly());
    }

    #[test]
    fn tail_metric_properties() {
        let m = tail_metric();
        assert_eq!(m.kernel_b(), ThickDescriptor::Zero);
        assert!(!m.converges_uniformly());
        let x = SplitObject::module(z(), Indecomposable::torsion(2, 1)).unwrap();
        assert_eq!(m.ball_contains(3, &x).unwrap(), BallMembership::Out);
        let re = MetricNF::pure_chain(z(), ChainSchedule::tail_chain(TailKind::Primes, 2, 0).unwrap()).unwrap();
        assert!(m.equivalent(&re).unwrap());
        let sub = m.t_submetric().unwrap();
        assert!(sub.finer_leq(&m).unwrap());
        assert!(!m.finer_leq(&sub).unwrap());
    }

    #[test]
    fn t_structure_balls() {
        let t = MetricNF::t_structure(z()).unwrap();
        let x = SplitObject::new(z(), [(-5, Indecomposable::ZFree)]).unwrap();
        assert_eq!(t.ball_contains(2, &x).unwrap(), BallMembership::In);
        assert_eq!(t.ball_contains(2, &SplitObject::zero(z())).unwrap(), BallMembership::In);
        let y = SplitObject::module(z(), Indecomposable::ZFree).unwrap();
        assert_eq!(t.ball_contains(2, &y).unwrap(), BallMembership::Out);
        assert_eq!(t.kernel_b(), ThickDescriptor::Zero);
    }

    #[test]
    fn boundary_over_kronecker() {
        let k = RingDescriptor::Kronecker(crate::field::FieldDescriptor::Rational);
        let t = MetricNF::t_structure(k.clone()).unwrap();
        let edge = SplitObject::new(k.clone(), [(-1, Indecomposable::Preprojective(0))]).unwrap();
        assert_eq!(t.ball_contains(2, &edge).unwrap(), BallMembership::BoundaryUnknown);
        let inner = SplitObject::module(k, Indecomposable::Preprojective(0)).unwrap();
        assert_eq!(t.ball_contains(3, &inner).unwrap(), BallMembership::Out);
    }

    #[test]
    fn growth_combination() {
        let a = Growth::new(vec![], 1, 1).unwrap();
        let b = Growth::new(vec![0], 3, 2).unwrap();
        let m = a.combine(&b, true);
        let j = a.combine(&b, false);
        for n in 1..40 {
            assert_eq!(m.at(n), a.at(n).max(b.at(n)));
            assert_eq!(j.at(n), a.at(n).min(b.at(n)));
        }
        assert!(Growth::new(vec![3], 3, 1).is_err());
    }
}
