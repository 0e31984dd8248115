//! Descending chains `C_1 ⊇ C_2 ⊇ …` of thick subcategories, presented by a
//! finite prefix followed by an eventual pattern.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::labels::{LabelSet, Universe};
use crate::thick::ThickDescriptor;

/// Which labels a shrinking tail runs through.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TailKind {
    /// Torsion at all primes `p >= m`.
    Primes,
    /// Regular tubes at all points of key `>= m`.
    Points(FieldDescriptor),
}

impl TailKind {
    pub fn universe(&self) -> Universe {
        match self {
            TailKind::Primes => Universe::Primes,
            TailKind::Points(f) => Universe::Points(f.clone()),
        }
    }

    /// `T_m` as a thick subcategory.
    pub fn tail(&self, m: u64) -> ThickDescriptor {
        let s = LabelSet::tail(self.universe(), m);
        match self {
            TailKind::Primes => ThickDescriptor::torsion(s),
            TailKind::Points(_) => ThickDescriptor::regular(s),
        }
    }

    fn fixed_set(&self, d: &ThickDescriptor) -> Option<LabelSet> {
        match d {
            ThickDescriptor::Zero => Some(LabelSet::empty(self.universe())),
            ThickDescriptor::Torsion(s) | ThickDescriptor::Regular(s) if *s.universe() == self.universe() => {
                Some(s.clone())
            }
            _ => None,
        }
    }
}

/// The eventual behaviour of a chain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainTail {
    Constant(ThickDescriptor),
    /// `C_n = fixed ∨ T_{max(0, scale·n + shift)}`.
    Shrinking {
        fixed: ThickDescriptor,
        kind: TailKind,
        scale: u64,
        shift: i64,
    },
}

/// A descending chain: `C_n = prefix[n-1]` for `n <= prefix.len()`, then the
/// tail pattern. Kept canonical, so structural equality is equality of
/// chains.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainSchedule {
    prefix: Vec<ThickDescriptor>,
    tail: ChainTail,
}

fn tail_index(scale: u64, shift: i64, n: u64) -> u64 {
    (scale as i64 * n as i64 + shift).max(0) as u64
}

fn mentioned_key(d: &ThickDescriptor) -> u64 {
    match d {
        ThickDescriptor::Torsion(s) | ThickDescriptor::Regular(s) => s.max_mentioned_key(),
        _ => 0,
    }
}

/// Whether a descriptor contains every label from some key on.
fn contains_tail(d: &ThickDescriptor) -> bool {
    match d {
        ThickDescriptor::All => true,
        ThickDescriptor::Torsion(s) | ThickDescriptor::Regular(s) => s.contains_some_tail(),
        _ => false,
    }
}

impl ChainSchedule {
    pub fn constant(c: ThickDescriptor) -> Self {
        ChainSchedule {
            prefix: Vec::new(),
            tail: ChainTail::Constant(c),
        }
    }

    pub fn new(prefix: Vec<ThickDescriptor>, tail: ChainTail) -> Result<Self> {
        if let ChainTail::Shrinking { fixed, kind, scale, .. } = &tail {
            if *scale == 0 {
                return Err(Error::InvalidSchedule("tail scale must be at least 1".into()));
            }
            let ok = match fixed {
                ThickDescriptor::All => true,
                ThickDescriptor::Exceptional(_) => matches!(kind, TailKind::Points(_)),
                _ => kind.fixed_set(fixed).is_some(),
            };
            if !ok {
                return Err(Error::InvalidSchedule(format!(
                    "{fixed} cannot be combined with a {kind:?} tail"
                )));
            }
        }
        let chain = ChainSchedule { prefix, tail };
        let l = chain.prefix.len() as u64;
        for n in 1..=l {
            if !chain.level(n + 1).leq(&chain.level(n))? {
                return Err(Error::InvalidSchedule(format!(
                    "chain is not descending at level {n}: {} then {}",
                    chain.level(n),
                    chain.level(n + 1)
                )));
            }
        }
        Ok(chain.canonical())
    }

    /// `C_n = T_{scale·n + shift}`, e.g. `<Z/p : p >= n>` for scale 1, shift 0.
    pub fn tail_chain(kind: TailKind, scale: u64, shift: i64) -> Result<Self> {
        ChainSchedule::new(
            Vec::new(),
            ChainTail::Shrinking {
                fixed: ThickDescriptor::Zero,
                kind,
                scale,
                shift,
            },
        )
    }

    pub fn prefix(&self) -> &[ThickDescriptor] {
        &self.prefix
    }

    pub fn tail(&self) -> &ChainTail {
        &self.tail
    }

    fn tail_level(&self, n: u64) -> ThickDescriptor {
        match &self.tail {
            ChainTail::Constant(c) => c.clone(),
            ChainTail::Shrinking { fixed, kind, scale, shift } => fixed
                .join(&kind.tail(tail_index(*scale, *shift, n)))
                .expect("tail kind matches the fixed part"),
        }
    }

    /// `C_n` for `n >= 1` (`C_0` is read as `C_1`).
    pub fn level(&self, n: u64) -> ThickDescriptor {
        let n = n.max(1);
        match self.prefix.get(n as usize - 1) {
            Some(d) => d.clone(),
            None => self.tail_level(n),
        }
    }

    /// `∩ C_n`.
    pub fn limit(&self) -> ThickDescriptor {
        match &self.tail {
            ChainTail::Constant(c) => c.clone(),
            ChainTail::Shrinking { fixed, .. } => fixed.clone(),
        }
    }

    pub fn is_eventually_constant(&self) -> bool {
        matches!(self.tail, ChainTail::Constant(_))
    }

    /// Every descriptor occurring in the presentation.
    pub fn descriptors(&self) -> Vec<&ThickDescriptor> {
        let mut v: Vec<&ThickDescriptor> = self.prefix.iter().collect();
        match &self.tail {
            ChainTail::Constant(c) => v.push(c),
            ChainTail::Shrinking { fixed, .. } => v.push(fixed),
        }
        v
    }

    /// Index from which a shrinking tail stops changing, if it does.
    fn stable_from(&self) -> Option<u64> {
        let ChainTail::Shrinking { fixed, kind, scale, shift } = &self.tail else {
            return None;
        };
        let m0 = match fixed {
            ThickDescriptor::All => 0,
            ThickDescriptor::Exceptional(_) => kind.universe().max_key().map_or(0, |k| k + 1),
            _ => kind.fixed_set(fixed)?.contained_tail()?,
        };
        // Smallest n >= 1 with scale·n + shift >= m0.
        let need = m0 as i64 - shift;
        let s = *scale as i64;
        Some(((need + s - 1).div_euclid(s)).max(1) as u64)
    }

    fn canonical(mut self) -> Self {
        if let Some(n0) = self.stable_from() {
            let l = self.prefix.len() as u64;
            for n in l + 1..n0 {
                let d = self.tail_level(n);
                self.prefix.push(d);
            }
            let c = self.tail_level(n0.max(l + 1));
            self.tail = ChainTail::Constant(c);
        }
        while let Some(last) = self.prefix.last() {
            let n = self.prefix.len() as u64;
            if *last == self.tail_level(n) {
                self.prefix.pop();
            } else {
                break;
            }
        }
        self
    }

    fn key_bound(&self) -> u64 {
        let keys = self.descriptors().into_iter().map(mentioned_key).max().unwrap_or(0);
        let shift = match &self.tail {
            ChainTail::Shrinking { shift, .. } => shift.unsigned_abs(),
            ChainTail::Constant(_) => 0,
        };
        keys + shift
    }

    /// Levels from which both chains follow their tail patterns and every
    /// eventual comparison has settled.
    fn threshold(&self, other: &ChainSchedule) -> u64 {
        self.prefix.len().max(other.prefix.len()) as u64 + self.key_bound() + other.key_bound() + 3
    }

    fn pointwise(
        &self,
        other: &ChainSchedule,
        tail: ChainTail,
        op: impl Fn(&ThickDescriptor, &ThickDescriptor) -> Result<ThickDescriptor>,
    ) -> Result<ChainSchedule> {
        let thr = self.threshold(other);
        let prefix = (1..thr)
            .map(|n| op(&self.level(n), &other.level(n)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainSchedule { prefix, tail }.canonical())
    }

    pub fn meet(&self, other: &ChainSchedule) -> Result<ChainSchedule> {
        use ChainTail::*;
        let tail = match (&self.tail, &other.tail) {
            (Constant(c), Constant(d)) => Constant(c.meet(d)?),
            (Constant(c), Shrinking { fixed, kind, scale, shift })
            | (Shrinking { fixed, kind, scale, shift }, Constant(c)) => {
                if contains_tail(c) {
                    Shrinking {
                        fixed: c.meet(fixed)?,
                        kind: kind.clone(),
                        scale: *scale,
                        shift: *shift,
                    }
                } else {
                    Constant(c.meet(fixed)?)
                }
            }
            (
                Shrinking { fixed: f, kind, scale: a, shift: s },
                Shrinking { fixed: g, scale: b, shift: t, .. },
            ) => {
                let (scale, shift) = (*a, *s).max((*b, *t));
                Shrinking {
                    fixed: f.meet(g)?,
                    kind: kind.clone(),
                    scale,
                    shift,
                }
            }
        };
        self.pointwise(other, tail, |a, b| a.meet(b))
    }

    pub fn join(&self, other: &ChainSchedule) -> Result<ChainSchedule> {
        use ChainTail::*;
        let tail = match (&self.tail, &other.tail) {
            (Constant(c), Constant(d)) => Constant(c.join(d)?),
            (Constant(c), Shrinking { fixed, kind, scale, shift })
            | (Shrinking { fixed, kind, scale, shift }, Constant(c)) => match c {
                ThickDescriptor::All | ThickDescriptor::Exceptional(_) => Constant(ThickDescriptor::All),
                _ => Shrinking {
                    fixed: c.join(fixed)?,
                    kind: kind.clone(),
                    scale: *scale,
                    shift: *shift,
                },
            },
            (
                Shrinking { fixed: f, kind, scale: a, shift: s },
                Shrinking { fixed: g, scale: b, shift: t, .. },
            ) => {
                let (scale, shift) = (*a, *s).min((*b, *t));
                Shrinking {
                    fixed: f.join(g)?,
                    kind: kind.clone(),
                    scale,
                    shift,
                }
            }
        };
        self.pointwise(other, tail, |a, b| a.join(b))
    }

    /// `C_n <= D_n` for every `n`.
    pub fn pointwise_leq(&self, other: &ChainSchedule) -> Result<bool> {
        use ChainTail::*;
        for n in 1..self.threshold(other) {
            if !self.level(n).leq(&other.level(n))? {
                return Ok(false);
            }
        }
        Ok(match (&self.tail, &other.tail) {
            (Constant(c), Constant(d)) => c.leq(d)?,
            (Constant(c), Shrinking { fixed, .. }) => c.leq(fixed)?,
            (Shrinking { fixed, .. }, Constant(d)) => fixed.leq(d)? && contains_tail(d),
            (
                Shrinking { fixed: f, scale: a, shift: s, .. },
                Shrinking { fixed: g, scale: b, shift: t, .. },
            ) => f.leq(g)? && (*a, *s) >= (*b, *t),
        })
    }

    /// For every `n` some `m` has `C_m <= D_n`.
    pub fn cofinal_leq(&self, other: &ChainSchedule) -> Result<bool> {
        if !self.limit().leq(&other.limit())? {
            return Ok(false);
        }
        Ok(self.is_eventually_constant()
            || match &other.tail {
                ChainTail::Shrinking { .. } => true,
                ChainTail::Constant(d) => contains_tail(d),
            })
    }
}

impl fmt::Display for ChainTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainTail::Constant(c) => write!(f, "{c}"),
            ChainTail::Shrinking { fixed, kind, scale, shift } => {
                let what = match kind {
                    TailKind::Primes => "primes",
                    TailKind::Points(_) => "tubes",
                };
                let idx = match (*scale, *shift) {
                    (1, 0) => "n".to_string(),
                    (1, s) => format!("n{s:+}"),
                    (a, 0) => format!("{a}n"),
                    (a, s) => format!("{a}n{s:+}"),
                };
                if fixed.is_zero() {
                    write!(f, "{what} >= {idx}")
                } else {
                    write!(f, "{fixed} + {what} >= {idx}")
                }
            }
        }
    }
}

impl fmt::Display for ChainSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            let p: Vec<String> = self.prefix.iter().map(|d| d.to_string()).collect();
            write!(f, "[{}] then ", p.join(", "))?;
        }
        write!(f, "{}", self.tail)
    }
}
