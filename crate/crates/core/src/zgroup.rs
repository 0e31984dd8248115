//! Finitely generated abelian groups in primary form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// `Z^free ⊕ ⊕ Z/p^k`, with the primary summands sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianGroup {
    pub free: u32,
    pub torsion: Vec<(u64, u32)>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup::default()
    }

    pub fn free(rank: u32) -> Self {
        AbelianGroup {
            free: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(p: u64, k: u32) -> Self {
        AbelianGroup {
            free: 0,
            torsion: vec![(p, k)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().copied());
        torsion.sort_unstable();
        AbelianGroup {
            free: self.free + other.free,
            torsion,
        }
    }

    /// The group `Z^zeros ⊕ ⊕ Z/d` for the given invariant factors, where a
    /// factor 0 contributes a free summand and a factor 1 nothing.
    pub fn from_invariants(factors: &[u64], extra_free: u32) -> AbelianGroup {
        let mut g = AbelianGroup::free(extra_free);
        for &d in factors {
            if d == 0 {
                g.free += 1;
            } else {
                for (p, k) in arith::factor(d) {
                    g.torsion.push((p, k));
                }
            }
        }
        g.torsion.sort_unstable();
        g
    }

    pub fn from_big_invariants(factors: &[BigInt], extra_free: u32) -> Result<AbelianGroup> {
        let small: Option<Vec<u64>> = factors
            .iter()
            .map(|d| if d.is_zero() { Some(0) } else { d.magnitude().to_u64() })
            .collect();
        let small = small.ok_or_else(|| Error::BoundsExceeded("invariant factor exceeds 64 bits".into()))?;
        Ok(AbelianGroup::from_invariants(&small, extra_free))
    }

    pub fn order(&self) -> Option<u64> {
        if self.free > 0 {
            return None;
        }
        Some(self.torsion.iter().map(|(p, k)| p.pow(*k)).product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for (p, k) in &self.torsion {
            parts.push(format!("Z/{}", p.pow(*k)));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
