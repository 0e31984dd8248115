//! Finite, bounded slices of the indecomposable catalog, used for
//! enumeration-based checks (perpendicular filters, membership sampling,
//! oracle comparison).

use crate::arith;
use crate::field::{FieldDescriptor, Scalar};
use crate::indec::{Indecomposable, RingDescriptor};
use crate::labels::ProjPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogBounds {
    /// Largest prime power `p^k` for torsion groups over `Z`.
    pub max_prime_power: u64,
    /// Largest index of preprojectives and preinjectives.
    pub max_index: u32,
    /// Largest quasi-length of regular modules.
    pub max_length: u32,
}

impl Default for CatalogBounds {
    fn default() -> Self {
        CatalogBounds {
            max_prime_power: 27,
            max_index: 3,
            max_length: 4,
        }
    }
}

/// Representative points of the projective line: every point over a finite
/// field, a fixed sample of rational points over `Q`, and a few formal labels
/// over an uncountable field.
pub fn sample_points(field: &FieldDescriptor) -> Vec<ProjPoint> {
    match field {
        FieldDescriptor::Rational => vec![
            ProjPoint::rational(0, 1),
            ProjPoint::Infinity,
            ProjPoint::rational(1, 1),
            ProjPoint::rational(-1, 1),
            ProjPoint::rational(2, 1),
            ProjPoint::rational(3, 2),
        ],
        FieldDescriptor::FiniteField(q) => std::iter::once(ProjPoint::Infinity)
            .chain((0..*q).map(|i| ProjPoint::Affine(Scalar::F(i))))
            .collect(),
        FieldDescriptor::SymbolicUncountable => (0..3).map(ProjPoint::Formal).collect(),
    }
}

pub fn catalog(ring: &RingDescriptor, bounds: &CatalogBounds) -> Vec<Indecomposable> {
    match ring {
        RingDescriptor::IntegerRing => {
            let mut out = vec![Indecomposable::ZFree];
            for p in arith::primes_in(2, bounds.max_prime_power + 1) {
                let mut k = 1;
                while p.pow(k) <= bounds.max_prime_power {
                    out.push(Indecomposable::torsion(p, k));
                    k += 1;
                }
            }
            out
        }
        RingDescriptor::LocalizedIntegerRing(s) => {
            catalog(&RingDescriptor::IntegerRing, bounds)
                .into_iter()
                .filter(|m| match m {
                    Indecomposable::ZTorsion { p, .. } => {
                        !s.contains(&crate::labels::Label::Prime(*p))
                    }
                    _ => true,
                })
                .collect()
        }
        RingDescriptor::Kronecker(field) => {
            let mut out = Vec::new();
            for n in 0..=bounds.max_index {
                out.push(Indecomposable::Preprojective(n));
            }
            for pt in sample_points(field) {
                for k in 1..=bounds.max_length {
                    out.push(Indecomposable::regular(pt.clone(), k));
                }
            }
            for n in 0..=bounds.max_index {
                out.push(Indecomposable::Preinjective(n));
            }
            out
        }
        RingDescriptor::DynkinAn(n) => (1..=*n)
            .flat_map(|i| (i..=*n).map(move |j| Indecomposable::interval(i, j)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let b = CatalogBounds::default();
        // Z, 2,4,8,16, 3,9,27, 5,25, 7, 11, 13, 17, 19, 23.
        assert_eq!(catalog(&RingDescriptor::IntegerRing, &b).len(), 16);
        assert_eq!(catalog(&RingDescriptor::DynkinAn(3), &b).len(), 6);
        let k5 = RingDescriptor::Kronecker(FieldDescriptor::FiniteField(5));
        assert_eq!(catalog(&k5, &b).len(), 4 + 6 * 4 + 4);
    }
}
