//! Objects of the bounded derived category of a hereditary ring, stored split
//! as multisets of shifted indecomposable modules, and cones of module maps.
//!
//! A summand `(i, M)` stands for `Σ^{-i} M`, the module `M` sitting in
//! cohomological degree `i`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Scalar};
use crate::indec::{hom_invariants, Indecomposable, Invariant, RingDescriptor};
use crate::labels::{Label, LabelSet, PrimeSet, Universe};
use crate::linalg::{hermite_columns, hermite_coordinates, smith, Integers, Mat};
use crate::rep::{self, RepMap};
use crate::zgroup::AbelianGroup;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitObject {
    ring: RingDescriptor,
    summands: BTreeMap<(i64, Indecomposable), u32>,
}

impl SplitObject {
    pub fn zero(ring: RingDescriptor) -> Self {
        SplitObject {
            ring,
            summands: BTreeMap::new(),
        }
    }

    pub fn new(
        ring: RingDescriptor,
        summands: impl IntoIterator<Item = (i64, Indecomposable)>,
    ) -> Result<Self> {
        let mut x = SplitObject::zero(ring);
        for (d, m) in summands {
            x.ring.check(&m)?;
            *x.summands.entry((d, m)).or_insert(0) += 1;
        }
        Ok(x)
    }

    /// A single module in degree 0.
    pub fn module(ring: RingDescriptor, m: Indecomposable) -> Result<Self> {
        SplitObject::new(ring, [(0, m)])
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// Summands with multiplicity, in degree order.
    pub fn summands(&self) -> impl Iterator<Item = (i64, &Indecomposable)> + '_ {
        self.summands
            .iter()
            .flat_map(|((d, m), &c)| std::iter::repeat_n((*d, m), c as usize))
    }

    pub fn distinct_summands(&self) -> impl Iterator<Item = (i64, &Indecomposable, u32)> + '_ {
        self.summands.iter().map(|((d, m), &c)| (*d, m, c))
    }

    pub fn len(&self) -> usize {
        self.summands.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Smallest and largest occupied degree.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = self.summands.keys().next()?.0;
        let hi = self.summands.keys().next_back()?.0;
        Some((lo, hi))
    }

    /// Number of degrees from the lowest to the highest occupied one.
    pub fn width(&self) -> u64 {
        self.degree_range().map_or(0, |(lo, hi)| (hi - lo + 1) as u64)
    }

    /// The modules in one degree.
    pub fn degree_part(&self, d: i64) -> Vec<Indecomposable> {
        self.summands()
            .filter(|(e, _)| *e == d)
            .map(|(_, m)| m.clone())
            .collect()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.summands.keys().map(|(d, _)| *d).collect();
        v.dedup();
        v
    }

    fn check_ring(&self, other: &SplitObject) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedRings(format!("{} and {}", self.ring, other.ring)))
        }
    }

    pub fn direct_sum(&self, other: &SplitObject) -> Result<SplitObject> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for ((d, m), c) in &other.summands {
            *out.summands.entry((*d, m.clone())).or_insert(0) += c;
        }
        Ok(out)
    }

    /// Keep the summands satisfying the predicate.
    pub fn filter(&self, mut keep: impl FnMut(i64, &Indecomposable) -> bool) -> SplitObject {
        SplitObject {
            ring: self.ring.clone(),
            summands: self
                .summands
                .iter()
                .filter(|((d, m), _)| keep(*d, m))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// `Σ^k X`: every degree moves down by `k`.
    pub fn shift(&self, k: i64) -> SplitObject {
        SplitObject {
            ring: self.ring.clone(),
            summands: self
                .summands
                .iter()
                .map(|((d, m), c)| ((d - k, m.clone()), *c))
                .collect(),
        }
    }

    /// Class in the Grothendieck group: alternating rank over `Z`, alternating
    /// dimension vector over a quiver.
    pub fn k0_class(&self) -> Vec<i64> {
        let mut class = match &self.ring {
            RingDescriptor::IntegerRing | RingDescriptor::LocalizedIntegerRing(_) => vec![0],
            RingDescriptor::Kronecker(_) => vec![0, 0],
            RingDescriptor::DynkinAn(n) => vec![0; *n as usize],
        };
        for (d, m) in self.summands() {
            let sign = if d.rem_euclid(2) == 0 { 1 } else { -1 };
            let v: Vec<i64> = match m {
                Indecomposable::ZFree => vec![1],
                Indecomposable::ZTorsion { .. } => vec![0],
                _ => crate::indec::dim_vector(&self.ring, m)
                    .expect("catalog module")
                    .0
                    .iter()
                    .map(|&x| x as i64)
                    .collect(),
            };
            for (c, x) in class.iter_mut().zip(v) {
                *c += sign * x;
            }
        }
        class
    }
}

impl fmt::Display for SplitObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.summands().map(|(d, m)| format!("{m}@{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn shift(x: &SplitObject, k: i64) -> SplitObject {
    x.shift(k)
}

/// `j ↦ Hom(X, Σ^j Y)`, listing only the nonzero entries.
///
/// For `M` in degree `a` and `N` in degree `b`, `Hom(M, N)` lands at
/// `j = b - a` and `Ext^1(M, N)` at `j = b - a + 1`.
pub fn graded_hom(x: &SplitObject, y: &SplitObject) -> Result<BTreeMap<i64, Invariant>> {
    x.check_ring(y)?;
    let mut out: BTreeMap<i64, Invariant> = BTreeMap::new();
    for (a, m, cm) in x.distinct_summands() {
        for (b, n, cn) in y.distinct_summands() {
            let rec = hom_invariants(&x.ring, m, n)?;
            for (j, inv) in [(b - a, rec.hom), (b - a + 1, rec.ext)] {
                if inv.is_zero() {
                    continue;
                }
                let inv = inv.repeat(cm * cn);
                let slot = out.entry(j).or_insert_with(|| inv.zero_like());
                *slot = slot.direct_sum(&inv);
            }
        }
    }
    Ok(out)
}

/// The support of an object over `Z`: the primes at which it is nonzero.
pub fn support_z(x: &SplitObject) -> Result<PrimeSet> {
    if x.ring != RingDescriptor::IntegerRing {
        return Err(Error::WrongRing {
            op: "support_Z",
            ring: x.ring.to_string(),
        });
    }
    let mut primes = Vec::new();
    for (_, m) in x.summands() {
        match m {
            Indecomposable::ZFree => return Ok(LabelSet::all(Universe::Primes)),
            Indecomposable::ZTorsion { p, .. } => primes.push(Label::Prime(*p)),
            _ => unreachable!(),
        }
    }
    Ok(LabelSet::finite(Universe::Primes, primes))
}

/// Matrix data of a module map.
#[derive(Debug, Clone, PartialEq)]
pub enum MapData {
    /// Over `Z`: rows indexed by target generators, columns by source
    /// generators (one canonical generator per cyclic summand).
    Integer(Mat<BigInt>),
    /// Over a field: the components on both vertices.
    Field(RepMap<Scalar>),
}

/// A map between modules (degree-0 objects) given by explicit matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMap {
    ring: RingDescriptor,
    source: Vec<Indecomposable>,
    target: Vec<Indecomposable>,
    data: MapData,
}

/// Order of the canonical generator: 0 for a free summand.
fn generator_order(m: &Indecomposable) -> u64 {
    match m {
        Indecomposable::ZTorsion { p, k } => p.pow(*k),
        _ => 0,
    }
}

impl ModuleMap {
    pub fn integer(
        source: Vec<Indecomposable>,
        target: Vec<Indecomposable>,
        matrix: Mat<BigInt>,
    ) -> Result<Self> {
        let ring = RingDescriptor::IntegerRing;
        for m in source.iter().chain(&target) {
            ring.check(m)?;
        }
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(Error::NonIntertwining(format!(
                "matrix is {}x{} but the map is {} -> {} generators",
                matrix.rows(),
                matrix.cols(),
                source.len(),
                target.len()
            )));
        }
        for (j, s) in source.iter().enumerate() {
            let o = generator_order(s);
            if o == 0 {
                continue;
            }
            for (i, t) in target.iter().enumerate() {
                let e = matrix.get(i, j);
                let to = generator_order(t);
                let ok = if to == 0 {
                    e.is_zero()
                } else {
                    (e * BigInt::from(o) % BigInt::from(to)).is_zero()
                };
                if !ok {
                    return Err(Error::NonIntertwining(format!(
                        "entry ({i},{j}) = {e} does not respect the order of {s}"
                    )));
                }
            }
        }
        Ok(ModuleMap {
            ring,
            source,
            target,
            data: MapData::Integer(matrix),
        })
    }

    /// Multiplication by `m` on a module given as a list of cyclic summands.
    pub fn multiplication(summands: Vec<Indecomposable>, m: i64) -> Result<Self> {
        let n = summands.len();
        let matrix = Mat::from_fn(n, n, |r, c| if r == c { BigInt::from(m) } else { BigInt::zero() });
        ModuleMap::integer(summands.clone(), summands, matrix)
    }

    pub fn kronecker(
        field: FieldDescriptor,
        source: Vec<Indecomposable>,
        target: Vec<Indecomposable>,
        f2: Mat<Scalar>,
        f1: Mat<Scalar>,
    ) -> Result<Self> {
        let ring = RingDescriptor::Kronecker(field.clone());
        for m in source.iter().chain(&target) {
            ring.check(m)?;
        }
        let data = RepMap { f2, f1 };
        let ok: Result<bool> = with_field!(&field, f => {
            let src = rep::sum_rep(f, &source)?;
            let tgt = rep::sum_rep(f, &target)?;
            let m = lift_map(f, &data)?;
            Ok(rep::is_intertwiner(f, &src, &tgt, &m))
        });
        if !ok? {
            return Err(Error::NonIntertwining(
                "matrices do not commute with the arrows".to_string(),
            ));
        }
        Ok(ModuleMap {
            ring,
            source,
            target,
            data: MapData::Field(data),
        })
    }

    /// The canonical map `P(n-1) -> P(n)` whose cokernel is the
    /// quasi-simple regular module at `point`.
    pub fn canonical_preprojective(
        field: FieldDescriptor,
        n: u32,
        point: &crate::labels::ProjPoint,
    ) -> Result<Self> {
        let data: Result<RepMap<Scalar>> = with_field!(&field, f => {
            let m = rep::canonical_inclusion(f, n, point)?;
            Ok(RepMap {
                f2: m.f2.map(|x| f.to_scalar(x)),
                f1: m.f1.map(|x| f.to_scalar(x)),
            })
        });
        let data = data?;
        ModuleMap::kronecker(
            field,
            vec![Indecomposable::Preprojective(n - 1)],
            vec![Indecomposable::Preprojective(n)],
            data.f2,
            data.f1,
        )
    }

    pub fn identity(ring: RingDescriptor, summands: Vec<Indecomposable>) -> Result<Self> {
        match &ring {
            RingDescriptor::IntegerRing => ModuleMap::multiplication(summands, 1),
            RingDescriptor::Kronecker(field) => {
                let (d2, d1) = kron_dims(&ring, &summands)?;
                let id = |n: usize| {
                    Mat::from_fn(n, n, |r, c| {
                        let v = i64::from(r == c);
                        match field {
                            FieldDescriptor::FiniteField(_) => Scalar::F(v as u32),
                            _ => Scalar::int(v),
                        }
                    })
                };
                ModuleMap::kronecker(field.clone(), summands.clone(), summands, id(d2), id(d1))
            }
            _ => Err(Error::WrongRing {
                op: "identity map",
                ring: ring.to_string(),
            }),
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn source(&self) -> &[Indecomposable] {
        &self.source
    }

    pub fn target(&self) -> &[Indecomposable] {
        &self.target
    }

    pub fn data(&self) -> &MapData {
        &self.data
    }

    /// Compose with the inclusion of the kept source summands and the
    /// projection onto the kept target summands.
    pub fn restrict(&self, keep_source: &[bool], keep_target: &[bool]) -> Result<ModuleMap> {
        let pick = |v: &[Indecomposable], keep: &[bool]| -> Vec<Indecomposable> {
            v.iter()
                .zip(keep)
                .filter(|(_, k)| **k)
                .map(|(m, _)| m.clone())
                .collect()
        };
        let source = pick(&self.source, keep_source);
        let target = pick(&self.target, keep_target);
        match &self.data {
            MapData::Integer(m) => {
                let rows = indices(keep_target);
                let cols = indices(keep_source);
                ModuleMap::integer(source, target, m.select(&rows, &cols))
            }
            MapData::Field(m) => {
                let (rows2, rows1) = vertex_indices(&self.ring, &self.target, keep_target)?;
                let (cols2, cols1) = vertex_indices(&self.ring, &self.source, keep_source)?;
                ModuleMap::kronecker(
                    self.field()?.clone(),
                    source,
                    target,
                    m.f2.select(&rows2, &cols2),
                    m.f1.select(&rows1, &cols1),
                )
            }
        }
    }

    fn field(&self) -> Result<&FieldDescriptor> {
        self.ring.field().ok_or_else(|| Error::WrongRing {
            op: "field map",
            ring: self.ring.to_string(),
        })
    }
}

fn indices(keep: &[bool]) -> Vec<usize> {
    keep.iter()
        .enumerate()
        .filter(|(_, k)| **k)
        .map(|(i, _)| i)
        .collect()
}

fn kron_dims(ring: &RingDescriptor, xs: &[Indecomposable]) -> Result<(usize, usize)> {
    let mut d = (0, 0);
    for x in xs {
        let v = crate::indec::dim_vector(ring, x)?;
        d.0 += v.0[0] as usize;
        d.1 += v.0[1] as usize;
    }
    Ok(d)
}

/// Row indices at vertices 2 and 1 belonging to the kept summands.
fn vertex_indices(
    ring: &RingDescriptor,
    xs: &[Indecomposable],
    keep: &[bool],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let (mut o2, mut o1) = (0, 0);
    let (mut i2, mut i1) = (Vec::new(), Vec::new());
    for (x, k) in xs.iter().zip(keep) {
        let v = crate::indec::dim_vector(ring, x)?;
        let (a, b) = (v.0[0] as usize, v.0[1] as usize);
        if *k {
            i2.extend(o2..o2 + a);
            i1.extend(o1..o1 + b);
        }
        o2 += a;
        o1 += b;
    }
    Ok((i2, i1))
}

fn lift_map<F: Field>(f: &F, m: &RepMap<Scalar>) -> Result<RepMap<F::Elem>> {
    let conv = |x: &Mat<Scalar>| -> Result<Mat<F::Elem>> {
        let data = (0..x.rows())
            .flat_map(|r| (0..x.cols()).map(move |c| (r, c)))
            .map(|(r, c)| f.from_scalar(x.get(r, c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_rows(x.rows(), x.cols(), data))
    };
    Ok(RepMap {
        f2: conv(&m.f2)?,
        f1: conv(&m.f1)?,
    })
}

fn group_summands(g: &AbelianGroup) -> Vec<Indecomposable> {
    let mut v: Vec<Indecomposable> = std::iter::repeat_n(Indecomposable::ZFree, g.free as usize).collect();
    v.extend(g.torsion.iter().map(|&(p, k)| Indecomposable::torsion(p, k)));
    v
}

/// Kernel and cokernel of an integer module map, as abelian groups.
pub fn integer_kernel_cokernel(map: &ModuleMap) -> Result<(AbelianGroup, AbelianGroup)> {
    let MapData::Integer(f) = &map.data else {
        return Err(Error::WrongRing {
            op: "integer kernel",
            ring: map.ring.to_string(),
        });
    };
    let (a, b) = (map.source.len(), map.target.len());
    let relation_matrix = |mods: &[Indecomposable]| {
        let tors: Vec<(usize, u64)> = mods
            .iter()
            .enumerate()
            .map(|(i, m)| (i, generator_order(m)))
            .filter(|(_, o)| *o > 0)
            .collect();
        Mat::from_fn(mods.len(), tors.len(), |r, c| {
            if tors[c].0 == r {
                BigInt::from(tors[c].1)
            } else {
                BigInt::zero()
            }
        })
    };
    let dm = relation_matrix(&map.source);
    let dn = relation_matrix(&map.target);

    // Cokernel: Z^b / (im F + im D_N).
    let g = f.hstack(&dn);
    let s = smith(&Integers, &g);
    let coker = AbelianGroup::from_big_invariants(&s.invariants, (b - s.invariants.len()) as u32)?;

    // Kernel: L = {x : F x ∈ im D_N}, then L / im D_M.
    if a == 0 {
        return Ok((AbelianGroup::zero(), coker));
    }
    let neg_dn = dn.map(|x| -x);
    let g = f.hstack(&neg_dn);
    let s = smith(&Integers, &g);
    let r = s.invariants.len();
    let kernel_cols: Vec<usize> = (r..g.cols()).collect();
    let rows_a: Vec<usize> = (0..a).collect();
    let l = hermite_columns(&s.v.select(&rows_a, &kernel_cols));
    let rl = l.pivots.len();
    if rl == 0 {
        return Ok((AbelianGroup::zero(), coker));
    }
    // Coordinates of the relations of M in the basis of L.
    let mut coords = Mat::from_fn(rl, dm.cols(), |_, _| BigInt::zero());
    for j in 0..dm.cols() {
        let col: Vec<BigInt> = (0..a).map(|i| dm.get(i, j).clone()).collect();
        let c = hermite_coordinates(&l, &col).ok_or_else(|| {
            Error::NonIntertwining(format!("relation {j} of the source is not in the kernel lattice"))
        })?;
        for (i, x) in c.into_iter().enumerate() {
            coords.set(i, j, x);
        }
    }
    let sc = smith(&Integers, &coords);
    let ker = AbelianGroup::from_big_invariants(&sc.invariants, (rl - sc.invariants.len()) as u32)?;
    Ok((ker, coker))
}

/// `cone(f) ≅ Σ ker f ⊕ coker f` for a map of modules.
pub fn cone_of_module_map(map: &ModuleMap) -> Result<SplitObject> {
    let (ker, coker): (Vec<Indecomposable>, Vec<Indecomposable>) = match &map.data {
        MapData::Integer(_) => {
            let (k, c) = integer_kernel_cokernel(map)?;
            (group_summands(&k), group_summands(&c))
        }
        MapData::Field(m) => {
            let field = map.field()?.clone();
            with_field!(&field, f => {
                let src = rep::sum_rep(f, &map.source)?;
                let tgt = rep::sum_rep(f, &map.target)?;
                let lm = lift_map(f, m)?;
                if !rep::is_intertwiner(f, &src, &tgt, &lm) {
                    return Err(Error::NonIntertwining("matrices do not commute with the arrows".into()));
                }
                let k = rep::decompose(f, &rep::kernel(f, &src, &lm))?;
                let c = rep::decompose(f, &rep::cokernel(f, &tgt, &lm))?;
                Ok::<_, Error>((k, c))
            })?
        }
    };
    let summands = ker
        .into_iter()
        .map(|m| (-1, m))
        .chain(coker.into_iter().map(|m| (0, m)));
    SplitObject::new(map.ring.clone(), summands)
}

/// Whether an integer is a unit after inverting the primes of `s`.
pub fn is_unit_after_inverting(m: &BigInt, s: &PrimeSet) -> bool {
    use num_traits::ToPrimitive;
    if m.is_zero() {
        return false;
    }
    let Some(v) = m.abs().to_u64() else {
        return false;
    };
    crate::arith::factor(v)
        .iter()
        .all(|(p, _)| s.contains(&Label::Prime(*p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::ProjPoint;
    use crate::linalg::int_mat;
    use Indecomposable::*;

    fn z() -> RingDescriptor {
        RingDescriptor::IntegerRing
    }

    #[test]
    fn shifting() {
        let x = SplitObject::module(z(), ZFree).unwrap();
        assert_eq!(x.shift(1), SplitObject::new(z(), [(-1, ZFree)]).unwrap());
        assert_eq!(x.shift(0), x);
        assert_eq!(x.shift(2).shift(-5), x.shift(-3));
        assert!(SplitObject::zero(z()).shift(4).is_zero());
    }

    #[test]
    fn graded_hom_examples() {
        let x = SplitObject::module(z(), Indecomposable::torsion(2, 1)).unwrap();
        let y = SplitObject::module(z(), ZFree).unwrap();
        let h = graded_hom(&x, &y).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[&1], Invariant::Group(AbelianGroup::cyclic(2, 1)));
        let h = graded_hom(&y, &y).unwrap();
        assert_eq!(h[&0], Invariant::Group(AbelianGroup::free(1)));
        assert_eq!(h.len(), 1);
        let kq = RingDescriptor::Kronecker(FieldDescriptor::Rational);
        let r = SplitObject::module(kq.clone(), Indecomposable::regular(ProjPoint::rational(0, 1), 1)).unwrap();
        let p = SplitObject::module(kq, Preprojective(0)).unwrap();
        assert!(graded_hom(&r, &p).unwrap()[&1].dim().unwrap() >= 1);
    }

    #[test]
    fn integer_cones() {
        let two = ModuleMap::multiplication(vec![ZFree], 2).unwrap();
        assert_eq!(
            cone_of_module_map(&two).unwrap(),
            SplitObject::module(z(), Indecomposable::torsion(2, 1)).unwrap()
        );
        let id = ModuleMap::multiplication(vec![ZFree, Indecomposable::torsion(3, 2)], 1).unwrap();
        assert!(cone_of_module_map(&id).unwrap().is_zero());
        // Z/4 --2--> Z/4: kernel Z/2, cokernel Z/2.
        let m = ModuleMap::integer(vec![Indecomposable::torsion(2, 2)], vec![Indecomposable::torsion(2, 2)], int_mat(1, 1, &[2])).unwrap();
        assert_eq!(
            cone_of_module_map(&m).unwrap(),
            SplitObject::new(z(), [(-1, Indecomposable::torsion(2, 1)), (0, Indecomposable::torsion(2, 1))]).unwrap()
        );
        // Z/2 -> Z is not a map.
        assert!(ModuleMap::integer(vec![Indecomposable::torsion(2, 1)], vec![ZFree], int_mat(1, 1, &[1])).is_err());
    }

    #[test]
    fn kronecker_cone_of_canonical_map() {
        let field = FieldDescriptor::Rational;
        let pt = ProjPoint::rational(0, 1);
        for n in 1..=5 {
            let m = ModuleMap::canonical_preprojective(field.clone(), n, &pt).unwrap();
            let c = cone_of_module_map(&m).unwrap();
            assert_eq!(
                c,
                SplitObject::module(RingDescriptor::Kronecker(field.clone()), Indecomposable::regular(pt.clone(), 1)).unwrap()
            );
        }
    }

    #[test]
    fn support() {
        let x = SplitObject::new(z(), [(0, Indecomposable::torsion(2, 1)), (3, Indecomposable::torsion(3, 2))]).unwrap();
        assert_eq!(support_z(&x).unwrap(), LabelSet::primes([2, 3]));
        assert!(support_z(&SplitObject::module(z(), ZFree).unwrap()).unwrap().is_all());
        assert!(support_z(&SplitObject::zero(z())).unwrap().is_empty());
    }
}
