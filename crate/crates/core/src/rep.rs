//! Explicit Kronecker representations `V2 --A,B--> V1` over a concrete field,
//! module maps between them, kernels, cokernels, and decomposition into the
//! indecomposable catalog.
//!
//! Preprojectives are modelled by homogeneous polynomials: `P(n)` has
//! `V1 = K[x,y]_n`, `V2 = K[x,y]_{n-1}`, with `A` and `B` multiplication by `x`
//! and `y` (bases ordered by the power of `y`).

use crate::error::{Error, Result};
use crate::field::Field;
use crate::indec::Indecomposable;
use crate::labels::ProjPoint;
use crate::linalg::{block_diag, smith, Lin, Mat, Polys};

#[derive(Debug, Clone, PartialEq)]
pub struct KronRep<E> {
    /// `A: V2 -> V1`, a `dim V1 x dim V2` matrix.
    pub a: Mat<E>,
    pub b: Mat<E>,
}

impl<E: Clone> KronRep<E> {
    pub fn d2(&self) -> usize {
        self.a.cols()
    }

    pub fn d1(&self) -> usize {
        self.a.rows()
    }
}

/// `[I_n; 0]`, an `(n+1) x n` matrix.
fn upper<F: Field>(f: &F, n: usize) -> Mat<F::Elem> {
    Mat::from_fn(n + 1, n, |r, c| if r == c { f.one() } else { f.zero() })
}

/// `[0; I_n]`, an `(n+1) x n` matrix.
fn lower<F: Field>(f: &F, n: usize) -> Mat<F::Elem> {
    Mat::from_fn(n + 1, n, |r, c| if r == c + 1 { f.one() } else { f.zero() })
}

fn jordan<F: Field>(f: &F, k: usize, t: &F::Elem) -> Mat<F::Elem> {
    Mat::from_fn(k, k, |r, c| {
        if r == c {
            t.clone()
        } else if c == r + 1 {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// The explicit representation of a Kronecker indecomposable.
pub fn indecomposable_rep<F: Field>(f: &F, x: &Indecomposable) -> Result<KronRep<F::Elem>> {
    let lin = Lin::new(f);
    match x {
        Indecomposable::Preprojective(n) => {
            let n = *n as usize;
            Ok(KronRep {
                a: upper(f, n),
                b: lower(f, n),
            })
        }
        Indecomposable::Preinjective(n) => {
            let n = *n as usize;
            Ok(KronRep {
                a: upper(f, n).transpose(),
                b: lower(f, n).transpose(),
            })
        }
        Indecomposable::Regular { point, length } => {
            let k = *length as usize;
            match point {
                ProjPoint::Affine(s) => {
                    let t = f.from_scalar(s)?;
                    Ok(KronRep {
                        a: lin.identity(k),
                        b: jordan(f, k, &t),
                    })
                }
                ProjPoint::Infinity => Ok(KronRep {
                    a: jordan(f, k, &f.zero()),
                    b: lin.identity(k),
                }),
                ProjPoint::Formal(_) => Err(Error::UnsupportedField(format!(
                    "{x} has no coordinates over a symbolic field"
                ))),
            }
        }
        _ => Err(Error::MixedRings(format!("{x} is not a Kronecker module"))),
    }
}

pub fn direct_sum<F: Field>(f: &F, reps: &[KronRep<F::Elem>]) -> KronRep<F::Elem> {
    let a: Vec<_> = reps.iter().map(|r| r.a.clone()).collect();
    let b: Vec<_> = reps.iter().map(|r| r.b.clone()).collect();
    KronRep {
        a: block_diag(&a, f.zero()),
        b: block_diag(&b, f.zero()),
    }
}

pub fn sum_rep<F: Field>(f: &F, xs: &[Indecomposable]) -> Result<KronRep<F::Elem>> {
    let reps = xs
        .iter()
        .map(|x| indecomposable_rep(f, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(direct_sum(f, &reps))
}

/// A module map given by its components on the two vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMap<E> {
    /// `V2 -> W2`.
    pub f2: Mat<E>,
    /// `V1 -> W1`.
    pub f1: Mat<E>,
}

pub fn is_intertwiner<F: Field>(
    f: &F,
    src: &KronRep<F::Elem>,
    tgt: &KronRep<F::Elem>,
    m: &RepMap<F::Elem>,
) -> bool {
    if m.f2.rows() != tgt.d2() || m.f2.cols() != src.d2() || m.f1.rows() != tgt.d1() || m.f1.cols() != src.d1() {
        return false;
    }
    let lin = Lin::new(f);
    lin.mul(&m.f1, &src.a) == lin.mul(&tgt.a, &m.f2) && lin.mul(&m.f1, &src.b) == lin.mul(&tgt.b, &m.f2)
}

pub fn kernel<F: Field>(f: &F, src: &KronRep<F::Elem>, m: &RepMap<F::Elem>) -> KronRep<F::Elem> {
    let lin = Lin::new(f);
    let k2 = lin.nullspace(&m.f2);
    let k1 = lin.nullspace(&m.f1);
    let restrict = |x: &Mat<F::Elem>| {
        lin.solve(&k1, &lin.mul(x, &k2))
            .expect("kernel of an intertwiner is a subrepresentation")
    };
    KronRep {
        a: restrict(&src.a),
        b: restrict(&src.b),
    }
}

pub fn cokernel<F: Field>(f: &F, tgt: &KronRep<F::Elem>, m: &RepMap<F::Elem>) -> KronRep<F::Elem> {
    let lin = Lin::new(f);
    let q2 = lin.left_nullspace(&m.f2);
    let q1 = lin.left_nullspace(&m.f1);
    let s2 = lin
        .solve(&q2, &lin.identity(q2.rows()))
        .expect("quotient map has a section");
    let induce = |x: &Mat<F::Elem>| lin.mul(&lin.mul(&q1, x), &s2);
    KronRep {
        a: induce(&tgt.a),
        b: induce(&tgt.b),
    }
}

/// The map `P(n-1) -> P(n)` given by multiplication with the linear form
/// vanishing at `point`; its cokernel is the quasi-simple regular module at
/// that point.
pub fn canonical_inclusion<F: Field>(f: &F, n: u32, point: &ProjPoint) -> Result<RepMap<F::Elem>> {
    if n == 0 {
        return Err(Error::InvalidArgument("P(-1) does not exist".into()));
    }
    let lin = Lin::new(f);
    let n = n as usize;
    // Point (a:b) -> linear form b x - a y.
    let (a, b) = match point {
        ProjPoint::Infinity => (f.zero(), f.one()),
        ProjPoint::Affine(s) => (f.one(), f.from_scalar(s)?),
        ProjPoint::Formal(_) => {
            return Err(Error::UnsupportedField(format!(
                "{point} has no coordinates over a symbolic field"
            )))
        }
    };
    let form = |m: usize| lin.sub(&lin.scale(&b, &upper(f, m)), &lin.scale(&a, &lower(f, m)));
    Ok(RepMap {
        f1: form(n),
        f2: form(n - 1),
    })
}

/// Block-Toeplitz nullities `N(k)` of `v ↦ (A v_1, B v_1 + A v_2, …, B v_k)`.
/// A preinjective `I(n)` contributes `max(0, k - n)`; every other
/// indecomposable contributes nothing.
fn toeplitz_nullities<F: Field>(f: &F, rep: &KronRep<F::Elem>, kmax: usize) -> Vec<i64> {
    let lin = Lin::new(f);
    let (d1, d2) = (rep.d1(), rep.d2());
    let mut out = vec![0i64];
    for k in 1..=kmax {
        let mut m = lin.zeros((k + 1) * d1, k * d2);
        for j in 0..k {
            for r in 0..d1 {
                for c in 0..d2 {
                    m.set(j * d1 + r, j * d2 + c, rep.a.get(r, c).clone());
                    m.set((j + 1) * d1 + r, j * d2 + c, rep.b.get(r, c).clone());
                }
            }
        }
        out.push((k * d2) as i64 - lin.rank(&m) as i64);
    }
    out
}

/// Multiplicities of `I(0..)` from second differences of the nullities.
fn preinjective_counts<F: Field>(f: &F, rep: &KronRep<F::Elem>) -> Vec<(u32, u32)> {
    let kmax = rep.d2() + 1;
    let nul = toeplitz_nullities(f, rep, kmax);
    let at = |k: i64| if k < 0 { 0 } else { nul[k as usize] };
    let mut out = Vec::new();
    for n in 0..rep.d2() as i64 {
        let c = at(n + 1) - 2 * at(n) + at(n - 1);
        if c > 0 {
            out.push((n as u32, c as u32));
        }
    }
    out
}

/// Elementary divisors `(root, exponent)` of a pencil over `K[t]`.
fn pencil_divisors<F: Field>(f: &F, pencil: &Mat<Vec<F::Elem>>) -> Result<Vec<(F::Elem, u32)>> {
    let p = Polys::new(f);
    let s = smith(&p, pencil);
    let mut out = Vec::new();
    for inv in &s.invariants {
        let mut rest = inv.clone();
        if p.degree(&rest) == Some(0) {
            continue;
        }
        let roots = f
            .roots(&rest)
            .ok_or_else(|| Error::Undecomposable("cannot find roots of the pencil".into()))?;
        for c in roots {
            let factor = p.linear(f.one(), f.neg(&c));
            let mut e = 0;
            loop {
                let (q, r) = crate::linalg::Euclid::div_rem(&p, &rest, &factor);
                if !r.is_empty() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((c, e));
            }
        }
        if p.degree(&rest).unwrap_or(0) > 0 {
            return Err(Error::Undecomposable(
                "regular part has a tube at a point of degree > 1".into(),
            ));
        }
    }
    Ok(out)
}

/// Decompose a representation into catalog indecomposables.
pub fn decompose<F: Field>(f: &F, rep: &KronRep<F::Elem>) -> Result<Vec<Indecomposable>> {
    let mut out = Vec::new();
    for (n, c) in preinjective_counts(f, rep) {
        out.extend(std::iter::repeat_n(Indecomposable::Preinjective(n), c as usize));
    }
    let dual = KronRep {
        a: rep.a.transpose(),
        b: rep.b.transpose(),
    };
    for (n, c) in preinjective_counts(f, &dual) {
        out.extend(std::iter::repeat_n(Indecomposable::Preprojective(n), c as usize));
    }
    let p = Polys::new(f);
    // Finite points: t A - B.
    let finite = Mat::from_fn(rep.d1(), rep.d2(), |r, c| {
        p.linear(rep.a.get(r, c).clone(), f.neg(rep.b.get(r, c)))
    });
    for (c, e) in pencil_divisors(f, &finite)? {
        out.push(Indecomposable::regular(ProjPoint::Affine(f.to_scalar(&c)), e));
    }
    // The point at infinity: A - s B at s = 0.
    let infinite = Mat::from_fn(rep.d1(), rep.d2(), |r, c| {
        p.linear(f.neg(rep.b.get(r, c)), rep.a.get(r, c).clone())
    });
    for (c, e) in pencil_divisors(f, &infinite)? {
        if f.is_zero(&c) {
            out.push(Indecomposable::regular(ProjPoint::Infinity, e));
        }
    }
    let (mut d2, mut d1) = (0usize, 0usize);
    for x in &out {
        let (a, b) = match x {
            Indecomposable::Preprojective(n) => (*n as usize, *n as usize + 1),
            Indecomposable::Preinjective(n) => (*n as usize + 1, *n as usize),
            Indecomposable::Regular { length, .. } => (*length as usize, *length as usize),
            _ => unreachable!(),
        };
        d2 += a;
        d1 += b;
    }
    if (d2, d1) != (rep.d2(), rep.d1()) {
        return Err(Error::Undecomposable(format!(
            "found summands of total dimension ({d2},{d1}) in a representation of dimension ({},{})",
            rep.d2(),
            rep.d1()
        )));
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteField, Rationals, Scalar};

    fn catalog() -> Vec<Indecomposable> {
        let mut v = Vec::new();
        for n in 0..4 {
            v.push(Indecomposable::Preprojective(n));
            v.push(Indecomposable::Preinjective(n));
        }
        for k in 1..4 {
            v.push(Indecomposable::regular(ProjPoint::Infinity, k));
            v.push(Indecomposable::regular(ProjPoint::rational(0, 1), k));
            v.push(Indecomposable::regular(ProjPoint::rational(3, 2), k));
        }
        v
    }

    #[test]
    fn indecomposables_decompose_to_themselves() {
        let q = Rationals;
        for x in catalog() {
            let rep = indecomposable_rep(&q, &x).unwrap();
            assert_eq!(decompose(&q, &rep).unwrap(), vec![x.clone()], "{x}");
        }
    }

    #[test]
    fn sums_decompose() {
        let q = Rationals;
        let xs = catalog();
        for i in 0..xs.len() {
            for j in i..xs.len() {
                let pair = vec![xs[i].clone(), xs[j].clone()];
                let rep = sum_rep(&q, &pair).unwrap();
                let mut want = pair.clone();
                want.sort();
                assert_eq!(decompose(&q, &rep).unwrap(), want);
            }
        }
    }

    #[test]
    fn canonical_inclusion_has_regular_cokernel() {
        let f = FiniteField::new(5).unwrap();
        let pts = [
            ProjPoint::Infinity,
            ProjPoint::Affine(Scalar::F(0)),
            ProjPoint::Affine(Scalar::F(3)),
        ];
        for pt in pts {
            for n in 1..6 {
                let src = indecomposable_rep(&f, &Indecomposable::Preprojective(n - 1)).unwrap();
                let tgt = indecomposable_rep(&f, &Indecomposable::Preprojective(n)).unwrap();
                let m = canonical_inclusion(&f, n, &pt).unwrap();
                assert!(is_intertwiner(&f, &src, &tgt, &m));
                let ker = kernel(&f, &src, &m);
                assert_eq!((ker.d2(), ker.d1()), (0, 0));
                let coker = cokernel(&f, &tgt, &m);
                assert_eq!(decompose(&f, &coker).unwrap(), vec![Indecomposable::regular(pt.clone(), 1)]);
            }
        }
    }

    #[test]
    fn irrational_tube_is_reported() {
        let q = Rationals;
        // t^2 + 1 has no rational root.
        let rep = KronRep {
            a: Lin::new(&q).identity(2),
            b: Mat::from_rows(2, 2, vec![q.zero(), q.from_int(-1), q.one(), q.zero()]),
        };
        assert!(matches!(decompose(&q, &rep), Err(Error::Undecomposable(_))));
    }
}
