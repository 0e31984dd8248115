//! Brute-force reference computations, written independently of the
//! closed-form catalog: Smith normal forms of presentation matrices over `Z`,
//! intertwiner systems of explicit quiver representations, and literal
//! kernels and cokernels of two-term complexes. The `selftest` suites replay
//! the library's answers against them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::catalog::{catalog, sample_points, CatalogBounds};
use crate::derived::{cone_of_module_map, graded_hom, MapData, ModuleMap, SplitObject};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Scalar};
use crate::indec::{dim_vector, euler_form, hom_invariants, tau, Indecomposable, Invariant, RingDescriptor};
use crate::labels::ProjPoint;
use crate::linalg::Mat;
use crate::zgroup::AbelianGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest `dim X + dim Y` for representation pairs.
    pub max_total_dimension: usize,
    /// Largest total number of cyclic generators of a pair of abelian groups.
    pub max_generators_z: usize,
    /// Finite field used besides `Q` for representation checks.
    pub field_for_enumeration: FieldDescriptor,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_total_dimension: 8,
            max_generators_z: 3,
            field_for_enumeration: FieldDescriptor::FiniteField(5),
        }
    }
}

// ---------------------------------------------------------------------------
// Integer side.

type IMat = Vec<Vec<i128>>;

const MAGNITUDE_LIMIT: i128 = 1 << 100;

fn guard(v: i128) -> Result<i128> {
    if v.abs() > MAGNITUDE_LIMIT {
        Err(Error::BoundsExceeded("integer entries grew beyond the oracle's range".into()))
    } else {
        Ok(v)
    }
}

/// `row[t] -= q * row[s]` on a matrix.
fn row_sub(m: &mut IMat, t: usize, s: usize, q: i128) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for c in 0..m[t].len() {
        m[t][c] = guard(m[t][c] - q * m[s][c])?;
    }
    Ok(())
}

/// Integer row echelon form `H = U A` with `U` unimodular. Returns `(H, U,
/// rank)`; the first `rank` rows of `H` are a basis of the row lattice and the
/// remaining rows of `U` a basis of the left kernel.
fn echelon(a: &IMat, cols: usize) -> Result<(IMat, IMat, usize)> {
    let m = a.len();
    let mut h = a.clone();
    let mut u: IMat = (0..m).map(|i| (0..m).map(|j| i128::from(i == j)).collect()).collect();
    let mut p = 0;
    for c in 0..cols {
        if p == m {
            break;
        }
        loop {
            let best = (p..m).filter(|&r| h[r][c] != 0).min_by_key(|&r| h[r][c].abs());
            let Some(best) = best else { break };
            h.swap(p, best);
            u.swap(p, best);
            let mut done = true;
            for r in p + 1..m {
                if h[r][c] != 0 {
                    let q = h[r][c] / h[p][c];
                    row_sub(&mut h, r, p, q)?;
                    row_sub(&mut u, r, p, q)?;
                    done &= h[r][c] == 0;
                }
            }
            if done {
                if h[p][c] < 0 {
                    h[p].iter_mut().for_each(|x| *x = -*x);
                    u[p].iter_mut().for_each(|x| *x = -*x);
                }
                p += 1;
                break;
            }
        }
    }
    Ok((h, u, p))
}

/// Coordinates of `v` in an echelon basis, if it lies in the lattice.
fn coordinates(basis: &[Vec<i128>], v: &[i128]) -> Option<Vec<i128>> {
    let mut v = v.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let piv = b.iter().position(|x| *x != 0)?;
        if v[piv] % b[piv] != 0 {
            return None;
        }
        let c = v[piv] / b[piv];
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
        out.push(c);
    }
    v.iter().all(|x| *x == 0).then_some(out)
}

/// Absolute values of the nonzero diagonal entries of the Smith form.
fn smith_diagonal(a: &IMat, cols: usize) -> Result<Vec<i128>> {
    let mut m = a.clone();
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let pivot = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| m[r][c].abs());
        let Some((pr, pc)) = pivot else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        let mut clean = true;
        for r in t + 1..rows {
            let q = m[r][t] / m[t][t];
            row_sub(&mut m, r, t, q)?;
            clean &= m[r][t] == 0;
        }
        for c in t + 1..cols {
            let q = m[t][c] / m[t][t];
            for row in m.iter_mut() {
                row[c] = guard(row[c] - q * row[t])?;
            }
            clean &= m[t][c] == 0;
        }
        if !clean {
            continue;
        }
        // The pivot must divide the rest of the matrix.
        let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % m[t][t] != 0));
        if let Some(r) = bad {
            for c in 0..cols {
                m[t][c] = guard(m[t][c] + m[r][c])?;
            }
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut k = 0;
        while n % d == 0 {
            n /= d;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn group_from_diagonal(diag: &[i128], free: usize) -> Result<AbelianGroup> {
    let mut torsion = Vec::new();
    for &d in diag {
        let d = u64::try_from(d).map_err(|_| Error::BoundsExceeded("invariant factor too large".into()))?;
        torsion.extend(trial_factor(d));
    }
    torsion.sort_unstable();
    Ok(AbelianGroup {
        free: free as u32,
        torsion,
    })
}

/// `L / L0` for lattices in `Z^n` given by generators, with `L0 ⊆ L`.
fn subquotient(n: usize, l: &IMat, l0: &IMat) -> Result<AbelianGroup> {
    let (h, _, rank) = echelon(l, n)?;
    let basis = &h[..rank];
    let mut coords = Vec::with_capacity(l0.len());
    for v in l0 {
        coords.push(coordinates(basis, v).ok_or_else(|| {
            Error::InvalidArgument("relations do not lie in the lattice they should generate".into())
        })?);
    }
    let diag = smith_diagonal(&coords, rank)?;
    group_from_diagonal(
        &diag.iter().copied().filter(|d| *d != 1).collect::<Vec<_>>(),
        rank - diag.len(),
    )
}

fn quotient(n: usize, gens: &IMat) -> Result<AbelianGroup> {
    let id: IMat = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    subquotient(n, &id, gens)
}

/// `x`-parts of the left kernel of `[top; bottom]`: the `x` with
/// `x top ∈ rowspan(bottom)`.
fn preimage(top: &IMat, bottom: &IMat, cols: usize) -> Result<IMat> {
    let mut stacked = top.clone();
    stacked.extend(bottom.iter().cloned());
    let (_, u, rank) = echelon(&stacked, cols)?;
    Ok(u[rank..].iter().map(|row| row[..top.len()].to_vec()).collect())
}

/// A finitely generated abelian group `Z^generators / rowspan(relations)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relations: Vec<Vec<i64>>,
}

impl Presentation {
    /// `⊕ Z/a_i`, where an order 0 gives a free summand.
    pub fn cyclic(orders: &[u64]) -> Self {
        let n = orders.len();
        Presentation {
            generators: n,
            relations: orders
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| (0..n).map(|j| if i == j { a as i64 } else { 0 }).collect())
                .collect(),
        }
    }

    fn rows(&self) -> IMat {
        self.relations
            .iter()
            .map(|r| r.iter().map(|&x| i128::from(x)).collect())
            .collect()
    }

    /// Relations of `N^k`, placed blockwise in `Z^{k * generators}`.
    fn power_relations(&self, k: usize) -> IMat {
        let h = self.generators;
        let mut out = Vec::new();
        for block in 0..k {
            for r in &self.relations {
                let mut v = vec![0i128; k * h];
                for (j, &x) in r.iter().enumerate() {
                    v[block * h + j] = i128::from(x);
                }
                out.push(v);
            }
        }
        out
    }

    fn check(&self) -> Result<()> {
        if self.relations.iter().any(|r| r.len() != self.generators) {
            return Err(Error::InvalidArgument("relation length differs from the generator count".into()));
        }
        Ok(())
    }
}

/// `Hom(M, N)` and `Ext^1(M, N)` from presentations. A homomorphism is a
/// matrix sending generators of `M` into `N`, well defined when relations go
/// to relations; `Ext^1` is the cokernel of restricting `Hom(Z^g, N)` to the
/// relation lattice of `M`.
pub fn snf_hom_ext(m: &Presentation, n: &Presentation) -> Result<(AbelianGroup, AbelianGroup)> {
    m.check()?;
    n.check()?;
    let (g, h) = (m.generators, n.generators);
    if g * h > 64 {
        return Err(Error::BoundsExceeded(format!("{g} x {h} generators")));
    }
    let rm = m.rows();
    let r = rm.len();
    // Rows indexed by unknowns F[i][j], columns by (relation k, coordinate j).
    let phi: IMat = (0..g * h)
        .map(|idx| {
            let (i, j) = (idx / h, idx % h);
            let mut row = vec![0i128; r * h];
            for (k, rel) in rm.iter().enumerate() {
                row[k * h + j] = rel[i];
            }
            row
        })
        .collect();
    let hom_lattice = preimage(&phi, &n.power_relations(r), r * h)?;
    let hom = subquotient(g * h, &hom_lattice, &n.power_relations(g))?;

    let (ech, _, rank) = echelon(&rm, g)?;
    let basis = &ech[..rank];
    let mut gens = n.power_relations(rank);
    for i in 0..g {
        for j in 0..h {
            let mut v = vec![0i128; rank * h];
            for (l, b) in basis.iter().enumerate() {
                v[l * h + j] = b[i];
            }
            gens.push(v);
        }
    }
    let ext = quotient(rank * h, &gens)?;
    Ok((hom, ext))
}

// ---------------------------------------------------------------------------
// Field side.

trait OField {
    type E: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn from_scalar(&self, s: &Scalar) -> Result<Self::E>;
    fn to_scalar(&self, e: &Self::E) -> Scalar;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        *a == self.zero()
    }
}

struct PrimeField(u64);

impl OField for PrimeField {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat: a^(p-2).
        let (mut base, mut e, mut acc) = (*a, self.0 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            e >>= 1;
        }
        acc
    }
    fn from_scalar(&self, s: &Scalar) -> Result<u64> {
        match s {
            Scalar::F(i) if u64::from(*i) < self.0 => Ok(u64::from(*i)),
            _ => Err(Error::UnsupportedField(format!("{s:?} is not an element of F{}", self.0))),
        }
    }
    fn to_scalar(&self, e: &u64) -> Scalar {
        Scalar::F(*e as u32)
    }
}

struct RationalField;

impl OField for RationalField {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_scalar(&self, s: &Scalar) -> Result<BigRational> {
        match s {
            Scalar::Q(r) => Ok(r.clone()),
            Scalar::F(_) => Err(Error::UnsupportedField(format!("{s:?} is not rational"))),
        }
    }
    fn to_scalar(&self, e: &BigRational) -> Scalar {
        Scalar::Q(e.clone())
    }
}

macro_rules! with_oracle_field {
    ($desc:expr, $f:ident => $body:expr) => {
        match $desc {
            FieldDescriptor::Rational => {
                let $f = &RationalField;
                $body
            }
            FieldDescriptor::FiniteField(q) if is_small_prime(u64::from(*q)) => {
                let $f = &PrimeField(u64::from(*q));
                $body
            }
            other => Err(Error::UnsupportedField(format!("the oracle computes over Q and prime fields, not {other}"))),
        }
    };
}

fn is_small_prime(q: u64) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

type FMat<E> = Vec<Vec<E>>;

/// Row reduction in place; returns the pivot columns.
fn reduce<F: OField>(f: &F, m: &mut FMat<F::E>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut p = 0;
    for c in 0..cols {
        let Some(r) = (p..m.len()).find(|&r| !f.is_zero(&m[r][c])) else { continue };
        m.swap(p, r);
        let inv = f.inv(&m[p][c]);
        for x in m[p].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for r in 0..m.len() {
            if r != p && !f.is_zero(&m[r][c]) {
                let factor = m[r][c].clone();
                for k in 0..m[r].len() {
                    let v = f.mul(&factor, &m[p][k]);
                    m[r][k] = f.sub(&m[r][k], &v);
                }
            }
        }
        pivots.push(c);
        p += 1;
    }
    pivots
}

fn rank<F: OField>(f: &F, m: &FMat<F::E>, cols: usize) -> usize {
    let mut m = m.clone();
    reduce(f, &mut m, cols).len()
}

/// Basis of `{x : M x = 0}` as a list of column vectors.
fn nullspace<F: OField>(f: &F, m: &FMat<F::E>, cols: usize) -> Vec<Vec<F::E>> {
    let mut r = m.clone();
    let pivots = reduce(f, &mut r, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![f.zero(); cols];
            v[free] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&r[row][free]);
            }
            v
        })
        .collect()
}

/// Solve `A x = b` for a matrix `A` with independent columns.
fn solve<F: OField>(f: &F, a: &FMat<F::E>, cols: usize, b: &[F::E]) -> Option<Vec<F::E>> {
    let mut aug: FMat<F::E> = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = reduce(f, &mut aug, cols + 1);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

fn matmul<F: OField>(f: &F, a: &FMat<F::E>, b: &FMat<F::E>, inner: usize, cols: usize) -> FMat<F::E> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&row[k], &b[k][c]))))
                .collect()
        })
        .collect()
}

/// An explicit representation of a quiver: a vector space dimension per
/// vertex and a matrix (target x source) per arrow.
#[derive(Debug, Clone, PartialEq)]
pub struct QuiverRep {
    pub field: FieldDescriptor,
    pub dims: Vec<usize>,
    pub arrows: Vec<(usize, usize, Mat<Scalar>)>,
}

fn scalar_int(field: &FieldDescriptor, v: i64) -> Scalar {
    match field {
        FieldDescriptor::FiniteField(q) => Scalar::F(v.rem_euclid(i64::from(*q)) as u32),
        _ => Scalar::int(v),
    }
}

fn int_matrix(field: &FieldDescriptor, rows: usize, cols: usize, entry: impl Fn(usize, usize) -> i64) -> Mat<Scalar> {
    Mat::from_fn(rows, cols, |r, c| scalar_int(field, entry(r, c)))
}

impl QuiverRep {
    /// Kronecker representations on vertices `[2, 1]` with arrows `x, y: 2 -> 1`.
    /// Preprojectives act on homogeneous polynomials by multiplication,
    /// preinjectives on their duals by differentiation-like shifts, and
    /// regular modules by Jordan blocks.
    pub fn kronecker(field: &FieldDescriptor, x: &Indecomposable) -> Result<QuiverRep> {
        let two = |d2: usize, d1: usize, a: Mat<Scalar>, b: Mat<Scalar>| QuiverRep {
            field: field.clone(),
            dims: vec![d2, d1],
            arrows: vec![(0, 1, a), (0, 1, b)],
        };
        match x {
            Indecomposable::Preprojective(n) => {
                let n = *n as usize;
                // x^(n-1-i) y^i  ->  x^(n-i) y^i  and  x^(n-1-i) y^(i+1).
                Ok(two(
                    n,
                    n + 1,
                    int_matrix(field, n + 1, n, |r, c| i64::from(r == c)),
                    int_matrix(field, n + 1, n, |r, c| i64::from(r == c + 1)),
                ))
            }
            Indecomposable::Preinjective(n) => {
                let n = *n as usize;
                // x^(n-i) y^i  ->  x^(n-1-i) y^i  and  x^(n-i) y^(i-1), or 0.
                Ok(two(
                    n + 1,
                    n,
                    int_matrix(field, n, n + 1, |r, c| i64::from(r == c)),
                    int_matrix(field, n, n + 1, |r, c| i64::from(c == r + 1)),
                ))
            }
            Indecomposable::Regular { point, length } => {
                let k = *length as usize;
                let shift = |t: Scalar| {
                    Mat::from_fn(k, k, |r, c| {
                        if r == c {
                            t.clone()
                        } else {
                            scalar_int(field, i64::from(c == r + 1))
                        }
                    })
                };
                let id = int_matrix(field, k, k, |r, c| i64::from(r == c));
                match point {
                    ProjPoint::Affine(t) => Ok(two(k, k, id, shift(t.clone()))),
                    ProjPoint::Infinity => Ok(two(k, k, shift(scalar_int(field, 0)), id)),
                    ProjPoint::Formal(_) => Err(Error::UnsupportedField(format!("{x} has no coordinates"))),
                }
            }
            _ => Err(Error::MixedRings(format!("{x} is not a Kronecker module"))),
        }
    }

    /// The interval module `[i, j]` of the linearly oriented `A_n`
    /// (arrows `v+1 -> v`), over `Q`.
    pub fn interval(n: u32, i: u32, j: u32) -> QuiverRep {
        let field = FieldDescriptor::Rational;
        let inside = |v: u32| i <= v && v <= j;
        let dims: Vec<usize> = (1..=n).map(|v| usize::from(inside(v))).collect();
        let arrows = (1..n)
            .map(|v| {
                let (src, tgt) = (v as usize, v as usize - 1);
                let m = int_matrix(&field, dims[tgt], dims[src], |_, _| 1);
                (src, tgt, m)
            })
            .collect();
        QuiverRep { field, dims, arrows }
    }

    pub fn of(ring: &RingDescriptor, x: &Indecomposable) -> Result<QuiverRep> {
        match (ring, x) {
            (RingDescriptor::Kronecker(f), _) => QuiverRep::kronecker(f, x),
            (RingDescriptor::DynkinAn(n), Indecomposable::Interval { i, j }) => Ok(QuiverRep::interval(*n, *i, *j)),
            _ => Err(Error::WrongRing {
                op: "explicit representation",
                ring: ring.to_string(),
            }),
        }
    }

    pub fn direct_sum(parts: &[QuiverRep]) -> Result<QuiverRep> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty direct sum".into()))?;
        let zero = scalar_int(&first.field, 0);
        let vertices = first.dims.len();
        let dims: Vec<usize> = (0..vertices).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
        let mut arrows = Vec::new();
        for (a, (src, tgt, _)) in first.arrows.iter().enumerate() {
            let mut m = Mat::filled(dims[*tgt], dims[*src], zero.clone());
            let (mut r0, mut c0) = (0, 0);
            for p in parts {
                let block = &p.arrows[a].2;
                for r in 0..block.rows() {
                    for c in 0..block.cols() {
                        m.set(r0 + r, c0 + c, block.get(r, c).clone());
                    }
                }
                r0 += p.dims[*tgt];
                c0 += p.dims[*src];
            }
            arrows.push((*src, *tgt, m));
        }
        Ok(QuiverRep {
            field: first.field.clone(),
            dims,
            arrows,
        })
    }

    pub fn total_dimension(&self) -> usize {
        self.dims.iter().sum()
    }
}

fn to_fmat<F: OField>(f: &F, m: &Mat<Scalar>) -> Result<FMat<F::E>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| f.from_scalar(m.get(r, c))).collect())
        .collect()
}

fn from_fmat<F: OField>(f: &F, m: &FMat<F::E>, rows: usize, cols: usize) -> Mat<Scalar> {
    Mat::from_fn(rows, cols, |r, c| f.to_scalar(&m[r][c]))
}

/// The linear map `(φ_v) ↦ (Y_a φ_s - φ_t X_a)_a` whose kernel is
/// `Hom(X, Y)` and whose cokernel is `Ext^1(X, Y)` for a path algebra.
fn ringel_matrix<F: OField>(f: &F, x: &QuiverRep, y: &QuiverRep) -> Result<(FMat<F::E>, usize, usize)> {
    let nv = x.dims.len();
    let mut offset = vec![0; nv + 1];
    for v in 0..nv {
        offset[v + 1] = offset[v] + y.dims[v] * x.dims[v];
    }
    let unknowns = offset[nv];
    let mut rows: FMat<F::E> = Vec::new();
    for ((s, t, xa), (_, _, ya)) in x.arrows.iter().zip(&y.arrows) {
        let (xa, ya) = (to_fmat(f, xa)?, to_fmat(f, ya)?);
        let (ds, dt, es, et) = (x.dims[*s], x.dims[*t], y.dims[*s], y.dims[*t]);
        // Entry (r, c) of Y_a φ_s - φ_t X_a, with φ_v stored row-major (e_v x d_v).
        for r in 0..et {
            for c in 0..ds {
                let mut row = vec![f.zero(); unknowns];
                for k in 0..es {
                    let idx = offset[*s] + k * ds + c;
                    row[idx] = f.add(&row[idx], &ya[r][k]);
                }
                for k in 0..dt {
                    let idx = offset[*t] + r * dt + k;
                    row[idx] = f.sub(&row[idx], &xa[k][c]);
                }
                rows.push(row);
            }
        }
    }
    Ok((rows, unknowns, x.arrows.iter().map(|(s, t, _)| y.dims[*t] * x.dims[*s]).sum()))
}

/// `(dim Hom(X, Y), dim Ext^1(X, Y))`: the nullity of the intertwining system
/// and the corank of the same map.
pub fn intertwiner_dims(x: &QuiverRep, y: &QuiverRep) -> Result<(u64, u64)> {
    if x.field != y.field || x.dims.len() != y.dims.len() {
        return Err(Error::MixedRings("representations of different quivers or fields".into()));
    }
    with_oracle_field!(&x.field, f => {
        let (m, unknowns, equations) = ringel_matrix(f, x, y)?;
        let r = rank(f, &m, unknowns);
        Ok(((unknowns - r) as u64, (equations - r) as u64))
    })
}

/// A basis of `Hom(X, Y)`, each element given by its vertex components.
pub fn intertwiner_basis(x: &QuiverRep, y: &QuiverRep) -> Result<Vec<Vec<Mat<Scalar>>>> {
    with_oracle_field!(&x.field, f => {
        let (m, unknowns, _) = ringel_matrix(f, x, y)?;
        let mut out = Vec::new();
        for v in nullspace(f, &m, unknowns) {
            let mut comps = Vec::new();
            let mut at = 0;
            for vert in 0..x.dims.len() {
                let (e, d) = (y.dims[vert], x.dims[vert]);
                comps.push(Mat::from_fn(e, d, |r, c| f.to_scalar(&v[at + r * d + c])));
                at += e * d;
            }
            out.push(comps);
        }
        Ok(out)
    })
}

/// A chain map between two-term data: a module map whose mapping cone has
/// cohomology `ker` in degree -1 and `coker` in degree 0.
#[derive(Debug, Clone, PartialEq)]
pub enum TwoTermMap {
    /// `images[i]` is the image of the `i`-th source generator.
    Integer {
        source: Presentation,
        target: Presentation,
        images: Vec<Vec<i64>>,
    },
    /// Components per vertex, each `dim target_v x dim source_v`.
    Quiver {
        source: QuiverRep,
        target: QuiverRep,
        components: Vec<Mat<Scalar>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Homology {
    Group(AbelianGroup),
    Rep(QuiverRep),
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        match self {
            Homology::Group(g) => g.is_zero(),
            Homology::Rep(r) => r.total_dimension() == 0,
        }
    }
}

/// Completion of the columns of `a` (independent) by standard basis vectors
/// to a basis; returns the indices of the chosen standard vectors.
fn complement<F: OField>(f: &F, a: &FMat<F::E>, n: usize, k: usize) -> Vec<usize> {
    let mut cols: Vec<Vec<F::E>> = (0..k).map(|c| (0..n).map(|r| a[r][c].clone()).collect()).collect();
    let mut chosen = Vec::new();
    for e in 0..n {
        let mut v = vec![f.zero(); n];
        v[e] = f.one();
        cols.push(v);
        let m: FMat<F::E> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        if rank(f, &m, cols.len()) == cols.len() {
            chosen.push(e);
        } else {
            cols.pop();
        }
    }
    chosen
}

fn quiver_cone<F: OField>(f: &F, x: &QuiverRep, y: &QuiverRep, comps: &[Mat<Scalar>]) -> Result<(QuiverRep, QuiverRep)> {
    let nv = x.dims.len();
    let phi: Vec<FMat<F::E>> = comps.iter().map(|m| to_fmat(f, m)).collect::<Result<_>>()?;
    for ((s, t, xa), (_, _, ya)) in x.arrows.iter().zip(&y.arrows) {
        let lhs = matmul(f, &to_fmat(f, ya)?, &phi[*s], y.dims[*s], x.dims[*s]);
        let rhs = matmul(f, &phi[*t], &to_fmat(f, xa)?, x.dims[*t], x.dims[*s]);
        if lhs != rhs {
            return Err(Error::NonIntertwining("the components do not commute with an arrow".into()));
        }
    }
    // Kernel: basis columns K_v; arrows restrict via K_t C = X_a K_s.
    let kernels: Vec<Vec<Vec<F::E>>> = (0..nv).map(|v| nullspace(f, &phi[v], x.dims[v])).collect();
    let kmat = |v: usize| -> FMat<F::E> {
        (0..x.dims[v]).map(|r| kernels[v].iter().map(|col| col[r].clone()).collect()).collect()
    };
    let mut karrows = Vec::new();
    for (s, t, xa) in &x.arrows {
        let xa = to_fmat(f, xa)?;
        let ks = kmat(*s);
        let img = matmul(f, &xa, &ks, x.dims[*s], kernels[*s].len());
        let kt = kmat(*t);
        let mut cm = vec![vec![f.zero(); kernels[*s].len()]; kernels[*t].len()];
        for c in 0..kernels[*s].len() {
            let b: Vec<F::E> = img.iter().map(|row| row[c].clone()).collect();
            let sol = solve(f, &kt, kernels[*t].len(), &b)
                .ok_or_else(|| Error::NonIntertwining("kernel is not a subrepresentation".into()))?;
            for (r, v) in sol.into_iter().enumerate() {
                cm[r][c] = v;
            }
        }
        karrows.push((*s, *t, from_fmat(f, &cm, kernels[*t].len(), kernels[*s].len())));
    }
    let ker = QuiverRep {
        field: x.field.clone(),
        dims: kernels.iter().map(Vec::len).collect(),
        arrows: karrows,
    };
    // Cokernel: basis [image | chosen standard vectors] of Y_v; the quotient
    // keeps the coordinates on the chosen vectors.
    let mut bases = Vec::new();
    let mut chosen = Vec::new();
    for v in 0..nv {
        let mut cols: Vec<Vec<F::E>> = Vec::new();
        let mut m = phi[v].clone();
        let piv = reduce(f, &mut m, x.dims[v]);
        for &pc in &piv {
            cols.push((0..y.dims[v]).map(|r| phi[v][r][pc].clone()).collect());
        }
        let im: FMat<F::E> = (0..y.dims[v]).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let comp = complement(f, &im, y.dims[v], cols.len());
        for &e in &comp {
            let mut col = vec![f.zero(); y.dims[v]];
            col[e] = f.one();
            cols.push(col);
        }
        let basis: FMat<F::E> = (0..y.dims[v]).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        bases.push((basis, piv.len()));
        chosen.push(comp);
    }
    let mut carrows = Vec::new();
    for (s, t, ya) in &y.arrows {
        let ya = to_fmat(f, ya)?;
        let (bt, it) = &bases[*t];
        let qs = chosen[*s].len();
        let qt = chosen[*t].len();
        let mut cm = vec![vec![f.zero(); qs]; qt];
        for (c, &e) in chosen[*s].iter().enumerate() {
            let b: Vec<F::E> = ya.iter().map(|row| row[e].clone()).collect();
            let sol = solve(f, bt, y.dims[*t], &b).expect("basis of the target space");
            for r in 0..qt {
                cm[r][c] = sol[it + r].clone();
            }
        }
        carrows.push((*s, *t, from_fmat(f, &cm, qt, qs)));
    }
    let coker = QuiverRep {
        field: y.field.clone(),
        dims: chosen.iter().map(Vec::len).collect(),
        arrows: carrows,
    };
    Ok((ker, coker))
}

/// Cohomology of the mapping cone `source -> target` placed in degrees -1
/// and 0: the kernel and the cokernel of the map. Zero groups are omitted.
pub fn mapping_cone_homology(map: &TwoTermMap) -> Result<Vec<(i64, Homology)>> {
    let (ker, coker) = match map {
        TwoTermMap::Integer { source, target, images } => {
            source.check()?;
            target.check()?;
            let (g, h) = (source.generators, target.generators);
            if images.len() != g || images.iter().any(|r| r.len() != h) {
                return Err(Error::InvalidArgument("image matrix has the wrong shape".into()));
            }
            let fmat: IMat = images.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
            let rn = target.rows();
            // Relations must map to relations.
            for rel in source.rows() {
                let img: Vec<i128> = (0..h).map(|j| (0..g).map(|i| rel[i] * fmat[i][j]).sum()).collect();
                let (e, _, rank) = echelon(&rn, h)?;
                if coordinates(&e[..rank], &img).is_none() {
                    return Err(Error::NonIntertwining("a relation does not map to a relation".into()));
                }
            }
            let lattice = preimage(&fmat, &rn, h)?;
            let ker = subquotient(g, &lattice, &source.rows())?;
            let mut gens = rn;
            gens.extend(fmat);
            let coker = quotient(h, &gens)?;
            (Homology::Group(ker), Homology::Group(coker))
        }
        TwoTermMap::Quiver { source, target, components } => {
            if source.field != target.field || components.len() != source.dims.len() {
                return Err(Error::InvalidArgument("mismatched representation data".into()));
            }
            let (k, c) = with_oracle_field!(&source.field, f => quiver_cone(f, source, target, components))?;
            (Homology::Rep(k), Homology::Rep(c))
        }
    };
    Ok([(-1, ker), (0, coker)].into_iter().filter(|(_, h)| !h.is_zero()).collect())
}

/// Whether a representation is isomorphic to the direct sum of the given
/// indecomposables, judged by dimension vectors and the dimensions of
/// `Hom(T, -)` and `Hom(-, T)` for every module `T` of a test family large
/// enough for modules of this size.
pub fn rep_matches(rep: &QuiverRep, ring: &RingDescriptor, modules: &[Indecomposable]) -> Result<bool> {
    let parts: Vec<QuiverRep> = modules.iter().map(|m| QuiverRep::of(ring, m)).collect::<Result<_>>()?;
    let expected = if parts.is_empty() {
        QuiverRep {
            field: rep.field.clone(),
            dims: vec![0; rep.dims.len()],
            arrows: rep
                .arrows
                .iter()
                .map(|(s, t, _)| (*s, *t, Mat::filled(0, 0, scalar_int(&rep.field, 0))))
                .collect(),
        }
    } else {
        QuiverRep::direct_sum(&parts)?
    };
    if expected.dims != rep.dims {
        return Ok(false);
    }
    let size = rep.total_dimension().max(1) as u32;
    let tests: Vec<Indecomposable> = match ring {
        RingDescriptor::Kronecker(field) => {
            let mut points = sample_points(field);
            for m in modules {
                if let Some(p) = m.tube() {
                    if !points.contains(p) {
                        points.push(p.clone());
                    }
                }
            }
            let mut t: Vec<Indecomposable> = (0..=size).flat_map(|n| [Indecomposable::Preprojective(n), Indecomposable::Preinjective(n)]).collect();
            for p in points {
                t.extend((1..=size / 2 + 1).map(|l| Indecomposable::regular(p.clone(), l)));
            }
            t
        }
        _ => catalog(ring, &CatalogBounds::default()),
    };
    for t in tests {
        let tr = QuiverRep::of(ring, &t)?;
        if intertwiner_dims(&tr, rep)?.0 != intertwiner_dims(&tr, &expected)?.0
            || intertwiner_dims(rep, &tr)?.0 != intertwiner_dims(&expected, &tr)?.0
        {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Self-test suites.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    /// Cases outside the library's catalog, not compared.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: impl Into<String>) -> Self {
        SuiteResult {
            name: name.into(),
            checked: 0,
            skipped: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    fn record(&mut self, ok: Result<bool>, what: impl FnOnce() -> String) {
        self.checked += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => self.failures.push(what()),
            Err(e) => self.failures.push(format!("{}: {e}", what())),
        }
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} checked, {} failed",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.failures.len()
        )?;
        if self.skipped > 0 {
            write!(f, ", {} outside the catalog", self.skipped)?;
        }
        Ok(())
    }
}

fn order(m: &Indecomposable) -> u64 {
    match m {
        Indecomposable::ZTorsion { p, k } => p.pow(*k),
        _ => 0,
    }
}

/// Multisets of size `k` drawn from `items`, as index lists.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(n, k - 1) {
        let lo = rest.last().copied().unwrap_or(0);
        for i in lo..n {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

fn group_of(inv: &Invariant) -> AbelianGroup {
    match inv {
        Invariant::Group(g) => g.clone(),
        Invariant::Dim(_) => unreachable!("integer invariants are groups"),
    }
}

/// `Hom` and `Ext` over `Z` for every pair of direct sums with at most
/// `max_generators_z` cyclic summands in total.
pub fn suite_integer_hom_ext(config: &OracleConfig) -> SuiteResult {
    let mut suite = SuiteResult::new("Z hom/ext vs Smith normal form");
    let z = RingDescriptor::IntegerRing;
    let cat = catalog(&z, &CatalogBounds::default());
    let k = config.max_generators_z;
    for a in 0..=k {
        for b in 0..=k - a {
            for xs in multisets(cat.len(), a) {
                for ys in multisets(cat.len(), b) {
                    let xm: Vec<Indecomposable> = xs.iter().map(|&i| cat[i].clone()).collect();
                    let ym: Vec<Indecomposable> = ys.iter().map(|&i| cat[i].clone()).collect();
                    let check = || -> Result<bool> {
                        let x = SplitObject::new(z.clone(), xm.iter().map(|m| (0, m.clone())))?;
                        let y = SplitObject::new(z.clone(), ym.iter().map(|m| (0, m.clone())))?;
                        let gh = graded_hom(&x, &y)?;
                        let get = |j: i64| gh.get(&j).map(group_of).unwrap_or_default();
                        let px = Presentation::cyclic(&xm.iter().map(order).collect::<Vec<_>>());
                        let py = Presentation::cyclic(&ym.iter().map(order).collect::<Vec<_>>());
                        let (hom, ext) = snf_hom_ext(&px, &py)?;
                        Ok(hom == get(0) && ext == get(1))
                    };
                    suite.record(check(), || format!("{xm:?} vs {ym:?}"));
                }
            }
        }
    }
    suite
}

fn field_pairs(ring: &RingDescriptor, max_total: usize) -> Vec<(Indecomposable, Indecomposable)> {
    let cat = catalog(ring, &CatalogBounds::default());
    let dim = |m: &Indecomposable| dim_vector(ring, m).map(|d| d.total() as usize).unwrap_or(usize::MAX);
    let mut out = Vec::new();
    for x in &cat {
        for y in &cat {
            if dim(x) + dim(y) <= max_total {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

fn oracle_dims(ring: &RingDescriptor, x: &Indecomposable, y: &Indecomposable) -> Result<(u64, u64)> {
    intertwiner_dims(&QuiverRep::of(ring, x)?, &QuiverRep::of(ring, y)?)
}

fn rings_for(config: &OracleConfig) -> Vec<RingDescriptor> {
    let mut rings = vec![RingDescriptor::Kronecker(config.field_for_enumeration.clone())];
    if config.field_for_enumeration != FieldDescriptor::Rational {
        rings.push(RingDescriptor::Kronecker(FieldDescriptor::Rational));
    }
    rings
}

/// Catalog `Hom`/`Ext` dimensions against the intertwiner system.
pub fn suite_field_hom_ext(config: &OracleConfig) -> SuiteResult {
    let mut suite = SuiteResult::new("quiver hom/ext vs intertwiners");
    let mut rings = rings_for(config);
    rings.extend((2..=4).map(RingDescriptor::DynkinAn));
    for ring in rings {
        for (x, y) in field_pairs(&ring, config.max_total_dimension) {
            let check = || -> Result<bool> {
                let rec = hom_invariants(&ring, &x, &y)?;
                let (h, e) = oracle_dims(&ring, &x, &y)?;
                Ok(rec.hom == Invariant::Dim(h) && rec.ext == Invariant::Dim(e))
            };
            suite.record(check(), || format!("{ring}: ({x}, {y})"));
        }
    }
    suite
}

/// `hom - ext = <dim X, dim Y>` and `ext(X, Y) = hom(Y, τX)`.
pub fn suite_euler_serre(config: &OracleConfig) -> SuiteResult {
    let mut suite = SuiteResult::new("Euler form and Serre duality");
    let mut rings = rings_for(config);
    rings.extend((2..=4).map(RingDescriptor::DynkinAn));
    for ring in rings {
        for (x, y) in field_pairs(&ring, config.max_total_dimension) {
            let euler = || -> Result<bool> {
                let (h, e) = oracle_dims(&ring, &x, &y)?;
                let form = euler_form(&ring, &dim_vector(&ring, &x)?, &dim_vector(&ring, &y)?)?;
                Ok(h as i64 - e as i64 == form)
            };
            suite.record(euler(), || format!("{ring}: Euler form on ({x}, {y})"));
            if let RingDescriptor::Kronecker(_) = ring {
                let serre = || -> Result<bool> {
                    let (_, e) = oracle_dims(&ring, &x, &y)?;
                    match tau(&ring, &x) {
                        Ok(tx) => Ok(oracle_dims(&ring, &y, &tx)?.0 == e),
                        Err(Error::ProjectiveArgument(_)) => Ok(e == 0),
                        Err(err) => Err(err),
                    }
                };
                suite.record(serre(), || format!("{ring}: Serre duality on ({x}, {y})"));
            }
        }
    }
    suite
}

fn group_of_modules(ms: &[Indecomposable]) -> AbelianGroup {
    let mut g = AbelianGroup::zero();
    for m in ms {
        g = g.direct_sum(&match m {
            Indecomposable::ZFree => AbelianGroup::free(1),
            Indecomposable::ZTorsion { p, k } => AbelianGroup::cyclic(*p, *k),
            _ => unreachable!(),
        });
    }
    g
}

/// Compare `cone_of_module_map` with the literal cone cohomology.
pub fn check_cone(map: &ModuleMap) -> Result<bool> {
    let cone = cone_of_module_map(map)?;
    let (ker, coker) = (cone.degree_part(-1), cone.degree_part(0));
    if cone.degrees().iter().any(|d| *d != -1 && *d != 0) {
        return Ok(false);
    }
    match map.data() {
        MapData::Integer(mat) => {
            let images: Vec<Vec<i64>> = (0..mat.cols())
                .map(|c| (0..mat.rows()).map(|r| mat.get(r, c).to_i64().unwrap_or(i64::MAX)).collect())
                .collect();
            let two = TwoTermMap::Integer {
                source: Presentation::cyclic(&map.source().iter().map(order).collect::<Vec<_>>()),
                target: Presentation::cyclic(&map.target().iter().map(order).collect::<Vec<_>>()),
                images,
            };
            let h = mapping_cone_homology(&two)?;
            let get = |d: i64| match h.iter().find(|(e, _)| *e == d) {
                Some((_, Homology::Group(g))) => g.clone(),
                _ => AbelianGroup::zero(),
            };
            Ok(get(-1) == group_of_modules(&ker) && get(0) == group_of_modules(&coker))
        }
        MapData::Field(rm) => {
            let ring = map.ring().clone();
            let sum = |ms: &[Indecomposable]| -> Result<QuiverRep> {
                let parts: Vec<QuiverRep> = ms.iter().map(|m| QuiverRep::of(&ring, m)).collect::<Result<_>>()?;
                QuiverRep::direct_sum(&parts)
            };
            let two = TwoTermMap::Quiver {
                source: sum(map.source())?,
                target: sum(map.target())?,
                components: vec![rm.f2.clone(), rm.f1.clone()],
            };
            let h = mapping_cone_homology(&two)?;
            let zero_like = |r: &QuiverRep| QuiverRep {
                field: r.field.clone(),
                dims: vec![0; r.dims.len()],
                arrows: r.arrows.iter().map(|(s, t, _)| (*s, *t, Mat::filled(0, 0, scalar_int(&r.field, 0)))).collect(),
            };
            let get = |d: i64, fallback: &QuiverRep| match h.iter().find(|(e, _)| *e == d) {
                Some((_, Homology::Rep(r))) => r.clone(),
                _ => zero_like(fallback),
            };
            let (src, tgt) = match &two {
                TwoTermMap::Quiver { source, target, .. } => (source, target),
                _ => unreachable!(),
            };
            Ok(rep_matches(&get(-1, src), &ring, &ker)? && rep_matches(&get(0, tgt), &ring, &coker)?)
        }
    }
}

fn int_map(source: &[Indecomposable], target: &[Indecomposable], entries: &[i64]) -> Option<ModuleMap> {
    let m = Mat::from_fn(target.len(), source.len(), |r, c| BigInt::from(entries[r * source.len() + c]));
    ModuleMap::integer(source.to_vec(), target.to_vec(), m).ok()
}

/// Cones of integer maps: every map between cyclic groups with entries in
/// `[-10, 10]`, and maps between two-generator groups with small entries.
pub fn suite_integer_cones(_config: &OracleConfig) -> SuiteResult {
    let mut suite = SuiteResult::new("Z cones vs literal cone cohomology");
    let cat: Vec<Indecomposable> = catalog(&RingDescriptor::IntegerRing, &CatalogBounds::default())
        .into_iter()
        .filter(|m| order(m) <= 9)
        .collect();
    for x in &cat {
        for y in &cat {
            for e in -10..=10 {
                if let Some(map) = int_map(std::slice::from_ref(x), std::slice::from_ref(y), &[e]) {
                    suite.record(check_cone(&map), || format!("{x} -> {y} by {e}"));
                }
            }
        }
    }
    let pairs: Vec<[Indecomposable; 2]> = vec![
        [Indecomposable::ZFree, Indecomposable::ZFree],
        [Indecomposable::ZFree, Indecomposable::torsion(2, 2)],
        [Indecomposable::torsion(2, 1), Indecomposable::torsion(3, 1)],
        [Indecomposable::torsion(2, 1), Indecomposable::torsion(2, 3)],
    ];
    for src in &pairs {
        for tgt in &pairs {
            for code in 0..625 {
                let entries: Vec<i64> = (0..4).map(|i| (code / 5i64.pow(i)) % 5 - 2).collect();
                if let Some(map) = int_map(src, tgt, &entries) {
                    suite.record(check_cone(&map), || format!("{src:?} -> {tgt:?} by {entries:?}"));
                }
            }
        }
    }
    suite
}

/// Cones of Kronecker maps: the canonical maps `P(n-1) -> P(n)` and the
/// basis intertwiners (plus their sum) between catalog pairs.
pub fn suite_field_cones(config: &OracleConfig) -> SuiteResult {
    let mut suite = SuiteResult::new("Kronecker cones vs literal cone cohomology");
    for ring in rings_for(config) {
        let RingDescriptor::Kronecker(field) = &ring else { unreachable!() };
        for pt in sample_points(field) {
            for n in 1..=5 {
                let check = || -> Result<bool> {
                    let map = ModuleMap::canonical_preprojective(field.clone(), n, &pt)?;
                    check_cone(&map)
                };
                suite.record(check(), || format!("{ring}: P({}) -> P({n}) at {pt}", n - 1));
            }
        }
        for (x, y) in field_pairs(&ring, config.max_total_dimension) {
            let maps = || -> Result<Vec<ModuleMap>> {
                let basis = intertwiner_basis(&QuiverRep::of(&ring, &x)?, &QuiverRep::of(&ring, &y)?)?;
                let mut out = Vec::new();
                let mut total: Option<Vec<Mat<Scalar>>> = None;
                for comps in &basis {
                    out.push(ModuleMap::kronecker(field.clone(), vec![x.clone()], vec![y.clone()], comps[0].clone(), comps[1].clone())?);
                    total = Some(match total {
                        None => comps.clone(),
                        Some(t) => with_oracle_field!(field, f => {
                            t.iter()
                                .zip(comps)
                                .map(|(a, b)| {
                                    let (rows, cols) = (a.rows(), a.cols());
                                    let (a, b) = (to_fmat(f, a)?, to_fmat(f, b)?);
                                    let s: FMat<_> = a.iter().zip(&b).map(|(ra, rb)| ra.iter().zip(rb).map(|(p, q)| f.add(p, q)).collect()).collect();
                                    Ok(from_fmat(f, &s, rows, cols))
                                })
                                .collect::<Result<Vec<_>>>()
                        })?,
                    });
                }
                if basis.len() > 1 {
                    let t = total.unwrap();
                    out.push(ModuleMap::kronecker(field.clone(), vec![x.clone()], vec![y.clone()], t[0].clone(), t[1].clone())?);
                }
                Ok(out)
            };
            match maps() {
                Ok(maps) => {
                    for (i, map) in maps.iter().enumerate() {
                        // Cones with tubes at points of higher degree leave the
                        // catalog; they are counted but not compared.
                        match check_cone(map) {
                            Err(Error::Undecomposable(_)) => suite.skipped += 1,
                            r => suite.record(r, || format!("{ring}: map {i} from {x} to {y}")),
                        }
                    }
                }
                Err(e) => suite.record(Err(e), || format!("{ring}: maps from {x} to {y}")),
            }
        }
    }
    suite
}

/// Every suite, in a fixed order.
pub fn selftest(config: &OracleConfig) -> Vec<SuiteResult> {
    vec![
        suite_integer_hom_ext(config),
        suite_field_hom_ext(config),
        suite_euler_serre(config),
        suite_integer_cones(config),
        suite_field_cones(config),
    ]
}

/// Rational scalars for a few integers, for tests and examples.
pub fn rational(n: i64) -> Scalar {
    Scalar::Q(BigRational::from_integer(BigInt::from(n)))
}
