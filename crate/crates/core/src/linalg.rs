//! Dense matrices, Gaussian elimination over a [`Field`], and Smith normal
//! form over Euclidean rings (integers and polynomials in one variable).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Mat<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[r * self.cols + c])?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl<E: Clone> Mat<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Mat {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<F, T: Clone>(&self, f: F) -> Mat<T>
    where
        F: FnMut(&E) -> T,
    {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c).clone()
            } else {
                other.get(r - self.rows, c).clone()
            }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }
}

/// Block diagonal matrix with the given blocks, filled with `zero`.
pub fn block_diag<E: Clone>(blocks: &[Mat<E>], zero: E) -> Mat<E> {
    let rows = blocks.iter().map(Mat::rows).sum();
    let cols = blocks.iter().map(Mat::cols).sum();
    let mut m = Mat::filled(rows, cols, zero);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for r in 0..b.rows {
            for c in 0..b.cols {
                m.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
        r0 += b.rows;
        c0 += b.cols;
    }
    m
}

/// Linear algebra over a field.
pub struct Lin<'a, F: Field> {
    pub f: &'a F,
}

impl<'a, F: Field> Lin<'a, F> {
    pub fn new(f: &'a F) -> Self {
        Lin { f }
    }

    pub fn zeros(&self, rows: usize, cols: usize) -> Mat<F::Elem> {
        Mat::filled(rows, cols, self.f.zero())
    }

    pub fn identity(&self, n: usize) -> Mat<F::Elem> {
        Mat::from_fn(n, n, |r, c| if r == c { self.f.one() } else { self.f.zero() })
    }

    pub fn mul(&self, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
        assert_eq!(a.cols, b.rows, "dimension mismatch in product");
        let f = self.f;
        let mut out = self.zeros(a.rows, b.cols);
        for r in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(r, k);
                if f.is_zero(x) {
                    continue;
                }
                for c in 0..b.cols {
                    let v = f.add(out.get(r, c), &f.mul(x, b.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        Mat::from_fn(a.rows, a.cols, |r, c| self.f.sub(a.get(r, c), b.get(r, c)))
    }

    pub fn scale(&self, s: &F::Elem, a: &Mat<F::Elem>) -> Mat<F::Elem> {
        a.map(|x| self.f.mul(s, x))
    }

    pub fn is_zero(&self, a: &Mat<F::Elem>) -> bool {
        a.data.iter().all(|x| self.f.is_zero(x))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, a: &Mat<F::Elem>) -> (Mat<F::Elem>, Vec<usize>) {
        let f = self.f;
        let mut m = a.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = f.inv(m.get(row, col)).unwrap();
            for c in 0..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || f.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..m.cols {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, a: &Mat<F::Elem>) -> usize {
        self.rref(a).1.len()
    }

    /// Basis of the right null space, as the columns of the result.
    pub fn nullspace(&self, a: &Mat<F::Elem>) -> Mat<F::Elem> {
        let f = self.f;
        let (r, pivots) = self.rref(a);
        let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = self.zeros(a.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// Rows spanning the left null space: `Q` with `Q a = 0` of full row rank.
    pub fn left_nullspace(&self, a: &Mat<F::Elem>) -> Mat<F::Elem> {
        self.nullspace(&a.transpose()).transpose()
    }

    /// Some `X` with `a X = b`, if the system is consistent.
    pub fn solve(&self, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
        assert_eq!(a.rows, b.rows);
        let f = self.f;
        let aug = a.hstack(b);
        let (r, pivots) = self.rref(&aug);
        if pivots.iter().any(|&p| p >= a.cols) {
            return None;
        }
        let mut x = self.zeros(a.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(pc, c, r.get(i, a.cols + c).clone());
            }
        }
        let _ = f;
        Some(x)
    }

    /// Basis of the column space, as a subset of the columns of `a`.
    pub fn column_basis(&self, a: &Mat<F::Elem>) -> Mat<F::Elem> {
        let (_, pivots) = self.rref(a);
        let rows: Vec<usize> = (0..a.rows).collect();
        a.select(&rows, &pivots)
    }
}

/// A Euclidean domain, as needed by the Smith normal form.
pub trait Euclid {
    type E: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Euclidean division `a = q b + r` with `size(r) < size(b)`.
    fn div_rem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E);
    /// Euclidean size; zero has the smallest size.
    fn size(&self, a: &Self::E) -> u64;
    /// A unit `u` with `u a` in normal form (non-negative, monic).
    fn normalizer(&self, a: &Self::E) -> Self::E;
}

pub struct Integers;

impl Euclid for Integers {
    type E = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        // Nearest remainder, |r| <= |b| / 2, so pivots shrink quickly.
        let (mut q, mut r) = a.div_mod_floor(b);
        if (&r + &r).abs() > b.abs() {
            r -= b;
            q += 1;
        }
        (q, r)
    }
    fn size(&self, a: &BigInt) -> u64 {
        // Magnitude below 2^63, bit length above; only comparisons matter.
        let bits = a.bits();
        if bits >= 63 {
            (1 << 63) + bits
        } else {
            use num_traits::ToPrimitive;
            a.abs().to_u64().unwrap()
        }
    }
    fn normalizer(&self, a: &BigInt) -> BigInt {
        if a.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
}

/// Polynomials over a field, coefficients stored constant term first with no
/// trailing zeros.
pub struct Polys<'a, F: Field> {
    pub f: &'a F,
}

impl<'a, F: Field> Polys<'a, F> {
    pub fn new(f: &'a F) -> Self {
        Polys { f }
    }

    pub fn trim(&self, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
        while p.last().is_some_and(|c| self.f.is_zero(c)) {
            p.pop();
        }
        p
    }

    pub fn constant(&self, c: F::Elem) -> Vec<F::Elem> {
        self.trim(vec![c])
    }

    /// `a t + b`.
    pub fn linear(&self, a: F::Elem, b: F::Elem) -> Vec<F::Elem> {
        self.trim(vec![b, a])
    }

    pub fn degree(&self, p: &[F::Elem]) -> Option<usize> {
        if p.is_empty() {
            None
        } else {
            Some(p.len() - 1)
        }
    }

    pub fn eval(&self, p: &[F::Elem], x: &F::Elem) -> F::Elem {
        p.iter()
            .rev()
            .fold(self.f.zero(), |acc, c| self.f.add(&self.f.mul(&acc, x), c))
    }
}

impl<F: Field> Euclid for Polys<'_, F> {
    type E = Vec<F::Elem>;
    fn zero(&self) -> Self::E {
        Vec::new()
    }
    fn one(&self) -> Self::E {
        vec![self.f.one()]
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let n = a.len().max(b.len());
        let z = self.f.zero();
        let v = (0..n)
            .map(|i| self.f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(v)
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.f.add(&out[i + j], &self.f.mul(x, y));
            }
        }
        self.trim(out)
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        a.iter().map(|x| self.f.neg(x)).collect()
    }
    fn div_rem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut r = a.clone();
        let db = b.len() - 1;
        let lead_inv = self.f.inv(b.last().unwrap()).unwrap();
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![self.f.zero(); r.len() - db];
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let c = self.f.mul(r.last().unwrap(), &lead_inv);
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] = self.f.sub(&r[shift + i], &self.f.mul(&c, bi));
            }
            q[shift] = c;
            r.pop();
            r = self.trim(r);
        }
        (self.trim(q), r)
    }
    fn size(&self, a: &Self::E) -> u64 {
        a.len() as u64
    }
    fn normalizer(&self, a: &Self::E) -> Self::E {
        match a.last() {
            Some(l) => vec![self.f.inv(l).unwrap()],
            None => self.one(),
        }
    }
}

/// Smith normal form `U a V = D`, with `U`, `V` invertible and `D` diagonal
/// with each diagonal entry dividing the next.
pub struct Smith<E> {
    pub d: Mat<E>,
    pub u: Mat<E>,
    pub v: Mat<E>,
    /// Nonzero diagonal entries, normalised.
    pub invariants: Vec<E>,
}

pub fn smith<R: Euclid>(ring: &R, a: &Mat<R::E>) -> Smith<R::E> {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = Mat::from_fn(m, m, |r, c| if r == c { ring.one() } else { ring.zero() });
    let mut v = Mat::from_fn(n, n, |r, c| if r == c { ring.one() } else { ring.zero() });

    // Row operation: row_t -= q * row_s (applied to d and u).
    let row_op = |d: &mut Mat<R::E>, u: &mut Mat<R::E>, t: usize, s: usize, q: &R::E| {
        for c in 0..d.cols {
            let val = ring.sub(d.get(t, c), &ring.mul(q, d.get(s, c)));
            d.set(t, c, val);
        }
        for c in 0..u.cols {
            let val = ring.sub(u.get(t, c), &ring.mul(q, u.get(s, c)));
            u.set(t, c, val);
        }
    };
    let col_op = |d: &mut Mat<R::E>, v: &mut Mat<R::E>, t: usize, s: usize, q: &R::E| {
        for r in 0..d.rows {
            let val = ring.sub(d.get(r, t), &ring.mul(q, d.get(r, s)));
            d.set(r, t, val);
        }
        for r in 0..v.rows {
            let val = ring.sub(v.get(r, t), &ring.mul(q, v.get(r, s)));
            v.set(r, t, val);
        }
    };

    let mut k = 0;
    while k < m.min(n) {
        // Pick the nonzero entry of smallest size in the remaining block.
        let mut best: Option<(usize, usize, u64)> = None;
        for r in k..m {
            for c in k..n {
                let x = d.get(r, c);
                if !ring.is_zero(x) {
                    let s = ring.size(x);
                    if best.is_none_or(|(_, _, bs)| s < bs) {
                        best = Some((r, c, s));
                    }
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        d.swap_rows(k, pr);
        u.swap_rows(k, pr);
        d.swap_cols(k, pc);
        v.swap_cols(k, pc);

        loop {
            // Move the smallest entry of row k and column k to the pivot.
            let mut best = (k, k, ring.size(d.get(k, k)));
            for r in k + 1..m {
                let x = d.get(r, k);
                if !ring.is_zero(x) && ring.size(x) < best.2 {
                    best = (r, k, ring.size(x));
                }
            }
            for c in k + 1..n {
                let x = d.get(k, c);
                if !ring.is_zero(x) && ring.size(x) < best.2 {
                    best = (k, c, ring.size(x));
                }
            }
            d.swap_rows(k, best.0);
            u.swap_rows(k, best.0);
            d.swap_cols(k, best.1);
            v.swap_cols(k, best.1);

            let mut changed = false;
            for r in k + 1..m {
                if !ring.is_zero(d.get(r, k)) {
                    let (q, rem) = ring.div_rem(d.get(r, k), d.get(k, k));
                    row_op(&mut d, &mut u, r, k, &q);
                    changed |= !ring.is_zero(&rem);
                }
            }
            for c in k + 1..n {
                if !ring.is_zero(d.get(k, c)) {
                    let (q, rem) = ring.div_rem(d.get(k, c), d.get(k, k));
                    col_op(&mut d, &mut v, c, k, &q);
                    changed |= !ring.is_zero(&rem);
                }
            }
            if changed {
                continue;
            }
            // Pivot must divide every remaining entry.
            let mut fixed = false;
            'scan: for r in k + 1..m {
                for c in k + 1..n {
                    let (_, rem) = ring.div_rem(d.get(r, c), d.get(k, k));
                    if !ring.is_zero(&rem) {
                        // Add row r to row k and restart the clearing.
                        let minus_one = ring.neg(&ring.one());
                        row_op(&mut d, &mut u, k, r, &minus_one);
                        fixed = true;
                        break 'scan;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        // Normalise the pivot.
        let unit = ring.normalizer(d.get(k, k));
        for c in 0..n {
            let val = ring.mul(&unit, d.get(k, c));
            d.set(k, c, val);
        }
        for c in 0..m {
            let val = ring.mul(&unit, u.get(k, c));
            u.set(k, c, val);
        }
        k += 1;
    }
    let invariants = (0..m.min(n))
        .map(|i| d.get(i, i).clone())
        .filter(|x| !ring.is_zero(x))
        .collect();
    Smith { d, u, v, invariants }
}

pub fn int_mat(rows: usize, cols: usize, data: &[i64]) -> Mat<BigInt> {
    Mat::from_rows(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect())
}

/// A basis of the lattice spanned by the columns of `gens`, in column Hermite
/// normal form: column `t` has a positive pivot in row `pivots[t]`, is zero
/// above it, and entries of other columns in pivot rows are reduced modulo
/// the pivot. Unlike Smith transforms, its entries stay small.
pub struct Hermite {
    pub basis: Mat<BigInt>,
    pub pivots: Vec<usize>,
}

pub fn hermite_columns(gens: &Mat<BigInt>) -> Hermite {
    let rows = gens.rows;
    let mut cols: Vec<Vec<BigInt>> = (0..gens.cols)
        .map(|c| (0..rows).map(|r| gens.get(r, c).clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut t = 0;
    for r in 0..rows {
        if t == cols.len() {
            break;
        }
        // Gather the gcd of row r over columns t.. into column t.
        for c in t + 1..cols.len() {
            if cols[c][r].is_zero() {
                continue;
            }
            let e = cols[t][r].extended_gcd(&cols[c][r]);
            let (p, q) = (&cols[t][r] / &e.gcd, &cols[c][r] / &e.gcd);
            let (left, right) = cols.split_at_mut(c);
            let (ct, cc) = (&mut left[t], &mut right[0]);
            for i in 0..rows {
                let (x, y) = (ct[i].clone(), cc[i].clone());
                ct[i] = &e.x * &x + &e.y * &y;
                cc[i] = &p * &y - &q * &x;
            }
        }
        if cols[t][r].is_zero() {
            continue;
        }
        if cols[t][r].is_negative() {
            for x in cols[t].iter_mut() {
                *x = -&*x;
            }
        }
        for c in 0..t {
            let q = cols[c][r].div_floor(&cols[t][r]);
            if !q.is_zero() {
                for i in 0..rows {
                    let d = &q * &cols[t][i];
                    cols[c][i] -= d;
                }
            }
        }
        pivots.push(r);
        t += 1;
    }
    let basis = Mat::from_fn(rows, t, |r, c| cols[c][r].clone());
    Hermite { basis, pivots }
}

/// Coordinates of `v` in a Hermite basis, if `v` lies in the lattice.
pub fn hermite_coordinates(h: &Hermite, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(h.pivots.len());
    for (t, &r) in h.pivots.iter().enumerate() {
        let (q, rem) = rest[r].div_rem(h.basis.get(r, t));
        if !rem.is_zero() {
            return None;
        }
        for (i, x) in rest.iter_mut().enumerate() {
            *x -= &q * h.basis.get(i, t);
        }
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

pub fn int_mul(a: &Mat<BigInt>, b: &Mat<BigInt>) -> Mat<BigInt> {
    assert_eq!(a.cols, b.rows);
    Mat::from_fn(a.rows, b.cols, |r, c| {
        (0..a.cols).map(|k| a.get(r, k) * b.get(k, c)).sum()
    })
}
