//! Coefficient fields for quiver representations.
//!
//! `FieldDescriptor` is the user-facing description; the [`Field`] trait is the
//! arithmetic interface used by the linear algebra. Elements cross the boundary
//! as [`Scalar`] values, which are also used as projective-line coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldDescriptor {
    Rational,
    FiniteField(u32),
    /// A formal uncountable algebraically closed field: only point labels and
    /// cardinality questions are supported.
    SymbolicUncountable,
}

impl FieldDescriptor {
    pub fn finite(q: u32) -> Result<Self> {
        match arith::prime_power(q as u64) {
            Some(_) => Ok(FieldDescriptor::FiniteField(q)),
            None => Err(Error::InvalidArgument(format!("{q} is not a prime power"))),
        }
    }

    pub fn is_uncountable(&self) -> bool {
        matches!(self, FieldDescriptor::SymbolicUncountable)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldDescriptor::FiniteField(_))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::FiniteField(q) => write!(f, "F{q}"),
            FieldDescriptor::SymbolicUncountable => write!(f, "K(uncountable)"),
        }
    }
}

/// A field element detached from its field: a rational number or the index of
/// an element of a finite field (coefficients of its polynomial representative
/// written in base `p`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Q(BigRational),
    F(u32),
}

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Q(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Height `max(|num|, den)` of a rational scalar, or `index + 1` of a
    /// finite-field scalar. Used to enumerate points of the projective line.
    pub fn height(&self) -> u64 {
        match self {
            Scalar::Q(r) => {
                let n = r.numer().abs().to_u64().unwrap_or(u64::MAX);
                let d = r.denom().to_u64().unwrap_or(u64::MAX);
                n.max(d)
            }
            Scalar::F(i) => *i as u64 + 1,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::F(i) => write!(f, "{i}"),
        }
    }
}

/// Arithmetic interface for exact linear algebra.
pub trait Field {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_scalar(&self, s: &Scalar) -> Result<Self::Elem>;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;
    /// All roots of the polynomial with the given coefficients (constant term
    /// first), or `None` if they cannot be determined.
    fn roots(&self, poly: &[Self::Elem]) -> Option<Vec<Self::Elem>>;
    /// Every element, for finite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn descriptor(&self) -> FieldDescriptor;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_scalar(&self, s: &Scalar) -> Result<BigRational> {
        match s {
            Scalar::Q(r) => Ok(r.clone()),
            Scalar::F(_) => Err(Error::MixedRings(
                "finite-field scalar used over Q".to_string(),
            )),
        }
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Q(a.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn roots(&self, poly: &[BigRational]) -> Option<Vec<BigRational>> {
        rational_roots(poly)
    }

    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rational
    }
}

/// Rational roots by the rational root theorem, after clearing denominators.
fn rational_roots(poly: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut coeffs: Vec<BigRational> = poly.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    // Strip the root 0.
    let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(BigRational::zero());
        coeffs.drain(..lead_zeros);
    }
    if coeffs.len() <= 1 {
        return Some(roots);
    }
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let c0 = ints[0].abs().to_u64()?;
    let cn = ints.last().unwrap().abs().to_u64()?;
    let divisors = |n: u64| -> Vec<u64> {
        arith_divisors(n)
    };
    for p in divisors(c0) {
        for q in divisors(cn) {
            if arith::gcd(p, q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let cand = BigRational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                let value = coeffs
                    .iter()
                    .rev()
                    .fold(BigRational::zero(), |acc, c| acc * &cand + c);
                if value.is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

fn arith_divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in arith::factor(n) {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = 1u64;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// The finite field with `q = p^k` elements, built from a monic irreducible
/// polynomial of degree `k` over `F_p`. Elements are encoded as integers in
/// `0..q` whose base-`p` digits are polynomial coefficients.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients of the monic modulus, constant term first, leading 1 omitted.
    modulus: Vec<u32>,
}

impl FiniteField {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = arith::prime_power(q as u64)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        let p = p as u32;
        let modulus = if k == 1 {
            Vec::new()
        } else {
            find_irreducible(p, k)
        };
        Ok(FiniteField { p, k, q, modulus })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }
}

/// Brute-force search for a monic irreducible polynomial of degree `k` over `F_p`.
fn find_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    'candidate: for code in 0..count {
        let mut c = code;
        let lower: Vec<u32> = (0..k)
            .map(|_| {
                let d = (c % p as u64) as u32;
                c /= p as u64;
                d
            })
            .collect();
        let mut full = lower.clone();
        full.push(1);
        for deg in 1..=k / 2 {
            for dcode in 0..(p as u64).pow(deg) {
                let mut c = dcode;
                let mut div: Vec<u32> = (0..deg)
                    .map(|_| {
                        let d = (c % p as u64) as u32;
                        c /= p as u64;
                        d
                    })
                    .collect();
                div.push(1);
                if poly_mod_p(&full, &div, p).iter().all(|&x| x == 0) {
                    continue 'candidate;
                }
            }
        }
        return lower;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_mod_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p as u64;
        let shift = r.len() - dm;
        for (i, &mi) in m[..dm].iter().enumerate() {
            let sub = lead * mi as u64 % p as u64;
            r[shift + i] = (r[shift + i] + p as u64 - sub) % p as u64;
        }
    }
    r.into_iter().map(|x| (x % p as u64) as u32).collect()
}

impl Field for FiniteField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (x, y) = (self.digits(*a), self.digits(*b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.from_digits(&s)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &u32) -> u32 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let x = self.digits(*a);
        let s: Vec<u32> = x.iter().map(|u| (self.p - u) % self.p).collect();
        self.from_digits(&s)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if self.k == 1 {
            return ((*a as u64 * *b as u64) % self.p as u64) as u32;
        }
        let (x, y) = (self.digits(*a), self.digits(*b));
        let mut prod = vec![0u32; (2 * self.k - 1) as usize];
        for (i, u) in x.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + *u as u64 * *v as u64) % self.p as u64) as u32;
            }
        }
        let mut m = self.modulus.clone();
        m.push(1);
        let mut r = poly_mod_p(&prod, &m, self.p);
        r.resize(self.k as usize, 0);
        self.from_digits(&r)
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // a^(q-2) by square and multiply.
        let mut result = 1u32;
        let mut base = *a;
        let mut e = self.q - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(result)
    }
    fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn from_scalar(&self, s: &Scalar) -> Result<u32> {
        match s {
            Scalar::F(i) if *i < self.q => Ok(*i),
            Scalar::F(i) => Err(Error::InvalidArgument(format!(
                "{i} is not an element of F{}",
                self.q
            ))),
            Scalar::Q(r) if self.k == 1 => {
                let p = BigInt::from(self.p);
                let num = r.numer().mod_floor_big(&p);
                let den = r.denom().mod_floor_big(&p);
                let den = den.to_u32().unwrap();
                let inv = self
                    .inv(&den)
                    .ok_or_else(|| Error::InvalidArgument(format!("{r} has no image in F{}", self.q)))?;
                Ok(self.mul(&num.to_u32().unwrap(), &inv))
            }
            Scalar::Q(_) => Err(Error::MixedRings(
                "rational scalar used over an extension field".to_string(),
            )),
        }
    }
    fn to_scalar(&self, a: &u32) -> Scalar {
        Scalar::F(*a)
    }
    fn roots(&self, poly: &[u32]) -> Option<Vec<u32>> {
        Some(
            (0..self.q)
                .filter(|x| {
                    let v = poly
                        .iter()
                        .rev()
                        .fold(0u32, |acc, c| self.add(&self.mul(&acc, x), c));
                    v == 0
                })
                .collect(),
        )
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.q).collect())
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::FiniteField(self.q)
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        num_integer::Integer::mod_floor(self, m)
    }
}
