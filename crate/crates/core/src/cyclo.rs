//! Exact arithmetic in cyclotomic fields Q(ζ_m).
//!
//! An element is stored in the power basis {1, ζ, …, ζ^{φ(m)-1}} after
//! reduction modulo the cyclotomic polynomial Φ_m, so two elements of the
//! same conductor are equal exactly when their coefficient vectors are.
//! Binary operations on different conductors lift both sides into
//! Q(ζ_lcm) first.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),
    #[error("exponent {j} is not coprime to conductor {m}")]
    InvalidAutomorphism { j: i64, m: u64 },
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("malformed cyclotomic literal: {0}")]
    Malformed(String),
}

/// Exact rational coefficient type usable inside a [`Cyclotomic`].
pub trait Scalar:
    Clone + fmt::Debug + PartialEq + Ord + std::hash::Hash + Signed + FromPrimitive + Send + Sync
{
    fn numer_denom(&self) -> (BigInt, BigInt);
    fn from_numer_denom(n: BigInt, d: BigInt) -> Option<Self>;
}

impl Scalar for BigRational {
    fn numer_denom(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
    fn from_numer_denom(n: BigInt, d: BigInt) -> Option<Self> {
        if d.is_zero() {
            None
        } else {
            Some(BigRational::new(n, d))
        }
    }
}

impl Scalar for Rational64 {
    fn numer_denom(&self) -> (BigInt, BigInt) {
        (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn from_numer_denom(n: BigInt, d: BigInt) -> Option<Self> {
        let (n, d) = (n.to_i64()?, d.to_i64()?);
        if d == 0 {
            None
        } else {
            Some(Rational64::new(n, d))
        }
    }
}

/// Reduction data for one conductor.
#[derive(Debug)]
pub struct FieldData {
    pub m: u64,
    pub phi: usize,
    /// Φ_m, lowest degree first.
    pub cyclotomic_poly: Vec<i64>,
    /// `powers[t]` is ζ_m^t in the power basis, for 0 <= t < m.
    powers: Vec<Vec<i64>>,
}

fn registry() -> &'static RwLock<HashMap<u64, Arc<FieldData>>> {
    static REG: OnceLock<RwLock<HashMap<u64, Arc<FieldData>>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cyclotomic_poly(m: u64) -> Vec<i64> {
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = exact_div(&num, &field(d).cyclotomic_poly);
        }
    }
    num
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (i, &b) in den.iter().enumerate() {
                rem[k + i] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Euler's totient.
pub fn totient(m: u64) -> usize {
    (1..=m).filter(|k| k.gcd(&m) == 1).count()
}

/// Reduction data for conductor `m`, computed once and cached.
pub fn field(m: u64) -> Arc<FieldData> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(f) = registry().read().unwrap().get(&m) {
        return f.clone();
    }
    let poly = cyclotomic_poly(m);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x and reduce the x^phi term with the monic Φ_m
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
        if top != 0 {
            for (i, n) in next.iter_mut().enumerate() {
                *n -= top * poly[i];
            }
        }
        cur = next;
    }
    let data = Arc::new(FieldData {
        m,
        phi,
        cyclotomic_poly: poly,
        powers,
    });
    registry().write().unwrap().insert(m, data.clone());
    data
}

/// An exact element of Q(ζ_m).
#[derive(Clone, Debug)]
pub struct Cyclotomic<T: Scalar> {
    m: u64,
    c: Vec<T>,
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

impl<T: Scalar> Cyclotomic<T> {
    pub fn zero(m: u64) -> Self {
        let phi = field(m).phi;
        Cyclotomic {
            m,
            c: vec![T::zero(); phi],
        }
    }

    pub fn one() -> Self {
        Self::from_scalar(T::one())
    }

    pub fn from_scalar(q: T) -> Self {
        Cyclotomic { m: 1, c: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_scalar(T::from_i64(n).expect("integer fits the scalar type"))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_scalar(T::from_i64(n).unwrap() / T::from_i64(d).unwrap())
    }

    /// ζ_m^k.
    pub fn root(m: u64, k: i64) -> Self {
        let f = field(m);
        let t = k.rem_euclid(m as i64) as usize;
        Self::from_int_vec(m, &f.powers[t])
    }

    fn from_int_vec(m: u64, v: &[i64]) -> Self {
        Cyclotomic {
            m,
            c: v.iter().map(|&x| T::from_i64(x).unwrap()).collect(),
        }
    }

    /// Builds an element from coordinates already in reduced form.
    pub fn from_coeffs(m: u64, coeffs: Vec<T>) -> Result<Self, CycloError> {
        if m == 0 {
            return Err(CycloError::ZeroConductor);
        }
        if coeffs.len() != field(m).phi {
            return Err(CycloError::Malformed(format!(
                "expected {} coefficients for conductor {m}, got {}",
                field(m).phi,
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { m, c: coeffs })
    }

    /// Builds Σ coeffs[t]·ζ_m^t for an arbitrary-length exponent sequence.
    pub fn from_exponent_sum(m: u64, coeffs: &[(i64, T)]) -> Self {
        let f = field(m);
        let mut out = vec![T::zero(); f.phi];
        for (t, q) in coeffs {
            let row = &f.powers[t.rem_euclid(m as i64) as usize];
            accumulate(&mut out, row, q);
        }
        Cyclotomic { m, c: out }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Returns the rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<T> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Lifts into Q(ζ_target) through ζ_m ↦ ζ_target^{target/m}.
    pub fn lift(&self, target: u64) -> Self {
        assert!(target.is_multiple_of(self.m), "{} does not divide {}", self.m, target);
        if target == self.m {
            return self.clone();
        }
        let f = field(target);
        let step = target / self.m;
        let mut out = vec![T::zero(); f.phi];
        for (i, q) in self.c.iter().enumerate() {
            if !q.is_zero() {
                let t = (i as u64 * step % target) as usize;
                accumulate(&mut out, &f.powers[t], q);
            }
        }
        Cyclotomic { m: target, c: out }
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        let l = lcm(a.m, b.m);
        (a.lift(l), b.lift(l))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.m != other.m {
            let (a, b) = Self::unify(self, other);
            return a.add_ref(&b);
        }
        Cyclotomic {
            m: self.m,
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        Cyclotomic {
            m: self.m,
            c: self.c.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn scale(&self, q: &T) -> Self {
        Cyclotomic {
            m: self.m,
            c: self.c.iter().map(|x| x.clone() * q.clone()).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.m != other.m {
            let (a, b) = Self::unify(self, other);
            return a.mul_ref(&b);
        }
        if self.m == 1 {
            return Cyclotomic {
                m: 1,
                c: vec![self.c[0].clone() * other.c[0].clone()],
            };
        }
        let m = self.m as usize;
        let f = field(self.m);
        let mut acc: Vec<T> = vec![T::zero(); m];
        let mut touched = vec![false; m];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = (i + j) % m;
                acc[t] = acc[t].clone() + a.clone() * b.clone();
                touched[t] = true;
            }
        }
        let mut out = vec![T::zero(); f.phi];
        for t in 0..m {
            if touched[t] && !acc[t].is_zero() {
                accumulate(&mut out, &f.powers[t], &acc[t]);
            }
        }
        Cyclotomic { m: self.m, c: out }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut out = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        out
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois_unchecked(-1)
    }

    /// The Galois automorphism ζ_m ↦ ζ_m^j.
    pub fn galois(&self, j: i64) -> Result<Self, CycloError> {
        if j.rem_euclid(self.m as i64).gcd(&(self.m as i64)) != 1 && self.m > 1 {
            return Err(CycloError::InvalidAutomorphism { j, m: self.m });
        }
        Ok(self.galois_unchecked(j))
    }

    fn galois_unchecked(&self, j: i64) -> Self {
        if self.m <= 2 {
            return self.clone();
        }
        let f = field(self.m);
        let mut out = vec![T::zero(); f.phi];
        for (i, q) in self.c.iter().enumerate() {
            if !q.is_zero() {
                let t = (i as i64 * j).rem_euclid(self.m as i64) as usize;
                accumulate(&mut out, &f.powers[t], q);
            }
        }
        Cyclotomic { m: self.m, c: out }
    }

    /// Product of all Galois conjugates; always rational.
    pub fn norm(&self) -> T {
        let (_, n) = self.norm_parts();
        n
    }

    fn norm_parts(&self) -> (Self, T) {
        let mut cofactor = Self::one();
        for j in 2..self.m as i64 {
            if j.gcd(&(self.m as i64)) == 1 {
                cofactor = cofactor.mul_ref(&self.galois_unchecked(j));
            }
        }
        let n = self.mul_ref(&cofactor);
        let n = n.lift(n.m.max(1));
        debug_assert!(n.c[1..].iter().all(Zero::is_zero));
        (cofactor, n.c[0].clone())
    }

    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero(self.m));
        }
        if self.m == 1 {
            return Ok(Cyclotomic {
                m: 1,
                c: vec![T::one() / self.c[0].clone()],
            });
        }
        // Solve a·x = 1 in the power basis: columns are a·ζ^k.
        let phi = field(self.m).phi;
        let cols: Vec<Vec<T>> = (0..phi)
            .map(|k| self.mul_ref(&Self::root(self.m, k as i64)).c)
            .collect();
        let mut rhs = vec![T::zero(); phi];
        rhs[0] = T::one();
        let x = solve_rational(&cols, &rhs).ok_or(CycloError::DivisionByZero(self.m))?;
        Ok(Cyclotomic { m: self.m, c: x })
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self, CycloError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Smallest conductor whose field contains this element.
    pub fn minimal_conductor(&self) -> u64 {
        let mut divisors: Vec<u64> = (1..=self.m).filter(|d| self.m.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        for d in divisors {
            if d == self.m {
                return d;
            }
            // fixed by every automorphism that is trivial on Q(ζ_d)
            let fixed = (1..self.m as i64)
                .filter(|j| j.gcd(&(self.m as i64)) == 1 && (j - 1) % d as i64 == 0)
                .all(|j| self.galois_unchecked(j) == *self);
            if fixed {
                return d;
            }
        }
        self.m
    }

    /// Rewrites the element over its smallest conductor.
    pub fn reduce_conductor(&self) -> Self {
        let d = self.minimal_conductor();
        if d == self.m {
            return self.clone();
        }
        // The images of ζ_d^k (k < φ(d)) are distinct powers of ζ_m; solve for
        // the coordinates by elimination on those φ(d) columns.
        let fd = field(d);
        let step = self.m / d;
        let fm = field(self.m);
        let cols: Vec<Vec<T>> = (0..fd.phi)
            .map(|k| {
                fm.powers[(k as u64 * step % self.m) as usize]
                    .iter()
                    .map(|&x| T::from_i64(x).unwrap())
                    .collect()
            })
            .collect();
        let sol = solve_rational(&cols, &self.c).expect("element lies in the subfield");
        Cyclotomic { m: d, c: sol }
    }

    /// Floating-point image under ζ_m ↦ exp(2πi/m).
    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, q) in self.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let (n, d) = q.numer_denom();
            let v = n.to_f64().unwrap() / d.to_f64().unwrap();
            let ang = 2.0 * std::f64::consts::PI * k as f64 / self.m as f64;
            z += Complex64::from_polar(v, ang);
        }
        z
    }

    /// Approximation whose error is below 10^-digits (f64 supports up to 14).
    pub fn embed(&self, digits: u32) -> Complex64 {
        debug_assert!((1..=14).contains(&digits), "f64 embedding resolves at most 14 digits");
        self.to_complex()
    }

    /// Total order on elements of the same conductor (lexicographic on
    /// coefficients). Different conductors compare after lifting.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        if self.m != other.m {
            let (a, b) = Self::unify(self, other);
            return a.canonical_cmp(&b);
        }
        self.c.cmp(&other.c)
    }

    /// Root-of-unity test: returns (order, k) with self = ζ_order^k.
    pub fn as_root_of_unity(&self) -> Option<(u64, i64)> {
        let m = if self.m % 2 == 1 { 2 * self.m } else { self.m };
        let me = self.lift(m);
        for k in 0..m as i64 {
            if Self::root(m, k) == me {
                let g = (k as u64).gcd(&m);
                let ord = m / g;
                return Some((ord, k / g as i64));
            }
        }
        None
    }
}

fn accumulate<T: Scalar>(out: &mut [T], row: &[i64], q: &T) {
    for (o, &r) in out.iter_mut().zip(row) {
        if r != 0 {
            *o = o.clone() + q.clone() * T::from_i64(r).unwrap();
        }
    }
}

/// Solves Σ_k x_k cols[k] = rhs over Q; `cols` are linearly independent.
fn solve_rational<T: Scalar>(cols: &[Vec<T>], rhs: &[T]) -> Option<Vec<T>> {
    let rows = rhs.len();
    let n = cols.len();
    let mut a: Vec<Vec<T>> = (0..rows)
        .map(|r| {
            let mut row: Vec<T> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = T::one() / a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=n {
                    let s = a[r][j].clone() * f.clone();
                    a[i][j] = a[i][j].clone() - s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![T::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n].clone();
    }
    Some(x)
}

impl<T: Scalar> PartialEq for Cyclotomic<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            self.c == other.c
        } else {
            let (a, b) = Self::unify(self, other);
            a.c == b.c
        }
    }
}

impl<T: Scalar> Eq for Cyclotomic<T> {}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<T: Scalar> $tr for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: Self) -> Self {
                self.$inner(&rhs)
            }
        }
        impl<'a, T: Scalar> $tr<&'a Cyclotomic<T>> for &'a Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: &'a Cyclotomic<T>) -> Cyclotomic<T> {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl<T: Scalar> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<T: Scalar> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        self.neg_ref()
    }
}

fn fmt_scalar<T: Scalar>(q: &T) -> String {
    let (n, d) = q.numer_denom();
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

impl<T: Scalar> fmt::Display for Cyclotomic<T> {
    /// Rationals print plainly, roots of unity as `z<order>^k`, everything
    /// else as a power-basis sum over the smallest conductor.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", fmt_scalar(&q));
        }
        let r = self.reduce_conductor();
        if let Some((ord, k)) = r.as_root_of_unity() {
            return match (ord, k) {
                (4, 1) => write!(f, "i"),
                (4, 3) => write!(f, "-i"),
                (o, 1) => write!(f, "z{o}"),
                (o, k) => write!(f, "z{o}^{k}"),
            };
        }
        let mut first = true;
        for (k, q) in r.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let a = q.abs();
            let coef = if a.is_one() && k > 0 {
                String::new()
            } else if k > 0 {
                format!("{}*", fmt_scalar(&a))
            } else {
                fmt_scalar(&a)
            };
            let term = match k {
                0 => coef,
                1 => format!("{coef}z{}", r.m),
                _ => format!("{coef}z{}^{k}", r.m),
            };
            match (first, neg) {
                (true, true) => write!(f, "-{term}")?,
                (true, false) => write!(f, "{term}")?,
                (false, true) => write!(f, " - {term}")?,
                (false, false) => write!(f, " + {term}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    m: u64,
    c: Vec<(WireInt, WireInt)>,
}

/// Integers that fit i64 travel as JSON numbers, larger ones as strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(i64),
    Big(String),
}

impl WireInt {
    fn from_big(b: &BigInt) -> Self {
        match b.to_i64() {
            Some(v) => WireInt::Small(v),
            None => WireInt::Big(b.to_string()),
        }
    }
    fn to_big(&self) -> Result<BigInt, String> {
        match self {
            WireInt::Small(v) => Ok(BigInt::from(*v)),
            WireInt::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

impl<T: Scalar> Serialize for Cyclotomic<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            m: self.m,
            c: self
                .c
                .iter()
                .map(|q| {
                    let (n, d) = q.numer_denom();
                    (WireInt::from_big(&n), WireInt::from_big(&d))
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Cyclotomic<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let coeffs = w
            .c
            .iter()
            .map(|(n, dd)| {
                let n = n.to_big().map_err(D::Error::custom)?;
                let dd = dd.to_big().map_err(D::Error::custom)?;
                T::from_numer_denom(n, dd).ok_or_else(|| D::Error::custom("bad rational"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Cyclotomic::from_coeffs(w.m, coeffs).map_err(D::Error::custom)
    }
}

/// Parses the compact text notation used by golden files: a sum of terms
/// `[coef*]z<m>[^k]`, `i`, `w` (= z3) or rationals, e.g. `-z3^2`, `2*i`,
/// `1/2 + z12^5`.
pub fn parse<T: Scalar>(src: &str) -> Result<Cyclotomic<T>, CycloError> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(CycloError::Malformed(src.to_string()));
    }
    let mut total = Cyclotomic::<T>::from_int(0);
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'*' {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for t in terms {
        total = total.add_ref(&parse_term::<T>(t).ok_or_else(|| CycloError::Malformed(src.to_string()))?);
    }
    Ok(total)
}

fn parse_term<T: Scalar>(t: &str) -> Option<Cyclotomic<T>> {
    let (sign, body) = match t.as_bytes().first()? {
        b'+' => (1, &t[1..]),
        b'-' => (-1, &t[1..]),
        _ => (1, t),
    };
    let mut value = Cyclotomic::<T>::from_int(sign);
    for factor in body.split('*') {
        value = value.mul_ref(&parse_factor::<T>(factor)?);
    }
    Some(value)
}

fn parse_factor<T: Scalar>(f: &str) -> Option<Cyclotomic<T>> {
    let (base, exp) = match f.split_once('^') {
        Some((b, e)) => (b, e.parse::<i64>().ok()?),
        None => (f, 1),
    };
    let root = |m: u64| Some(Cyclotomic::<T>::root(m, exp));
    match base {
        "i" => root(4),
        "w" => root(3),
        _ if base.starts_with('z') => root(base[1..].parse().ok()?),
        _ => {
            if exp != 1 {
                return None;
            }
            let (n, d) = match base.split_once('/') {
                Some((n, d)) => (n.parse::<i64>().ok()?, d.parse::<i64>().ok()?),
                None => (base.parse::<i64>().ok()?, 1),
            };
            if d == 0 {
                return None;
            }
            Some(Cyclotomic::from_frac(n, d))
        }
    }
}

/// Rational helper for callers that work with the default scalar.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::Cyc;
    use proptest::prelude::*;

    fn element(m: u64) -> impl Strategy<Value = Cyc> {
        prop::collection::vec((-6i64..=6, 1i64..=4), field(m).phi).prop_map(move |v| {
            Cyc::from_coeffs(m, v.into_iter().map(|(n, d)| q(n, d)).collect()).unwrap()
        })
    }

    fn pair() -> impl Strategy<Value = (Cyc, Cyc, Cyc)> {
        (1u64..=60).prop_flat_map(|m| (element(m), element(m), element(m)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_laws((a, b, c) in pair()) {
            prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
            prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
            prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
            prop_assert!(a.sub_ref(&a).is_zero());
        }

        #[test]
        fn inverses((a, _, _) in pair()) {
            prop_assume!(!a.is_zero());
            prop_assert!(a.mul_ref(&a.inv().unwrap()).is_one());
        }

        #[test]
        fn conjugation_is_a_homomorphism((a, b, _) in pair()) {
            prop_assert_eq!(a.mul_ref(&b).conj(), a.conj().mul_ref(&b.conj()));
            prop_assert_eq!(a.add_ref(&b).conj(), a.conj().add_ref(&b.conj()));
            let e = a.conj().to_complex() - a.to_complex().conj();
            prop_assert!(e.norm() < 1e-9);
        }

        #[test]
        fn galois_composes((a, _, _) in pair(), j in 1i64..60, k in 1i64..60) {
            let m = a.conductor() as i64;
            prop_assume!(j.gcd(&m) == 1 && k.gcd(&m) == 1);
            let lhs = a.galois(j).unwrap().galois(k).unwrap();
            prop_assert_eq!(lhs, a.galois(j * k).unwrap());
        }

        #[test]
        fn embedding_is_multiplicative((a, b, _) in pair()) {
            let e = a.mul_ref(&b).embed(10) - a.embed(10) * b.embed(10);
            prop_assert!(e.norm() < 1e-10 * (1.0 + a.embed(10).norm() * b.embed(10).norm()));
        }

        #[test]
        fn lifting_preserves_value((a, _, _) in pair(), k in 1u64..4) {
            let l = a.lift(a.conductor() * k);
            prop_assert_eq!(&l, &a);
            prop_assert!((l.to_complex() - a.to_complex()).norm() < 1e-9);
        }
    }
}
