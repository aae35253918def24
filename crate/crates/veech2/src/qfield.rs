//! Exact arithmetic in the real quadratic field Q(√d) and its ring of
//! integers O_d.
//!
//! A [`QElem`] is a + b√d with arbitrary-precision rational a, b, evaluated
//! under the real embedding that sends √d to the positive root. All
//! comparisons (ordering, sign, positivity) are decided by exact rational
//! case analysis; there is no floating point anywhere in this module.
//!
//! "Positive" always means positive under that fixed embedding. Conjugates
//! of positive elements are routinely negative here, and the cylinder
//! equations downstream depend on that.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;
use thiserror::Error;

/// Arbitrary-precision rational, the coefficient type of everything else.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum FieldError {
    #[error("d = {0} is not square-free")]
    NotSquareFree(u64),
    #[error("d = {0} is a perfect square")]
    PerfectSquare(u64),
    #[error("d must be at least 2, got {0}")]
    TooSmall(u64),
    #[error("elements live in different fields: Q(√{0}) vs Q(√{1})")]
    MixedFields(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
}

fn is_square_free(n: u64) -> bool {
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Validate that `d` names a real quadratic field: d ≥ 2 and square-free.
pub fn check_field_d(d: u64) -> Result<(), FieldError> {
    if d < 2 {
        return Err(FieldError::TooSmall(d));
    }
    let s = d.isqrt();
    if s * s == d {
        return Err(FieldError::PerfectSquare(d));
    }
    if !is_square_free(d) {
        return Err(FieldError::NotSquareFree(d));
    }
    Ok(())
}

/// An element a + b√d of Q(√d).
///
/// Invariant: `d == 0` exactly when `b == 0`, so purely rational values have
/// a single representation and structural equality is semantic equality.
/// Elements of different fields never mix silently: arithmetic panics on a
/// genuine mismatch (a programming error in this crate's domain), while
/// fallible entry points use [`QElem::same_field`] first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QElem {
    a: Rat,
    b: Rat,
    d: u64,
}

impl QElem {
    pub fn new(a: Rat, b: Rat, d: u64) -> Self {
        if b.is_zero() {
            QElem { a, b, d: 0 }
        } else {
            debug_assert!(d >= 2, "irrational part requires a real field");
            QElem { a, b, d }
        }
    }

    pub fn from_rat(a: Rat) -> Self {
        QElem { a, b: Rat::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    /// (p + q√d) / r from small integers, the CLI triple form.
    pub fn from_triple(p: i64, q: i64, r: i64, d: u64) -> Self {
        let r = Rat::from_integer(BigInt::from(r));
        Self::new(
            Rat::from_integer(BigInt::from(p)) / r.clone(),
            Rat::from_integer(BigInt::from(q)) / r,
            d,
        )
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt_d(d: u64) -> Self {
        Self::new(Rat::zero(), Rat::one(), d)
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rat {
        &self.b
    }

    /// The field discriminant seed; 0 for purely rational values.
    pub fn field_d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Do the two elements live in a common field? Rational values are
    /// compatible with every field.
    pub fn same_field(&self, other: &Self) -> bool {
        self.d == 0 || other.d == 0 || self.d == other.d
    }

    fn join_d(&self, other: &Self) -> u64 {
        if self.d == 0 {
            other.d
        } else if other.d == 0 || self.d == other.d {
            self.d
        } else {
            panic!(
                "mixed quadratic fields: Q(√{}) vs Q(√{})",
                self.d, other.d
            );
        }
    }

    /// Galois conjugate a − b√d.
    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone(), self.d)
    }

    /// Field norm x·conj(x) = a² − b²d, always rational.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * Rat::from_integer(BigInt::from(self.d))
    }

    /// Field trace x + conj(x) = 2a.
    pub fn trace(&self) -> Rat {
        &self.a + &self.a
    }

    /// Exact sign of the real value a + b√d under the positive embedding,
    /// decided by comparing a² with b²d when the terms compete.
    pub fn sign(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: |a| vs |b|√d, i.e. a² vs b²d. Equality would force
        // √d rational, impossible for square-free d ≥ 2.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rat::from_integer(BigInt::from(self.d));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("√d rational for square-free d ≥ 2"),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Membership in the ring of integers O_d of the ambient field `d`.
    ///
    /// For d ≡ 1 (mod 4) this is (p + q√d)/2 with integer p ≡ q (mod 2);
    /// otherwise both coordinates must be integers. Rational values are
    /// integral exactly when they lie in Z, whatever the ambient d.
    pub fn is_integer_in(&self, d: u64) -> bool {
        debug_assert!(self.d == 0 || self.d == d);
        if self.b.is_zero() {
            return self.a.is_integer();
        }
        if d % 4 == 1 {
            let p = &self.a + &self.a;
            let q = &self.b + &self.b;
            if !p.is_integer() || !q.is_integer() {
                return false;
            }
            let pi = p.to_integer();
            let qi = q.to_integer();
            (pi - qi).is_even()
        } else {
            self.a.is_integer() && self.b.is_integer()
        }
    }

    /// Membership in O_d of the element's own field (rationals test Z).
    pub fn is_integer(&self) -> bool {
        self.is_integer_in(if self.d == 0 { 2 } else { self.d })
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.norm();
        // 1/x = conj(x)/norm(x)
        Ok(Self::new(&self.a / &n, -(&self.b / &n), self.d))
    }

    /// Largest integer n with n ≤ value, decided exactly.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // Write the value as (p + q√d)/r over a common denominator and seed
        // with ⌊q√d⌋ from an integer square root; the seed is within one of
        // the true floor, and exact sign tests settle the rest.
        let r: BigInt = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&r / self.a.denom());
        let q = self.b.numer() * (&r / self.b.denom());
        let s = (&q * &q * BigInt::from(self.d)).sqrt();
        // √(q²d) is irrational here, so for negative q the floor drops by 1.
        let qfloor = if q.is_negative() { -s - 1 } else { s };
        let mut n = (p + qfloor).div_floor(&r);
        loop {
            let low = QElem::from_rat(Rat::from_integer(n.clone()));
            if (self.clone() - low).sign() < 0 {
                n -= 1;
                continue;
            }
            let high = QElem::from_rat(Rat::from_integer(&n + 1));
            if (self.clone() - high).sign() >= 0 {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Reduce into [0, m) for positive m: self − floor(self/m)·m.
    pub fn rem_euclid(&self, m: &QElem) -> QElem {
        assert!(m.is_positive(), "modulus must be positive");
        let q = (self.clone() / m.clone()).floor();
        self.clone() - m.clone() * QElem::from_rat(Rat::from_integer(q))
    }

    /// Float approximation for display only. Never feed this back into
    /// decisions.
    pub fn to_f64(&self) -> f64 {
        let fa = self.a.to_f64().unwrap_or(f64::NAN);
        let fb = self.b.to_f64().unwrap_or(f64::NAN);
        fa + fb * (self.d as f64).sqrt()
    }

    /// Exact comparison via the sign of the difference.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for QElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl fmt::Debug for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}√{}", self.b, self.d);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}√{}", self.a, -self.b.clone(), self.d)
        } else {
            write!(f, "{} + {}√{}", self.a, self.b, self.d)
        }
    }
}

impl Add for QElem {
    type Output = QElem;
    fn add(self, rhs: QElem) -> QElem {
        let d = self.join_d(&rhs);
        QElem::new(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for QElem {
    type Output = QElem;
    fn sub(self, rhs: QElem) -> QElem {
        let d = self.join_d(&rhs);
        QElem::new(self.a - rhs.a, self.b - rhs.b, d)
    }
}

impl Neg for QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        QElem::new(-self.a, -self.b, self.d)
    }
}

impl Mul for QElem {
    type Output = QElem;
    fn mul(self, rhs: QElem) -> QElem {
        let d = self.join_d(&rhs);
        let dr = Rat::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dr;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QElem::new(a, b, d)
    }
}

impl Div for QElem {
    type Output = QElem;
    #[allow(clippy::suspicious_arithmetic_impl)] // division via conjugate
    fn div(self, rhs: QElem) -> QElem {
        let inv = rhs.inv().expect("division by zero QElem");
        self * inv
    }
}

impl Mul<&Rat> for QElem {
    type Output = QElem;
    fn mul(self, rhs: &Rat) -> QElem {
        QElem::new(self.a * rhs, self.b * rhs, self.d)
    }
}

/// A real quadratic field Q(√d) with its fundamental unit computed on demand.
///
/// The unit is memoized with compute-once semantics, so a `FieldDesc` can be
/// shared freely between threads.
#[derive(Debug)]
pub struct FieldDesc {
    d: u64,
    unit: OnceLock<QElem>,
}

impl Clone for FieldDesc {
    fn clone(&self) -> Self {
        let unit = OnceLock::new();
        if let Some(u) = self.unit.get() {
            let _ = unit.set(u.clone());
        }
        FieldDesc { d: self.d, unit }
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
    }
}
impl Eq for FieldDesc {}

impl FieldDesc {
    pub fn new(d: u64) -> Result<Self, FieldError> {
        check_field_d(d)?;
        Ok(FieldDesc { d, unit: OnceLock::new() })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// The fundamental unit ε: the smallest unit of O_d exceeding 1 under
    /// the positive embedding, with |norm(ε)| = 1.
    pub fn fundamental_unit(&self) -> &QElem {
        self.unit.get_or_init(|| fundamental_unit_cf(self.d))
    }

    /// The smallest norm-+1 unit exceeding 1: ε itself when norm(ε) = 1,
    /// otherwise ε².
    pub fn norm_one_unit(&self) -> QElem {
        let eps = self.fundamental_unit().clone();
        if eps.norm().is_one() {
            eps
        } else {
            eps.clone() * eps
        }
    }
}

/// Fundamental unit of O_d via the continued fraction of a reduced quadratic
/// irrational generating the ring.
///
/// We expand x = (P + √d)/Q with Q = 2, P odd for d ≡ 1 (mod 4) (so
/// Z[x] = Z[(1+√d)/2]) and Q = 1, P = ⌊√d⌋ otherwise, choosing P so that
/// x > 1 > 0 > conj(x) > −1. Such x is purely periodic; if the period has
/// length l and convergent denominators q_k, the fundamental automorphism of
/// the module is ε = q_{l−1}·x + q_{l−2}.
fn fundamental_unit_cf(d: u64) -> QElem {
    check_field_d(d).expect("field validated before unit computation");
    let s = d.isqrt() as i64; // ⌊√d⌋
    let (p0, q0): (i64, i64) = if d % 4 == 1 {
        // Largest odd P below √d, so conj(x) ∈ (−1, 0).
        let p = if s % 2 == 1 { s } else { s - 1 };
        (p, 2)
    } else {
        (s, 1)
    };

    // CF of x = (P + √d)/Q with Q > 0: the partial quotient is
    // ⌊(P + ⌊√d⌋)/Q⌋ exactly. Track convergent denominators
    // q_{-2} = 1, q_{-1} = 0, q_k = a_k·q_{k-1} + q_{k-2}.
    let mut p = p0;
    let mut q = q0;
    let mut den_m2 = BigInt::from(1);
    let mut den_m1 = BigInt::from(0);
    loop {
        let a = (p + s).div_euclid(q);
        let den_k = BigInt::from(a) * &den_m1 + &den_m2;
        den_m2 = std::mem::replace(&mut den_m1, den_k);
        p = a * q - p;
        q = (d as i64 - p * p) / q;
        debug_assert!(q > 0, "reduced CF keeps Q positive");
        if p == p0 && q == q0 {
            break;
        }
    }
    // After a full period of length l: den_m1 = q_{l-1}, den_m2 = q_{l-2},
    // and the fundamental automorphism is ε = q_{l-1}·x + q_{l-2}.
    let x = QElem::new(
        Rat::new(BigInt::from(p0), BigInt::from(q0)),
        Rat::new(BigInt::from(1), BigInt::from(q0)),
        d,
    );
    let eps = x * &Rat::from_integer(den_m1) + QElem::from_rat(Rat::from_integer(den_m2));
    debug_assert!(eps.norm().abs().is_one(), "unit norm must be ±1");
    debug_assert!(eps.sign() > 0 && (eps.clone() - QElem::one()).sign() > 0);
    eps
}

impl Mul<&Rat> for &QElem {
    type Output = QElem;
    fn mul(self, rhs: &Rat) -> QElem {
        QElem::new(&self.a * rhs, &self.b * rhs, self.d)
    }
}
