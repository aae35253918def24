//! Coordinate models for R ∧_Q R and R ⊗_Q R restricted to Q(√d).
//!
//! For x, y ∈ Q(√d) the wedge x ∧ y lives in the one-dimensional Q-span of
//! 1 ∧ √d, and x ⊗ y in the four-dimensional span of 1⊗1, 1⊗√d, √d⊗1,
//! √d⊗√d. Every surface this crate touches has coordinates in a single
//! Q(√d), so these finite coordinate models are complete and all arithmetic
//! stays exact.

use crate::qfield::{FieldError, QElem, Rat};
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An element of R ∧_Q R of the form c·(1 ∧ √d).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct WedgeQQ {
    pub c: Rat,
}

impl WedgeQQ {
    pub fn zero() -> Self {
        WedgeQQ { c: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn scale(&self, r: &Rat) -> Self {
        WedgeQQ { c: &self.c * r }
    }
}

impl Add for WedgeQQ {
    type Output = WedgeQQ;
    fn add(self, rhs: WedgeQQ) -> WedgeQQ {
        WedgeQQ { c: self.c + rhs.c }
    }
}

impl Sub for WedgeQQ {
    type Output = WedgeQQ;
    fn sub(self, rhs: WedgeQQ) -> WedgeQQ {
        WedgeQQ { c: self.c - rhs.c }
    }
}

impl Neg for WedgeQQ {
    type Output = WedgeQQ;
    fn neg(self) -> WedgeQQ {
        WedgeQQ { c: -self.c }
    }
}

impl fmt::Display for WedgeQQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·(1∧√d)", self.c)
    }
}

/// An element of R ⊗_Q R with coordinates (c1, c2, c3, c4) against the basis
/// 1⊗1, 1⊗√d, √d⊗1, √d⊗√d.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct TensorC4 {
    pub c1: Rat,
    pub c2: Rat,
    pub c3: Rat,
    pub c4: Rat,
}

impl TensorC4 {
    pub fn zero() -> Self {
        TensorC4 {
            c1: Rat::zero(),
            c2: Rat::zero(),
            c3: Rat::zero(),
            c4: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.c2.is_zero() && self.c3.is_zero() && self.c4.is_zero()
    }

    pub fn scale(&self, r: &Rat) -> Self {
        TensorC4 {
            c1: &self.c1 * r,
            c2: &self.c2 * r,
            c3: &self.c3 * r,
            c4: &self.c4 * r,
        }
    }

    /// Swap the tensor slots: transposes c2 and c3, fixes c1 and c4.
    pub fn transpose(&self) -> Self {
        TensorC4 {
            c1: self.c1.clone(),
            c2: self.c3.clone(),
            c3: self.c2.clone(),
            c4: self.c4.clone(),
        }
    }
}

impl Add for TensorC4 {
    type Output = TensorC4;
    fn add(self, rhs: TensorC4) -> TensorC4 {
        TensorC4 {
            c1: self.c1 + rhs.c1,
            c2: self.c2 + rhs.c2,
            c3: self.c3 + rhs.c3,
            c4: self.c4 + rhs.c4,
        }
    }
}

impl Sub for TensorC4 {
    type Output = TensorC4;
    fn sub(self, rhs: TensorC4) -> TensorC4 {
        TensorC4 {
            c1: self.c1 - rhs.c1,
            c2: self.c2 - rhs.c2,
            c3: self.c3 - rhs.c3,
            c4: self.c4 - rhs.c4,
        }
    }
}

impl Neg for TensorC4 {
    type Output = TensorC4;
    fn neg(self) -> TensorC4 {
        TensorC4 {
            c1: -self.c1,
            c2: -self.c2,
            c3: -self.c3,
            c4: -self.c4,
        }
    }
}

/// x ∧ y for x, y in a common Q(√d): the coefficient of 1 ∧ √d is
/// x.a·y.b − x.b·y.a.
pub fn wedge(x: &QElem, y: &QElem) -> Result<WedgeQQ, FieldError> {
    if !x.same_field(y) {
        return Err(FieldError::MixedFields(x.field_d(), y.field_d()));
    }
    Ok(WedgeQQ {
        c: x.rational_part() * y.irrational_part() - x.irrational_part() * y.rational_part(),
    })
}

/// x ⊗ y for x, y in a common Q(√d).
pub fn tensor(x: &QElem, y: &QElem) -> Result<TensorC4, FieldError> {
    if !x.same_field(y) {
        return Err(FieldError::MixedFields(x.field_d(), y.field_d()));
    }
    Ok(TensorC4 {
        c1: x.rational_part() * y.rational_part(),
        c2: x.rational_part() * y.irrational_part(),
        c3: x.irrational_part() * y.rational_part(),
        c4: x.irrational_part() * y.irrational_part(),
    })
}
