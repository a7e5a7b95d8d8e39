use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Prime field GF(p) for an odd prime `p < 2^16`.
///
/// Elements are plain `u32` values in `[0, p)`. All products of two reduced
/// elements fit in a `u64` before reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub const MAX_MODULUS: u32 = 1 << 16;

    pub fn new(p: u32) -> Result<Self> {
        if p >= Self::MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn check(self, a: u32) -> Result<u32> {
        if a < self.p {
            Ok(a)
        } else {
            Err(Error::ElementOutOfRange {
                value: a,
                modulus: self.p,
            })
        }
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::NotInvertible(a));
        }
        Ok(self.pow(a % self.p, self.p as u64 - 2))
    }

    /// The inverse of 2, which exists because `p` is odd.
    #[inline]
    pub fn half(self) -> u32 {
        self.p.div_ceil(2)
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(field: PrimeField) -> u32 {
        field.p
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

/// Applies a single field operation to range-checked operands.
///
/// Binary operations require `b`; unary ones ignore it.
pub fn field_arith(op: FieldOp, a: u32, b: Option<u32>, field: PrimeField) -> Result<u32> {
    let a = field.check(a)?;
    let rhs = || -> Result<u32> {
        let b = b.ok_or_else(|| Error::InvalidArgument(format!("{op:?} needs two operands")))?;
        field.check(b)
    };
    match op {
        FieldOp::Add => Ok(field.add(a, rhs()?)),
        FieldOp::Sub => Ok(field.sub(a, rhs()?)),
        FieldOp::Mul => Ok(field.mul(a, rhs()?)),
        FieldOp::Inv => field.inv(a),
        FieldOp::Neg => Ok(field.neg(a)),
    }
}
