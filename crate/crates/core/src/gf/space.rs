use serde::{Deserialize, Serialize};

use super::PrimeField;
use crate::error::{Error, Result};

/// A point of F_p^n together with its base-p index `Σ coords[i]·p^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub coords: Vec<u32>,
    pub index: usize,
}

/// The ambient space F_p^n with index arithmetic on base-p encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    field: PrimeField,
    n: usize,
    size: usize,
}

impl Space {
    /// Largest p^n we are willing to index densely.
    pub const MAX_POINTS: usize = 1 << 24;

    pub fn new(field: PrimeField, n: usize) -> Result<Self> {
        let p = field.modulus() as usize;
        let mut size = 1usize;
        for _ in 0..n {
            size = size
                .checked_mul(p)
                .filter(|&s| s <= Self::MAX_POINTS)
                .ok_or(Error::SizeCeiling {
                    p: field.modulus(),
                    n,
                    limit: Self::MAX_POINTS,
                })?;
        }
        Ok(Self { field, n, size })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points, p^n.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self, coords: &[u32]) -> Result<usize> {
        if coords.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: coords.len(),
            });
        }
        let p = self.p() as usize;
        let mut index = 0usize;
        for &c in coords.iter().rev() {
            self.field.check(c)?;
            index = index * p + c as usize;
        }
        Ok(index)
    }

    pub fn decode(&self, index: usize) -> Result<Point> {
        self.check_index(index)?;
        Ok(Point {
            coords: self.coords(index),
            index,
        })
    }

    pub fn point(&self, coords: &[u32]) -> Result<Point> {
        let index = self.encode(coords)?;
        Ok(Point {
            coords: coords.to_vec(),
            index,
        })
    }

    pub fn check_index(&self, index: usize) -> Result<usize> {
        if index < self.size {
            Ok(index)
        } else {
            Err(Error::PointOutOfRange {
                index,
                p: self.p(),
                n: self.n,
            })
        }
    }

    pub(crate) fn coords(&self, mut index: usize) -> Vec<u32> {
        let p = self.p() as usize;
        (0..self.n)
            .map(|_| {
                let c = (index % p) as u32;
                index /= p;
                c
            })
            .collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(move |i| Point {
            coords: self.coords(i),
            index: i,
        })
    }

    /// Index of `s·a + t·b` computed digit by digit.
    pub fn combine(&self, s: u32, a: usize, t: u32, b: usize) -> usize {
        let p = self.p() as usize;
        let (s, t) = (s as usize, t as usize);
        let (mut a, mut b) = (a, b);
        let mut out = 0usize;
        let mut place = 1usize;
        for _ in 0..self.n {
            let digit = (s * (a % p) + t * (b % p)) % p;
            out += digit * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.combine(1, a, 1, b)
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.combine(1, a, self.p() - 1, b)
    }

    #[inline]
    pub fn double(&self, a: usize) -> usize {
        self.combine(2 % self.p(), a, 0, 0)
    }

    /// The unique `c` with `a + b = 2c`.
    #[inline]
    pub fn midpoint(&self, a: usize, b: usize) -> usize {
        let h = self.field.half();
        self.combine(h, a, h, b)
    }

    /// The unique `z` with `a` the midpoint of `(b, z)`, i.e. `2a - b`.
    #[inline]
    pub fn reflect(&self, a: usize, b: usize) -> usize {
        self.combine(2 % self.p(), a, self.p() - 1, b)
    }
}
