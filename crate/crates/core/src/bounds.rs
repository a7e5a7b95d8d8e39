//! The exponent `c(p) = 1 - 1/(18 ln p)`, the Hoeffding tail bound, and exact
//! finite checks of `dim L_{n,(p-1)n/3} <= p^{cn}`.
//!
//! `ln` is the natural logarithm throughout: `p^{n(1 - 1/(18 ln p))}` equals
//! `p^n e^{-n/18}` only in that base.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::PrimeField;
use crate::monomials::{dim_l, ExtendedBinomialTable};
use crate::precision::{Precision, Real};
use crate::serde_big;

/// Margin required between `c n ln p` and `ln dim` for a check to count.
pub const GUARD_MARGIN: f64 = 1e-9;

pub fn exponent_c(field: PrimeField) -> f64 {
    1.0 - 1.0 / (18.0 * (field.modulus() as f64).ln())
}

pub fn exponent_c_hp(field: PrimeField, prec: Precision) -> Real {
    let one = Real::from_u64(1, prec);
    let ln_p = Real::from_u64(field.modulus() as u64, prec).ln();
    one.sub(&one.div(&Real::from_u64(18, prec).mul(&ln_p)))
}

/// `p^{c(p)}`, the base of the exponential bound (about 2.84 for p = 3).
pub fn headline_base(field: PrimeField) -> f64 {
    (field.modulus() as f64).powf(exponent_c(field))
}

/// `p^{c·n}` at the given precision.
pub fn power_bound_hp(field: PrimeField, n: usize, prec: Precision) -> Real {
    let exponent = exponent_c_hp(field, prec).mul(&Real::from_u64(n as u64, prec));
    Real::from_u64(field.modulus() as u64, prec).pow(&exponent)
}

/// `3·p^{c·n}`.
pub fn main_bound(field: PrimeField, n: usize) -> f64 {
    3.0 * (field.modulus() as f64).powf(exponent_c(field) * n as f64)
}

pub fn main_bound_hp(field: PrimeField, n: usize, prec: Precision) -> Real {
    Real::from_u64(3, prec).mul(&power_bound_hp(field, n, prec))
}

/// Hoeffding's bound `exp(-2t² / Σ w_i²)` on `Pr(E[S] - S >= t)` for a sum of
/// independent variables with ranges of the given widths.
pub fn hoeffding_bound(t: f64, widths: &[f64]) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "t must be nonnegative, got {t}"
        )));
    }
    if widths.is_empty() {
        return Err(Error::InvalidArgument("widths must be nonempty".into()));
    }
    if widths.iter().any(|&w| w.is_nan() || w < 0.0) {
        return Err(Error::InvalidArgument("widths must be nonnegative".into()));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let denom: f64 = widths.iter().map(|w| w * w).sum();
    if denom == 0.0 {
        return Err(Error::DegenerateRanges);
    }
    Ok((-2.0 * t * t / denom).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: u32,
    pub n: usize,
    /// The degree `(p-1)n/3`.
    pub degree: usize,
    pub c: f64,
    /// `e^{-n/18}`.
    pub hoeffding_bound: f64,
    #[serde(with = "serde_big")]
    pub exact_dim: BigUint,
    /// `p^{cn}`.
    pub bound_value: f64,
    pub log_exact_dim: String,
    pub log_bound: String,
    /// `c n ln p - ln(exact_dim)`.
    pub margin: String,
    pub holds: bool,
}

/// Exact check of `dim L_{n,(p-1)n/3} <= p^{cn}` for a positive multiple of 3.
pub fn verify_entropy_lemma(field: PrimeField, n: usize) -> Result<BoundReport> {
    verify_entropy_lemma_with(field, n, Precision::default())
}

pub fn verify_entropy_lemma_with(
    field: PrimeField,
    n: usize,
    prec: Precision,
) -> Result<BoundReport> {
    if n == 0 || !n.is_multiple_of(3) {
        return Err(Error::NotMultipleOfThree(n));
    }
    let p = field.modulus();
    let degree = (p as usize - 1) * n / 3;
    let exact_dim = dim_l(n, degree, field)?;

    let log_dim = Real::from_biguint(&exact_dim, prec).ln();
    let log_bound = exponent_c_hp(field, prec)
        .mul(&Real::from_u64(n as u64, prec))
        .mul(&Real::from_u64(p as u64, prec).ln());
    let margin = log_bound.sub(&log_dim);
    let holds = margin > Real::from_f64(GUARD_MARGIN, prec);

    let widths = vec![(p - 1) as f64; n];
    let t = (p - 1) as f64 * n as f64 / 6.0;
    Ok(BoundReport {
        p,
        n,
        degree,
        c: exponent_c(field),
        hoeffding_bound: hoeffding_bound(t, &widths)?,
        exact_dim,
        bound_value: log_bound.exp().to_f64(),
        log_exact_dim: log_dim.to_string(),
        log_bound: log_bound.to_string(),
        margin: margin.to_string(),
        holds,
    })
}

/// Informational counterpart of [`verify_entropy_lemma`] for arbitrary `n`:
/// reports `dim L_{n,⌊(p-1)n/3⌋}` against `p^{cn}` without asserting anything.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyInfo {
    pub p: u32,
    pub n: usize,
    pub degree: usize,
    #[serde(with = "serde_big")]
    pub exact_dim: BigUint,
    pub bound_value: f64,
}

pub fn entropy_info(field: PrimeField, n: usize) -> Result<EntropyInfo> {
    let degree = (field.modulus() as usize - 1) * n / 3;
    Ok(EntropyInfo {
        p: field.modulus(),
        n,
        degree,
        exact_dim: dim_l(n, degree, field)?,
        bound_value: (field.modulus() as f64).powf(exponent_c(field) * n as f64),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    /// `Pr[S <= k] = Σ_{j<=k} (n; j)_{p-1} / p^n`.
    pub tail: BigRational,
    /// Hoeffding bound with `t = (p-1)n/2 - k`, present when `k` is at or
    /// below the mean.
    pub hoeffding: Option<f64>,
}

impl TailReport {
    pub fn tail_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.tail.to_f64().unwrap_or(f64::NAN)
    }
}

/// Lower tail of `S = X_1 + ... + X_n` with `X_i` uniform on `{0..p-1}`,
/// computed exactly from extended binomial coefficients.
pub fn exact_tail_identity(field: PrimeField, n: usize, k: usize) -> Result<TailReport> {
    let m = field.modulus() as usize - 1;
    if k > m * n {
        return Err(Error::DegreeOutOfRange { d: k, max: m * n });
    }
    let table = ExtendedBinomialTable::cached(n, m);
    let tail = BigRational::new(
        BigInt::from(table.cumulative(k)),
        BigInt::from(table.total()),
    );
    let hoeffding = if 2 * k <= m * n {
        let t = (m * n) as f64 / 2.0 - k as f64;
        Some(hoeffding_bound(t, &vec![m as f64; n])?)
    } else {
        None
    };
    Ok(TailReport { tail, hoeffding })
}
