//! Monomial basis of L_n and exact dimensions of the graded pieces L_{n,d}.
//!
//! `dim L_{n,d}` is a prefix sum of extended binomial coefficients
//! `(n; k)_m`, the number of vectors in `{0..m}^n` with coordinate sum `k`.
//! Rows of these coefficients are built by repeated convolution with
//! `1 + x + ... + x^m` and memoized per `(n, m)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gf::{PrimeField, Space};

/// Exponent vector `α` with every entry in `[0, p-1]`.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically on `(α_1, ..., α_n)`. With two variables the degree-one
/// monomials therefore come out as `x2, x1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: usize,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>, field: PrimeField) -> Result<Self> {
        let max = field.modulus() - 1;
        if let Some(&e) = exponents.iter().find(|&&e| e > max) {
            return Err(Error::ExponentOutOfRange { exponent: e, max });
        }
        Ok(Self::from_exponents(exponents))
    }

    pub(crate) fn from_exponents(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().map(|&e| e as usize).sum();
        Self { exponents, degree }
    }

    pub fn one(n: usize) -> Self {
        Self::from_exponents(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// Base-p code `Σ α_i p^i`, the same encoding as points.
    pub fn code(&self, p: u32) -> usize {
        self.exponents
            .iter()
            .rev()
            .fold(0usize, |acc, &e| acc * p as usize + e as usize)
    }

    /// `Π a_i^{α_i}`, with `0^0 = 1`.
    pub fn evaluate(&self, field: PrimeField, point: &[u32]) -> u32 {
        self.exponents
            .iter()
            .zip(point)
            .fold(1 % field.modulus(), |acc, (&e, &a)| {
                field.mul(acc, field.pow(a, e as u64))
            })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

fn max_degree(n: usize, field: PrimeField) -> usize {
    (field.modulus() as usize - 1) * n
}

fn check_degree(n: usize, field: PrimeField, d: usize) -> Result<()> {
    let max = max_degree(n, field);
    if d > max {
        return Err(Error::DegreeOutOfRange { d, max });
    }
    Ok(())
}

/// All monomials of L_n with degree at most `d`, in graded lex order.
pub fn enumerate_monomials(n: usize, field: PrimeField, d: usize) -> Result<Vec<Monomial>> {
    check_degree(n, field, d)?;
    let cap = field.modulus() - 1;
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    for degree in 0..=d {
        fill_lex(&mut current, 0, degree as u32, cap, &mut out);
    }
    Ok(out)
}

fn fill_lex(current: &mut [u32], pos: usize, remaining: u32, cap: u32, out: &mut Vec<Monomial>) {
    if pos == current.len() {
        if remaining == 0 {
            out.push(Monomial::from_exponents(current.to_vec()));
        }
        return;
    }
    let rest_cap = cap * (current.len() - pos - 1) as u32;
    let lo = remaining.saturating_sub(rest_cap);
    for e in lo..=remaining.min(cap) {
        current[pos] = e;
        fill_lex(current, pos + 1, remaining - e, cap, out);
    }
    current[pos] = 0;
}

/// The full monomial basis of L_n in graded lex order, with an index from
/// base-p exponent codes to basis positions.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    space: Space,
    monomials: Vec<Monomial>,
    position_by_code: Vec<usize>,
}

impl MonomialBasis {
    pub fn new(space: &Space) -> Result<Self> {
        let field = space.field();
        let monomials = enumerate_monomials(space.n(), field, max_degree(space.n(), field))?;
        let mut position_by_code = vec![0usize; monomials.len()];
        for (i, m) in monomials.iter().enumerate() {
            position_by_code[m.code(field.modulus())] = i;
        }
        Ok(Self {
            space: space.clone(),
            monomials,
            position_by_code,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, position: usize) -> &Monomial {
        &self.monomials[position]
    }

    pub fn position(&self, m: &Monomial) -> usize {
        self.position_by_code[m.code(self.space.p())]
    }

    pub(crate) fn position_of_code(&self, code: usize) -> usize {
        self.position_by_code[code]
    }

    /// Number of basis monomials of degree at most `d` (a prefix of the basis).
    pub fn prefix_len(&self, d: usize) -> usize {
        self.monomials.partition_point(|m| m.degree() <= d)
    }
}

/// One row `k ↦ (n; k)_m` of extended binomial coefficients, `k ∈ [0, mn]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedBinomialTable {
    n: usize,
    m: usize,
    row: Vec<BigUint>,
    prefix: Vec<BigUint>,
}

impl ExtendedBinomialTable {
    pub fn new(n: usize, m: usize) -> Self {
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let len = row.len() + m;
            let mut next = Vec::with_capacity(len);
            let mut window = BigUint::zero();
            for k in 0..len {
                if k < row.len() {
                    window += &row[k];
                }
                if k > m {
                    window -= &row[k - m - 1];
                }
                next.push(window.clone());
            }
            row = next;
        }
        let mut prefix = Vec::with_capacity(row.len());
        let mut acc = BigUint::zero();
        for x in &row {
            acc += x;
            prefix.push(acc.clone());
        }
        Self { n, m, row, prefix }
    }

    /// Shared memoized table for `(n, m)`.
    pub fn cached(n: usize, m: usize) -> Arc<Self> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<ExtendedBinomialTable>>>;
        static TABLES: OnceLock<Cache> = OnceLock::new();
        let tables = TABLES.get_or_init(Default::default);
        if let Some(t) = tables.lock().expect("table cache poisoned").get(&(n, m)) {
            return Arc::clone(t);
        }
        let table = Arc::new(Self::new(n, m));
        tables
            .lock()
            .expect("table cache poisoned")
            .entry((n, m))
            .or_insert(table)
            .clone()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self) -> &[BigUint] {
        &self.row
    }

    pub fn entry(&self, k: usize) -> BigUint {
        self.row.get(k).cloned().unwrap_or_default()
    }

    /// `Σ_{j ≤ k} (n; j)_m`, saturating at the row total for large `k`.
    pub fn cumulative(&self, k: usize) -> BigUint {
        self.prefix[k.min(self.prefix.len() - 1)].clone()
    }

    pub fn total(&self) -> BigUint {
        self.prefix.last().cloned().unwrap_or_default()
    }
}

/// Number of vectors in `{0..m}^n` whose coordinates sum to `k`.
pub fn extended_binomial(n: usize, k: usize, m: usize) -> BigUint {
    ExtendedBinomialTable::cached(n, m).entry(k)
}

/// Exact `dim L_{n,d}`.
pub fn dim_l(n: usize, d: usize, field: PrimeField) -> Result<BigUint> {
    check_degree(n, field, d)?;
    Ok(ExtendedBinomialTable::cached(n, field.modulus() as usize - 1).cumulative(d))
}

/// Checks `dim L_{n,d} + dim L_{n,(p-1)n-d-1} = p^n` for every `d` in
/// `[0, (p-1)n - 1]`.
pub fn verify_duality(n: usize, field: PrimeField) -> bool {
    let top = max_degree(n, field);
    let table = ExtendedBinomialTable::cached(n, field.modulus() as usize - 1);
    let full = BigUint::from(field.modulus()).pow(n as u32);
    (0..top).all(|d| table.cumulative(d) + table.cumulative(top - d - 1) == full)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn exps(ms: &[Monomial]) -> Vec<Vec<u32>> {
        ms.iter().map(|m| m.exponents().to_vec()).collect()
    }

    /// Coefficients of `(1 + x + ... + x^m)^n` by naive polynomial products.
    fn naive_power(n: usize, m: usize) -> Vec<u64> {
        let mut poly = vec![1u64];
        for _ in 0..n {
            let mut next = vec![0u64; poly.len() + m];
            for (i, &c) in poly.iter().enumerate() {
                for j in 0..=m {
                    next[i + j] += c;
                }
            }
            poly = next;
        }
        poly
    }

    /// Counts exponent vectors in `{0..p-1}^n` with sum at most `d` directly.
    fn brute_dim(n: usize, p: u32, d: usize) -> usize {
        let size = (p as usize).pow(n as u32);
        (0..size)
            .filter(|&code| {
                let mut c = code;
                let mut s = 0;
                for _ in 0..n {
                    s += c % p as usize;
                    c /= p as usize;
                }
                s <= d
            })
            .count()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            exps(&enumerate_monomials(1, f(3), 2).unwrap()),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(
            exps(&enumerate_monomials(2, f(3), 1).unwrap()),
            vec![vec![0, 0], vec![0, 1], vec![1, 0]]
        );
        assert_eq!(
            enumerate_monomials(3, f(3), 2).unwrap().len(),
            brute_dim(3, 3, 2)
        );
        assert_eq!(brute_dim(3, 3, 2), 10);
        assert!(matches!(
            enumerate_monomials(2, f(3), 5),
            Err(Error::DegreeOutOfRange { d: 5, max: 4 })
        ));
    }

    #[test]
    fn enumeration_is_sorted_and_matches_dim() {
        for p in [3, 5] {
            for n in 0..=4 {
                for d in 0..=(p as usize - 1) * n {
                    let ms = enumerate_monomials(n, f(p), d).unwrap();
                    assert!(ms.windows(2).all(|w| w[0] < w[1]));
                    assert!(ms.iter().all(|m| m.degree() <= d));
                    assert_eq!(BigUint::from(ms.len()), dim_l(n, d, f(p)).unwrap());
                    assert_eq!(ms.len(), brute_dim(n, p, d));
                }
            }
        }
    }

    #[test]
    fn extended_binomial_examples() {
        assert_eq!(extended_binomial(2, 2, 2), BigUint::from(3u32));
        assert_eq!(extended_binomial(3, 3, 2), BigUint::from(7u32));
        assert_eq!(extended_binomial(5, 0, 4), BigUint::one());
        assert_eq!(extended_binomial(3, 7, 2), BigUint::zero());
        assert_eq!(naive_power(3, 2), vec![1, 3, 6, 7, 6, 3, 1]);
    }

    #[test]
    fn table_matches_naive_expansion() {
        for n in 0..8 {
            for m in 1..6 {
                let t = ExtendedBinomialTable::new(n, m);
                let naive: Vec<BigUint> =
                    naive_power(n, m).into_iter().map(BigUint::from).collect();
                assert_eq!(t.row(), naive.as_slice());
                assert_eq!(t.total(), BigUint::from(m + 1).pow(n as u32));
                for k in 0..=m * n {
                    assert_eq!(t.entry(k), t.entry(m * n - k));
                }
            }
        }
    }

    #[test]
    fn dim_examples() {
        let f3 = f(3);
        assert_eq!(dim_l(3, 2, f3).unwrap(), BigUint::from(10u32));
        assert_eq!(dim_l(3, 6, f3).unwrap(), BigUint::from(27u32));
        assert_eq!(dim_l(3, 4, f3).unwrap(), BigUint::from(23u32));
        assert_eq!(dim_l(3, 3, f3).unwrap(), BigUint::from(17u32));
        assert!(dim_l(3, 7, f3).is_err());
    }

    #[test]
    fn duality_holds() {
        assert!(verify_duality(1, f(3)));
        assert!(verify_duality(3, f(3)));
        assert!(verify_duality(4, f(5)));
    }

    #[test]
    fn basis_positions() {
        let space = Space::new(f(3), 2).unwrap();
        let basis = MonomialBasis::new(&space).unwrap();
        assert_eq!(basis.len(), 9);
        for (i, m) in basis.monomials().iter().enumerate() {
            assert_eq!(basis.position(m), i);
        }
        assert_eq!(basis.prefix_len(1), 3);
        assert_eq!(basis.get(0).to_string(), "1");
        assert_eq!(basis.get(8).to_string(), "x1^2*x2^2");
    }
}
