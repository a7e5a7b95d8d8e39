//! The space L_n of reduced polynomials (every exponent at most p-1) and its
//! identification with functions F_p^n -> F_p.
//!
//! Evaluation followed by interpolation is the identity in both directions.
//! Interpolation is the combination `Σ v(a) δ_a` of indicator polynomials
//! `δ_a(x) = Π_i (1 - (x_i - a_i)^{p-1})`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::apsets::PointSet;
use crate::error::{Error, Result};
use crate::gf::{FpMatrix, Point, PrimeField, Space};
use crate::monomials::{dim_l, Monomial, MonomialBasis};

/// Largest p^n for which dense p^n × p^n coefficient matrices are built.
pub const DENSE_CEILING: usize = 2048;

/// A polynomial in L_n stored as a sparse map from monomials (in graded lex
/// order) to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedPoly {
    space: Space,
    terms: BTreeMap<Monomial, u32>,
}

/// JSON form of a polynomial: `[[exponents, coefficient], ...]` in graded lex
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyTerms(pub Vec<(Vec<u32>, u32)>);

impl ReducedPoly {
    pub fn zero(space: &Space) -> Self {
        Self {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: &Space, c: u32) -> Self {
        let mut f = Self::zero(space);
        f.add_term(Monomial::one(space.n()), c % space.p());
        f
    }

    pub fn monomial(space: &Space, exponents: Vec<u32>, coeff: u32) -> Result<Self> {
        Self::from_terms(space, [(exponents, coeff)])
    }

    /// Sums the given terms; duplicate monomials are combined and zero
    /// coefficients dropped.
    pub fn from_terms(
        space: &Space,
        terms: impl IntoIterator<Item = (Vec<u32>, u32)>,
    ) -> Result<Self> {
        let mut f = Self::zero(space);
        for (exponents, coeff) in terms {
            if exponents.len() != space.n() {
                return Err(Error::DimensionMismatch {
                    expected: space.n(),
                    got: exponents.len(),
                });
            }
            let m = Monomial::new(exponents, space.field())?;
            f.add_term(m, coeff % space.p());
        }
        Ok(f)
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let field = self.space.field();
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let v = field.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> PrimeField {
        self.space.field()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `deg f <= d`, treating the zero polynomial as having degree below
    /// every `d`.
    pub fn degree_at_most(&self, d: usize) -> bool {
        self.degree().is_none_or(|deg| deg <= d)
    }

    fn check_space(&self, other: &Space) -> Result<()> {
        if &self.space != other {
            return Err(Error::DimensionMismatch {
                expected: self.space.n(),
                got: other.n(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(&other.space)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: u32) -> Self {
        let field = self.field();
        let s = s % field.modulus();
        let mut out = Self::zero(&self.space);
        if s != 0 {
            out.terms = self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), field.mul(c, s)))
                .collect();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(self.field().modulus() - 1))
    }

    /// `Σ coeffs[i] · polys[i]`.
    pub fn linear_combination(space: &Space, coeffs: &[u32], polys: &[Self]) -> Result<Self> {
        if coeffs.len() != polys.len() {
            return Err(Error::DimensionMismatch {
                expected: polys.len(),
                got: coeffs.len(),
            });
        }
        let mut out = Self::zero(space);
        for (&c, f) in coeffs.iter().zip(polys) {
            if c != 0 {
                out = out.add(&f.scale(c))?;
            }
        }
        Ok(out)
    }

    /// Coefficient vector over the full monomial basis.
    pub fn to_dense(&self, basis: &MonomialBasis) -> Result<Vec<u32>> {
        self.check_space(basis.space())?;
        let mut v = vec![0u32; basis.len()];
        for (m, c) in self.terms() {
            v[basis.position(m)] = c;
        }
        Ok(v)
    }

    pub fn from_dense(basis: &MonomialBasis, coeffs: &[u32]) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: coeffs.len(),
            });
        }
        let p = basis.space().p();
        let terms = basis
            .monomials()
            .iter()
            .zip(coeffs)
            .filter(|(_, &c)| c % p != 0)
            .map(|(m, &c)| (m.clone(), c % p))
            .collect();
        Ok(Self {
            space: basis.space().clone(),
            terms,
        })
    }

    /// Builds a polynomial from coefficients indexed by base-p exponent code.
    fn from_code_dense(space: &Space, coeffs: &[u32]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(code, &c)| (Monomial::from_exponents(space.coords(code)), c))
            .collect();
        Self {
            space: space.clone(),
            terms,
        }
    }

    pub fn evaluate(&self, point: &Point) -> Result<u32> {
        if point.coords.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: point.coords.len(),
            });
        }
        let field = self.field();
        for &c in &point.coords {
            field.check(c)?;
        }
        Ok(self.evaluate_coords(&point.coords))
    }

    pub(crate) fn evaluate_coords(&self, coords: &[u32]) -> u32 {
        let field = self.field();
        self.terms().fold(0, |acc, (m, c)| {
            field.add(acc, field.mul(c, m.evaluate(field, coords)))
        })
    }

    pub fn evaluate_index(&self, index: usize) -> Result<u32> {
        self.space.check_index(index)?;
        Ok(self.evaluate_coords(&self.space.coords(index)))
    }

    /// The value table `(f(a))_{a ∈ F_p^n}`, computed one coordinate axis at
    /// a time with the `p × p` matrix `a ↦ a^e`.
    pub fn evaluate_all(&self) -> ValueVector {
        let field = self.field();
        let p = field.modulus() as usize;
        let size = self.space.size();
        // powers[a][e] = a^e
        let powers: Vec<Vec<u64>> = (0..p as u32)
            .map(|a| (0..p as u64).map(|e| field.pow(a, e) as u64).collect())
            .collect();
        let mut values = vec![0u32; size];
        for (m, c) in self.terms() {
            values[m.code(p as u32)] = c;
        }
        let mut buf = vec![0u32; p];
        let mut stride = 1;
        for _ in 0..self.n() {
            for block in (0..size).step_by(stride * p) {
                for base in block..block + stride {
                    for (a, slot) in buf.iter_mut().enumerate() {
                        let acc: u64 = (0..p)
                            .map(|e| powers[a][e] * values[base + e * stride] as u64)
                            .sum();
                        *slot = (acc % p as u64) as u32;
                    }
                    for (a, &v) in buf.iter().enumerate() {
                        values[base + a * stride] = v;
                    }
                }
            }
            stride *= p;
        }
        ValueVector {
            space: self.space.clone(),
            values,
        }
    }

    /// `Z(f) = {a : f(a) = 0}`.
    pub fn zero_set(&self) -> PointSet {
        let values = self.evaluate_all();
        PointSet::from_indices(
            &self.space,
            values
                .values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == 0)
                .map(|(i, _)| i),
        )
        .expect("indices in range")
    }

    pub fn to_terms(&self) -> PolyTerms {
        PolyTerms(
            self.terms()
                .map(|(m, c)| (m.exponents().to_vec(), c))
                .collect(),
        )
    }

    pub fn from_poly_terms(space: &Space, terms: &PolyTerms) -> Result<Self> {
        Self::from_terms(space, terms.0.iter().cloned())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_terms()).expect("terms serialize")
    }

    pub fn from_json(space: &Space, text: &str) -> Result<Self> {
        let terms: PolyTerms =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_poly_terms(space, &terms)
    }

    /// Parses the text form `coeff*x1^e1*...*xn^en + ...`. A term without a
    /// leading coefficient has coefficient 1; `x3` means `x3^1`.
    pub fn parse(space: &Space, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        for raw in text.split('+') {
            let raw = raw.trim();
            if raw.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let mut coeff = 1u64;
            let mut exps = vec![0u32; space.n()];
            for (i, factor) in raw.split('*').map(str::trim).enumerate() {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, e) = match var.split_once('^') {
                        Some((idx, e)) => (
                            idx,
                            e.trim()
                                .parse::<u32>()
                                .map_err(|e| Error::Parse(e.to_string()))?,
                        ),
                        None => (var, 1),
                    };
                    let idx: usize = idx
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
                    if idx == 0 || idx > space.n() {
                        return Err(Error::Parse(format!(
                            "variable {factor:?} outside x1..x{}",
                            space.n()
                        )));
                    }
                    exps[idx - 1] += e;
                } else if i == 0 {
                    coeff = factor
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad coefficient {factor:?}")))?;
                } else {
                    return Err(Error::Parse(format!("bad factor {factor:?}")));
                }
            }
            terms.push((exps, (coeff % space.p() as u64) as u32));
        }
        Self::from_terms(space, terms)
    }
}

impl fmt::Display for ReducedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// A function F_p^n -> F_p as its table of values, indexed by point index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueVector {
    space: Space,
    values: Vec<u32>,
}

impl ValueVector {
    pub fn new(space: &Space, values: Vec<u32>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::DimensionMismatch {
                expected: space.size(),
                got: values.len(),
            });
        }
        for &v in &values {
            space.field().check(v)?;
        }
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, index: usize) -> u32 {
        self.values[index]
    }
}

/// Coefficients `u[a][k]` of `x^k` in `1 - (x - a)^{p-1}`.
fn univariate_indicators(field: PrimeField) -> Vec<Vec<u32>> {
    let p = field.modulus();
    let top = p - 1;
    let binom = binomials_mod_p(field);
    (0..p)
        .map(|a| {
            let neg_a = field.neg(a);
            let mut coeffs: Vec<u32> = (0..p)
                .map(|k| {
                    let term = field.mul(
                        binom[top as usize][k as usize],
                        field.pow(neg_a, (top - k) as u64),
                    );
                    field.neg(term)
                })
                .collect();
            coeffs[0] = field.add(coeffs[0], 1);
            coeffs
        })
        .collect()
}

/// `binom[g][k] = C(g, k) mod p` for `g, k < p`.
fn binomials_mod_p(field: PrimeField) -> Vec<Vec<u32>> {
    let p = field.modulus() as usize;
    let mut binom = vec![vec![0u32; p]; p];
    for g in 0..p {
        binom[g][0] = 1;
        for k in 1..=g {
            binom[g][k] = field.add(binom[g - 1][k - 1], if k < g { binom[g - 1][k] } else { 0 });
        }
    }
    binom
}

/// Coefficients of `δ_a` indexed by exponent code.
fn indicator_code_dense(space: &Space, u: &[Vec<u32>], point: &[u32]) -> Vec<u32> {
    let field = space.field();
    let mut coeffs = vec![1 % field.modulus()];
    // grow one coordinate at a time; coordinate i is digit i of the code
    for &a in point {
        let row = &u[a as usize];
        let mut next = Vec::with_capacity(coeffs.len() * row.len());
        for &r in row {
            next.extend(coeffs.iter().map(|&c| field.mul(c, r)));
        }
        coeffs = next;
    }
    coeffs
}

/// `δ_a`, equal to 1 at `a` and 0 elsewhere, of degree `(p-1)n`.
pub fn indicator_poly(space: &Space, point: &Point) -> Result<ReducedPoly> {
    space.encode(&point.coords)?;
    let u = univariate_indicators(space.field());
    Ok(ReducedPoly::from_code_dense(
        space,
        &indicator_code_dense(space, &u, &point.coords),
    ))
}

/// Indicator polynomials of every point of `set`, in index order.
pub fn indicator_polys(set: &PointSet) -> Vec<ReducedPoly> {
    let space = set.space();
    let u = univariate_indicators(space.field());
    set.points()
        .iter()
        .map(|pt| ReducedPoly::from_code_dense(space, &indicator_code_dense(space, &u, &pt.coords)))
        .collect()
}

/// The unique `f ∈ L_n` with `φ(f) = v`.
pub fn interpolate(values: &ValueVector) -> ReducedPoly {
    let space = values.space();
    let field = space.field();
    let u = univariate_indicators(field);
    let mut acc = vec![0u32; space.size()];
    for pt in space.points() {
        let v = values.get(pt.index);
        if v == 0 {
            continue;
        }
        for (slot, c) in acc
            .iter_mut()
            .zip(indicator_code_dense(space, &u, &pt.coords))
        {
            *slot = field.add(*slot, field.mul(v, c));
        }
    }
    ReducedPoly::from_code_dense(space, &acc)
}

fn check_dense_ceiling(space: &Space) -> Result<()> {
    if space.size() > DENSE_CEILING {
        return Err(Error::SizeCeiling {
            p: space.p(),
            n: space.n(),
            limit: DENSE_CEILING,
        });
    }
    Ok(())
}

/// Matrix `C` over the monomial basis with `f(x + y) = Σ C[α][β] x^α y^β`.
pub fn shift_coefficient_matrix(f: &ReducedPoly, basis: &MonomialBasis) -> Result<FpMatrix> {
    f.check_space(basis.space())?;
    let space = basis.space();
    check_dense_ceiling(space)?;
    let field = space.field();
    let p = space.p() as usize;
    let binom = binomials_mod_p(field);
    let mut c = FpMatrix::zeros(field, basis.len(), basis.len());
    for (m, coeff) in f.terms() {
        let gamma = m.exponents();
        // enumerate α ≤ γ componentwise as a mixed-radix counter
        let mut alpha = vec![0u32; gamma.len()];
        loop {
            let mut weight = coeff;
            let (mut code_a, mut code_b, mut place) = (0usize, 0usize, 1usize);
            for i in 0..gamma.len() {
                weight = field.mul(weight, binom[gamma[i] as usize][alpha[i] as usize]);
                code_a += alpha[i] as usize * place;
                code_b += (gamma[i] - alpha[i]) as usize * place;
                place *= p;
            }
            c.add_to(
                basis.position_of_code(code_a),
                basis.position_of_code(code_b),
                weight,
            );

            let mut i = 0;
            while i < alpha.len() && alpha[i] == gamma[i] {
                alpha[i] = 0;
                i += 1;
            }
            if i == alpha.len() {
                break;
            }
            alpha[i] += 1;
        }
    }
    Ok(c)
}

/// Checks that every nonzero `C[α][β]` has `|α| <= d` or `|β| <= d`, so the
/// support of `C` lies in `dim L_{n,d}` rows plus `dim L_{n,d}` columns, and
/// returns the resulting rank bound `2 dim L_{n,d}`.
pub fn support_split_rank_bound(c: &FpMatrix, d: usize, basis: &MonomialBasis) -> Result<BigUint> {
    if c.rows() != basis.len() || c.cols() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            got: c.rows(),
        });
    }
    for row in 0..c.rows() {
        if basis.get(row).degree() <= d {
            continue;
        }
        for col in 0..c.cols() {
            if c.get(row, col) != 0 && basis.get(col).degree() > d {
                return Err(Error::DegreeHypothesisViolated { row, col, d });
            }
        }
    }
    let space = basis.space();
    let max = (space.p() as usize - 1) * space.n();
    Ok(dim_l(space.n(), d.min(max), space.field())? * 2u32)
}

/// `M[a][b] = f(a + b)` for `a ∈ A`, `b ∈ B`, rows and columns in index order.
pub fn gram_matrix(f: &ReducedPoly, a: &PointSet, b: &PointSet) -> Result<FpMatrix> {
    f.check_space(a.space())?;
    f.check_space(b.space())?;
    let space = f.space();
    let values = f.evaluate_all();
    let cols: Vec<usize> = b.indices().collect();
    let mut m = FpMatrix::zeros(f.field(), a.len(), cols.len());
    for (i, x) in a.indices().enumerate() {
        for (j, &y) in cols.iter().enumerate() {
            m.set(i, j, values.get(space.add(x, y)));
        }
    }
    Ok(m)
}

/// `(M_A)[α][a] = a^α` over the full monomial basis and the points of `set`.
pub fn monomial_evaluation_matrix(basis: &MonomialBasis, set: &PointSet) -> Result<FpMatrix> {
    if basis.space() != set.space() {
        return Err(Error::DimensionMismatch {
            expected: basis.space().n(),
            got: set.space().n(),
        });
    }
    let field = basis.space().field();
    let points = set.points();
    let mut m = FpMatrix::zeros(field, basis.len(), points.len());
    for (r, mono) in basis.monomials().iter().enumerate() {
        for (c, pt) in points.iter().enumerate() {
            m.set(r, c, mono.evaluate(field, &pt.coords));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(p: u32, n: usize) -> Space {
        Space::new(PrimeField::new(p).unwrap(), n).unwrap()
    }

    fn one_minus_x_sq() -> ReducedPoly {
        ReducedPoly::from_terms(&space(3, 1), [(vec![0], 1), (vec![2], 2)]).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let s = space(3, 1);
        let f = one_minus_x_sq();
        let vals: Vec<u32> = (0..3)
            .map(|i| f.evaluate(&s.decode(i).unwrap()).unwrap())
            .collect();
        assert_eq!(vals, vec![1, 0, 0]);
        assert_eq!(f.evaluate_all().values(), &[1, 0, 0]);
        let s2 = space(3, 2);
        let xy = ReducedPoly::monomial(&s2, vec![1, 1], 1).unwrap();
        assert_eq!(xy.evaluate(&s2.point(&[2, 2]).unwrap()).unwrap(), 1);
        let one = ReducedPoly::constant(&s2, 1);
        assert!(s2.points().all(|pt| one.evaluate(&pt).unwrap() == 1));
        assert!(ReducedPoly::zero(&s2)
            .evaluate_all()
            .values()
            .iter()
            .all(|&v| v == 0));
        assert!(f.evaluate(&s2.point(&[0, 0]).unwrap()).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let s = space(3, 1);
        let ones = ValueVector::new(&s, vec![1, 1, 1]).unwrap();
        assert_eq!(interpolate(&ones), ReducedPoly::constant(&s, 1));
        let delta0 = ValueVector::new(&s, vec![1, 0, 0]).unwrap();
        assert_eq!(interpolate(&delta0), one_minus_x_sq());
        assert!(ValueVector::new(&s, vec![1, 1]).is_err());
        assert!(ValueVector::new(&s, vec![1, 1, 3]).is_err());
    }

    #[test]
    fn indicator_examples() {
        let s = space(3, 1);
        let d0 = indicator_poly(&s, &s.decode(0).unwrap()).unwrap();
        assert_eq!(d0, one_minus_x_sq());
        let s2 = space(3, 2);
        let mut total = ReducedPoly::zero(&s2);
        for a in s2.points() {
            let d = indicator_poly(&s2, &a).unwrap();
            assert_eq!(d.degree(), Some(4));
            for b in s2.points() {
                assert_eq!(d.evaluate(&b).unwrap(), u32::from(a == b));
            }
            total = total.add(&d).unwrap();
        }
        assert_eq!(total, ReducedPoly::constant(&s2, 1));
    }

    #[test]
    fn zero_set_examples() {
        let s = space(3, 2);
        assert_eq!(ReducedPoly::zero(&s).zero_set().len(), 9);
        assert_eq!(
            one_minus_x_sq().zero_set().indices().collect::<Vec<_>>(),
            vec![1, 2]
        );
    }

    #[test]
    fn shift_matrix_examples() {
        let s = space(3, 1);
        let basis = MonomialBasis::new(&s).unwrap();
        let c1 = shift_coefficient_matrix(&ReducedPoly::constant(&s, 1), &basis).unwrap();
        assert_eq!(c1.rank(), 1);
        assert_eq!(c1.get(0, 0), 1);
        let x2 = ReducedPoly::monomial(&s, vec![2], 1).unwrap();
        let c = shift_coefficient_matrix(&x2, &basis).unwrap();
        assert_eq!(
            c.to_rows(),
            vec![vec![0, 0, 1], vec![0, 2, 0], vec![1, 0, 0]]
        );
        assert_eq!(c.rank(), 3);
        assert_eq!(
            support_split_rank_bound(&c, 1, &basis).unwrap(),
            BigUint::from(4u32)
        );
        assert!(matches!(
            support_split_rank_bound(&c, 0, &basis),
            Err(Error::DegreeHypothesisViolated { .. })
        ));
        assert_eq!(
            support_split_rank_bound(&c1, 0, &basis).unwrap(),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn shift_matrix_rejects_large_spaces() {
        let s = space(3, 7);
        let basis = MonomialBasis::new(&s).unwrap();
        let f = ReducedPoly::constant(&s, 1);
        assert!(matches!(
            shift_coefficient_matrix(&f, &basis),
            Err(Error::SizeCeiling {
                limit: DENSE_CEILING,
                ..
            })
        ));
    }

    #[test]
    fn gram_examples() {
        let s = space(3, 1);
        let all = PointSet::full(&s);
        let x2 = ReducedPoly::monomial(&s, vec![2], 1).unwrap();
        let m = gram_matrix(&x2, &all, &all).unwrap();
        assert_eq!(
            m.to_rows(),
            vec![vec![0, 1, 1], vec![1, 1, 0], vec![1, 0, 1]]
        );
        let ones = gram_matrix(&ReducedPoly::constant(&s, 1), &all, &all).unwrap();
        assert_eq!(ones.rank(), 1);
    }

    #[test]
    fn text_and_json_forms() {
        let s = space(5, 3);
        let f = ReducedPoly::parse(&s, "3 + 2*x2 + x1^4*x3 + 4*x1*x1").unwrap();
        assert_eq!(f.to_string(), "3 + 2*x2 + 4*x1^2 + 1*x1^4*x3");
        assert_eq!(ReducedPoly::parse(&s, &f.to_string()).unwrap(), f);
        assert_eq!(ReducedPoly::from_json(&s, &f.to_json()).unwrap(), f);
        assert_eq!(
            f.to_json(),
            "[[[0,0,0],3],[[0,1,0],2],[[2,0,0],4],[[4,0,1],1]]"
        );
        assert_eq!(ReducedPoly::parse(&s, "0").unwrap(), ReducedPoly::zero(&s));
        assert_eq!(ReducedPoly::zero(&s).to_string(), "0");
        assert!(ReducedPoly::parse(&s, "x1^5").is_err());
        assert!(ReducedPoly::parse(&s, "x4").is_err());
        assert!(ReducedPoly::parse(&s, "1 + ").is_err());
        assert!(ReducedPoly::from_json(&s, "[[[5,0,0],1]]").is_err());
    }

    #[test]
    fn cancellation_drops_terms() {
        let s = space(3, 2);
        let f = ReducedPoly::parse(&s, "x1 + 2*x1 + x2").unwrap();
        assert_eq!(f.num_terms(), 1);
        assert!(f.sub(&f).unwrap().is_zero());
        assert_eq!(ReducedPoly::zero(&s).degree(), None);
        assert!(ReducedPoly::zero(&s).degree_at_most(0));
    }

    fn value_vector(p: u32, n: usize) -> impl Strategy<Value = ValueVector> {
        let s = space(p, n);
        prop::collection::vec(0..p, s.size()).prop_map(move |v| ValueVector::new(&s, v).unwrap())
    }

    proptest! {
        #[test]
        fn evaluation_is_linear(a in value_vector(5, 2), b in value_vector(5, 2), k in 0u32..5) {
            let f = interpolate(&a);
            let g = interpolate(&b);
            let lhs = f.scale(k).add(&g).unwrap().evaluate_all();
            let field = f.field();
            let rhs: Vec<u32> = a.values().iter().zip(b.values()).map(|(&x, &y)| field.add(field.mul(k, x), y)).collect();
            prop_assert_eq!(lhs.values(), rhs.as_slice());
        }

        #[test]
        fn fast_evaluation_matches_pointwise(
            p in prop::sample::select(vec![3u32, 5, 7]),
            n in 0usize..4,
            raw in prop::collection::vec((prop::collection::vec(0u32..7, 3), 0u32..7), 0..12),
        ) {
            let s = space(p, n);
            let terms = raw.into_iter().map(|(e, c)| (e[..n].iter().map(|x| x % p).collect(), c % p));
            let f = ReducedPoly::from_terms(&s, terms).unwrap();
            let fast = f.evaluate_all();
            for pt in s.points() {
                prop_assert_eq!(fast.get(pt.index), f.evaluate(&pt).unwrap());
            }
        }

        #[test]
        fn shift_matrix_is_degree_triangular(v in value_vector(3, 2)) {
            let f = interpolate(&v);
            let basis = MonomialBasis::new(f.space()).unwrap();
            let c = shift_coefficient_matrix(&f, &basis).unwrap();
            let deg = f.degree().unwrap_or(0);
            for r in 0..c.rows() {
                for col in 0..c.cols() {
                    if c.get(r, col) != 0 {
                        prop_assert!(basis.get(r).degree() + basis.get(col).degree() <= deg);
                    }
                }
            }
        }
    }
}
