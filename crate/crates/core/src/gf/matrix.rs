use std::fmt;

use super::PrimeField;
use crate::error::{Error, Result};

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        let p = field.modulus();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| x % p));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Like [`from_rows`](Self::from_rows) but with an explicit column count,
    /// so that an empty list of rows still has a width.
    pub fn from_rows_with_cols(field: PrimeField, rows: &[Vec<u32>], cols: usize) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Self::zeros(field, 0, cols));
        }
        let m = Self::from_rows(field, rows)?;
        if m.cols != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: m.cols,
            });
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.data[r * self.cols + c] = value % self.field.modulus();
    }

    #[inline]
    pub(crate) fn add_to(&mut self, r: usize, c: usize, value: u32) {
        let cell = &mut self.data[r * self.cols + c];
        *cell = self.field.add(*cell, value);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let p = self.field.modulus() as u64;
        let mut out = Self::zeros(self.field, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(rhs.row(k)) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (c, &x) in acc.iter().enumerate() {
                out.data[r * rhs.cols + c] = x as u32;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let p = self.field.modulus() as u64;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p)
                    as u32
            })
            .collect())
    }

    /// Restriction to the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// `row[target] -= factor * row[source]` on columns `from..`.
    fn eliminate(&mut self, target: usize, source: usize, factor: u32, from: usize) {
        let p = self.field.modulus() as u64;
        let neg = (p - factor as u64) % p;
        let cols = self.cols;
        let (t, s) = if target < source {
            let (head, tail) = self.data.split_at_mut(source * cols);
            (&mut head[target * cols..(target + 1) * cols], &tail[..cols])
        } else {
            let (head, tail) = self.data.split_at_mut(target * cols);
            (&mut tail[..cols], &head[source * cols..(source + 1) * cols])
        };
        for (x, &y) in t[from..].iter_mut().zip(&s[from..]) {
            if y != 0 {
                *x = ((*x as u64 + neg * y as u64) % p) as u32;
            }
        }
    }

    fn scale_row(&mut self, r: usize, factor: u32, from: usize) {
        let field = self.field;
        for x in &mut self.data[r * self.cols + from..(r + 1) * self.cols] {
            *x = field.mul(*x, factor);
        }
    }

    /// Gaussian elimination in place. Pivots are the first nonzero entry in
    /// column order; with `reduced` the result is in reduced row echelon form.
    fn eliminate_in_place(&mut self, reduced: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pivot_row) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pivot_row);
            let inv = self.field.inv(self.get(r, c)).expect("pivot is nonzero");
            self.scale_row(r, inv, c);
            let start = if reduced { 0 } else { r + 1 };
            for i in start..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor != 0 {
                    self.eliminate(i, r, factor, c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Echelon {
        let mut matrix = self.clone();
        let pivots = matrix.eliminate_in_place(true);
        Echelon { matrix, pivots }
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate_in_place(false).len()
    }

    /// Leftmost pivot columns under left-to-right elimination. The restriction
    /// of the matrix to these columns has full column rank.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.clone().eliminate_in_place(false)
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let Echelon { matrix, pivots } = self.rref();
        let field = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(matrix.get(i, free));
                }
                v
            })
            .collect()
    }

    /// Some solution of `M x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for (r, &rhs) in b.iter().enumerate() {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols]
                .copy_from_slice(self.row(r));
            aug.data[r * (self.cols + 1) + self.cols] = rhs % self.field.modulus();
        }
        let pivots = aug.eliminate_in_place(true);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(i, self.cols);
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FpMatrix {}x{} over {}",
            self.rows, self.cols, self.field
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

fn common_length(b1: &[Vec<u32>], b2: &[Vec<u32>]) -> Result<Option<usize>> {
    let mut len = None;
    for v in b1.iter().chain(b2) {
        match len {
            None => len = Some(v.len()),
            Some(l) if l != v.len() => {
                return Err(Error::DimensionMismatch {
                    expected: l,
                    got: v.len(),
                })
            }
            _ => {}
        }
    }
    Ok(len)
}

/// Basis (in reduced row echelon form) of `span(b1) ∩ span(b2)`.
///
/// Each vector of `b1` is reduced against the echelon form of `b2`; the
/// combinations of `b1` whose residuals cancel are exactly the intersection.
pub fn row_space_intersection(
    field: PrimeField,
    b1: &[Vec<u32>],
    b2: &[Vec<u32>],
) -> Result<Vec<Vec<u32>>> {
    let Some(len) = common_length(b1, b2)? else {
        return Ok(Vec::new());
    };
    if b1.is_empty() || b2.is_empty() {
        return Ok(Vec::new());
    }
    let Echelon {
        matrix: e2,
        pivots: pivots2,
    } = FpMatrix::from_rows_with_cols(field, b2, len)?.rref();

    let p = field.modulus();
    let mut residuals = FpMatrix::zeros(field, len, b1.len());
    for (j, v) in b1.iter().enumerate() {
        let mut r: Vec<u32> = v.iter().map(|&x| x % p).collect();
        for (i, &pc) in pivots2.iter().enumerate() {
            let coef = r[pc];
            if coef == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(e2.row(i)) {
                if y != 0 {
                    *x = field.sub(*x, field.mul(coef, y));
                }
            }
        }
        for (k, &x) in r.iter().enumerate() {
            residuals.data[k * b1.len() + j] = x;
        }
    }

    let combos: Vec<Vec<u32>> = residuals
        .kernel_basis()
        .into_iter()
        .map(|lambda| {
            let mut out = vec![0u32; len];
            for (coef, v) in lambda.iter().zip(b1) {
                if *coef == 0 {
                    continue;
                }
                for (x, &y) in out.iter_mut().zip(v) {
                    *x = field.add(*x, field.mul(*coef, y % p));
                }
            }
            out
        })
        .collect();
    if combos.is_empty() {
        return Ok(combos);
    }
    let Echelon { matrix, pivots } = FpMatrix::from_rows(field, &combos)?.rref();
    Ok((0..pivots.len()).map(|r| matrix.row(r).to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn m(p: u32, rows: &[&[u32]]) -> FpMatrix {
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
        FpMatrix::from_rows(f(p), &rows).unwrap()
    }

    /// Brute-force independence over F_3: no nonzero coefficient vector
    /// annihilates the rows.
    fn independent_f3(rows: &[&[u32]]) -> bool {
        let k = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        (1..3usize.pow(k as u32)).all(|mut code| {
            let coefs: Vec<u32> = (0..k)
                .map(|_| {
                    let c = (code % 3) as u32;
                    code /= 3;
                    c
                })
                .collect();
            (0..cols).any(|j| rows.iter().zip(&coefs).map(|(r, &c)| r[j] * c).sum::<u32>() % 3 != 0)
        })
    }

    fn brute_rank_f3(rows: &[Vec<u32>]) -> usize {
        let k = rows.len();
        (0..1usize << k)
            .filter_map(|mask| {
                let subset: Vec<&[u32]> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| rows[i].as_slice())
                    .collect();
                independent_f3(&subset).then_some(subset.len())
            })
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FpMatrix::identity(f(3), 3).rank(), 3);
        assert_eq!(FpMatrix::zeros(f(3), 3, 4).rank(), 0);
        assert_eq!(m(3, &[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(FpMatrix::zeros(f(5), 0, 4).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(FpMatrix::identity(f(3), 4).kernel_basis().is_empty());
        assert_eq!(FpMatrix::zeros(f(3), 2, 3).kernel_basis().len(), 3);
        let row = m(3, &[&[1, 1, 1]]);
        let ker = row.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert_eq!(row.mul_vec(v).unwrap(), vec![0]);
        }
        assert_eq!(FpMatrix::from_rows(f(3), &ker).unwrap().rank(), 2);
    }

    #[test]
    fn pivot_examples() {
        assert_eq!(
            FpMatrix::identity(f(5), 4).pivot_columns(),
            vec![0, 1, 2, 3]
        );
        assert!(FpMatrix::zeros(f(5), 3, 3).pivot_columns().is_empty());
        assert_eq!(m(3, &[&[1, 2, 0], &[2, 4, 1]]).pivot_columns(), vec![0, 2]);
    }

    #[test]
    fn intersection_examples() {
        let field = f(3);
        let e = |i: usize| {
            let mut v = vec![0; 3];
            v[i] = 1;
            v
        };
        let inter = row_space_intersection(field, &[e(0), e(1)], &[e(1), e(2)]).unwrap();
        assert_eq!(inter, vec![e(1)]);
        let b = vec![vec![1, 2, 0], vec![0, 1, 1]];
        assert_eq!(row_space_intersection(field, &b, &b).unwrap().len(), 2);
        assert!(row_space_intersection(field, &[vec![1, 2]], &[vec![1, 2, 0]]).is_err());
        assert!(row_space_intersection(field, &[], &b).unwrap().is_empty());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(5, &[&[1, 2], &[2, 4]]);
        let x = a.solve(&[3, 1]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![3, 1]);
        assert_eq!(a.solve(&[1, 1]).unwrap(), None);
    }

    fn small_f3_matrix() -> impl Strategy<Value = Vec<Vec<u32>>> {
        (1usize..=4, 1usize..=4)
            .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(0u32..3, c), r))
    }

    fn f3_basis(k: usize, len: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
        prop::collection::vec(prop::collection::vec(0u32..3, len), k)
    }

    proptest! {
        #[test]
        fn rank_matches_brute_force(rows in small_f3_matrix()) {
            let mat = FpMatrix::from_rows(f(3), &rows).unwrap();
            prop_assert_eq!(mat.rank(), brute_rank_f3(&rows));
            prop_assert_eq!(mat.transpose().rank(), mat.rank());
        }

        #[test]
        fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(0u32..7, 6), 1..6)) {
            let mat = FpMatrix::from_rows(f(7), &rows).unwrap();
            let ker = mat.kernel_basis();
            prop_assert_eq!(ker.len(), mat.cols() - mat.rank());
            for v in &ker {
                prop_assert!(mat.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
            if !ker.is_empty() {
                prop_assert_eq!(FpMatrix::from_rows(f(7), &ker).unwrap().rank(), ker.len());
            }
        }

        #[test]
        fn pivot_restriction_has_full_rank(rows in prop::collection::vec(prop::collection::vec(0u32..3, 5), 1..6), shift in 0usize..6) {
            let mat = FpMatrix::from_rows(f(3), &rows).unwrap();
            let pivots = mat.pivot_columns();
            prop_assert_eq!(pivots.len(), mat.rank());
            prop_assert_eq!(mat.select_columns(&pivots).rank(), pivots.len());
            let mut permuted = rows.clone();
            permuted.rotate_left(shift % rows.len());
            let pm = FpMatrix::from_rows(f(3), &permuted).unwrap();
            prop_assert_eq!(mat.select_columns(&pm.pivot_columns()).rank(), pivots.len());
        }

        #[test]
        fn intersection_dimension_formula(b1 in f3_basis(4, 6), b2 in f3_basis(3, 6)) {
            let field = f(3);
            let r1 = FpMatrix::from_rows(field, &b1).unwrap().rank();
            let r2 = FpMatrix::from_rows(field, &b2).unwrap().rank();
            let stacked: Vec<Vec<u32>> = b1.iter().chain(&b2).cloned().collect();
            let sum_dim = FpMatrix::from_rows(field, &stacked).unwrap().rank();
            let inter = row_space_intersection(field, &b1, &b2).unwrap();
            prop_assert_eq!(inter.len() + sum_dim, r1 + r2);
            for v in &inter {
                let mut with1 = b1.clone();
                with1.push(v.clone());
                let mut with2 = b2.clone();
                with2.push(v.clone());
                prop_assert_eq!(FpMatrix::from_rows(field, &with1).unwrap().rank(), r1);
                prop_assert_eq!(FpMatrix::from_rows(field, &with2).unwrap().rank(), r2);
            }
        }
    }
}
