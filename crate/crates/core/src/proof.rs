//! Runs the polynomial-method construction on a concrete set `A ⊆ F_p^n`
//! (with `3 | n`) and records every step in a [`ProofTranscript`].
//!
//! With `C = {2a}`, `B = {a + b : a ≠ b}`, `K` the polynomials vanishing off
//! `C` and `L = L_{n,2(p-1)n/3}`, the space `V = K ∩ L` yields `f` with
//! `f = 1` on some `C′ ⊆ C` of size `dim V`. On `A′ = {a : 2a ∈ C′}` the
//! matrix `f(a + b)` is diagonal with unit diagonal, so `|A′|` is at most the
//! rank of the coefficient matrix of `f(x + y)`, which is at most
//! `2 dim L_{n,(p-1)n/3}`. Counting dimensions then bounds `|A|`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::apsets::{is_progression_free, pair_sums, PointSet};
use crate::bounds::{exponent_c_hp, power_bound_hp};
use crate::error::{Error, Result};
use crate::funcspace::{
    gram_matrix, indicator_polys, monomial_evaluation_matrix, shift_coefficient_matrix,
    support_split_rank_bound, PolyTerms, ReducedPoly, DENSE_CEILING,
};
use crate::gf::{row_space_intersection, FpMatrix, PrimeField, Space};
use crate::monomials::{dim_l, enumerate_monomials, MonomialBasis};
use crate::precision::{Precision, Real};
use crate::serde_big;

/// Largest `p^n` for which a pipeline run also builds the coefficient matrix
/// of `f(x + y)` and records its rank.
pub const SHIFT_RANK_CEILING: usize = 729;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    fn holds<T: PartialOrd>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

/// A named (in)equality with both sides recorded as decimal strings.
/// Integer sides are exact; real sides carry the working precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub relation: Relation,
    pub rhs: String,
    pub holds: bool,
}

impl Check {
    pub fn exact(
        name: &str,
        lhs: impl Into<BigInt>,
        relation: Relation,
        rhs: impl Into<BigInt>,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        Self {
            name: name.to_string(),
            holds: relation.holds(&lhs, &rhs),
            lhs: lhs.to_string(),
            relation,
            rhs: rhs.to_string(),
        }
    }

    pub fn real(name: &str, lhs: &Real, relation: Relation, rhs: &Real) -> Self {
        Self {
            name: name.to_string(),
            holds: relation.holds(lhs, rhs),
            lhs: lhs.to_string(),
            relation,
            rhs: rhs.to_string(),
        }
    }

    /// Re-evaluates the relation from the recorded sides alone. Returns `None`
    /// if a side does not parse as a number.
    pub fn recompute(&self, prec: Precision) -> Option<bool> {
        let int = |s: &str| s.parse::<BigInt>().ok();
        if let (Some(l), Some(r)) = (int(&self.lhs), int(&self.rhs)) {
            return Some(self.relation.holds(&l, &r));
        }
        let l = Real::parse(&self.lhs, prec)?;
        let r = Real::parse(&self.rhs, prec)?;
        Some(self.relation.holds(&l, &r))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} {} {}",
            if self.holds { "ok" } else { "FAIL" },
            self.name,
            self.lhs,
            self.relation.symbol(),
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    /// `p^n`.
    #[serde(with = "serde_big")]
    pub ambient: BigUint,
    #[serde(with = "serde_big")]
    pub dim_k: BigUint,
    #[serde(with = "serde_big")]
    pub dim_l: BigUint,
    #[serde(with = "serde_big")]
    pub dim_v: BigUint,
    /// `dim L_{n,(p-1)n/3}`.
    #[serde(with = "serde_big")]
    pub dim_l_lo: BigUint,
    /// `dim L_{n,(p-1)n/3 - 1}`.
    #[serde(with = "serde_big")]
    pub dim_l_lo_minus_one: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `dim V > 0`: the diagonal-matrix argument runs.
    PositiveV,
    /// `dim V = 0`: `|A| <= p^n - dim L` directly.
    TrivialV,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chosen {
    pub c_prime: Vec<Vec<u32>>,
    pub a_prime: Vec<Vec<u32>>,
    pub f: PolyTerms,
    /// Values of `f` on `C ∖ C′`, which the construction leaves free.
    pub f_on_rest: Vec<(Vec<u32>, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub size: usize,
    /// `dim L_{n,(p-1)n/3 - 1} + |C′|`, or `p^n - dim L` when `V` is trivial.
    #[serde(with = "serde_big")]
    pub exact_bound: BigUint,
    pub c: String,
    /// `p^{cn}`.
    pub power_bound: String,
    /// `3 p^{cn}`.
    pub asymptotic_bound: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTranscript {
    pub p: u32,
    pub n: usize,
    pub input: PointSet,
    pub input_size: usize,
    /// `(p-1)n/3`.
    pub degree_lo: usize,
    /// `2(p-1)n/3`, the degree bound defining `L`.
    pub degree_l: usize,
    pub dims: Dims,
    pub branch: Branch,
    pub chosen: Option<Chosen>,
    /// Rank of `M = (f(a + b))_{a,b ∈ A′}`.
    pub matrix_rank: Option<usize>,
    /// Rank of the coefficient matrix of `f(x + y)`; only computed when
    /// `p^n <= SHIFT_RANK_CEILING`.
    pub shift_rank: Option<usize>,
    pub checks: Vec<Check>,
    pub conclusion: Conclusion,
    pub precision_digits: usize,
}

impl ProofTranscript {
    pub fn all_pass(&self) -> bool {
        self.conclusion.holds && self.checks.iter().all(|c| c.holds)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProofOptions {
    /// Run the construction even if the input contains a progression. Only
    /// useful for watching where the argument breaks.
    pub skip_progression_check: bool,
    pub precision: Precision,
}

fn check_multiple_of_three(n: usize) -> Result<()> {
    if n == 0 || !n.is_multiple_of(3) {
        return Err(Error::NotMultipleOfThree(n));
    }
    Ok(())
}

fn index_coords(space: &Space, i: usize) -> Vec<u32> {
    space.decode(i).expect("index in range").coords
}

/// Basis `{δ_c : c ∈ C}` of the polynomials vanishing off `C`.
pub fn build_k(c: &PointSet) -> Vec<ReducedPoly> {
    indicator_polys(c)
}

/// Monomial basis of `L_{n,2(p-1)n/3}`.
pub fn build_l(n: usize, field: PrimeField) -> Result<Vec<ReducedPoly>> {
    check_multiple_of_three(n)?;
    let space = Space::new(field, n)?;
    let d = 2 * (field.modulus() as usize - 1) * n / 3;
    enumerate_monomials(n, field, d)?
        .into_iter()
        .map(|m| ReducedPoly::monomial(&space, m.exponents().to_vec(), 1))
        .collect()
}

#[derive(Debug, Clone)]
pub struct Intersection {
    pub basis: Vec<ReducedPoly>,
    /// `dim V >= dim K + dim L - p^n`.
    pub check: Check,
}

/// `V = span(k) ∩ span(l)`, with `k` and `l` linearly independent.
pub fn intersect_v(
    k: &[ReducedPoly],
    l: &[ReducedPoly],
    basis: &MonomialBasis,
) -> Result<Intersection> {
    let dense = |polys: &[ReducedPoly]| {
        polys
            .iter()
            .map(|f| f.to_dense(basis))
            .collect::<Result<Vec<_>>>()
    };
    let rows = row_space_intersection(basis.space().field(), &dense(k)?, &dense(l)?)?;
    let v = rows
        .iter()
        .map(|r| ReducedPoly::from_dense(basis, r))
        .collect::<Result<Vec<_>>>()?;
    let check = Check::exact(
        "dim V >= dim K + dim L - p^n",
        v.len(),
        Relation::Ge,
        BigInt::from(k.len()) + BigInt::from(l.len()) - BigInt::from(basis.len()),
    );
    Ok(Intersection { basis: v, check })
}

/// Picks `C′ ⊆ C` (leftmost pivots of the evaluation matrix of `v` on `C`)
/// and the unique `f ∈ span(v)` with `f = 1` on `C′`.
pub fn select_c_prime_and_f(v: &[ReducedPoly], c: &PointSet) -> Result<(PointSet, ReducedPoly)> {
    let Some(first) = v.first() else {
        return Err(Error::TrivialV);
    };
    let space = first.space().clone();
    let field = space.field();
    let members: Vec<usize> = c.indices().collect();
    let mut eval = FpMatrix::zeros(field, v.len(), members.len());
    for (i, g) in v.iter().enumerate() {
        let values = g.evaluate_all();
        for (j, &x) in members.iter().enumerate() {
            eval.set(i, j, values.get(x));
        }
    }
    let pivots = eval.pivot_columns();
    if pivots.len() != v.len() {
        return Err(Error::InvalidArgument(format!(
            "evaluation on C has rank {} but V has dimension {}",
            pivots.len(),
            v.len()
        )));
    }
    let square = eval.select_columns(&pivots).transpose();
    let lambda = square
        .solve(&vec![1; v.len()])?
        .expect("square system of full rank is solvable");
    let f = ReducedPoly::linear_combination(&space, &lambda, v)?;
    let c_prime = PointSet::from_indices(&space, pivots.iter().map(|&j| members[j]))?;
    Ok((c_prime, f))
}

/// `M = (f(a + b))_{a,b ∈ A′}`, which must be diagonal with nonzero diagonal.
pub fn diagonal_certificate(f: &ReducedPoly, a_prime: &PointSet) -> Result<FpMatrix> {
    let m = gram_matrix(f, a_prime, a_prime)?;
    let space = a_prime.space();
    let members: Vec<usize> = a_prime.indices().collect();
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            let value = m.get(i, j);
            if (i == j) == (value == 0) {
                return Err(Error::HypothesisViolated {
                    a: index_coords(space, a),
                    b: index_coords(space, b),
                    value,
                });
            }
        }
    }
    debug_assert_eq!(m.rank(), members.len());
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRankCheck {
    pub rank_m: usize,
    pub rank_c: usize,
    /// `M = M_Aᵀ C M_B` entry by entry.
    pub factorization_holds: bool,
    pub holds: bool,
}

/// Compares the rank of `M = (f(a + b))_{a ∈ A, b ∈ B}` with the rank of the
/// coefficient matrix `C` of `f(x + y)`, and checks `M = M_Aᵀ C M_B`.
pub fn check_lemma_rank(f: &ReducedPoly, a: &PointSet, b: &PointSet) -> Result<LemmaRankCheck> {
    let basis = MonomialBasis::new(f.space())?;
    let c = shift_coefficient_matrix(f, &basis)?;
    let m = gram_matrix(f, a, b)?;
    let m_a = monomial_evaluation_matrix(&basis, a)?;
    let m_b = monomial_evaluation_matrix(&basis, b)?;
    let product = m_a.transpose().mul(&c)?.mul(&m_b)?;
    let factorization_holds = product == m;
    let (rank_m, rank_c) = (m.rank(), c.rank());
    Ok(LemmaRankCheck {
        rank_m,
        rank_c,
        factorization_holds,
        holds: factorization_holds && rank_m <= rank_c,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropDiagonalCheck {
    pub size: usize,
    pub d: usize,
    #[serde(with = "serde_big")]
    pub dim_l_d: BigUint,
    /// `2 dim L_{n,d}`, confirmed through the degree split of `C` when
    /// `p^n <= DENSE_CEILING`.
    #[serde(with = "serde_big")]
    pub bound: BigUint,
    pub support_split_checked: bool,
    pub rank_m: usize,
    pub holds: bool,
}

/// Checks `|A| <= 2 dim L_{n,d}` for `f` of degree at most `2d` with
/// `f(a + b) = 0` exactly when `a ≠ b`.
pub fn check_prop_diagonal(f: &ReducedPoly, a: &PointSet, d: usize) -> Result<PropDiagonalCheck> {
    let space = f.space();
    let deg = f.degree().unwrap_or(0);
    if deg > 2 * d {
        return Err(Error::DegreeOutOfRange { d: deg, max: 2 * d });
    }
    let m = gram_matrix(f, a, a)?;
    let members: Vec<usize> = a.indices().collect();
    for (i, &x) in members.iter().enumerate() {
        for (j, &y) in members.iter().enumerate() {
            let value = m.get(i, j);
            if (value == 0) != (i != j) {
                return Err(Error::HypothesisViolated {
                    a: index_coords(space, x),
                    b: index_coords(space, y),
                    value,
                });
            }
        }
    }
    let top = (space.p() as usize - 1) * space.n();
    let dim_l_d = dim_l(space.n(), d.min(top), space.field())?;
    let (bound, support_split_checked) = if space.size() <= DENSE_CEILING {
        let basis = MonomialBasis::new(space)?;
        let c = shift_coefficient_matrix(f, &basis)?;
        (support_split_rank_bound(&c, d, &basis)?, true)
    } else {
        (&dim_l_d * 2u32, false)
    };
    Ok(PropDiagonalCheck {
        size: a.len(),
        d,
        dim_l_d,
        holds: BigUint::from(a.len()) <= bound,
        bound,
        support_split_checked,
        rank_m: m.rank(),
    })
}

pub fn run_theorem_main(a: &PointSet) -> Result<ProofTranscript> {
    run_theorem_main_with(a, &ProofOptions::default())
}

pub fn run_theorem_main_with(a: &PointSet, options: &ProofOptions) -> Result<ProofTranscript> {
    use Relation::{Eq, Le};

    let space = a.space().clone();
    let field = space.field();
    let (p, n) = (space.p(), space.n());
    check_multiple_of_three(n)?;
    if space.size() > DENSE_CEILING {
        return Err(Error::SizeCeiling {
            p,
            n,
            limit: DENSE_CEILING,
        });
    }
    let prec = options.precision;
    let mut checks = Vec::new();

    let violations = count_progressions(a);
    if violations > 0 && !options.skip_progression_check {
        let witness = is_progression_free(a).witness.expect("progression exists");
        return Err(witness.into_error());
    }
    checks.push(Check::exact("progressions in A", violations, Eq, 0));

    let (b, c) = pair_sums(a);
    checks.push(Check::exact("|C| = |A|", c.len(), Eq, a.len()));
    checks.push(Check::exact("|B ∩ C|", b.intersection(&c)?.len(), Eq, 0));

    let degree_lo = (p as usize - 1) * n / 3;
    let degree_l = 2 * degree_lo;
    let basis = MonomialBasis::new(&space)?;
    let ambient = BigUint::from(space.size());
    let dim_l_lo = dim_l(n, degree_lo, field)?;
    let dim_l_lo_minus_one = dim_l(n, degree_lo - 1, field)?;

    let k = build_k(&c);
    let l_len = basis.prefix_len(degree_l);
    let l: Vec<ReducedPoly> = basis.monomials()[..l_len]
        .iter()
        .map(|m| ReducedPoly::monomial(&space, m.exponents().to_vec(), 1))
        .collect::<Result<_>>()?;
    checks.push(Check::exact("dim K = |C|", k.len(), Eq, c.len()));
    checks.push(Check::exact(
        "dim L = dim L_{n,2(p-1)n/3}",
        l.len(),
        Eq,
        dim_l(n, degree_l, field)?,
    ));
    checks.push(Check::exact(
        "dim L + dim L_{n,(p-1)n/3-1} = p^n",
        BigUint::from(l.len()) + &dim_l_lo_minus_one,
        Eq,
        ambient.clone(),
    ));

    let Intersection { basis: v, check } = intersect_v(&k, &l, &basis)?;
    checks.push(check);

    let mut dims = Dims {
        ambient: ambient.clone(),
        dim_k: BigUint::from(k.len()),
        dim_l: BigUint::from(l.len()),
        dim_v: BigUint::from(v.len()),
        dim_l_lo: dim_l_lo.clone(),
        dim_l_lo_minus_one: dim_l_lo_minus_one.clone(),
    };

    let (branch, chosen, matrix_rank, shift_rank, exact_bound) = if v.is_empty() {
        let gap = &ambient - &dims.dim_l;
        checks.push(Check::exact("|A| <= p^n - dim L", a.len(), Le, gap.clone()));
        (Branch::TrivialV, None, None, None, gap)
    } else {
        let (c_prime, f) = select_c_prime_and_f(&v, &c)?;
        checks.push(Check::exact("|C'| = dim V", c_prime.len(), Eq, v.len()));
        checks.push(Check::exact("deg f", f.degree().unwrap_or(0), Le, degree_l));

        let values = f.evaluate_all();
        let ones = c_prime.indices().filter(|&x| values.get(x) == 1).count();
        checks.push(Check::exact(
            "#{c in C' : f(c) = 1}",
            ones,
            Eq,
            c_prime.len(),
        ));
        let off_c = c
            .complement()
            .indices()
            .filter(|&x| values.get(x) != 0)
            .count();
        checks.push(Check::exact("#{x not in C : f(x) != 0}", off_c, Eq, 0));
        let on_b = b.indices().filter(|&x| values.get(x) != 0).count();
        checks.push(Check::exact("#{x in B : f(x) != 0}", on_b, Eq, 0));

        let a_prime = PointSet::from_indices(
            &space,
            a.indices().filter(|&x| c_prime.contains(space.double(x))),
        )?;
        checks.push(Check::exact(
            "|A'| = |C'|",
            a_prime.len(),
            Eq,
            c_prime.len(),
        ));

        let m = diagonal_certificate(&f, &a_prime)?;
        let size = a_prime.len();
        let (mut off_diag, mut unit_diag) = (0usize, 0usize);
        for i in 0..size {
            for j in 0..size {
                match (i == j, m.get(i, j)) {
                    (true, 1) => unit_diag += 1,
                    (false, x) if x != 0 => off_diag += 1,
                    _ => {}
                }
            }
        }
        let rank_m = m.rank();
        checks.push(Check::exact("M off-diagonal nonzeros", off_diag, Eq, 0));
        checks.push(Check::exact("M unit diagonal entries", unit_diag, Eq, size));
        checks.push(Check::exact("rank M = |A'|", rank_m, Eq, size));

        let two_lo = &dim_l_lo * 2u32;
        let shift_rank = if space.size() <= SHIFT_RANK_CEILING {
            let shift = shift_coefficient_matrix(&f, &basis)?;
            let split = support_split_rank_bound(&shift, degree_lo, &basis)?;
            let rank_c = shift.rank();
            checks.push(Check::exact("rank M <= rank C", rank_m, Le, rank_c));
            checks.push(Check::exact(
                "rank C <= 2 dim L_{n,(p-1)n/3}",
                rank_c,
                Le,
                split,
            ));
            Some(rank_c)
        } else {
            None
        };
        checks.push(Check::exact(
            "|A'| <= 2 dim L_{n,(p-1)n/3}",
            size,
            Le,
            two_lo,
        ));

        let bound = &dim_l_lo_minus_one + BigUint::from(c_prime.len());
        checks.push(Check::exact(
            "|A| <= dim L_{n,(p-1)n/3-1} + |C'|",
            a.len(),
            Le,
            bound.clone(),
        ));

        let c_set: Vec<usize> = c_prime.indices().collect();
        let chosen = Chosen {
            c_prime: c_prime.coords(),
            a_prime: a_prime.coords(),
            f: f.to_terms(),
            f_on_rest: c
                .indices()
                .filter(|x| c_set.binary_search(x).is_err())
                .map(|x| (index_coords(&space, x), values.get(x)))
                .collect(),
        };
        (
            Branch::PositiveV,
            Some(chosen),
            Some(rank_m),
            shift_rank,
            bound,
        )
    };
    dims.dim_v = BigUint::from(v.len());

    let power = power_bound_hp(field, n, prec);
    let three_power = Real::from_u64(3, prec).mul(&power);
    checks.push(Check::real(
        "dim L_{n,(p-1)n/3} <= p^{cn}",
        &Real::from_biguint(&dim_l_lo, prec),
        Le,
        &power,
    ));
    let exact_real = Real::from_biguint(&exact_bound, prec);
    let final_check = Check::real("exact bound <= 3 p^{cn}", &exact_real, Le, &three_power);
    let size_check = Check::real(
        "|A| <= 3 p^{cn}",
        &Real::from_u64(a.len() as u64, prec),
        Le,
        &three_power,
    );
    let holds = BigUint::from(a.len()) <= exact_bound && final_check.holds && size_check.holds;
    checks.push(final_check);
    checks.push(size_check);

    Ok(ProofTranscript {
        p,
        n,
        input: a.clone(),
        input_size: a.len(),
        degree_lo,
        degree_l,
        dims,
        branch,
        chosen,
        matrix_rank,
        shift_rank,
        checks,
        conclusion: Conclusion {
            size: a.len(),
            exact_bound,
            c: exponent_c_hp(field, prec).to_string(),
            power_bound: power.to_string(),
            asymptotic_bound: three_power.to_string(),
            holds,
        },
        precision_digits: prec.decimal_digits(),
    })
}

/// Unordered pairs `{a, b}` of members whose midpoint is a third member.
fn count_progressions(set: &PointSet) -> usize {
    let space = set.space();
    let members: Vec<usize> = set.indices().collect();
    let mut count = 0;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            let c = space.midpoint(a, b);
            if c != a && c != b && set.contains(c) {
                count += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Number of recorded checks whose relation was re-evaluated.
    pub checks_recomputed: usize,
    /// Discrepancies between the recorded values and the re-check.
    pub mismatches: Vec<String>,
    /// Every recorded check holds and the conclusion holds.
    pub all_hold: bool,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.all_hold
    }
}

/// Re-checks a transcript from its recorded data: each relation is
/// re-evaluated from its two sides, dimensions are recomputed from their
/// formulas, and the chosen `f`, `C′`, `A′` are re-validated against the
/// input set. Nothing is re-derived by rerunning the construction.
pub fn verify_transcript(t: &ProofTranscript, prec: Precision) -> Result<VerifyReport> {
    let mut mismatches = Vec::new();
    let mut expect = |ok: bool, what: String| {
        if !ok {
            mismatches.push(what);
        }
    };

    for check in &t.checks {
        match check.recompute(prec) {
            Some(h) => expect(
                h == check.holds,
                format!(
                    "check {:?} recorded {} but recomputes to {h}",
                    check.name, check.holds
                ),
            ),
            None => expect(
                false,
                format!("check {:?} has unparsable sides", check.name),
            ),
        }
    }

    let space = t.input.space().clone();
    let field = space.field();
    expect(
        space.p() == t.p && space.n() == t.n,
        "input lives in a different space".into(),
    );
    expect(
        t.input_size == t.input.len(),
        "input_size disagrees with the input".into(),
    );
    check_multiple_of_three(t.n)?;
    let degree_lo = (t.p as usize - 1) * t.n / 3;
    expect(
        t.degree_lo == degree_lo && t.degree_l == 2 * degree_lo,
        "degree bounds disagree".into(),
    );
    let (b, c) = pair_sums(&t.input);
    let dims = &t.dims;
    expect(
        dims.ambient == BigUint::from(space.size()),
        "ambient dimension".into(),
    );
    expect(
        dims.dim_k == BigUint::from(c.len()),
        "dim K differs from |2A|".into(),
    );
    expect(
        dims.dim_l == dim_l(t.n, 2 * degree_lo, field)?,
        "dim L".into(),
    );
    expect(
        dims.dim_l_lo == dim_l(t.n, degree_lo, field)?,
        "dim L_lo".into(),
    );
    expect(
        dims.dim_l_lo_minus_one == dim_l(t.n, degree_lo - 1, field)?,
        "dim L_lo-1".into(),
    );
    let lower = BigInt::from(dims.dim_k.clone()) + BigInt::from(dims.dim_l.clone())
        - BigInt::from(dims.ambient.clone());
    expect(
        BigInt::from(dims.dim_v.clone()) >= lower,
        "dim V below dim K + dim L - p^n".into(),
    );

    let exact_bound = match (&t.branch, &t.chosen) {
        (Branch::TrivialV, None) => {
            expect(
                dims.dim_v.is_zero(),
                "trivial branch with positive dim V".into(),
            );
            &dims.ambient - &dims.dim_l
        }
        (Branch::PositiveV, Some(chosen)) => {
            let f = ReducedPoly::from_poly_terms(&space, &chosen.f)?;
            let c_prime = PointSet::from_coords(&space, &chosen.c_prime)?;
            let a_prime = PointSet::from_coords(&space, &chosen.a_prime)?;
            expect(
                BigUint::from(c_prime.len()) == dims.dim_v,
                "|C'| differs from dim V".into(),
            );
            expect(
                f.degree_at_most(t.degree_l),
                "deg f exceeds the bound".into(),
            );
            let values = f.evaluate_all();
            expect(c_prime.is_subset(&c)?, "C' is not inside C".into());
            expect(
                c_prime.indices().all(|x| values.get(x) == 1),
                "f is not 1 on C'".into(),
            );
            expect(
                c.complement().indices().all(|x| values.get(x) == 0),
                "f does not vanish off C".into(),
            );
            expect(
                b.indices().all(|x| values.get(x) == 0),
                "f does not vanish on B".into(),
            );
            let halves = PointSet::from_indices(
                &space,
                t.input
                    .indices()
                    .filter(|&x| c_prime.contains(space.double(x))),
            )?;
            expect(halves == a_prime, "A' is not {a : 2a in C'}".into());
            match diagonal_certificate(&f, &a_prime) {
                Ok(m) => expect(Some(m.rank()) == t.matrix_rank, "rank M".into()),
                Err(e) => expect(false, format!("diagonal certificate: {e}")),
            }
            &dims.dim_l_lo_minus_one + BigUint::from(c_prime.len())
        }
        _ => {
            expect(false, "branch and chosen objects disagree".into());
            BigUint::zero()
        }
    };
    expect(
        exact_bound == t.conclusion.exact_bound,
        "exact bound".into(),
    );
    expect(t.conclusion.size == t.input.len(), "conclusion size".into());

    let three_power = Real::from_u64(3, prec).mul(&power_bound_hp(field, t.n, prec));
    let holds = BigUint::from(t.input.len()) <= exact_bound
        && Real::from_biguint(&exact_bound, prec) <= three_power
        && Real::from_u64(t.input.len() as u64, prec) <= three_power;
    expect(holds == t.conclusion.holds, "conclusion verdict".into());

    Ok(VerifyReport {
        checks_recomputed: t.checks.len(),
        all_hold: t.checks.iter().all(|c| c.holds) && holds,
        mismatches,
    })
}
