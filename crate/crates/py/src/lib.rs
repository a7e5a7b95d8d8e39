//! Python module `capset`: thin wrappers over `capset_core`.
//!
//! Structured results (reports, transcripts, search results) are handed to
//! Python as plain dicts built from their JSON form, so big integers arrive
//! as decimal strings exactly as in the CLI output.

use capset_core::apsets::{self, SearchOptions};
use capset_core::funcspace::{self, ReducedPoly, ValueVector};
use capset_core::gf::{self, FpMatrix, Space};
use capset_core::proof::{self, ProofOptions, ProofTranscript};
use capset_core::{bounds, monomials, Error, Precision};
use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(capset, CapsetError, PyValueError);

fn err(e: Error) -> PyErr {
    CapsetError::new_err(e.to_string())
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for Result<T, Error> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| CapsetError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn field(p: u32) -> PyResult<gf::PrimeField> {
    gf::PrimeField::new(p).py()
}

fn space(p: u32, n: usize) -> PyResult<Space> {
    Space::new(field(p)?, n).py()
}

#[pyclass(name = "PrimeField", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPrimeField(gf::PrimeField);

#[pymethods]
impl PyPrimeField {
    #[new]
    fn new(p: u32) -> PyResult<Self> {
        Ok(Self(field(p)?))
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.modulus()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        gf::field_arith(gf::FieldOp::Add, a, Some(b), self.0).py()
    }

    fn sub(&self, a: u32, b: u32) -> PyResult<u32> {
        gf::field_arith(gf::FieldOp::Sub, a, Some(b), self.0).py()
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        gf::field_arith(gf::FieldOp::Mul, a, Some(b), self.0).py()
    }

    fn neg(&self, a: u32) -> PyResult<u32> {
        gf::field_arith(gf::FieldOp::Neg, a, None, self.0).py()
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        gf::field_arith(gf::FieldOp::Inv, a, None, self.0).py()
    }

    fn pow(&self, a: u32, e: u64) -> PyResult<u32> {
        Ok(self.0.pow(self.0.check(a).py()?, e))
    }

    fn __repr__(&self) -> String {
        format!("PrimeField({})", self.0.modulus())
    }
}

#[pyclass(name = "PointSet", from_py_object)]
#[derive(Clone)]
struct PyPointSet(apsets::PointSet);

#[pymethods]
impl PyPointSet {
    #[new]
    #[pyo3(signature = (p, n, points = Vec::new()))]
    fn new(p: u32, n: usize, points: Vec<Vec<u32>>) -> PyResult<Self> {
        Ok(Self(
            apsets::PointSet::from_coords(&space(p, n)?, &points).py()?,
        ))
    }

    /// Parses the JSON or the `p=<p> n=<n>` text form.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self(apsets::PointSet::parse(text).py()?))
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.space().p()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.space().n()
    }

    fn points(&self) -> Vec<Vec<u32>> {
        self.0.coords()
    }

    fn contains(&self, coords: Vec<u32>) -> PyResult<bool> {
        Ok(self.0.contains(self.0.space().encode(&coords).py()?))
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    /// `(progression_free, witness)` where the witness is `None` or a dict
    /// with points `a`, `b`, `c` satisfying `a + b = 2c`.
    fn is_progression_free<'py>(&self, py: Python<'py>) -> PyResult<(bool, Bound<'py, PyAny>)> {
        let check = apsets::is_progression_free(&self.0);
        Ok((check.progression_free, to_py(py, &check.witness)?))
    }

    /// `(B, C)` with `B = {a + b : a ≠ b}` and `C = {2a}`.
    fn pair_sums(&self) -> (Self, Self) {
        let (b, c) = apsets::pair_sums(&self.0);
        (Self(b), Self(c))
    }

    fn cap_equivalence<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &apsets::cap_equivalence_check(&self.0).py()?)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "PointSet(p={}, n={}, size={})",
            self.p(),
            self.n(),
            self.0.len()
        )
    }
}

#[pyclass(name = "Poly", from_py_object)]
#[derive(Clone)]
struct PyPoly(ReducedPoly);

#[pymethods]
impl PyPoly {
    /// Parses text such as `"3 + 2*x2 + x1^2*x3"`.
    #[staticmethod]
    fn parse(p: u32, n: usize, text: &str) -> PyResult<Self> {
        Ok(Self(ReducedPoly::parse(&space(p, n)?, text).py()?))
    }

    /// The unique reduced polynomial with the given value table, indexed by
    /// `Σ x_i p^i`.
    #[staticmethod]
    fn interpolate(p: u32, n: usize, values: Vec<u32>) -> PyResult<Self> {
        let values = ValueVector::new(&space(p, n)?, values).py()?;
        Ok(Self(funcspace::interpolate(&values)))
    }

    #[staticmethod]
    fn indicator(p: u32, n: usize, point: Vec<u32>) -> PyResult<Self> {
        let s = space(p, n)?;
        let pt = s.point(&point).py()?;
        Ok(Self(funcspace::indicator_poly(&s, &pt).py()?))
    }

    fn evaluate(&self, point: Vec<u32>) -> PyResult<u32> {
        let pt = self.0.space().point(&point).py()?;
        self.0.evaluate(&pt).py()
    }

    fn evaluate_all(&self) -> Vec<u32> {
        self.0.evaluate_all().values().to_vec()
    }

    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    /// `[(exponents, coefficient), ...]` in graded lex order.
    fn terms(&self) -> Vec<(Vec<u32>, u32)> {
        self.0.to_terms().0
    }

    fn zero_set(&self) -> PyPointSet {
        PyPointSet(self.0.zero_set())
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.add(&other.0).py()?))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.sub(&other.0).py()?))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({})", self.0)
    }
}

fn matrix(p: u32, rows: &[Vec<u32>]) -> PyResult<FpMatrix> {
    FpMatrix::from_rows(field(p)?, rows).py()
}

#[pyfunction]
fn rank(p: u32, rows: Vec<Vec<u32>>) -> PyResult<usize> {
    Ok(matrix(p, &rows)?.rank())
}

/// `(rref_rows, pivot_columns)`.
#[pyfunction]
fn rref(p: u32, rows: Vec<Vec<u32>>) -> PyResult<(Vec<Vec<u32>>, Vec<usize>)> {
    let e = matrix(p, &rows)?.rref();
    Ok((e.matrix.to_rows(), e.pivots))
}

#[pyfunction]
fn kernel(p: u32, rows: Vec<Vec<u32>>) -> PyResult<Vec<Vec<u32>>> {
    Ok(matrix(p, &rows)?.kernel_basis())
}

#[pyfunction]
fn solve(p: u32, rows: Vec<Vec<u32>>, b: Vec<u32>) -> PyResult<Option<Vec<u32>>> {
    matrix(p, &rows)?.solve(&b).py()
}

#[pyfunction]
fn row_space_intersection(p: u32, b1: Vec<Vec<u32>>, b2: Vec<Vec<u32>>) -> PyResult<Vec<Vec<u32>>> {
    gf::row_space_intersection(field(p)?, &b1, &b2).py()
}

#[pyfunction]
fn extended_binomial(n: usize, k: usize, m: usize) -> BigUint {
    monomials::extended_binomial(n, k, m)
}

#[pyfunction]
fn dim_l(n: usize, d: usize, p: u32) -> PyResult<BigUint> {
    monomials::dim_l(n, d, field(p)?).py()
}

#[pyfunction]
fn verify_duality(n: usize, p: u32) -> PyResult<bool> {
    Ok(monomials::verify_duality(n, field(p)?))
}

#[pyfunction]
fn exponent_c(p: u32) -> PyResult<f64> {
    Ok(bounds::exponent_c(field(p)?))
}

#[pyfunction]
fn headline_base(p: u32) -> PyResult<f64> {
    Ok(bounds::headline_base(field(p)?))
}

#[pyfunction]
fn main_bound(p: u32, n: usize) -> PyResult<f64> {
    Ok(bounds::main_bound(field(p)?, n))
}

#[pyfunction]
fn hoeffding_bound(t: f64, widths: Vec<f64>) -> PyResult<f64> {
    bounds::hoeffding_bound(t, &widths).py()
}

#[pyfunction]
#[pyo3(signature = (p, n, digits = None))]
fn verify_entropy_lemma(
    py: Python<'_>,
    p: u32,
    n: usize,
    digits: Option<usize>,
) -> PyResult<Bound<'_, PyAny>> {
    let prec = digits.map_or_else(Precision::from_env, Precision::digits);
    to_py(
        py,
        &bounds::verify_entropy_lemma_with(field(p)?, n, prec).py()?,
    )
}

#[pyfunction]
#[pyo3(signature = (p, n, budget = None, threads = None))]
fn max_progression_free(
    py: Python<'_>,
    p: u32,
    n: usize,
    budget: Option<u64>,
    threads: Option<usize>,
) -> PyResult<(usize, bool, PyPointSet)> {
    let mut options = SearchOptions {
        node_budget: budget,
        ..SearchOptions::default()
    };
    if let Some(t) = threads {
        options.threads = t;
    }
    let f = field(p)?;
    let r = py
        .detach(|| apsets::max_progression_free(f, n, &options))
        .py()?;
    Ok((r.best_size, r.optimal, PyPointSet(r.witness)))
}

#[pyfunction]
#[pyo3(signature = (p, n, seed = 0))]
fn greedy_progression_free(p: u32, n: usize, seed: u64) -> PyResult<PyPointSet> {
    Ok(PyPointSet(
        apsets::greedy_progression_free(field(p)?, n, seed).py()?,
    ))
}

/// Runs the construction on `set` and returns the transcript as a dict.
#[pyfunction]
#[pyo3(signature = (set, digits = None))]
fn prove<'py>(
    py: Python<'py>,
    set: &PyPointSet,
    digits: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let options = ProofOptions {
        precision: digits.map_or_else(Precision::from_env, Precision::digits),
        ..ProofOptions::default()
    };
    to_py(py, &proof::run_theorem_main_with(&set.0, &options).py()?)
}

/// Re-checks a transcript given as a JSON string.
#[pyfunction]
#[pyo3(signature = (transcript_json, digits = None))]
fn verify_transcript<'py>(
    py: Python<'py>,
    transcript_json: &str,
    digits: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let t = ProofTranscript::from_json(transcript_json).py()?;
    let prec = digits.map_or_else(Precision::from_env, Precision::digits);
    to_py(py, &proof::verify_transcript(&t, prec).py()?)
}

#[pymodule]
fn capset(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapsetError", m.py().get_type::<CapsetError>())?;
    m.add_class::<PyPrimeField>()?;
    m.add_class::<PyPointSet>()?;
    m.add_class::<PyPoly>()?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(rref, m)?)?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(row_space_intersection, m)?)?;
    m.add_function(wrap_pyfunction!(extended_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(dim_l, m)?)?;
    m.add_function(wrap_pyfunction!(verify_duality, m)?)?;
    m.add_function(wrap_pyfunction!(exponent_c, m)?)?;
    m.add_function(wrap_pyfunction!(headline_base, m)?)?;
    m.add_function(wrap_pyfunction!(main_bound, m)?)?;
    m.add_function(wrap_pyfunction!(hoeffding_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_entropy_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(max_progression_free, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_progression_free, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(verify_transcript, m)?)?;
    Ok(())
}
