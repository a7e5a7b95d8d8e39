//! Exact computations behind the polynomial-method bound on progression-free
//! subsets of Z_p^n for odd primes p.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf`]: GF(p) arithmetic, points of F_p^n, dense matrices over GF(p).
//! - [`monomials`]: the monomial basis of L_n and exact `dim L_{n,d}`.
//! - [`bounds`]: the exponent `c(p) = 1 - 1/(18 ln p)`, Hoeffding tails, and
//!   exact finite checks of the dimension estimate.
//! - [`funcspace`]: reduced polynomials, evaluation and interpolation, and
//!   the coefficient matrix of `f(x + y)`.
//! - [`apsets`]: progression-free sets, their sumsets, and extremal search.
//! - [`proof`]: runs the bound's construction on a concrete set and records
//!   every (in)equality in a checkable transcript.

pub mod apsets;
pub mod bounds;
mod error;
pub mod funcspace;
pub mod gf;
pub mod monomials;
mod precision;
pub mod proof;
mod serde_big;

pub use error::{Error, Result};
pub use precision::{Precision, Real};
