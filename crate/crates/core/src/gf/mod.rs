//! Prime-field arithmetic, points of F_p^n, and dense exact linear algebra
//! over GF(p).

mod field;
mod matrix;
mod space;

pub use field::{field_arith, FieldOp, PrimeField};
pub use matrix::{row_space_intersection, Echelon, FpMatrix};
pub use space::{Point, Space};
