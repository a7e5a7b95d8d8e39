use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u32),
    #[error("modulus {0} exceeds the supported range (p < 65536)")]
    ModulusTooLarge(u32),
    #[error("element {0} is not invertible")]
    NotInvertible(u32),
    #[error("element {value} out of range for modulus {modulus}")]
    ElementOutOfRange { value: u32, modulus: u32 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ambient space {p}^{n} exceeds the supported size {limit}")]
    SizeCeiling { p: u32, n: usize, limit: usize },
    #[error("degree {d} out of range [0, {max}]")]
    DegreeOutOfRange { d: usize, max: usize },
    #[error("exponent {exponent} exceeds p-1 = {max}")]
    ExponentOutOfRange { exponent: u32, max: u32 },
    #[error("point index {index} out of range for {p}^{n}")]
    PointOutOfRange { index: usize, p: u32, n: usize },
    #[error("lemma requires 3 | n (got n = {0})")]
    NotMultipleOfThree(usize),
    #[error("degenerate ranges: all widths are zero with t > 0")]
    DegenerateRanges,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degree hypothesis violated: coefficient at row {row}, column {col} has both degrees above {d}")]
    DegreeHypothesisViolated { row: usize, col: usize, d: usize },
    #[error("equivalence specific to p=3 (got p = {0})")]
    CapEquivalenceRequiresThree(u32),
    #[error("set is not progression-free: {a:?} + {b:?} = 2 * {c:?}")]
    NotProgressionFree {
        a: Vec<u32>,
        b: Vec<u32>,
        c: Vec<u32>,
    },
    #[error("hypothesis violated at pair ({a:?}, {b:?}): f(a+b) = {value}")]
    HypothesisViolated {
        a: Vec<u32>,
        b: Vec<u32>,
        value: u32,
    },
    #[error("V trivial; theorem conclusion immediate")]
    TrivialV,
    #[error("parse error: {0}")]
    Parse(String),
}
