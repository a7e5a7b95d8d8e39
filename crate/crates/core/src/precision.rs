use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision for real-valued comparisons, in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    digits: usize,
}

impl Precision {
    pub const DEFAULT_DIGITS: usize = 30;
    pub const ENV_VAR: &'static str = "CAPSET_PRECISION";

    pub fn digits(digits: usize) -> Self {
        Self {
            digits: digits.max(Self::DEFAULT_DIGITS),
        }
    }

    /// Reads `CAPSET_PRECISION`, falling back to the default. Requests below
    /// 30 digits are raised to 30.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map_or_else(Self::default, Self::digits)
    }

    pub fn decimal_digits(self) -> usize {
        self.digits
    }

    /// Binary precision with a 64-bit guard.
    pub(crate) fn bits(self) -> usize {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

/// Arbitrary-precision real used for `c(p)`, logarithms, and `p^{cn}`.
#[derive(Clone)]
pub struct Real {
    value: BigFloat,
    bits: usize,
}

impl Real {
    pub fn from_u64(x: u64, prec: Precision) -> Self {
        let bits = prec.bits();
        Self {
            value: BigFloat::from_u64(x, bits),
            bits,
        }
    }

    pub fn from_biguint(x: &BigUint, prec: Precision) -> Self {
        let bits = prec.bits().max(x.bits() as usize + 64);
        let value =
            with_consts(|cc| BigFloat::parse(&x.to_str_radix(10), Radix::Dec, bits, RM, cc));
        Self { value, bits }
    }

    pub fn from_f64(x: f64, prec: Precision) -> Self {
        let bits = prec.bits();
        Self {
            value: BigFloat::from_f64(x, bits),
            bits,
        }
    }

    pub fn parse(s: &str, prec: Precision) -> Option<Self> {
        let bits = prec.bits();
        let value = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, bits, RM, cc));
        (!value.is_nan()).then_some(Self { value, bits })
    }

    fn wrap(&self, value: BigFloat) -> Self {
        Self {
            value,
            bits: self.bits,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.wrap(self.value.add(&rhs.value, self.bits, RM))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.wrap(self.value.sub(&rhs.value, self.bits, RM))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.wrap(self.value.mul(&rhs.value, self.bits, RM))
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.wrap(self.value.div(&rhs.value, self.bits, RM))
    }

    pub fn ln(&self) -> Self {
        self.wrap(with_consts(|cc| self.value.ln(self.bits, RM, cc)))
    }

    pub fn exp(&self) -> Self {
        self.wrap(with_consts(|cc| self.value.exp(self.bits, RM, cc)))
    }

    pub fn pow(&self, exponent: &Self) -> Self {
        self.wrap(with_consts(|cc| {
            self.value.pow(&exponent.value, self.bits, RM, cc)
        }))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    pub fn is_nan(&self) -> bool {
        self.value.is_nan()
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|s| s.cmp(&0))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match with_consts(|cc| self.value.format(Radix::Dec, RM, cc)) {
            Ok(s) => f.write_str(&s),
            Err(_) => f.write_str("NaN"),
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({self})")
    }
}
