//! Exact rational scalars.
//!
//! Every scalar in the crate is a [`Rat`] (an arbitrary-precision rational),
//! so order comparisons, suprema, and infima are exact. No floating point
//! appears anywhere in the calculus.

use alloc::string::ToString;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`; use [`parse_rat`] for untrusted input.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"p/q"` or a plain integer string (optional leading sign).
pub fn parse_rat(text: &str) -> Result<Rat> {
    let trimmed = text.trim();
    if let Some((num, den)) = trimmed.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| Error::Parse {
            position: 0,
            message: alloc::format!("invalid numerator `{num}`"),
        })?;
        let d: BigInt = den.trim().parse().map_err(|_| Error::Parse {
            position: 0,
            message: alloc::format!("invalid denominator `{den}`"),
        })?;
        if d.is_zero() {
            return Err(Error::Parse {
                position: 0,
                message: "zero denominator".to_string(),
            });
        }
        Ok(Rat::new(n, d))
    } else {
        let n: BigInt = trimmed.parse().map_err(|_| Error::Parse {
            position: 0,
            message: alloc::format!("invalid rational `{trimmed}`"),
        })?;
        Ok(Rat::from_integer(n))
    }
}

/// `max(a, b)` by exact comparison.
pub fn max(a: &Rat, b: &Rat) -> Rat {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// `min(a, b)` by exact comparison.
pub fn min(a: &Rat, b: &Rat) -> Rat {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Positive part `a ∨ 0`.
pub fn pos(a: &Rat) -> Rat {
    if a.is_positive() {
        a.clone()
    } else {
        Rat::zero()
    }
}

/// Negative part `(−a) ∨ 0`.
pub fn neg(a: &Rat) -> Rat {
    if a.is_negative() {
        -a.clone()
    } else {
        Rat::zero()
    }
}
