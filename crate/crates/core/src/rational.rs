//! Exact rational arithmetic helpers.
//!
//! Knife-edge set memberships and refutation gaps (such as `5/132`) must not
//! depend on rounding, so everything that can be exact is carried as a
//! [`num_rational::BigRational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, the exact number type used throughout.
pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Floor of a rational as a `BigInt`.
pub fn floor_int(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Parse an exact ratio from `"p/q"`, an integer string, or a decimal string.
///
/// Decimal strings denote exact rationals over a power of ten, so `"0.55"`
/// parses as `11/20`. This keeps knife-edge membership tests faithful to what
/// the user actually typed.
pub fn parse_ratio(s: &str) -> Result<Rat> {
    let s = s.trim();
    let err = || Error::RatioParse {
        input: s.to_string(),
    };
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.trim_start().starts_with('-');
        let i: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| err())?
        };
        let f: BigInt = frac_part.parse().map_err(|_| err())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = Rat::new(i.abs() * &scale + f, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rat::from_integer(n))
}

/// Exact rational value of a finite `f64` (every finite float is dyadic).
pub fn from_f64_exact(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// True iff `r` equals `2^-k` for some positive integer `k`.
pub fn is_dyadic_unit_fraction(r: &Rat) -> bool {
    if !r.is_positive() || r >= &Rat::one() {
        return false;
    }
    if !r.numer().is_one() {
        return false;
    }
    // Denominator must be a power of two.
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    while d.is_even() {
        d /= &two;
    }
    d.is_one()
}

/// Least common multiple of two positive integers.
pub fn lcm_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Render as `"p/q"` (or `"p"` for integers).
pub fn format_ratio(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
