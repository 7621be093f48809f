//! Small helpers around `BigRational`: parsing, exact floor/ceil, dyadic rounding.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

/// Parses `"num/den"` or a bare integer. Decimal points are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected \"num/den\", got {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Canonical `"num/den"` string (always with a denominator).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

pub fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// Largest `m / 2^bits` that is `<= r`.
pub fn round_down(r: &Rational, bits: u32) -> Rational {
    BigRational::new(floor(&(r * int(pow2(bits)))), pow2(bits))
}

/// Smallest `m / 2^bits` that is `>= r`.
pub fn round_up(r: &Rational, bits: u32) -> Rational {
    BigRational::new(ceil(&(r * int(pow2(bits)))), pow2(bits))
}

/// `floor(log2(r))` for `r > 0`, exact.
pub fn floor_log2(r: &Rational) -> i64 {
    assert!(r.is_positive());
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let mut k = n.bits() as i64 - d.bits() as i64;
    // 2^k <= r < 2^(k+1) after adjustment
    let ge = |k: i64| -> bool {
        if k >= 0 {
            n >= &(d << k as usize)
        } else {
            (n << (-k) as usize) >= *d
        }
    };
    while !ge(k) {
        k -= 1;
    }
    while ge(k + 1) {
        k += 1;
    }
    k
}

/// Integer n-th root, rounded down.
pub fn nth_root_floor(x: &BigUint, n: u32) -> BigUint {
    x.nth_root(n)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}

pub fn biguint_of(r: &BigInt) -> Option<BigUint> {
    match r.sign() {
        Sign::Minus => None,
        _ => Some(r.magnitude().clone()),
    }
}

/// Converts a nonnegative integer rational to `u128` when it fits.
pub fn to_u128(r: &BigInt) -> Option<u128> {
    r.to_u128()
}
