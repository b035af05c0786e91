//! Exact integer and rational helpers shared by every route.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInt = BigInt;
/// Arbitrary-precision rational in canonical form.
pub type ExactRat = BigRational;

/// `n!`.
pub fn factorial(n: u64) -> ExactInt {
    (2..=n).fold(ExactInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient `C(a, b)`, zero when `b < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> ExactInt {
    if b < 0 || a < 0 || b > a {
        return ExactInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = ExactInt::one();
    for i in 0..b {
        // exact at every step: acc = C(a, i) * (a - i) / (i + 1) = C(a, i + 1)
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

/// `m!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> Result<ExactInt> {
    if m < -1 {
        return Err(domain(format!("double factorial undefined for {m}")));
    }
    let mut acc = ExactInt::one();
    let mut i = m;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    Ok(acc)
}

/// `base^exp` for a small nonnegative base.
pub fn upow(base: u64, exp: u64) -> ExactInt {
    num_traits::pow(ExactInt::from(base), exp as usize)
}

/// `(-1)^k` as an i32.
pub fn sign_pow(k: u64) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Unwraps a rational that must be an integer.
pub fn into_integer(value: ExactRat, what: impl FnOnce() -> String) -> Result<ExactInt> {
    if value.denom().is_one() {
        Ok(value.numer().clone())
    } else {
        Err(Error::Consistency(format!(
            "{} is not an integer: {}/{}",
            what(),
            value.numer(),
            value.denom()
        )))
    }
}

/// Exactly divides `num` by `den`, failing if the division leaves a remainder.
pub fn exact_div(
    num: &ExactInt,
    den: &ExactInt,
    what: impl FnOnce() -> String,
) -> Result<ExactInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::Consistency(format!(
            "{}: {num} not divisible by {den}",
            what()
        )))
    }
}

/// Number of significant bits of `|v|`.
pub fn bit_len(v: &ExactInt) -> u64 {
    v.abs().bits()
}
