//! Exact integers, rationals, smooth factorizations and decimal fixed point.
//!
//! Integers and rationals are the `num` crates' [`BigInt`] and
//! [`BigRational`](num_rational::BigRational); everything else in the crate is
//! written against the aliases exported here.

mod factor;
mod fixed;

pub use factor::{factor_smooth, primes_up_to, Factorization};
pub use fixed::{to_fixed, FixedDec};
pub use num_bigint::BigInt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Normalized rational with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

pub fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), exp as usize)
}

/// Integer power of a rational; negative exponents invert.
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), exp.unsigned_abs() as usize)
    }
}

pub fn binomial(n: u64, k: u64) -> Result<BigInt> {
    if k > n {
        return Err(Error::domain(format!("binomial({n}, {k}): k exceeds n")));
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Rising factorial (alpha)_k = alpha (alpha+1) ... (alpha+k-1), with (alpha)_0 = 1.
pub fn shifted_factorial(alpha: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = alpha.clone();
    for _ in 0..k {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|e| Error::parse(format!("invalid integer {s:?}: {e}")))
}

/// Parses `"p/q"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_bigint(n)?;
            let d = parse_bigint(d)?;
            if d.is_zero() {
                return Err(Error::parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(parse_bigint(s)?)),
    }
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Number of decimal digits of |n| (1 for zero).
pub fn decimal_len(n: &BigInt) -> usize {
    let s = n.abs().to_string();
    s.len()
}
