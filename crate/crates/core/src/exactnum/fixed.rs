use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{pow10, Rational};
use crate::error::{Error, Result};

/// Decimal fixed point: `mantissa * 10^-scale`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixedDec {
    pub mantissa: BigInt,
    pub scale: u32,
}

/// Rounds `q` to `scale` decimal places, halves away from zero.
pub fn to_fixed(q: &Rational, scale: u32) -> FixedDec {
    let scaled = q.numer() * pow10(scale);
    let den = q.denom();
    let (quot, rem) = scaled.abs().div_rem(den);
    let mut mag = quot;
    if rem * 2u32 >= *den {
        mag += 1u32;
    }
    let mantissa = if scaled.is_negative() { -mag } else { mag };
    FixedDec { mantissa, scale }
}

impl FixedDec {
    pub fn zero(scale: u32) -> Self {
        FixedDec {
            mantissa: BigInt::zero(),
            scale,
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), pow10(self.scale))
    }

    /// Re-rounds to a different number of places (exact when widening).
    pub fn rescale(&self, scale: u32) -> FixedDec {
        if scale >= self.scale {
            FixedDec {
                mantissa: &self.mantissa * pow10(scale - self.scale),
                scale,
            }
        } else {
            to_fixed(&self.to_rational(), scale)
        }
    }

    pub fn abs(&self) -> FixedDec {
        FixedDec {
            mantissa: self.mantissa.abs(),
            scale: self.scale,
        }
    }

    /// Exact difference at the larger of the two scales.
    pub fn sub(&self, other: &FixedDec) -> FixedDec {
        let scale = self.scale.max(other.scale);
        let a = self.rescale(scale);
        let b = other.rescale(scale);
        FixedDec {
            mantissa: a.mantissa - b.mantissa,
            scale,
        }
    }

    /// True iff `|self| < 10^exponent`.
    pub fn abs_below_pow10(&self, exponent: i64) -> bool {
        let lhs = self.mantissa.abs();
        // |m| * 10^-s < 10^e  <=>  |m| < 10^(e+s)
        let shift = exponent + i64::from(self.scale);
        if shift < 0 {
            return lhs.is_zero();
        }
        lhs < pow10(shift as u32)
    }

    /// Rough base-10 magnitude, `None` for zero.
    pub fn log10_approx(&self) -> Option<f64> {
        if self.mantissa.is_zero() {
            return None;
        }
        let digits = self.mantissa.abs().to_string();
        let lead: f64 = digits[..digits.len().min(15)].parse().unwrap_or(1.0);
        let lead_len = digits.len().min(15) as f64;
        Some(lead.log10() + (digits.len() as f64 - lead_len) - f64::from(self.scale))
    }

    /// The digits after the decimal point, zero padded to `scale`.
    pub fn fraction_digits(&self) -> String {
        let s = self.to_string();
        match s.split_once('.') {
            Some((_, frac)) => frac.to_string(),
            None => String::new(),
        }
    }

    pub fn integer_part(&self) -> BigInt {
        let (q, _) = self.mantissa.abs().div_rem(&pow10(self.scale));
        if self.mantissa.is_negative() {
            -q
        } else {
            q
        }
    }
}

impl PartialOrd for FixedDec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FixedDec {
    fn cmp(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        self.rescale(scale)
            .mantissa
            .cmp(&other.rescale(scale).mantissa)
    }
}

impl fmt::Display for FixedDec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.abs().to_string();
        let sign = if self.mantissa.sign() == Sign::Minus {
            "-"
        } else {
            ""
        };
        let scale = self.scale as usize;
        if scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let padded = if digits.len() <= scale {
            format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int_part, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{sign}{int_part}.{frac}")
    }
}

impl FromStr for FixedDec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac) = body.split_once('.').unwrap_or((body, ""));
        let valid = |p: &str| p.chars().all(|c| c.is_ascii_digit());
        if int_part.is_empty() || !valid(int_part) || !valid(frac) {
            return Err(Error::parse(format!("invalid decimal {s:?}")));
        }
        let mag: BigInt = format!("{int_part}{frac}")
            .parse()
            .map_err(|_| Error::parse(format!("invalid decimal {s:?}")))?;
        Ok(FixedDec {
            mantissa: if neg { -mag } else { mag },
            scale: frac.len() as u32,
        })
    }
}
