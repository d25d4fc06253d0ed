use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Trial-division factorization over primes up to a bound.
///
/// `factors` holds `(prime, exponent)` with strictly increasing primes;
/// `cofactor` is whatever did not split off (1 when fully factored).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigInt, u32)>,
    pub cofactor: BigInt,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn exponent_of(&self, prime: u64) -> u32 {
        let p = BigInt::from(prime);
        self.factors
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |(_, e)| *e)
    }

    /// Product of all prime powers times the cofactor.
    pub fn value(&self) -> BigInt {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| {
                acc * num_traits::pow(p.clone(), *e as usize)
            })
    }

    /// Builds a factorization from `(prime, exponent)` pairs, e.g. a table row.
    pub fn from_pairs(pairs: &[(u64, u32)]) -> Self {
        let mut factors: Vec<(BigInt, u32)> = pairs
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|&(p, e)| (BigInt::from(p), e))
            .collect();
        factors.sort();
        Factorization {
            factors,
            cofactor: BigInt::one(),
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        if !self.cofactor.is_one() || parts.is_empty() {
            parts.push(self.cofactor.to_string());
        }
        f.write_str(&parts.join(" · "))
    }
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i as u64))
        .collect()
}

/// Splits off every prime `<= bound` from `|n|`.
pub fn factor_smooth(n: &BigInt, bound: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor zero"));
    }
    if bound < 2 {
        return Err(Error::domain(format!("factor bound {bound} is below 2")));
    }
    let mut rest = n.abs();
    let mut factors = Vec::new();
    for p in primes_up_to(bound) {
        let p = BigInt::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        if rest.is_one() {
            break;
        }
    }
    Ok(Factorization {
        factors,
        cofactor: rest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_prime_naive(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn smooth_number_splits_completely() {
        let f = factor_smooth(&BigInt::from(11025), 100).unwrap();
        assert_eq!(f, Factorization::from_pairs(&[(3, 2), (5, 2), (7, 2)]));
        assert_eq!(f.to_string(), "3^2 · 5^2 · 7^2");
    }

    #[test]
    fn unit_has_empty_factorization() {
        let f = factor_smooth(&BigInt::one(), 100).unwrap();
        assert!(f.factors.is_empty());
        assert!(f.is_complete());
    }

    #[test]
    fn large_prime_stays_in_cofactor() {
        let n = 2_000_000_033u64;
        assert!(is_prime_naive(n));
        let f = factor_smooth(&BigInt::from(n), 10).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.cofactor, BigInt::from(n));
    }

    #[test]
    fn zero_and_tiny_bound_are_rejected() {
        assert!(factor_smooth(&BigInt::zero(), 10).is_err());
        assert!(factor_smooth(&BigInt::from(12), 1).is_err());
    }

    #[test]
    fn sieve_matches_naive_primality() {
        let sieve = primes_up_to(500);
        let naive: Vec<u64> = (0..=500).filter(|&n| is_prime_naive(n)).collect();
        assert_eq!(sieve, naive);
    }

    proptest! {
        #[test]
        fn reconstruction_recovers_magnitude(v in any::<i64>().prop_filter("nonzero", |v| *v != 0),
                                             bound in 2u64..200) {
            let n = BigInt::from(v);
            let f = factor_smooth(&n, bound).unwrap();
            prop_assert_eq!(f.value(), n.abs());
            prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }
}
