use num_traits::One;

use crate::exactnum::{BigInt, Rational};

/// Accumulators of binary splitting over a range `[n0, n1)` of a series
/// `sum_n c(n) prod_{i<=n} p(i)/q(i)`:
/// `p = prod p(i)`, `q = prod q(i)`, and `t / q` is the partial sum divided by
/// the product of ratios before `n0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPair {
    pub p: BigInt,
    pub q: BigInt,
    pub t: BigInt,
}

impl SplitPair {
    fn leaf(p: BigInt, q: BigInt, c: BigInt) -> Self {
        SplitPair { t: c * &p, p, q }
    }

    /// Joins `[n0, mid)` with `[mid, n1)`.
    pub fn combine(left: SplitPair, right: SplitPair) -> SplitPair {
        SplitPair {
            t: left.t * &right.q + &left.p * right.t,
            p: left.p * right.p,
            q: left.q * right.q,
        }
    }

    /// `t / q`, the exact sum over the range when it starts at 0.
    pub fn value(&self) -> Rational {
        Rational::new(self.t.clone(), self.q.clone())
    }
}

/// Per-index data `(p(n), q(n), c(n))`.
pub trait Series: Sync {
    fn term(&self, n: u64) -> (BigInt, BigInt, BigInt);
}

const PARALLEL_CUTOFF: u64 = 512;

/// Binary splitting over `[n0, n1)`; `n1 > n0`. Halves are evaluated in
/// parallel above a size threshold, which leaves the exact result unchanged.
pub fn split<S: Series + ?Sized>(series: &S, n0: u64, n1: u64) -> SplitPair {
    debug_assert!(n1 > n0);
    if n1 - n0 == 1 {
        let (p, q, c) = series.term(n0);
        return SplitPair::leaf(p, q, c);
    }
    let mid = n0 + (n1 - n0) / 2;
    let (left, right) = if n1 - n0 >= PARALLEL_CUTOFF {
        rayon::join(|| split(series, n0, mid), || split(series, mid, n1))
    } else {
        (split(series, n0, mid), split(series, mid, n1))
    };
    SplitPair::combine(left, right)
}

/// Exact sum of the first `count` terms.
pub fn sum_terms<S: Series + ?Sized>(series: &S, count: u64) -> Rational {
    if count == 0 {
        return Rational::from_integer(BigInt::from(0));
    }
    split(series, 0, count).value()
}

/// `atan(1/x) = (1/x) sum_n (-1)^n / ((2n+1) x^(2n))`.
pub(crate) struct ArctanInverse {
    pub x: i64,
}

impl Series for ArctanInverse {
    fn term(&self, n: u64) -> (BigInt, BigInt, BigInt) {
        if n == 0 {
            return (BigInt::one(), BigInt::one(), BigInt::one());
        }
        let n = n as i64;
        // t_n / t_{n-1} = -(2n-1) / ((2n+1) x^2)
        (
            BigInt::from(-(2 * n - 1)),
            BigInt::from(2 * n + 1) * BigInt::from(self.x) * BigInt::from(self.x),
            BigInt::one(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use num_traits::Zero;

    #[test]
    fn arctan_partial_sums() {
        let s = ArctanInverse { x: 5 };
        // 1 - 1/75 + 1/3125
        assert_eq!(sum_terms(&s, 3), rat(1, 1) - rat(1, 75) + rat(1, 3125));
        assert!(sum_terms(&s, 0).is_zero());
    }

    #[test]
    fn combine_is_associative() {
        let s = ArctanInverse { x: 7 };
        let a = split(&s, 0, 3);
        let b = split(&s, 3, 5);
        let c = split(&s, 5, 9);
        let left = SplitPair::combine(SplitPair::combine(a.clone(), b.clone()), c.clone());
        let right = SplitPair::combine(a, SplitPair::combine(b, c));
        assert_eq!(left, right);
        assert_eq!(left, split(&s, 0, 9));
    }
}
