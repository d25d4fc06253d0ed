use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{BigInt, Rational};

/// Integer lattice given by its basis rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || dim == 0 {
            return Err(Error::domain("empty lattice basis"));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::domain("basis rows differ in length"));
        }
        Ok(LatticeBasis { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `num / den` (`den > 0`), halves rounded up.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    (num * BigInt::from(2) + den).div_floor(&(den * BigInt::from(2)))
}

/// Reduction state with 1-based indices; index 0 of `b`, `h` and `lam` is unused
/// and `d[0] = 1`.
struct Reducer {
    b: Vec<Vec<BigInt>>,
    h: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl Reducer {
    fn red(&mut self, k: usize, l: usize) {
        if (&self.lam[k][l] * BigInt::from(2)).abs() <= self.d[l] {
            return;
        }
        let q = round_div(&self.lam[k][l], &self.d[l]);
        let (bl, hl) = (self.b[l].clone(), self.h[l].clone());
        for (v, w) in self.b[k].iter_mut().zip(&bl) {
            *v -= &q * w;
        }
        for (v, w) in self.h[k].iter_mut().zip(&hl) {
            *v -= &q * w;
        }
        let dl = self.d[l].clone();
        self.lam[k][l] -= &q * dl;
        for i in 1..l {
            let li = self.lam[l][i].clone();
            self.lam[k][i] -= &q * li;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        self.h.swap(k, k - 1);
        for j in 1..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let big_b = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&big_b * &t + &lam * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = big_b;
    }
}

/// Exact integral LLL reduction with parameter `delta`; returns the reduced
/// basis and the unimodular matrix `H` with `reduced = H * original`.
pub fn lll_reduce_with_transform(
    basis: &LatticeBasis,
    delta: &Rational,
) -> Result<(LatticeBasis, Vec<Vec<BigInt>>)> {
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta >= Rational::one() {
        return Err(Error::domain("delta must lie strictly between 1/4 and 1"));
    }
    let (dp, dq) = (delta.numer().clone(), delta.denom().clone());
    let n = basis.len();
    let mut r = Reducer {
        b: std::iter::once(Vec::new())
            .chain(basis.rows.iter().cloned())
            .collect(),
        h: std::iter::once(Vec::new())
            .chain((0..n).map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            }))
            .collect(),
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    r.d[0] = BigInt::one();
    r.d[1] = dot(&r.b[1], &r.b[1]);
    if r.d[1].is_zero() {
        return Err(Error::domain("basis rows are linearly dependent"));
    }
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&r.b[k], &r.b[j]);
                for i in 1..j {
                    u = (&r.d[i] * u - &r.lam[k][i] * &r.lam[j][i]) / &r.d[i - 1];
                }
                if j < k {
                    r.lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::domain("basis rows are linearly dependent"));
                    }
                    r.d[k] = u;
                }
            }
        }
        loop {
            r.red(k, k - 1);
            let lhs = &dq * &r.d[k] * &r.d[k - 2];
            let rhs = &dp * &r.d[k - 1] * &r.d[k - 1] - &dq * &r.lam[k][k - 1] * &r.lam[k][k - 1];
            if lhs < rhs {
                r.swap(k, kmax);
                k = (k - 1).max(2);
            } else {
                for l in (1..k - 1).rev() {
                    r.red(k, l);
                }
                k += 1;
                break;
            }
        }
    }
    r.b.remove(0);
    r.h.remove(0);
    Ok((LatticeBasis { rows: r.b }, r.h))
}

pub fn lll_reduce(basis: &LatticeBasis, delta: &Rational) -> Result<LatticeBasis> {
    lll_reduce_with_transform(basis, delta).map(|(b, _)| b)
}
