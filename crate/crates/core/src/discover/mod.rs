//! Search for new series: admissible `(m, p, a)` from Gaussian-integer roots,
//! high-precision moment sums `s(j) = sum_n n^j / (C(mn, pn) a^n)`, and integer
//! relations between the moments and π by lattice reduction.

mod lll;

pub use lll::{dot, lll_reduce, lll_reduce_with_transform, LatticeBasis};

use std::fmt;

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evalnum::{eval_formula, pi_reference, Formula, Provenance};
use crate::exactnum::{rat, BigInt, FixedDec, Rational};

type Gaussian = Complex<BigInt>;

/// The two points at which `x^p (1-x)^(m-p)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WitnessRoot {
    I,
    OnePlusI,
}

impl WitnessRoot {
    pub fn value(self) -> Gaussian {
        match self {
            WitnessRoot::I => Complex::new(BigInt::zero(), BigInt::one()),
            WitnessRoot::OnePlusI => Complex::new(BigInt::one(), BigInt::one()),
        }
    }
}

impl fmt::Display for WitnessRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessRoot::I => "i",
            WitnessRoot::OnePlusI => "1+i",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateParams {
    pub m: u32,
    pub p: u32,
    pub a: BigInt,
    pub witness_root: WitnessRoot,
}

/// `x^p (1-x)^(m-p)` in exact Gaussian-integer arithmetic.
pub fn weight_at(m: u32, p: u32, x: &Gaussian) -> Gaussian {
    let one_minus = Complex::new(BigInt::one(), BigInt::zero()) - x;
    num_traits::pow(x.clone(), p as usize) * num_traits::pow(one_minus, (m - p) as usize)
}

impl CandidateParams {
    /// Re-evaluates the weight at the witness root.
    pub fn is_sound(&self) -> bool {
        0 < self.p
            && self.p < self.m
            && !self.a.is_zero()
            && weight_at(self.m, self.p, &self.witness_root.value())
                == Complex::new(self.a.clone(), BigInt::zero())
    }
}

impl fmt::Display for CandidateParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} p={} a={} (root {})",
            self.m, self.p, self.a, self.witness_root
        )
    }
}

/// All `(m, p, a)` with `m <= max_m` whose weight takes a nonzero real value at
/// `i` or `1 + i`, sorted by `(m, p, a)`; a triple reachable from both roots is
/// listed once, with the root `i`.
pub fn enumerate_candidates(max_m: u32) -> Result<Vec<CandidateParams>> {
    if max_m < 3 {
        return Err(Error::domain("max_m must be at least 3"));
    }
    let mut out: Vec<CandidateParams> = Vec::new();
    for m in 2..=max_m {
        for p in 1..m {
            for root in [WitnessRoot::I, WitnessRoot::OnePlusI] {
                let v = weight_at(m, p, &root.value());
                if v.im.is_zero()
                    && !v.re.is_zero()
                    && !out.iter().any(|c| c.m == m && c.p == p && c.a == v.re)
                {
                    out.push(CandidateParams {
                        m,
                        p,
                        a: v.re,
                        witness_root: root,
                    });
                }
            }
        }
    }
    out.sort_by(|x, y| (x.m, x.p, &x.a).cmp(&(y.m, y.p, &y.a)));
    Ok(out)
}

/// Moment sums `s(0..=jmax)`, each rounded to `digits` places.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    pub m: u32,
    pub p: u32,
    pub a: BigInt,
    pub digits: u32,
    pub values: Vec<FixedDec>,
}

/// `n^j` as a formula with `r = 1`, so that evaluation gives `s(j)`.
fn moment_formula(m: u32, p: u32, a: &BigInt, j: usize) -> Result<Formula> {
    let mut s = vec![BigInt::zero(); j + 1];
    s[j] = BigInt::one();
    Formula::new(m, p, a.clone(), BigInt::one(), s, Provenance::Imported)
}

/// Moments via the binary-splitting evaluator, with its proven tail bound.
pub fn moments(m: u32, p: u32, a: &BigInt, jmax: usize, digits: u32) -> Result<MomentVector> {
    let values: Result<Vec<FixedDec>> = (0..=jmax)
        .into_par_iter()
        .map(|j| eval_formula(&moment_formula(m, p, a, j)?, digits))
        .collect();
    Ok(MomentVector {
        m,
        p,
        a: a.clone(),
        digits,
        values: values?,
    })
}

/// Knapsack lattice `[I | round(10^D v)]` for `v = (s(0), ..., s(deg), π)`.
pub fn relation_lattice(moments: &MomentVector, pi: &FixedDec) -> Result<LatticeBasis> {
    let targets: Vec<BigInt> = moments
        .values
        .iter()
        .chain(std::iter::once(pi))
        .map(|v| v.rescale(moments.digits).mantissa)
        .collect();
    let n = targets.len();
    LatticeBasis::new(
        targets
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                let mut row = vec![BigInt::zero(); n + 1];
                row[i] = BigInt::one();
                row[n] = t;
                row
            })
            .collect(),
    )
}

/// Reads `sum c_j s(j) + c_pi π = 0` off a lattice vector as a formula for π.
fn formula_from_vector(m: u32, p: u32, a: &BigInt, coeffs: &[BigInt]) -> Option<Formula> {
    let (c_pi, c_s) = coeffs.split_last()?;
    if c_pi.is_zero() {
        return None;
    }
    let g = coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if c_pi.is_negative() {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let mut s: Vec<BigInt> = c_s.iter().map(|c| c * &sign / &g).collect();
    while s.last().is_some_and(Zero::is_zero) {
        s.pop();
    }
    Formula::new(m, p, a.clone(), c_pi.abs() / &g, s, Provenance::Discovered).ok()
}

/// Floor on the validation exponent; below it small spurious relations can
/// agree with π to the requested accuracy.
pub const MIN_VALIDATION_DIGITS: u32 = 12;

/// Accepts a candidate only if it matches π to within `10^(-1.5 D)`, evaluated
/// at `2D` digits, with the exponent floored at [`MIN_VALIDATION_DIGITS`].
pub fn validate_relation(f: &Formula, digits: u32) -> Result<bool> {
    let bound = (3 * digits).div_ceil(2).max(MIN_VALIDATION_DIGITS);
    let check = (2 * digits).max(bound + 5);
    let residual = eval_formula(f, check)?.sub(&pi_reference(check)?);
    Ok(residual.abs_below_pow10(-i64::from(bound)))
}

/// Integer relation between `s(0..=degree)` and π found at `digits` digits.
/// Returns `None` when no reduced vector survives validation at `2 * digits`.
pub fn find_relation(
    m: u32,
    p: u32,
    a: &BigInt,
    degree: usize,
    digits: u32,
) -> Result<Option<Formula>> {
    if degree < 1 {
        return Err(Error::domain("degree must be at least 1"));
    }
    if !(0 < p && p < m) || a.is_zero() {
        return Err(Error::domain("need 0 < p < m and a != 0"));
    }
    let mv = moments(m, p, a, degree, digits)?;
    let pi = pi_reference(digits)?;
    let lattice = relation_lattice(&mv, &pi)?;
    let reduced = lll_reduce(&lattice, &rat(99, 100))?;
    let width = degree + 2;
    for row in reduced.rows() {
        if let Some(f) = formula_from_vector(m, p, a, &row[..width]) {
            if validate_relation(&f, digits)? {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

/// `r` split over primes below `m`, the heuristic sanity check on discovered
/// denominators.
pub fn denominator_smoothness(f: &Formula) -> Result<crate::exactnum::Factorization> {
    crate::exactnum::factor_smooth(&f.r, u64::from(f.m).max(2))
}

/// Exact value of the first `count` terms of `s(j)`, for cross-checks.
pub fn moment_partial(m: u32, p: u32, a: &BigInt, j: usize, count: u64) -> Result<Rational> {
    let f = moment_formula(m, p, a, j)?;
    Ok(crate::evalnum::partial_sum(&f, count))
}
