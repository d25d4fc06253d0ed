//! High-precision evaluation of `(1/r) sum_n S(n) / (C(mn, pn) a^n)` by binary
//! splitting, an independent arctangent reference for π, and numeric
//! certification of formulas against it.

pub mod known;
mod split;

pub use split::{split, sum_terms, Series, SplitPair};

use std::fmt;
use std::sync::RwLock;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, to_fixed, BigInt, FixedDec, Rational};
use crate::polyring::Poly;

/// Where a formula came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Solved from the linear system for parameter `k`.
    Proven(u32),
    /// Found by lattice reduction.
    Discovered,
    Imported,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Proven(k) => write!(f, "proven k={k}"),
            Provenance::Discovered => f.write_str("discovered"),
            Provenance::Imported => f.write_str("imported"),
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "discovered" => Ok(Provenance::Discovered),
            "imported" => Ok(Provenance::Imported),
            _ => s
                .strip_prefix("proven k=")
                .and_then(|k| k.parse().ok())
                .map(Provenance::Proven)
                .ok_or_else(|| Error::parse(format!("unknown provenance '{s}'"))),
        }
    }
}

/// A series `π = (1/r) sum_n S(n) / (C(mn, pn) a^n)` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub m: u32,
    pub p: u32,
    pub a: BigInt,
    pub r: BigInt,
    pub s_int: Vec<BigInt>,
    pub provenance: Provenance,
}

impl Formula {
    pub fn new(
        m: u32,
        p: u32,
        a: BigInt,
        r: BigInt,
        s_int: Vec<BigInt>,
        provenance: Provenance,
    ) -> Result<Self> {
        if !(0 < p && p < m) {
            return Err(Error::domain(format!("need 0 < p < m, got m={m}, p={p}")));
        }
        if a.is_zero() {
            return Err(Error::domain("a must be nonzero"));
        }
        if !r.is_positive() {
            return Err(Error::domain("r must be positive"));
        }
        if s_int.last().is_none_or(Zero::is_zero) {
            return Err(Error::domain(
                "S must be nonempty with a nonzero leading coefficient",
            ));
        }
        Ok(Formula {
            m,
            p,
            a,
            r,
            s_int,
            provenance,
        })
    }

    /// `r S(n)` as a polynomial.
    pub fn numerator_poly(&self) -> Poly {
        Poly::from_ints(self.s_int.iter().cloned())
    }

    /// `S(n)` with rational coefficients.
    pub fn summand(&self) -> Poly {
        self.numerator_poly()
            .scale(&Rational::new(BigInt::one(), self.r.clone()))
    }

    pub fn degree(&self) -> usize {
        self.s_int.len() - 1
    }

    fn s_at(&self, n: u64) -> BigInt {
        let n = BigInt::from(n);
        self.s_int
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &n + c)
    }

    /// Exact `n`-th term `S(n) / (r C(mn, pn) a^n)`.
    pub fn term(&self, n: u64) -> Result<Rational> {
        let m = u64::from(self.m);
        let c = crate::exactnum::binomial(m * n, u64::from(self.p) * n)?;
        let an = num_traits::pow(self.a.clone(), n as usize);
        Ok(Rational::new(self.s_at(n), &self.r * c * an))
    }

    /// `log10` of the geometric decay rate `|a| m^m / (p^p (m-p)^(m-p))`.
    fn log10_rate(&self) -> f64 {
        let (m, p) = (f64::from(self.m), f64::from(self.p));
        let q = m - p;
        log10_big(&self.a) + m * m.log10() - p * p.log10() - q * q.log10()
    }

    fn log10_abs_s(&self, n: u64) -> f64 {
        let n = BigInt::from(n);
        let v = self
            .s_int
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &n + c.abs());
        if v.is_zero() {
            f64::NEG_INFINITY
        } else {
            log10_big(&v)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pi = (1/{}) * sum_n S(n) / (C({}n, {}n) * ({})^n), S(n) = {}",
            self.r,
            self.m,
            self.p,
            self.a,
            self.numerator_poly()
        )
    }
}

/// `log10 |v|` for `v != 0`, accurate to double precision.
fn log10_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.abs().to_f64().unwrap_or(f64::INFINITY).log10();
    }
    let shift = bits - 64;
    let top = (v.abs() >> shift).to_f64().unwrap_or(1.0);
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

struct FormulaSeries<'a> {
    f: &'a Formula,
}

impl Series for FormulaSeries<'_> {
    fn term(&self, n: u64) -> (BigInt, BigInt, BigInt) {
        let c = self.f.s_at(n);
        if n == 0 {
            return (BigInt::one(), BigInt::one(), c);
        }
        // w_n / w_{n-1} with w_n = 1 / (C(mn, pn) a^n)
        let (m, p) = (u64::from(self.f.m), u64::from(self.f.p));
        let prev = n - 1;
        let mut num = BigInt::one();
        for i in 1..=p {
            num *= p * prev + i;
        }
        for i in 1..=m - p {
            num *= (m - p) * prev + i;
        }
        let mut den = self.f.a.clone();
        for i in 1..=m {
            den *= m * prev + i;
        }
        (num, den, c)
    }
}

/// Exact partial sum of the first `count` terms, including the `1/r` factor.
pub fn partial_sum(f: &Formula, count: u64) -> Rational {
    sum_terms(&FormulaSeries { f }, count) / rat_int(f.r.clone())
}

/// Number of terms after which the tail is below `10^(-digits-2)`.
///
/// Uses `C(mn, pn) >= g^n / (mn + 1)` with `g` the decay rate, so each term is
/// at most `b(n) = sum|s_i| n^i (mn + 1) / (r g^n)`. Once `b(n+1)/b(n) <= rho < 1`
/// the ratio keeps decreasing and the tail from `T` is at most `b(T) / (1 - rho)`.
pub fn terms_needed(f: &Formula, digits: u32) -> Result<u64> {
    let lg = f.log10_rate();
    if lg <= 0.0 {
        return Err(Error::domain(format!(
            "series diverges (decay rate 10^{lg:.3} <= 1)"
        )));
    }
    let m = f64::from(f.m);
    let lr = log10_big(&f.r);
    let log_b = |n: u64| f.log10_abs_s(n) + (m * n as f64 + 1.0).log10() - lr - n as f64 * lg;
    // one extra digit absorbs floating-point slack in the logarithms
    let target = -(f64::from(digits) + 3.0);
    let mut n: u64 = 1;
    loop {
        let lb = log_b(n);
        let log_rho = log_b(n + 1) - lb;
        if log_rho < 0.0 {
            let rho = 10f64.powf(log_rho);
            let tail = lb - (1.0 - rho).log10();
            if tail < target || lb == f64::NEG_INFINITY {
                return Ok(n);
            }
        }
        n += 1;
        if n > 1 << 40 {
            return Err(Error::internal("term bound did not converge"));
        }
    }
}

/// The series value to `digits` decimal places, rounded once from the exact
/// partial sum over `terms_needed` terms.
pub fn eval_formula(f: &Formula, digits: u32) -> Result<FixedDec> {
    let t = terms_needed(f, digits)?;
    Ok(to_fixed(&partial_sum(f, t), digits))
}

/// Digits carried beyond the largest request in the cached π value.
const REFERENCE_GUARD: u32 = 20;

static PI_CACHE: RwLock<Option<FixedDec>> = RwLock::new(None);

/// `π = 16 atan(1/5) - 4 atan(1/239)` evaluated exactly to enough terms.
fn machin(digits: u32) -> FixedDec {
    let target = f64::from(digits) + 3.0;
    let count = |x: f64| (target / (2.0 * x.log10())).ceil() as u64 + 2;
    let a5 = sum_terms(&split::ArctanInverse { x: 5 }, count(5.0)) / rat_int(5);
    let a239 = sum_terms(&split::ArctanInverse { x: 239 }, count(239.0)) / rat_int(239);
    to_fixed(&(rat_int(16) * a5 - rat_int(4) * a239), digits)
}

/// π to `digits` places from a Machin arctangent identity, sharing nothing
/// with the binomial series. Results are cached at the largest precision seen.
pub fn pi_reference(digits: u32) -> Result<FixedDec> {
    if digits == 0 {
        return Err(Error::domain("need at least one digit"));
    }
    if let Some(cached) = PI_CACHE.read().expect("pi cache poisoned").as_ref() {
        if cached.scale >= digits + REFERENCE_GUARD {
            return Ok(cached.rescale(digits));
        }
    }
    let fresh = machin(digits + REFERENCE_GUARD);
    let out = fresh.rescale(digits);
    let mut slot = PI_CACHE.write().expect("pi cache poisoned");
    if slot.as_ref().is_none_or(|c| c.scale < fresh.scale) {
        *slot = Some(fresh);
    }
    Ok(out)
}

/// Result of comparing a formula with the π reference.
#[derive(Debug, Clone)]
pub struct NumericReport {
    pub digits: u32,
    pub value: FixedDec,
    pub residual: FixedDec,
    pub pass: bool,
}

impl NumericReport {
    /// Approximate `log10 |residual|`; `None` when it rounds to zero.
    pub fn residual_log10(&self) -> Option<f64> {
        self.residual.log10_approx()
    }
}

impl fmt::Display for NumericReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mag = match self.residual_log10() {
            Some(l) => format!("~1e{:.1}", l),
            None => format!("< 1e-{}", self.digits),
        };
        write!(
            f,
            "{} at {} digits (|value - pi| {mag})",
            if self.pass { "PASS" } else { "FAIL" },
            self.digits
        )
    }
}

/// Passes iff `|eval_formula(f, D) - pi_reference(D)| < 10^(-D+5)`.
pub fn verify_formula_numeric(f: &Formula, digits: u32) -> Result<NumericReport> {
    let value = eval_formula(f, digits)?;
    let reference = pi_reference(digits)?;
    let residual = value.sub(&reference);
    let pass = residual.abs_below_pow10(5 - i64::from(digits));
    Ok(NumericReport {
        digits,
        value,
        residual,
        pass,
    })
}

/// Decimal expansion in blocks of ten digits, fifty digits per line.
pub fn format_digits(v: &FixedDec) -> String {
    let frac = v.fraction_digits();
    let sign = if v.mantissa.is_negative() { "-" } else { "" };
    let mut out = format!("{sign}{}.", v.integer_part().abs());
    for (i, chunk) in frac.as_bytes().chunks(10).enumerate() {
        if i > 0 {
            out.push(if i % 5 == 0 { '\n' } else { ' ' });
        }
        out.push_str(std::str::from_utf8(chunk).expect("ascii digits"));
    }
    out
}
